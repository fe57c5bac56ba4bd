"""
Configuration spaces, measurement oracles, and the budget ledger
================================================================

This walkthrough builds a small configuration space, attaches the two
kinds of measurement sources (a replayed dataset table and a synthetic
rugged landscape), and shows how the budget ledger charges only the
first measurement of each distinct configuration.
"""

import random
from pathlib import Path

from admmo import (
    BudgetLedger,
    ConfigSpace,
    Configuration,
    ObjectiveOrientation,
    OptionSpec,
    load_table,
    measure,
    synthetic_landscape,
)

# %% A space is an ordered list of typed options.

space = ConfigSpace(
    (
        OptionSpec.binary("cache"),
        OptionSpec.integer("threads", 1, 4),
        OptionSpec.categorical("codec", ("fast", "best")),
    )
)
print(f"space has {space.n_options} options and {space.size()} configurations")

rng = random.Random(7)
config = space.random_config(rng)
print("a random configuration:", dict(zip(space.option_names, config.values)))
print("validates:", space.validate(config))
print("an out-of-range one validates:", space.validate(Configuration((0, 9, "fast"))))

# %% Replayed datasets: a delimited file with option columns in space
# order, then the two objective columns. Maximizing objectives are
# negated once at load time so everything downstream minimizes.

table_path = Path(__file__).parent / "data" / "measurements.csv"
table = load_table(
    table_path,
    space,
    target_column="runtime",
    auxiliary_column="cpu",
    orientation=ObjectiveOrientation(t_maximize=False, a_maximize=False),
)
print(f"\nloaded {len(table)} measured configurations from {table_path.name}")

# %% The ledger: repeated measurements of the same configuration are
# served from the cache and never consume budget.

ledger = BudgetLedger(budget=5)
first = measure(table, config, ledger)
again = measure(table, config, ledger)
print(f"sample for {config.values}: f_t={first.f_t}, f_a={first.f_a}")
print(f"cached result is the same object: {first is again}")
print(f"consumed {ledger.consumed} of {ledger.budget} measurements")

# %% Synthetic landscapes stand in for real systems at desk scale: each
# option position contributes a seeded random table value indexed by its
# own level and its k circular neighbors, so larger k means a more
# rugged landscape. The auxiliary objective comes from an independent
# stream unless a correlation is requested.

oracle = synthetic_landscape(n_options=10, domain_sizes=2, k=3, seed=42)
sample = oracle.sample(oracle.space.random_config(rng))
print(f"\nsynthetic sample: f_t={sample.f_t:.4f}, f_a={sample.f_a:.4f}")

best = min(oracle.sample(c).f_t for c in oracle.space.enumerate_all())
print(f"global optimum over all {oracle.space.size()} configs: {best:.4f}")
