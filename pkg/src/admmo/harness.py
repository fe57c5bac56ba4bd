"""Campaign runner and the evaluation metrics computed over repeats.

A campaign executes every optimizer on every case at every budget for a
fixed number of seeded repeats, then summarizes:

* normalized target performance: each run's final best, min-max scaled
  over the whole case pool (all optimizers, budgets, and repeats), then
  averaged per optimizer and budget;
* speedup: how many measurements a counterpart needed to reach its own
  final mean best, divided by how many the reference optimizer needed to
  match that value (None when it never does within budget);
* pairwise rank-sum p-values, effect sizes, and their significance band.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

from .baselines import OptimizerSpec, run_optimizer
from .oracles import MeasurementOracle
from .space import ConfigSpace
from .stats import a12, classify_effect, wilcoxon_rank_sum
from .tuner import TunerParams, TuningRun


@dataclass(frozen=True)
class BenchCase:
    """One system-objective pair: a space plus its measurement source."""

    case_id: str
    space: ConfigSpace
    oracle: MeasurementOracle


@dataclass
class CaseResult:
    """All runs of one case, keyed by optimizer label then budget."""

    case_id: str
    budgets: tuple[int, ...]
    repeats: int
    runs: dict[str, dict[int, list[TuningRun]]] = field(default_factory=dict)
    error: str | None = None

    def final_bests(self, label: str, budget: int) -> list[float]:
        return [run.best_f_t for run in self.runs[label][budget]]

    @property
    def labels(self) -> list[str]:
        return list(self.runs.keys())


def _one_run(args) -> tuple[str, str, int, TuningRun]:
    case, spec, params, seed, run_id = args
    run = run_optimizer(spec, case.space, case.oracle, params, seed, run_id=run_id)
    return case.case_id, spec.label, params.budget, run


def run_campaign(
    cases: Sequence[BenchCase],
    optimizers: Sequence[OptimizerSpec],
    budgets: Sequence[int],
    repeats: int,
    base_seed: int,
    params: TunerParams | None = None,
    jobs: int = 1,
) -> list[CaseResult]:
    """Execute the full grid of runs; repeat r uses seed base_seed + r.

    Identical seeds across optimizers align initial populations. A case
    whose runs fail is reported with its error and the campaign goes on.
    """
    if repeats < 1:
        raise ValueError("repeats must be positive")
    template = params or TunerParams(budget=max(budgets))
    results = []
    for case in cases:
        result = CaseResult(case.case_id, tuple(budgets), repeats)
        tasks = []
        for spec in optimizers:
            result.runs[spec.label] = {int(b): [] for b in budgets}
            for budget in budgets:
                run_params = _with_budget(template, int(budget))
                for rep in range(repeats):
                    run_id = f"{case.case_id}__{spec.label}__b{budget}__r{rep}"
                    tasks.append((case, spec, run_params, base_seed + rep, run_id))
        try:
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    outcomes = list(pool.map(_one_run, tasks))
            else:
                outcomes = [_one_run(t) for t in tasks]
            for _, label, budget, run in outcomes:
                result.runs[label][budget].append(run)
        except Exception as exc:  # noqa: BLE001 - per-case failures must not kill the campaign
            result.error = f"{type(exc).__name__}: {exc}"
            result.runs = {}
        results.append(result)
    return results


def _with_budget(params: TunerParams, budget: int) -> TunerParams:
    return replace(params, budget=budget)


def normalized_target_performance(case: CaseResult) -> dict[str, dict[int, float]]:
    """Per-optimizer mean of pool-normalized final bests, per budget.

    The pool spans every run of the case (all optimizers, budgets, and
    repeats), so values are comparable across budgets; 0 marks the best
    final result anyone reached on this case.
    """
    pool: list[float] = []
    for per_budget in case.runs.values():
        for runs in per_budget.values():
            pool.extend(run.best_f_t for run in runs)
    if not pool:
        raise ValueError(f"case {case.case_id} has no runs")
    lo, hi = min(pool), max(pool)
    span = hi - lo
    if span <= 0:
        warnings.warn(
            f"case {case.case_id}: all runs reached the same best; "
            "normalized performance is 0 everywhere",
            stacklevel=2,
        )
    table: dict[str, dict[int, float]] = {}
    for label, per_budget in case.runs.items():
        table[label] = {}
        for budget, runs in per_budget.items():
            values = [(run.best_f_t - lo) / span if span > 0 else 0.0 for run in runs]
            table[label][budget] = sum(values) / len(values)
    return table


def mean_best_curve(runs: Sequence[TuningRun], budget: int) -> list[float]:
    """Mean best-so-far per measurement count, 1..budget.

    Runs that stopped early (space exhausted) carry their final best
    forward; the mean is over all runs at each count.
    """
    curves = []
    for run in runs:
        curve = list(run.best_by_measurement)
        if not curve:
            raise ValueError(f"run {run.run_id} has no measurements")
        if len(curve) < budget:
            curve.extend([curve[-1]] * (budget - len(curve)))
        curves.append(curve[:budget])
    return [sum(c[i] for c in curves) / len(curves) for i in range(budget)]


def speedup(
    counterpart_runs: Sequence[TuningRun],
    reference_runs: Sequence[TuningRun],
    budget: int,
) -> float | None:
    """Measurement-count speedup of the reference over a counterpart.

    Finds the smallest count at which the counterpart's mean best reaches
    its own final value, and the smallest count at which the reference's
    mean best is at least as good; returns their ratio, or None when the
    reference never gets there within the budget ("not achieved").
    """
    counterpart = mean_best_curve(counterpart_runs, budget)
    reference = mean_best_curve(reference_runs, budget)
    final = counterpart[-1]
    b_star = next(i + 1 for i, v in enumerate(counterpart) if v <= final)
    m_star = next((i + 1 for i, v in enumerate(reference) if v <= final), None)
    if m_star is None:
        return None
    return b_star / m_star


@dataclass(frozen=True)
class PairwiseComparison:
    label_a: str
    label_b: str
    budget: int
    p_value: float
    a12: float
    effect: str


def pairwise_comparisons(case: CaseResult) -> list[PairwiseComparison]:
    """Rank-sum p, effect size, and band for every optimizer pair and budget."""
    labels = case.labels
    out: list[PairwiseComparison] = []
    for i, la in enumerate(labels):
        for lb in labels[i + 1 :]:
            for budget in case.budgets:
                sa = case.final_bests(la, budget)
                sb = case.final_bests(lb, budget)
                p = wilcoxon_rank_sum(sa, sb)
                effect_size = a12(sa, sb)
                out.append(
                    PairwiseComparison(
                        label_a=la,
                        label_b=lb,
                        budget=budget,
                        p_value=p,
                        a12=effect_size,
                        effect=classify_effect(effect_size, p),
                    )
                )
    return out


def campaign_summary(
    results: Sequence[CaseResult], reference_label: str = "admmo"
) -> dict:
    """A JSON-ready digest: normalized means, pairwise stats, speedups."""
    summary: dict = {"cases": {}}
    for case in results:
        if case.error is not None:
            summary["cases"][case.case_id] = {"error": case.error}
            continue
        entry: dict = {
            "budgets": list(case.budgets),
            "repeats": case.repeats,
            "optimizers": case.labels,
            "normalized_mean": {
                label: {str(b): v for b, v in per_budget.items()}
                for label, per_budget in normalized_target_performance(case).items()
            },
            "final_best_f_t": {
                label: {
                    str(b): [run.best_f_t for run in runs]
                    for b, runs in per_budget.items()
                }
                for label, per_budget in case.runs.items()
            },
            "comparisons": [
                {
                    "pair": f"{c.label_a}__vs__{c.label_b}",
                    "budget": c.budget,
                    "p_value": c.p_value,
                    "a12": c.a12,
                    "effect": c.effect,
                }
                for c in pairwise_comparisons(case)
            ],
        }
        if reference_label in case.runs:
            top_budget = max(case.budgets)
            reference_runs = case.runs[reference_label][top_budget]
            entry["speedup_reference"] = reference_label
            entry["speedup"] = {
                label: speedup(per_budget[top_budget], reference_runs, top_budget)
                for label, per_budget in case.runs.items()
                if label != reference_label
            }
        summary["cases"][case.case_id] = entry
    return summary
