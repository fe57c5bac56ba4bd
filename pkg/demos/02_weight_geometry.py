"""
What the weight does to the meta-objective space
================================================

The tuner minimizes the pair g1 = f_t + w*f_a, g2 = f_t - w*f_a.
Geometrically that scales the auxiliary axis by w and then applies a
sqrt(2)-dilated 45-degree clockwise rotation. This script shows the two
forms agree, what happens at the weight extremes, and how the proportion
of nondominated configurations grows with the weight.
"""

import random

import numpy as np

from admmo import (
    Individual,
    PerfSample,
    Configuration,
    compute_meta,
    dominates,
    geometric_transform,
    unique_nondominated_proportion,
)

# %% The algebraic and geometric forms are the same map.

for f_t, f_a, w in ((0.5, 0.2, 1.0), (0.3, 0.4, 0.5), (0.9, 0.1, 10.0)):
    ind = Individual(Configuration((0,)), PerfSample(f_t, f_a))
    ind.f_t_norm, ind.f_a_norm = f_t, f_a
    compute_meta(ind, w)
    g = geometric_transform(f_a, f_t, w)
    print(f"f_t={f_t} f_a={f_a} w={w}: weighted sum=({ind.g1:.3f}, {ind.g2:.3f}) "
          f"geometric=({g[0]:.3f}, {g[1]:.3f})")

# %% A random cloud of normalized objective values.

rng = random.Random(3)
cloud = []
for i in range(30):
    ind = Individual(Configuration((i,)), PerfSample(0.0, 0.0))
    ind.f_t_norm, ind.f_a_norm = rng.random(), rng.random()
    cloud.append(ind)

# %% At w = 0 the auxiliary objective is ruled out entirely: both
# meta-objectives collapse to f_t and only the best-f_t point survives
# comparison. At a huge w every pair differing on f_a is incomparable.

for w in (0.0, 1e6):
    for ind in cloud:
        compute_meta(ind, w)
    nondominated = [
        ind for ind in cloud if not any(dominates(o, ind) for o in cloud)
    ]
    print(f"w={w:g}: {len(nondominated)} of {len(cloud)} are nondominated")

# %% Between the extremes the proportion of unique nondominated
# configurations is a staircase that never steps down as w grows. This
# monotonicity is what makes proportion-targeted weight adaptation
# well-posed: to raise the proportion, raise the weight.

weights = np.round(np.geomspace(0.01, 10, 13), 4)
proportions = [unique_nondominated_proportion(cloud, float(w)).value for w in weights]
print("\n  weight   proportion nondominated")
for w, p in zip(weights, proportions):
    bar = "#" * int(round(p * 40))
    print(f"  {w:7.3f}  {p:5.2f} {bar}")
assert proportions == sorted(proportions)
