"""Nonparametric comparison statistics for repeated tuning runs.

* two-sided Wilcoxon rank-sum for unpaired samples: exact conditional
  distribution (midranks, counted by dynamic programming) for small
  samples, tie-corrected normal approximation otherwise;
* the Vargha-Delaney effect size: the probability that a draw from the
  first sample exceeds one from the second, ties split;
* the conventional effect bands: a comparison counts as significant only
  when the p-value is below 0.05 and the effect size leaves the
  [0.44, 0.56] dead zone, and then classifies as small, medium, or large.
"""

from __future__ import annotations

import math
from typing import Sequence

EXACT_SIZE_LIMIT = 20  # use the exact distribution when n + m <= this

TRIVIAL = "trivial"
SMALL = "small"
MEDIUM = "medium"
LARGE = "large"


def _midranks(pooled: Sequence[float]) -> list[float]:
    """Fractional ranks (1-based); tied values share the mean of their ranks."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _exact_rank_sum_p(doubled_ranks: list[int], n: int, observed: int) -> float:
    """Exact two-sided p for the rank sum of a size-n subset.

    ``doubled_ranks`` are the pooled midranks times two (integers), and
    ``observed`` is the doubled rank sum of the first sample. Counts the
    subsets by a subset-sum dynamic program over (size, sum).
    """
    total_sum = sum(doubled_ranks)
    # counts[k][s] = number of k-subsets of the pool with doubled rank sum s
    counts = [[0] * (total_sum + 1) for _ in range(n + 1)]
    counts[0][0] = 1
    for r in doubled_ranks:
        for k in range(min(n, len(doubled_ranks)), 0, -1):
            row_prev, row = counts[k - 1], counts[k]
            for s in range(total_sum - r, -1, -1):
                if row_prev[s]:
                    row[s + r] += row_prev[s]
    total = sum(counts[n])
    p_le = sum(counts[n][: observed + 1]) / total
    p_ge = sum(counts[n][observed:]) / total
    return min(1.0, 2.0 * min(p_le, p_ge))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _approx_rank_sum_p(ranks: list[float], n: int, m: int, observed: float) -> float:
    """Normal approximation with tie correction and continuity correction."""
    total = n + m
    mean = n * (total + 1) / 2.0
    tie_term = 0.0
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    variance = n * m / 12.0 * ((total + 1) - tie_term / (total * (total - 1)))
    if variance <= 0:
        return 1.0
    deviation = abs(observed - mean) - 0.5
    if deviation < 0:
        deviation = 0.0
    z = deviation / math.sqrt(variance)
    return min(1.0, 2.0 * _normal_sf(z))


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided rank-sum p-value for two independent samples."""
    if not a or not b:
        raise ValueError("both samples must be nonempty")
    pooled = list(a) + list(b)
    ranks = _midranks(pooled)
    n = len(a)
    observed = sum(ranks[:n])
    if len(pooled) <= EXACT_SIZE_LIMIT:
        doubled = [round(2 * r) for r in ranks]
        return _exact_rank_sum_p(doubled, n, round(2 * observed))
    return _approx_rank_sum_p(ranks, n, len(b), observed)


def a12(a: Sequence[float], b: Sequence[float]) -> float:
    """Probability that a value from ``a`` exceeds one from ``b``, ties split."""
    if not a or not b:
        raise ValueError("both samples must be nonempty")
    greater = 0.0
    for x in a:
        for y in b:
            if x > y:
                greater += 1.0
            elif x == y:
                greater += 0.5
    return greater / (len(a) * len(b))


def classify_effect(a12_value: float, p_value: float) -> str:
    """Band a comparison by effect size, gated on significance.

    Returns "trivial" unless p < 0.05 and the effect size is at least
    small (>= 0.56 or <= 0.44); otherwise bands by distance from 0.5.
    """
    if p_value >= 0.05:
        return TRIVIAL
    if a12_value >= 0.71 or a12_value <= 0.29:
        return LARGE
    if a12_value >= 0.64 or a12_value <= 0.36:
        return MEDIUM
    if a12_value >= 0.56 or a12_value <= 0.44:
        return SMALL
    return TRIVIAL
