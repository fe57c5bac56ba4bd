"""Shared test helpers: hand-built individuals and the worked survival example."""

from __future__ import annotations

import pytest

from admmo import ConfigSpace, Configuration, Individual, OptionSpec, PerfSample, compute_meta


def make_individual(
    config_value,
    f_t: float = 0.0,
    f_a: float = 0.0,
    *,
    f_t_norm: float | None = None,
    f_a_norm: float | None = None,
    w: float | None = None,
) -> Individual:
    """An individual with a one-gene config and optional preset fields."""
    ind = Individual(Configuration((config_value,)), PerfSample(f_t, f_a))
    if f_t_norm is not None:
        ind.f_t_norm = f_t_norm
        ind.f_a_norm = f_a_norm
        if w is not None:
            compute_meta(ind, w)
    return ind


def make_meta_individual(config_value, g1: float, g2: float) -> Individual:
    """An individual with meta-objectives set directly (raw values unused)."""
    ind = Individual(Configuration((config_value,)), PerfSample(0.0, 0.0))
    ind.g1 = g1
    ind.g2 = g2
    return ind


@pytest.fixture
def worked_survival_union() -> list[Individual]:
    """The eight-individual union behind the duplicate-retention example.

    Normalized values at w=1 give fronts F0={x1,x2,x3,x4} (x2=x3=x4
    duplicates), F1={x5,x6,x7} (x6=x7 duplicates), F2={x8}, where x2's
    group dominates x5 and x1 dominates x6's group. Partial retention at
    capacity 4 must keep {x1,x2,x3,x6}, removing all duplicates keeps
    {x1,x2,x5,x6}, ignoring duplicates keeps {x1,x2,x3,x4}.
    """
    coords = {
        "x1": (1, 0.0625, 0.9375),
        "x2": (2, 0.125, 0.5),
        "x3": (2, 0.125, 0.5),
        "x4": (2, 0.125, 0.5),
        "x5": (5, 0.25, 0.625),
        "x6": (6, 0.25, 0.75),
        "x7": (6, 0.25, 0.75),
        "x8": (8, 0.875, 0.625),
    }
    union = []
    for name, (gene, ft, fa) in coords.items():
        ind = make_individual(gene, f_t=ft, f_a=fa, f_t_norm=ft, f_a_norm=fa, w=1.0)
        union.append(ind)
    return union


def names_of(union: list[Individual], survivors: list[Individual]) -> set[str]:
    """Map survivors back to x1..x8 labels by object identity."""
    labels = {}
    for i, ind in enumerate(union):
        labels[id(ind)] = f"x{i + 1}"
    return {labels[id(ind)] for ind in survivors}


@pytest.fixture
def small_space() -> ConfigSpace:
    return ConfigSpace(
        (
            OptionSpec.binary("flag"),
            OptionSpec.integer("level", 0, 3),
            OptionSpec.categorical("mode", ("fast", "safe")),
        )
    )
