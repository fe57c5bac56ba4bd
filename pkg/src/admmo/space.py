"""Configuration spaces: typed options, configurations, validation, enumeration.

A configuration space is an ordered list of options, each with a finite
domain (binary, unit-step integer range, or categorical levels). A
configuration assigns one in-domain value per option. Two configurations
are duplicates exactly when their value tuples are equal; performance
plays no role in identity.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Iterator

BINARY = "binary"
INTEGER = "integer"
CATEGORICAL = "categorical"

DEFAULT_ENUMERATION_CAP = 1_000_000


class SpaceTooLargeError(ValueError):
    """Raised when full enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class OptionSpec:
    """A single tunable option with a finite domain.

    Integer options step by 1; datasets with non-unit grids should encode
    their levels as categorical instead of relying on silent coercion.
    Categorical levels are compared by identity (string), not position.
    """

    name: str
    kind: str
    lo: int = 0
    hi: int = 1
    levels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (BINARY, INTEGER, CATEGORICAL):
            raise ValueError(f"unknown option kind {self.kind!r}")
        if self.kind == INTEGER and self.lo > self.hi:
            raise ValueError(f"option {self.name!r}: lo {self.lo} > hi {self.hi}")
        if self.kind == CATEGORICAL:
            if len(self.levels) < 2:
                raise ValueError(f"option {self.name!r}: categorical needs >= 2 levels")
            if len(set(self.levels)) != len(self.levels):
                raise ValueError(f"option {self.name!r}: duplicate categorical levels")

    @classmethod
    def binary(cls, name: str) -> "OptionSpec":
        return cls(name=name, kind=BINARY)

    @classmethod
    def integer(cls, name: str, lo: int, hi: int) -> "OptionSpec":
        return cls(name=name, kind=INTEGER, lo=lo, hi=hi)

    @classmethod
    def categorical(cls, name: str, levels: tuple[str, ...] | list[str]) -> "OptionSpec":
        return cls(name=name, kind=CATEGORICAL, levels=tuple(levels))

    def domain_size(self) -> int:
        if self.kind == BINARY:
            return 2
        if self.kind == INTEGER:
            return self.hi - self.lo + 1
        return len(self.levels)

    def domain_values(self) -> tuple[Any, ...]:
        if self.kind == BINARY:
            return (0, 1)
        if self.kind == INTEGER:
            return tuple(range(self.lo, self.hi + 1))
        return self.levels

    def contains(self, value: Any) -> bool:
        if self.kind == BINARY:
            return value in (0, 1)
        if self.kind == INTEGER:
            return isinstance(value, int) and self.lo <= value <= self.hi
        return value in self.levels

    def random_value(self, rng: random.Random) -> Any:
        if self.kind == BINARY:
            return rng.randrange(2)
        if self.kind == INTEGER:
            return rng.randint(self.lo, self.hi)
        return self.levels[rng.randrange(len(self.levels))]


@dataclass(frozen=True)
class Configuration:
    """A complete assignment of values, one per option, in space order.

    Equality and hashing are componentwise over ``values``; this is the
    duplicate relation used everywhere.
    """

    values: tuple[Any, ...]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ConfigSpace:
    """An ordered, immutable collection of options."""

    options: tuple[OptionSpec, ...]

    def __post_init__(self) -> None:
        if len(self.options) < 1:
            raise ValueError("a configuration space needs at least one option")
        names = [opt.name for opt in self.options]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate option names in {names}")

    @property
    def n_options(self) -> int:
        return len(self.options)

    @property
    def option_names(self) -> tuple[str, ...]:
        return tuple(opt.name for opt in self.options)

    def size(self) -> int:
        """Number of distinct configurations (product of domain sizes)."""
        total = 1
        for opt in self.options:
            total *= opt.domain_size()
        return total

    def validate(self, config: Configuration) -> bool:
        """True iff lengths match and every component is in-domain."""
        if len(config.values) != len(self.options):
            return False
        return all(opt.contains(v) for opt, v in zip(self.options, config.values))

    def random_config(self, rng: random.Random) -> Configuration:
        """Draw each component uniformly from its domain."""
        return Configuration(tuple(opt.random_value(rng) for opt in self.options))

    def enumerate_all(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Configuration]:
        """All distinct configurations in lexicographic (domain) order.

        Raises SpaceTooLargeError when the space exceeds ``cap``.
        """
        total = self.size()
        if total > cap:
            raise SpaceTooLargeError(
                f"space too large to enumerate: {total} configurations > cap {cap}"
            )
        domains = [opt.domain_values() for opt in self.options]
        return [Configuration(vals) for vals in itertools.product(*domains)]

    def iter_all(self) -> Iterator[Configuration]:
        """Lazy enumeration without the cap check."""
        domains = [opt.domain_values() for opt in self.options]
        return (Configuration(vals) for vals in itertools.product(*domains))
