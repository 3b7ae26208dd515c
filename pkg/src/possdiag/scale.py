"""Qualitative certainty scales and exact graded degrees.

Certainty degrees live on a finite, totally ordered scale of named
levels.  All combination is min / max / complement over exact rationals,
and the scale is required to be closed under ``v -> 1 - v``, so computed
degrees never leave the scale and complement is an exact rank reversal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "DEFAULT_SCALE",
    "Degree",
    "Level",
    "Scale",
    "ScaleError",
    "godel_implies",
    "normalize_level_name",
]


class ScaleError(ValueError):
    """Malformed scale, unknown level name, or mixed-scale operation."""


_NAME_SPLIT = re.compile(r"[\s_]+")
_NAME_OK = re.compile(r"[a-z][a-z0-9_]*\Z")


def normalize_level_name(name: str) -> str:
    """Canonical level name: lower-case, spaces and underscores interchangeable."""
    norm = "_".join(p for p in _NAME_SPLIT.split(name.strip().lower()) if p)
    if not _NAME_OK.match(norm):
        raise ScaleError(f"invalid level name: {name!r}")
    return norm


def godel_implies(antecedent: Fraction, consequent: Fraction) -> Fraction:
    # Goedel implication: 1 when the consequent already covers the antecedent.
    return Fraction(1) if antecedent <= consequent else consequent


@dataclass(frozen=True)
class Level:
    """A named point on a certainty scale."""

    name: str
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", normalize_level_name(self.name))
        object.__setattr__(self, "value", Fraction(self.value))
        if not 0 <= self.value <= 1:
            raise ScaleError(f"level {self.name!r} outside [0, 1]: {self.value}")


@dataclass(frozen=True)
class Scale:
    """A symmetric, strictly decreasing ladder of named certainty levels.

    The top level must sit at 1 and the bottom at 0, and for every level
    value ``v`` the complement ``1 - v`` must also be a level value.
    ``impossible`` is always accepted as an alias for the bottom level.
    """

    levels: tuple[Level, ...]
    _by_name: Mapping[str, Level] = field(
        init=False, compare=False, repr=False, default=None
    )
    _rank_by_value: Mapping[Fraction, int] = field(
        init=False, compare=False, repr=False, default=None
    )

    def __post_init__(self) -> None:
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) < 2:
            raise ScaleError("a scale needs at least the levels 1 and 0")
        values = [lv.value for lv in levels]
        if any(a <= b for a, b in zip(values, values[1:])):
            raise ScaleError("scale levels must be strictly decreasing")
        if values[0] != 1:
            raise ScaleError("the top scale level must have value 1")
        if values[-1] != 0:
            raise ScaleError("the bottom scale level must have value 0")
        by_name: dict[str, Level] = {}
        for lv in levels:
            if lv.name in by_name:
                raise ScaleError(f"duplicate level name: {lv.name!r}")
            by_name[lv.name] = lv
        if "impossible" in by_name and by_name["impossible"].value != 0:
            raise ScaleError("'impossible' is reserved for the bottom level")
        value_set = set(values)
        for v in values:
            if 1 - v not in value_set:
                raise ScaleError(
                    f"scale is not symmetric: complement of {v} is missing"
                )
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(
            self, "_rank_by_value", {v: i for i, v in enumerate(values)}
        )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Fraction]]) -> "Scale":
        return cls(tuple(Level(name, value) for name, value in pairs))

    # -- lookups ---------------------------------------------------------

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(lv.value for lv in self.levels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(lv.name for lv in self.levels)

    def level_named(self, name: str) -> Level:
        norm = normalize_level_name(name)
        level = self._by_name.get(norm)
        if level is None and norm == "impossible":
            level = self.levels[-1]
        if level is None:
            known = ", ".join(self.names)
            raise ScaleError(f"unknown level {name!r} (scale levels: {known})")
        return level

    def value_of(self, name: str) -> Fraction:
        return self.level_named(name).value

    def has_value(self, value: Fraction) -> bool:
        return Fraction(value) in self._rank_by_value

    def level_of(self, value: Fraction) -> Level:
        rank = self._rank_by_value.get(Fraction(value))
        if rank is None:
            raise ScaleError(f"{value} is not a level of this scale")
        return self.levels[rank]

    def name_of(self, value: Fraction) -> str:
        return self.level_of(value).name

    def rank_of(self, value: Fraction) -> int:
        """Index of a level value, 0 at full certainty."""
        return self._rank_by_value[Fraction(value)]

    def value_at(self, rank: int) -> Fraction:
        return self.levels[rank].value

    # -- degrees ---------------------------------------------------------

    def degree(self, name: str) -> "Degree":
        return Degree(self.level_named(name).value, self)

    def degree_of_value(self, value: Fraction) -> "Degree":
        return Degree(value, self)

    def absence_degree(self, name: str) -> "Degree":
        """Certainty of absence carried by naming how possible a state is.

        Marking a state ``impossible`` (value 0) asserts its absence with
        certainty 1; a mark of full possibility would assert nothing and
        is rejected.
        """
        rho = 1 - self.value_of(name)
        if rho == 0:
            raise ScaleError(
                f"absence marked {name!r} carries no information"
            )
        return Degree(rho, self)

    def complement_value(self, value: Fraction) -> Fraction:
        value = Fraction(value)
        if not self.has_value(value):
            raise ScaleError(f"{value} is not a level of this scale")
        return 1 - value

    @property
    def top(self) -> "Degree":
        return Degree(Fraction(1), self)

    @property
    def bottom(self) -> "Degree":
        return Degree(Fraction(0), self)


@dataclass(frozen=True)
class Degree:
    """An exact certainty value pinned to its scale."""

    value: Fraction
    scale: Scale

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if not self.scale.has_value(self.value):
            raise ScaleError(f"{self.value} is not a level of this scale")

    @property
    def name(self) -> str:
        return self.scale.name_of(self.value)

    def complement(self) -> "Degree":
        return Degree(1 - self.value, self.scale)

    def implies(self, other: "Degree") -> "Degree":
        self._check(other)
        return Degree(godel_implies(self.value, other.value), self.scale)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "numerator": self.value.numerator,
            "denominator": self.value.denominator,
        }

    def _check(self, other: "Degree") -> None:
        if not isinstance(other, Degree):
            raise TypeError(f"cannot compare Degree with {type(other).__name__}")
        if self.scale != other.scale:
            raise ScaleError("cannot combine degrees from different scales")

    def __lt__(self, other: "Degree") -> bool:
        self._check(other)
        return self.value < other.value

    def __le__(self, other: "Degree") -> bool:
        self._check(other)
        return self.value <= other.value

    def __gt__(self, other: "Degree") -> bool:
        self._check(other)
        return self.value > other.value

    def __ge__(self, other: "Degree") -> bool:
        self._check(other)
        return self.value >= other.value

    def __str__(self) -> str:
        return f"{self.name} ({self.value})"


DEFAULT_SCALE = Scale.from_pairs(
    [
        ("certain", Fraction(1)),
        ("almost_certain", Fraction(4, 5)),
        ("likely", Fraction(3, 5)),
        ("unlikely", Fraction(2, 5)),
        ("almost_impossible", Fraction(1, 5)),
        ("possible", Fraction(0)),
    ]
)
