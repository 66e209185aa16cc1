"""Sections of the structure sheaf: rational-valued functions on open sets.

The structure sheaf assigns to each open U the set of ALL functions
U → ℚ with pointwise ring operations.  A section is a unit exactly when it
is nowhere zero, strictly positive sections are invertible, and absolute
value / square root act pointwise: all the order structure the symplectic
reduction needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .errors import DomainMismatch, NotASubset, NonUnitSection, UnknownPoint
from .rings import Ring, rational_try_sqrt
from .site import OpenSet

Scalar = Union[int, Fraction]


class StructureSection:
    """A function from the points of an open set to exact rationals.

    Values are stored in the point order of the ambient space.  Sections are
    immutable; all arithmetic is pointwise and returns new sections.
    """

    __slots__ = ("domain", "values")

    def __init__(self, domain: OpenSet, values):
        object.__setattr__(self, "domain", domain)
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != domain.size:
            raise ValueError(f"expected {domain.size} values on {domain}, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("StructureSection is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_mapping(cls, domain: OpenSet, mapping: Mapping[str, Scalar]) -> "StructureSection":
        if set(mapping) != set(domain.labels):
            raise UnknownPoint(f"assignment keys {sorted(mapping)} do not match {domain}")
        return cls(domain, [mapping[p] for p in domain.labels])

    @classmethod
    def constant(cls, domain: OpenSet, value: Scalar) -> "StructureSection":
        return cls(domain, [value] * domain.size)

    @classmethod
    def zero(cls, domain: OpenSet) -> "StructureSection":
        return cls.constant(domain, 0)

    @classmethod
    def one(cls, domain: OpenSet) -> "StructureSection":
        return cls.constant(domain, 1)

    @classmethod
    def from_function(cls, domain: OpenSet, fn: Callable[[str], Scalar]) -> "StructureSection":
        return cls(domain, [fn(p) for p in domain.labels])

    # -- point access ---------------------------------------------------------

    def at(self, label: str) -> Fraction:
        labels = self.domain.labels
        try:
            return self.values[labels.index(label)]
        except ValueError:
            raise UnknownPoint(f"point {label!r} not in {self.domain}") from None

    def as_mapping(self) -> dict[str, Fraction]:
        return dict(zip(self.domain.labels, self.values))

    # -- presheaf structure ----------------------------------------------------

    def restrict(self, V: OpenSet) -> "StructureSection":
        if V.space != self.domain.space or not V.is_subset(self.domain):
            raise NotASubset(f"{V} is not an open subset of {self.domain}")
        labels = self.domain.labels
        return StructureSection(V, [self.values[labels.index(p)] for p in V.labels])

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other) -> Optional["StructureSection"]:
        if isinstance(other, StructureSection):
            if other.domain != self.domain:
                raise DomainMismatch(f"sections live on {self.domain} vs {other.domain}")
            return other
        if isinstance(other, (int, Fraction)):
            return StructureSection.constant(self.domain, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return StructureSection(self.domain, [a + b for a, b in zip(self.values, other.values)])

    __radd__ = __add__

    def __neg__(self):
        return StructureSection(self.domain, [-a for a in self.values])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return StructureSection(self.domain, [a - b for a, b in zip(self.values, other.values)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return StructureSection(self.domain, [a * b for a, b in zip(self.values, other.values)])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return all(v == other for v in self.values)
        if not isinstance(other, StructureSection):
            return NotImplemented
        return self.domain == other.domain and self.values == other.values

    def __hash__(self):
        return hash((self.domain.mask, self.values))

    # -- order structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def is_unit(self) -> bool:
        """Units of the function ring are the nowhere-zero sections."""
        return all(v != 0 for v in self.values)

    def zero_points(self) -> tuple[str, ...]:
        return tuple(p for p, v in zip(self.domain.labels, self.values) if v == 0)

    def is_strictly_positive(self) -> bool:
        return all(v > 0 for v in self.values)

    def inverse(self) -> "StructureSection":
        if not self.is_unit():
            raise NonUnitSection("section vanishes somewhere", points=self.zero_points())
        return StructureSection(self.domain, [1 / v for v in self.values])

    def __abs__(self) -> "StructureSection":
        return StructureSection(self.domain, [abs(v) for v in self.values])

    def try_sqrt(self) -> "StructureSection":
        """Pointwise exact square root; NotExact if any value has none."""
        return StructureSection(self.domain, [rational_try_sqrt(v) for v in self.values])

    def __repr__(self):
        body = ", ".join(f"{p}: {v}" for p, v in zip(self.domain.labels, self.values))
        return "{" + body + "}"


def section_ring(domain: OpenSet) -> Ring:
    """The ring A(U) of rational-valued functions on U as a capability bundle."""

    def try_inverse(s: StructureSection):
        return s.inverse() if s.is_unit() else None

    def try_sqrt(s: StructureSection):
        return s.try_sqrt()

    return Ring(
        name=f"A({','.join(domain.labels)})",
        zero=StructureSection.zero(domain),
        one=StructureSection.one(domain),
        add=lambda a, b: a + b,
        neg=lambda a: -a,
        mul=lambda a, b: a * b,
        eq=lambda a, b: a == b,
        try_inverse=try_inverse,
        is_strictly_positive=lambda s: s.is_strictly_positive(),
        absolute_value=abs,
        try_sqrt=try_sqrt,
    )


def as_section(domain: OpenSet, value) -> StructureSection:
    """Promote a rational (or mapping) to a section over the domain."""
    if isinstance(value, StructureSection):
        if value.domain != domain:
            raise DomainMismatch(f"section on {value.domain} used over {domain}")
        return value
    if isinstance(value, Mapping):
        return StructureSection.from_mapping(domain, value)
    return StructureSection.constant(domain, value)
