"""Exact scalar arithmetic: rationals, dense polynomials, and ring capability bundles.

Scalars are :class:`fractions.Fraction` throughout: arbitrary precision,
always in canonical form (reduced, positive denominator), with decidable
equality.  The ordered-ring extras a symplectic reduction needs (positivity,
absolute value, partial square root) live on :class:`Ring` so the same
generic code runs over plain rationals, rational-valued function sections
and polynomial coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional

from .errors import DivisionByZero, NegativeInput, NotExact


@dataclass(frozen=True)
class Ring:
    """Capability bundle for a commutative unital ring.

    ``zero``/``one``/``add``/``neg``/``mul``/``eq`` realize the ring axioms.
    The remaining operations are partial: ``try_inverse`` returns None for a
    non-unit, and the ordered-ring operations (strict positivity, absolute
    value, square root) are None on rings that do not carry an order.
    Instances must satisfy: strictly positive elements are invertible.
    """

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    mul: Callable[[Any, Any], Any]
    eq: Callable[[Any, Any], bool]
    try_inverse: Callable[[Any], Optional[Any]]
    is_strictly_positive: Optional[Callable[[Any], bool]] = None
    absolute_value: Optional[Callable[[Any], Any]] = None
    try_sqrt: Optional[Callable[[Any], Any]] = None

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def from_int(self, n: int):
        out, step = self.zero, self.one
        if n < 0:
            step, n = self.neg(step), -n
        for _ in range(n):
            out = self.add(out, step)
        return out


def rational_inverse(a: Fraction) -> Fraction:
    if a == 0:
        raise DivisionByZero("inverse of 0")
    return 1 / a


def _try_inverse_rational(a: Fraction) -> Optional[Fraction]:
    return None if a == 0 else 1 / a


def rational_try_sqrt(a: Fraction) -> Fraction:
    """Exact square root of a nonnegative rational, or NotExact.

    Succeeds exactly when numerator and denominator (in canonical form) are
    perfect squares.
    """
    a = Fraction(a)
    if a < 0:
        raise NegativeInput(f"sqrt of negative rational {a}")
    num, den = a.numerator, a.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NotExact(f"{a} has no rational square root", value=a)
    return Fraction(rn, rd)


QQ = Ring(
    name="QQ",
    zero=Fraction(0),
    one=Fraction(1),
    add=lambda a, b: a + b,
    neg=lambda a: -a,
    mul=lambda a, b: a * b,
    eq=lambda a, b: a == b,
    try_inverse=_try_inverse_rational,
    is_strictly_positive=lambda a: a > 0,
    absolute_value=abs,
    try_sqrt=rational_try_sqrt,
)


class Polynomial:
    """Dense univariate polynomial with coefficients in a :class:`Ring`.

    Coefficients are stored constant term first with no trailing zeros; the
    zero polynomial has an empty coefficient tuple.  The variable is a
    symbolic label, "t" by default.
    """

    __slots__ = ("ring", "coeffs", "var")

    def __init__(self, ring: Ring, coeffs, var: str = "t"):
        coeffs = list(coeffs)
        while coeffs and ring.is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, ring: Ring, c, var: str = "t") -> "Polynomial":
        return cls(ring, [c], var)

    @classmethod
    def variable(cls, ring: Ring, var: str = "t") -> "Polynomial":
        return cls(ring, [ring.zero, ring.one], var)

    @classmethod
    def monomial(cls, ring: Ring, coeff, power: int, var: str = "t") -> "Polynomial":
        return cls(ring, [ring.zero] * power + [coeff], var)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.ring.eq(self.coeffs[-1], self.ring.one)

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ring.name, self.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        r = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(r, [r.add(self.coefficient(i), other.coefficient(i)) for i in range(n)], self.var)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, [self.ring.neg(c) for c in self.coeffs], self.var)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        r = self.ring
        if self.is_zero() or other.is_zero():
            return Polynomial(r, [], self.var)
        out = [r.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = r.add(out[i + j], r.mul(a, b))
        return Polynomial(r, out, self.var)

    def scale(self, c) -> "Polynomial":
        r = self.ring
        return Polynomial(r, [r.mul(c, a) for a in self.coeffs], self.var)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.constant(self.ring, self.ring.one, self.var)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, x):
        """Horner evaluation; x may be any element of the coefficient ring."""
        r = self.ring
        acc = r.zero
        for c in reversed(self.coeffs):
            acc = r.add(r.mul(acc, x), c)
        return acc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        r = self.ring
        acc = Polynomial(r, [], self.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial.constant(r, c, self.var)
        return acc

    def reversed(self, degree: Optional[int] = None) -> "Polynomial":
        """Coefficient reversal t^d * p(1/t), with d defaulting to deg(p)."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        return Polynomial(self.ring, [self.coefficient(d - i) for i in range(d + 1)], self.var)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*{self.var}")
            else:
                parts.append(f"({c})*{self.var}^{i}")
        return " + ".join(parts)
