"""Characteristic polynomial sections, Cayley–Hamilton, and eigen-sections.

The characteristic polynomial det(tI − M) of a section matrix is computed
on the ℚ[t] stalk at each point (cofactor expansion with minor memoization)
and the coefficients reassembled into sections.  Eigenvalues are exact
rational roots of the pointwise polynomials; per-point eigenpair choices
are glued into sections deterministically (eigenvalues ascending,
eigenvectors normalized to leading entry 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from . import qlinalg
from .errors import (
    DegreeTooLarge,
    DimensionMismatch,
    CayleyHamiltonViolation,
    IncompatibleFamily,
    NotSquare,
    NotSymplectic,
)
from .modules import SectionMatrix, SectionVector
from .presheaf import glue_sections, glue_vectors
from .rings import Polynomial
from .sections import StructureSection, as_section, section_ring
from .site import OpenSet, require_open_cover
from .symplectic import is_symplectic_map, standard_J

CHARPOLY_SIZE_CAP = 8


def _poly_add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def qq_charpoly(mat: qlinalg.QMatrix) -> list[Fraction]:
    """Coefficients of det(tI − M), constant term first, for a ℚ matrix.

    Cofactor expansion over ℚ[t] along the first remaining row, memoized on
    the set of remaining columns.
    """
    n = len(mat)
    entries = [[[-mat[i][j], Fraction(1)] if i == j else [-mat[i][j]]
                for j in range(n)] for i in range(n)]
    memo: dict[int, list[Fraction]] = {}

    def minor(cols_mask: int) -> list[Fraction]:
        if cols_mask == 0:
            return [Fraction(1)]
        if cols_mask in memo:
            return memo[cols_mask]
        size = bin(cols_mask).count("1")
        row = n - size
        acc: list[Fraction] = []
        sign = 1
        for j in range(n):
            if not cols_mask >> j & 1:
                continue
            term = _poly_mul(entries[row][j], minor(cols_mask & ~(1 << j)))
            if sign < 0:
                term = [-c for c in term]
            acc = _poly_add(acc, term)
            sign = -sign
        memo[cols_mask] = acc
        return acc

    coeffs = minor((1 << n) - 1)
    coeffs += [Fraction(0)] * (n + 1 - len(coeffs))
    return coeffs


def char_poly(M: SectionMatrix) -> Polynomial:
    """The characteristic polynomial section det(tI − M) ∈ A(U)[t].

    Monic of degree n, with constant term (−1)ⁿ·det(M) and t^{n−1}
    coefficient −trace(M).
    """
    if not M.is_square():
        raise NotSquare(f"{M.rows}x{M.cols} matrix has no characteristic polynomial")
    n = M.rows
    if n > CHARPOLY_SIZE_CAP:
        raise DegreeTooLarge(f"characteristic polynomial capped at size {CHARPOLY_SIZE_CAP}")
    per_point = {p: qq_charpoly(M.at_point(p)) for p in M.domain.labels}
    coeffs = [StructureSection.from_function(M.domain, lambda p, i=i: per_point[p][i])
              for i in range(n + 1)]
    return Polynomial(section_ring(M.domain), coeffs)


def poly_apply(p: Polynomial, M: SectionMatrix) -> SectionMatrix:
    """Substitute M for the variable: Σ cᵢ Mⁱ with M⁰ = I (Horner).

    Accepts polynomials over plain rationals (coefficients promoted to
    constant sections over M's domain) or over A(U) for the same U.
    """
    if not M.is_square():
        raise DimensionMismatch("polynomial substitution needs a square matrix")
    n = M.rows
    out = SectionMatrix.zeros(M.domain, n, n)
    identity = SectionMatrix.identity(M.domain, n)
    for c in reversed(p.coeffs):
        out = out @ M + identity.scale(as_section(M.domain, c))
    return out


def cayley_hamilton_check(M: SectionMatrix) -> SectionMatrix:
    """P_M(M), which the Cayley–Hamilton theorem makes the exact zero matrix.

    Returned as a certificate; a nonzero residue signals an arithmetic bug
    and raises CayleyHamiltonViolation.
    """
    residue = poly_apply(char_poly(M), M)
    if not residue.is_zero():
        raise CayleyHamiltonViolation("P_M(M) is nonzero; arithmetic bug")
    return residue


# -- exact rational eigen-solves -----------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Distinct rational roots of a nonzero ℚ polynomial, ascending.

    Rational root theorem after clearing denominators: any root p/q in
    lowest terms has p | constant term and q | leading coefficient.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has every rational as a root")

    def value(x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    roots = set()
    low = 0
    while coeffs[low] == 0:
        roots.add(Fraction(0))
        low += 1
    scale = lcm(*(c.denominator for c in coeffs)) if len(coeffs) > 1 else coeffs[0].denominator
    ints = [int(c * scale) for c in coeffs[low:]]
    a0, an = ints[0], ints[-1]
    for p in _divisors(a0):
        for q in _divisors(an):
            if gcd(p, q) != 1:
                continue
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and value(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _eigenvector_at(stalk: qlinalg.QMatrix, lam: Fraction) -> list[Fraction]:
    n = len(stalk)
    shifted = [[stalk[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    kernel = qlinalg.kernel_basis(shifted)
    if not kernel:
        raise AssertionError("eigenvalue without eigenvector; root finding bug")
    v = kernel[0]
    lead = next(x for x in v if x != 0)
    return [x / lead for x in v]


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue section λ with a nowhere-zero eigenvector: M·s = λ·s."""

    lam: StructureSection
    vector: SectionVector


@dataclass(frozen=True)
class EigenReport:
    pairs: tuple[EigenPair, ...]
    omitted_points: tuple[str, ...]


def eigen_sections(M: SectionMatrix) -> EigenReport:
    """All eigenpair sections obtained by gluing pointwise rational solves.

    At each point the rational eigenvalues are sorted ascending; branch k
    glues the k-th smallest across the open set and exists only when every
    point has more than k rational eigenvalues.  Points with fewer roots
    than the maximum (in particular with none) are reported as omitted.
    """
    if not M.is_square():
        raise NotSquare("eigen solve needs a square matrix")
    domain = M.domain
    if domain.size == 0:
        return EigenReport((), ())
    roots = {}
    for p in domain.labels:
        poly = qq_charpoly(M.at_point(p))
        roots[p] = rational_roots(poly) if any(c != 0 for c in poly) else []
    branch_count = min(len(r) for r in roots.values())
    max_count = max(len(r) for r in roots.values())
    if max_count == 0:
        omitted = domain.labels  # no rational eigenvalue anywhere
    else:
        omitted = tuple(p for p in domain.labels if len(roots[p]) < max_count)
    pairs = []
    for k in range(branch_count):
        lam = StructureSection.from_function(domain, lambda p, k=k: roots[p][k])
        vec = SectionVector.from_point_data(
            domain, M.rows,
            lambda p, k=k: _eigenvector_at(M.at_point(p), roots[p][k]))
        if (M @ vec) != vec.scale(lam) or not vec.is_nowhere_zero():
            raise AssertionError("glued eigenpair failed verification; bug")
        pairs.append(EigenPair(lam, vec))
    return EigenReport(tuple(pairs), omitted)


def eigen_presheaf_glue(M: SectionMatrix, cover: Sequence[OpenSet],
                        pairs: Sequence[EigenPair]) -> EigenPair:
    """Glue per-cover-member eigenpairs of M into an eigenpair over its domain.

    The family must agree on overlaps (both eigenvalues and eigenvectors);
    IncompatibleFamily carries the first disagreeing overlap.  Each member
    must be an actual eigenpair of M restricted to its member.
    """
    U = M.domain
    require_open_cover(U, cover)
    if len(cover) != len(pairs):
        raise DimensionMismatch("one eigenpair per cover member required")
    for V, pair in zip(cover, pairs):
        M_V = M.restrict(V)
        if (M_V @ pair.vector) != pair.vector.scale(pair.lam):
            raise ValueError(f"not an eigenpair of M over {V}")
        if not pair.vector.is_nowhere_zero():
            raise ValueError(f"eigenvector vanishes at a point of {V}")
    for i in range(len(cover)):
        for j in range(i + 1, len(cover)):
            o = cover[i].intersection(cover[j])
            if o.mask == 0:
                continue
            if pairs[i].lam.restrict(o) != pairs[j].lam.restrict(o) or \
               pairs[i].vector.restrict(o) != pairs[j].vector.restrict(o):
                raise IncompatibleFamily(
                    f"eigenpairs disagree on {o}",
                    witness={"members": (cover[i].labels, cover[j].labels),
                             "overlap": o.labels})
    lam = glue_sections(U, cover, [p.lam for p in pairs])
    vec = glue_vectors(U, cover, [p.vector for p in pairs])
    if (M @ vec) != vec.scale(lam):
        raise AssertionError("glued eigenpair failed verification; bug")
    return EigenPair(lam, vec)


# -- symplectic eigenvalue reciprocity ---------------------------------------------------


@dataclass(frozen=True)
class ReciprocityReport:
    palindromic: bool
    spectrum_closed: bool
    char: Polynomial
    spectra: dict  # point label -> tuple of rational eigenvalues


def reciprocal_spectrum_check(M: SectionMatrix,
                              form: Optional[SectionMatrix] = None) -> ReciprocityReport:
    """Verify P(t) = t^{2n}·P(1/t) for a symplectomorphism and that every
    pointwise rational spectrum is closed under λ ↦ 1/λ."""
    if M.rows % 2:
        raise DimensionMismatch("symplectomorphisms have even rank")
    J = form if form is not None else standard_J(M.domain, M.rows // 2)
    if not is_symplectic_map(M, J):
        raise NotSymplectic("matrix does not preserve the form")
    p = char_poly(M)
    palindromic = p.reversed(M.rows) == p
    spectra = {}
    closed = True
    for point in M.domain.labels:
        poly = qq_charpoly(M.at_point(point))
        roots = rational_roots(poly)
        spectra[point] = tuple(roots)
        for lam in roots:
            if lam == 0 or (1 / lam) not in roots:
                closed = False
    return ReciprocityReport(palindromic, closed, p, spectra)
