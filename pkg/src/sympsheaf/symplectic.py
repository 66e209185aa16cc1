"""Skew-symmetric bilinear forms on free modules of sections and their
constructive normal forms: symplectic (Darboux) bases, the degenerate block
form, symplectomorphisms and the symplectic group, volume and orientation.

The reduction follows the flag-splitting proof: find a pair (s, t̄) whose
pairing is a unit section, normalize t = ω(s,t̄)⁻¹·t̄ so ω(s,t) = 1 exactly,
split every other generator into the orthogonal complement via

    z  ↦  z + ω(z,s)·t − ω(z,t)·s,

and recurse.  Over the function sheaf a unit pairing may fail to exist
among section generators even when the form is pointwise fine (zeros can
move around); the remainder is then reduced on each ℚ stalk and the
per-point choices are glued back into sections, legitimate exactly
because the structure sheaf glues arbitrary pointwise data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional

from . import qlinalg
from .errors import (
    Degenerate,
    DegenerateForm,
    DimensionMismatch,
    NonConstantRank,
    NotSkewSymmetric,
    NotSquare,
    NotSymplectic,
    NoUnitPivot,
)
from .exterior import KForm, form_power, wedge
from .modules import SectionMatrix, SectionVector, determinant_adjugate, try_inverse_matrix
from .sections import StructureSection
from .site import OpenSet


# -- the reference form -------------------------------------------------------


def standard_J(domain: OpenSet, m: int) -> SectionMatrix:
    """The 2m×2m matrix [[0, I_m], [−I_m, 0]] of the standard form."""
    rows = []
    for i in range(2 * m):
        row = [0] * (2 * m)
        if i < m:
            row[m + i] = 1
        else:
            row[i - m] = -1
        rows.append(row)
    return SectionMatrix(domain, rows)


def block_normal_form(domain: OpenSet, m: int, n: int) -> SectionMatrix:
    """The rank-2m degenerate normal form [[0,I_m,0],[−I_m,0,0],[0,0,0]] of size n."""
    rows = []
    for i in range(n):
        row = [0] * n
        if i < m:
            row[m + i] = 1
        elif i < 2 * m:
            row[i - m] = -1
        rows.append(row)
    return SectionMatrix(domain, rows)


def gram_two_form(omega: SectionMatrix) -> KForm:
    """The 2-form Σ_{i<j} Ω_ij ε^i*∧ε^j* whose Gram matrix is Ω."""
    if not omega.is_square():
        raise NotSquare("Gram matrix must be square")
    n = omega.rows
    return KForm(omega.domain, n, 2,
                 {(i, j): omega[i, j] for i in range(n) for j in range(i + 1, n)})


def standard_two_form(domain: OpenSet, m: int) -> KForm:
    """Σ_i ε^i*∧ε^{m+i}*, the coordinate form of the standard structure."""
    return gram_two_form(standard_J(domain, m))


# -- form classification ---------------------------------------------------------


@dataclass(frozen=True)
class FormReport:
    skew: bool
    ranks: dict  # point label -> pointwise rank (always even for skew forms)
    nondegenerate: bool

    @property
    def constant_rank(self) -> Optional[int]:
        values = set(self.ranks.values())
        if len(values) == 1:
            return values.pop()
        return 0 if not self.ranks else None


def check_form(omega: SectionMatrix) -> FormReport:
    """Classify a bilinear form: skewness, pointwise ranks, nondegeneracy.

    Nondegeneracy means det(Ω) is a unit section, i.e. nonzero at every
    point, equivalent to the section-level definition over the function
    sheaf.
    """
    if not omega.is_square():
        raise NotSquare(f"{omega.rows}x{omega.cols} form matrix")
    skew = omega.transpose() == -omega and all(
        omega[i, i].is_zero() for i in range(omega.rows))
    ranks = {p: qlinalg.rank(omega.at_point(p)) for p in omega.domain.labels}
    nondeg = skew and all(r == omega.rows for r in ranks.values())
    return FormReport(skew=skew, ranks=ranks, nondegenerate=nondeg)


# -- pairing helpers ----------------------------------------------------------------


def form_pairing(omega: SectionMatrix, u: SectionVector, v: SectionVector) -> StructureSection:
    """ω(u, v) = uᵀ Ω v as a section."""
    return u.pairing(omega @ v)


# -- the constructive reduction -------------------------------------------------------


@dataclass(frozen=True)
class DarbouxBasis:
    """A certified symplectic basis s₁..s_m, t₁..t_m (plus kernel vectors in
    the degenerate case).  P has the basis as columns and gram = ᵗPΩP is the
    certificate."""

    s: tuple[SectionVector, ...]
    t: tuple[SectionVector, ...]
    kernel: tuple[SectionVector, ...]
    change_of_basis: SectionMatrix
    gram: SectionMatrix

    @property
    def m(self) -> int:
        return len(self.s)


def darboux_basis(omega: SectionMatrix) -> DarbouxBasis:
    """Symplectic basis of a nondegenerate skew form: ᵗPΩP = J exactly."""
    report = check_form(omega)
    if not report.skew:
        raise NotSkewSymmetric("form matrix is not skew-symmetric")
    if omega.rows % 2:
        raise Degenerate("odd rank cannot carry a nondegenerate skew form",
                         points=omega.domain.labels)
    if not report.nondegenerate:
        bad = tuple(p for p, r in report.ranks.items() if r < omega.rows)
        raise Degenerate("form is degenerate; use skew_normal_form", points=bad)
    if omega.rows == 0:
        empty = SectionMatrix(omega.domain, [])
        return DarbouxBasis((), (), (), empty, empty)
    s_vecs, t_vecs, kernel = _reduce(omega)
    if kernel:
        raise AssertionError("nondegenerate reduction produced kernel vectors")
    m = len(s_vecs)
    P = SectionMatrix.from_columns(list(s_vecs) + list(t_vecs))
    gram = P.transpose() @ omega @ P
    if gram != standard_J(omega.domain, m):
        raise AssertionError("Darboux certificate failed; arithmetic bug")
    return DarbouxBasis(tuple(s_vecs), tuple(t_vecs), (), P, gram)


def skew_normal_form(omega: SectionMatrix) -> tuple[int, SectionMatrix]:
    """Degenerate normal form: returns (m, P) with ᵗPΩP the three-block form.

    Requires constant pointwise rank over the open set; otherwise
    NonConstantRank reports the offending points (restrict and retry there,
    mirroring the local statement of the theorem).
    """
    report = check_form(omega)
    if not report.skew:
        raise NotSkewSymmetric("form matrix is not skew-symmetric")
    if report.constant_rank is None:
        reference = report.ranks[omega.domain.labels[0]]
        bad = tuple(p for p, r in report.ranks.items() if r != reference)
        raise NonConstantRank("pointwise rank is not constant", points=bad)
    if omega.rows == 0:
        return 0, SectionMatrix(omega.domain, [])
    s_vecs, t_vecs, kernel = _reduce(omega)
    m = len(s_vecs)
    P = SectionMatrix.from_columns(list(s_vecs) + list(t_vecs) + list(kernel))
    gram = P.transpose() @ omega @ P
    if gram != block_normal_form(omega.domain, m, omega.rows):
        raise AssertionError("normal-form certificate failed; arithmetic bug")
    return m, P


def _reduce(omega: SectionMatrix):
    """Shared reduction engine.  Returns (s, t, kernel) vector lists."""
    n = omega.rows
    domain = omega.domain
    gens = [SectionVector.basis(domain, n, i) for i in range(n)]
    s_vecs: list[SectionVector] = []
    t_vecs: list[SectionVector] = []
    while gens:
        found = None
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if form_pairing(omega, gens[i], gens[j]).is_unit():
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            if all(form_pairing(omega, gens[i], gens[j]).is_zero()
                   for i in range(len(gens)) for j in range(i + 1, len(gens))):
                return s_vecs, t_vecs, gens  # remainder spans the kernel
            extra_s, extra_t, kernel = _pointwise_completion(omega, gens)
            return s_vecs + extra_s, t_vecs + extra_t, kernel
        i, j = found
        s = gens[i]
        u = form_pairing(omega, s, gens[j])
        t = gens[j].scale(u.inverse())
        rest = [gens[k] for k in range(len(gens)) if k not in (i, j)]
        projected = []
        for z in rest:
            zs = form_pairing(omega, z, s)
            zt = form_pairing(omega, z, t)
            projected.append(z + t.scale(zs) - s.scale(zt))
        s_vecs.append(s)
        t_vecs.append(t)
        gens = projected
    return s_vecs, t_vecs, []


def _pointwise_completion(omega: SectionMatrix, gens: list[SectionVector]):
    """Reduce the remaining block on each ℚ stalk and glue the choices.

    The current generators form a pointwise basis of the orthogonal
    complement reached so far; reducing their Gram matrix at each point and
    mapping the resulting coordinates back through the generators produces
    section vectors with the exact block pairing.
    """
    domain = omega.domain
    r = len(gens)
    pair_sections = [[form_pairing(omega, gens[i], gens[j]) for j in range(r)]
                     for i in range(r)]
    ms = {}
    coords = {}
    for p in domain.labels:
        gram_p = [[pair_sections[i][j].at(p) for j in range(r)] for i in range(r)]
        m_p, C_p = qlinalg.symplectic_reduce(gram_p)
        ms[p] = m_p
        coords[p] = C_p
    if len(set(ms.values())) > 1:
        reference = ms[domain.labels[0]]
        bad = tuple(p for p, v in ms.items() if v != reference)
        raise NonConstantRank("pointwise rank changed across the open set", points=bad)
    if not ms:
        raise NoUnitPivot("cannot reduce over an empty open set without a unit pivot")
    m = ms[domain.labels[0]]

    def combined(k: int) -> SectionVector:
        def at(p: str):
            gen_vals = [g.at_point(p) for g in gens]
            return [sum((coords[p][i][k] * gen_vals[i][row] for i in range(r)),
                        Fraction(0)) for row in range(len(gens[0]))]
        return SectionVector.from_point_data(domain, len(gens[0]), at)

    s_vecs = [combined(k) for k in range(m)]
    t_vecs = [combined(m + k) for k in range(m)]
    kernel = [combined(2 * m + k) for k in range(r - 2 * m)]
    return s_vecs, t_vecs, kernel


def standard_sum_decomposition(basis: DarbouxBasis) -> KForm:
    """Σ_i sᵢ*∧tᵢ* for the dual basis of a Darboux basis; evaluates to the
    original Gram form."""
    P = basis.change_of_basis
    P_inv = try_inverse_matrix(P)
    n = P.rows
    m = basis.m
    out = KForm.zero(P.domain, n, 2)
    for i in range(m):
        s_dual = KForm.one_form(P.domain, [P_inv[i, k] for k in range(n)])
        t_dual = KForm.one_form(P.domain, [P_inv[m + i, k] for k in range(n)])
        out = out + wedge(s_dual, t_dual)
    return out


# -- symplectomorphisms ---------------------------------------------------------------


def is_symplectic_map(M: SectionMatrix, omega: SectionMatrix,
                      omega2: Optional[SectionMatrix] = None) -> bool:
    """True iff ᵗM·Ω'·M = Ω entrywise-exactly (Ω' defaults to Ω)."""
    target = omega if omega2 is None else omega2
    if M.rows != M.cols or M.rows != omega.rows or target.rows != M.rows:
        raise DimensionMismatch("map and form dimensions disagree")
    if M.domain != omega.domain or M.domain != target.domain:
        raise DimensionMismatch("map and form over different open sets")
    return M.transpose() @ target @ M == omega


@dataclass(frozen=True)
class SymplecticMap:
    """A matrix certified against a reference form: ᵗMJM = J."""

    matrix: SectionMatrix
    form: SectionMatrix

    def __post_init__(self):
        if not is_symplectic_map(self.matrix, self.form):
            raise NotSymplectic("matrix does not preserve the reference form")

    @classmethod
    def identity(cls, domain: OpenSet, m: int) -> "SymplecticMap":
        return cls(SectionMatrix.identity(domain, 2 * m), standard_J(domain, m))

    def compose(self, other: "SymplecticMap") -> "SymplecticMap":
        if self.form != other.form:
            raise NotSymplectic("composing maps with different reference forms")
        return SymplecticMap(self.matrix @ other.matrix, self.form)

    def invert(self) -> "SymplecticMap":
        """Inverse via M⁻¹ = J⁻¹·ᵗM·J, then re-certified."""
        J_inv = try_inverse_matrix(self.form)
        inv = J_inv @ self.matrix.transpose() @ self.form
        if inv @ self.matrix != SectionMatrix.identity(self.matrix.domain, self.matrix.rows):
            raise NotSymplectic("inverse certificate failed; arithmetic bug")
        return SymplecticMap(inv, self.form)

    def determinant(self) -> StructureSection:
        det, _ = determinant_adjugate(self.matrix)
        return det


def symplectic_transvection(domain: OpenSet, m: int, v: SectionVector,
                            c) -> SectionMatrix:
    """The transvection x ↦ x + c·ω(x,v)·v, i.e. I − c·v·(ᵗv·J); symplectic
    for every section c and vector v."""
    J = standard_J(domain, m)
    n = 2 * m
    if len(v) != n:
        raise DimensionMismatch(f"transvection vector length {len(v)} vs rank {n}")
    vJ = [(SectionVector(domain, [J[k, j] for k in range(n)]).pairing(v))
          for j in range(n)]
    c = StructureSection.constant(domain, c) if not isinstance(c, StructureSection) else c
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = StructureSection.constant(domain, 1 if i == j else 0)
            row.append(e - c * v[i] * vJ[j])
        rows.append(row)
    return SectionMatrix(domain, rows)


def random_symplectic(domain: OpenSet, m: int, rng: random.Random,
                      factors: int = 4, section_valued: bool = False) -> SectionMatrix:
    """A random product of symplectic transvections, exactly in the group
    by construction.  With section_valued the parameters vary per point."""
    n = 2 * m
    out = SectionMatrix.identity(domain, n)

    def scalar():
        if section_valued and domain.size:
            return StructureSection(domain,
                                    [Fraction(rng.randint(-2, 2)) for _ in domain.labels])
        return Fraction(rng.randint(-2, 2))

    for _ in range(factors):
        entries = [scalar() for _ in range(n)]
        v = SectionVector(domain, entries)
        c = scalar()
        out = out @ symplectic_transvection(domain, m, v, c)
    return out


# -- the E ⊕ E* example -------------------------------------------------------------------


def hyperbolic_sum_form(domain: OpenSet, n: int) -> SectionMatrix:
    """Gram matrix of ω((s₁,α₁),(s₂,α₂)) = α₂(s₁) − α₁(s₂) on A^n ⊕ (A^n)*,
    evaluated on the gauge basis (e₁..e_n; ε¹*..εⁿ*)."""
    if n < 1:
        raise DimensionMismatch("hyperbolic sum needs rank at least 1")

    def pairing(u, v):
        # u, v are coordinate tuples (s-part | α-part) of length 2n
        a = sum(Fraction(v[n + j]) * Fraction(u[j]) for j in range(n))
        b = sum(Fraction(u[n + j]) * Fraction(v[j]) for j in range(n))
        return a - b

    gauge = [[1 if k == i else 0 for k in range(2 * n)] for i in range(2 * n)]
    return SectionMatrix(domain, [[pairing(gauge[i], gauge[j]) for j in range(2 * n)]
                                  for i in range(2 * n)])


# -- volume and orientation -----------------------------------------------------------------


def orientation_form(omega: KForm, m: int) -> KForm:
    """((−1)^⌊m/2⌋ / m!)·ωᵐ, the orientation attached to a symplectic form;
    DegenerateForm when ωᵐ vanishes."""
    if omega.degree != 2:
        raise DimensionMismatch("orientation_form expects a 2-form")
    if 2 * m != omega.rank:
        raise DimensionMismatch(f"2m = {2 * m} does not match rank {omega.rank}")
    power = form_power(omega, m)
    if power.is_zero():
        raise DegenerateForm(f"ω^{m} vanishes; the form is degenerate")
    return power.scale(Fraction((-1) ** (m // 2), factorial(m)))
