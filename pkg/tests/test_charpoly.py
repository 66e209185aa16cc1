"""Characteristic polynomial sections, Cayley–Hamilton, eigen-sections,
gluing, and symplectic eigenvalue reciprocity."""

import random
from fractions import Fraction as F

import pytest

from sympsheaf import (
    EigenPair,
    Polynomial,
    QQ,
    SectionMatrix,
    SectionVector,
    StructureSection,
    cayley_hamilton_check,
    char_poly,
    determinant_adjugate,
    discrete,
    eigen_presheaf_glue,
    eigen_sections,
    point_space,
    poly_apply,
    random_symplectic,
    rational_roots,
    reciprocal_spectrum_check,
    sierpinski,
    standard_J,
    try_inverse_matrix,
    validate_topology,
)
from sympsheaf.errors import DegreeTooLarge, IncompatibleFamily, NotSquare, NotSymplectic

from oracles import charpoly_cofactor, rand_matrix

PT = point_space().whole


def qq_poly(*coeffs):
    return Polynomial(QQ, [F(c) for c in coeffs])


def section_coeffs(p):
    return [c for c in p.coeffs]


# -- char_poly ---------------------------------------------------------------------


def test_charpoly_zero_matrix():
    p = char_poly(SectionMatrix.zeros(PT, 2, 2))
    assert [c.values[0] for c in p.coeffs] == [0, 0, 1]  # t²


def test_charpoly_rotation():
    p = char_poly(SectionMatrix(PT, [[0, 1], [-1, 0]]))
    assert [c.values[0] for c in p.coeffs] == [1, 0, 1]  # t² + 1
    assert [c.values[0] for c in p.coeffs] == charpoly_cofactor([[F(0), F(1)], [F(-1), F(0)]])


def test_charpoly_non_constant_diagonal():
    sp = sierpinski()
    f = StructureSection.from_mapping(sp.whole, {"a": 2, "b": 5})
    p = char_poly(SectionMatrix(sp.whole, [[f]]))
    assert p.degree == 1 and p.is_monic()
    assert p.coeffs[0] == -f  # t − f


def test_charpoly_monic_trace_det_identities():
    rng = random.Random(0)
    for n in (2, 3, 4, 6):
        m = rand_matrix(rng, PT, n, n)
        p = char_poly(m)
        assert p.degree == n and p.is_monic()
        assert p.coeffs[n - 1] == -m.trace()
        det, _ = determinant_adjugate(m)
        assert p.coeffs[0] == det * ((-1) ** n)
        assert [c.values[0] for c in p.coeffs] == charpoly_cofactor(m.at_point("x"))


def test_charpoly_restriction_compatible():
    rng = random.Random(1)
    sp = sierpinski()
    m = rand_matrix(rng, sp.whole, 3, 3)
    V = sp.open_set(["a"])
    restricted = char_poly(m.restrict(V))
    assert [c.restrict(V) for c in char_poly(m).coeffs] == list(restricted.coeffs)


def test_charpoly_guards():
    with pytest.raises(NotSquare):
        char_poly(SectionMatrix.zeros(PT, 2, 3))
    with pytest.raises(DegreeTooLarge):
        char_poly(SectionMatrix.identity(PT, 9))


# -- poly_apply -----------------------------------------------------------------------


def test_poly_apply_variable_and_constant():
    m = SectionMatrix(PT, [[1, 2], [0, 1]])
    t = Polynomial.variable(QQ)
    assert poly_apply(t, m) == m
    assert poly_apply(qq_poly(1), m) == SectionMatrix.identity(PT, 2)


def test_poly_apply_rotation_annihilated():
    m = SectionMatrix(PT, [[0, 1], [-1, 0]])
    assert poly_apply(qq_poly(1, 0, 1), m).is_zero()  # M² + I = 0


def test_poly_apply_module_action_is_horner():
    rng = random.Random(2)
    m = rand_matrix(rng, PT, 3, 3)
    p = qq_poly(2, -1, 0, 3)
    direct = SectionMatrix.identity(PT, 3).scale(2) - m + (m @ m @ m).scale(3)
    assert poly_apply(p, m) == direct


# -- Cayley–Hamilton --------------------------------------------------------------------


def test_cayley_hamilton_shear():
    m = SectionMatrix(PT, [[1, 1], [0, 1]])
    p = char_poly(m)
    assert [c.values[0] for c in p.coeffs] == [1, -2, 1]  # (t−1)²
    assert cayley_hamilton_check(m).is_zero()


def test_cayley_hamilton_section_diagonal():
    sp = sierpinski()
    f = StructureSection.from_mapping(sp.whole, {"a": 2, "b": 5})
    g = StructureSection.from_mapping(sp.whole, {"a": -1, "b": F(1, 3)})
    m = SectionMatrix(sp.whole, [[f, 0], [0, g]])
    assert cayley_hamilton_check(m).is_zero()


def test_cayley_hamilton_random_5x5():
    rng = random.Random(3)
    for _ in range(20):
        m = rand_matrix(rng, PT, 5, 5)
        assert cayley_hamilton_check(m).is_zero()


def test_cayley_hamilton_inverse_matches_adjugate_route():
    # from P(M)=0: M⁻¹ = −c₀⁻¹·(M^{n−1} + c_{n−1}M^{n−2} + … + c₁I)
    rng = random.Random(4)
    for _ in range(5):
        m = rand_matrix(rng, PT, 4, 4)
        det, _ = determinant_adjugate(m)
        if not det.is_unit():
            continue
        p = char_poly(m)
        horner = Polynomial(p.ring, list(p.coeffs[1:]))
        inv = poly_apply(horner, m).scale(p.coeffs[0].inverse()).scale(-1)
        assert inv == try_inverse_matrix(m)


# -- rational roots ----------------------------------------------------------------------


def test_rational_roots_examples():
    assert rational_roots([F(1), F(0), F(1)]) == []  # t² + 1
    assert rational_roots([F(1), F(-5, 2), F(1)]) == [F(1, 2), F(2)]
    assert rational_roots([F(0), F(0), F(-1), F(1)]) == [F(0), F(1)]  # t³ − t²
    # denominators cleared: t² − (5/6)t + 1/6 = (t−1/3)(t−1/2)
    assert rational_roots([F(1, 6), F(-5, 6), F(1)]) == [F(1, 3), F(1, 2)]


def test_rational_roots_zero_poly_rejected():
    with pytest.raises(ValueError):
        rational_roots([F(0)])


# -- eigen sections -----------------------------------------------------------------------


def test_eigen_diagonal():
    m = SectionMatrix(PT, [[2, 0], [0, 3]])
    report = eigen_sections(m)
    assert not report.omitted_points
    assert [(p.lam.values[0], tuple(e.values[0] for e in p.vector.entries))
            for p in report.pairs] == [(F(2), (F(1), F(0))), (F(3), (F(0), F(1)))]


def test_eigen_section_valued_scalar():
    sp = discrete(["a", "b"])
    f = StructureSection.from_mapping(sp.whole, {"a": 2, "b": 5})
    report = eigen_sections(SectionMatrix(sp.whole, [[f]]))
    assert len(report.pairs) == 1 and not report.omitted_points
    pair = report.pairs[0]
    assert pair.lam == f
    assert pair.vector[0] == 1


def test_eigen_no_rational_eigenvalue_reported():
    report = eigen_sections(SectionMatrix(PT, [[0, 1], [-1, 0]]))
    assert report.pairs == () and report.omitted_points == ("x",)


def test_eigen_partial_branch_omission():
    # two eigenvalues at a, one at b: only one branch survives
    sp = discrete(["a", "b"])
    f = StructureSection.from_mapping(sp.whole, {"a": 2, "b": 1})
    g = StructureSection.from_mapping(sp.whole, {"a": 3, "b": 1})
    m = SectionMatrix(sp.whole, [[f, 0], [0, g]])
    report = eigen_sections(m)
    assert len(report.pairs) == 1
    assert report.omitted_points == ("b",)


def test_eigen_pairs_satisfy_equation_exactly():
    rng = random.Random(5)
    sp = sierpinski()
    for _ in range(10):
        m = rand_matrix(rng, sp.whole, 3, 3)
        for pair in eigen_sections(m).pairs:
            assert (m @ pair.vector) == pair.vector.scale(pair.lam)
            assert pair.vector.is_nowhere_zero()


# -- eigen presheaf gluing ---------------------------------------------------------------------


def test_eigen_glue_two_point_cover():
    sp = discrete(["a", "b"])
    f = StructureSection.from_mapping(sp.whole, {"a": 2, "b": 5})
    m = SectionMatrix(sp.whole, [[f]])
    cover = [sp.open_set(["a"]), sp.open_set(["b"])]
    pairs = [
        EigenPair(StructureSection.constant(cover[0], 2),
                  SectionVector(cover[0], [1])),
        EigenPair(StructureSection.constant(cover[1], 5),
                  SectionVector(cover[1], [1])),
    ]
    glued = eigen_presheaf_glue(m, cover, pairs)
    assert glued.lam == f and glued.vector[0] == 1


def test_eigen_glue_incompatible_on_overlap():
    sp = validate_topology(["a", "b", "c"],
                           [[], ["b"], ["a", "b"], ["b", "c"], ["a", "b", "c"]])
    U = sp.whole
    m = SectionMatrix.identity(U, 1).scale(3)
    cover = [sp.open_set(["a", "b"]), sp.open_set(["b", "c"])]
    pairs = [
        EigenPair(StructureSection.constant(cover[0], 3),
                  SectionVector(cover[0], [StructureSection.from_mapping(cover[0], {"a": 1, "b": 1})])),
        EigenPair(StructureSection.constant(cover[1], 3),
                  SectionVector(cover[1], [StructureSection.from_mapping(cover[1], {"b": 2, "c": 2})])),
    ]
    with pytest.raises(IncompatibleFamily) as err:
        eigen_presheaf_glue(m, cover, pairs)
    assert err.value.witness["overlap"] == ("b",)


def test_eigen_glue_single_member_cover():
    m = SectionMatrix(PT, [[2, 0], [0, 3]])
    pair = eigen_sections(m).pairs[0]
    glued = eigen_presheaf_glue(m, [PT], [pair])
    assert glued.lam == pair.lam and glued.vector == pair.vector


def test_eigen_glue_rejects_non_eigenpair():
    m = SectionMatrix(PT, [[2, 0], [0, 3]])
    bogus = EigenPair(StructureSection.constant(PT, 7), SectionVector(PT, [1, 1]))
    with pytest.raises(ValueError):
        eigen_presheaf_glue(m, [PT], [bogus])


# -- reciprocity ------------------------------------------------------------------------------


def planted_symplectic(rng, m, spectrum):
    """T·D·T⁻¹ with D = diag(λ…, 1/λ…): symplectic with known spectrum."""
    domain = PT
    diag = list(spectrum) + [1 / lam for lam in spectrum]
    D = SectionMatrix(domain, [[diag[i] if i == j else 0 for j in range(2 * m)]
                               for i in range(2 * m)])
    J = standard_J(domain, m)
    assert is_symplectic_map_local(D, J)
    T = random_symplectic(domain, m, rng)
    return T @ D @ try_inverse_matrix(T)


def is_symplectic_map_local(M, J):
    return M.transpose() @ J @ M == J


def test_reciprocity_diag_example():
    m = SectionMatrix(PT, [[2, 0], [0, F(1, 2)]])
    report = reciprocal_spectrum_check(m)
    assert report.palindromic and report.spectrum_closed
    assert [c.values[0] for c in report.char.coeffs] == [1, F(-5, 2), 1]
    assert report.spectra["x"] == (F(1, 2), F(2))


def test_reciprocity_identity():
    m = SectionMatrix.identity(PT, 4)
    report = reciprocal_spectrum_check(m)
    assert report.palindromic and report.spectrum_closed
    # (t−1)⁴ reversed is itself
    assert [c.values[0] for c in report.char.coeffs] == [1, -4, 6, -4, 1]


def test_reciprocity_random_transvection_products():
    rng = random.Random(6)
    for _ in range(5):
        m = random_symplectic(PT, 2, rng)
        report = reciprocal_spectrum_check(m)
        assert report.palindromic
        # reversal oracle: coefficient list reversed equals itself
        coeffs = [c.values[0] for c in report.char.coeffs]
        assert coeffs == coeffs[::-1]
        assert report.spectrum_closed


def test_reciprocity_planted_spectrum():
    rng = random.Random(7)
    m = planted_symplectic(rng, 2, [F(2), F(3)])
    report = reciprocal_spectrum_check(m)
    assert report.palindromic and report.spectrum_closed
    assert report.spectra["x"] == (F(1, 3), F(1, 2), F(2), F(3))


def test_reciprocity_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        reciprocal_spectrum_check(SectionMatrix.identity(PT, 2).scale(2))


def test_section_valued_symplectic_reciprocity():
    rng = random.Random(8)
    sp = sierpinski()
    m = random_symplectic(sp.whole, 1, rng, section_valued=True)
    report = reciprocal_spectrum_check(m, standard_J(sp.whole, 1))
    assert report.palindromic and report.spectrum_closed
