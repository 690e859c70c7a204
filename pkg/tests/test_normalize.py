from fractions import Fraction

import pytest

from freediv.derivation import Derivation
from freediv.errors import InputError
from freediv.expr import parse
from freediv.homogeneity import analyze
from freediv.normalize import (
    CASE_1, CASE_2, NOT_MONOMIAL_TYPE, LinearChange, change_derivation, change_series, diag_normalize,
    eigen_support_factor, normalize_plane_basis, plane_normalization_plan, rank_B,
)
from freediv.pseries import Series, sharp_mul

XY = ["x", "y"]


def P(text, prec=None):
    return parse(text, XY) if prec is None else parse(text, XY, prec)


def D(*coeffs):
    return Derivation([parse(c, XY) for c in coeffs])


def test_diag_normalize_telescoping_unit():
    f = P("x*y + x^2*y")
    res = diag_normalize((1, -1), f, k=10)
    assert res.unit == P("1 + x", 10)
    assert res.normalized == P("x*y", 10)
    assert res.eigenvalue == 0
    assert (sharp_mul(res.unit, res.normalized) - f).truncate(10).is_zero()


def test_diag_normalize_supplied_cofactor():
    f = P("x*y + x^2*y")
    c = P("x - x^2 + x^3 - x^4 + x^5 - x^6 + x^7", 8)
    res = diag_normalize((1, -1), f, c, k=8)
    assert res.unit.truncate(8) == P("1 + x", 8)


def test_diag_normalize_trivial_cases():
    res = diag_normalize((2, 3), P("x^3 - y^2"), Series.constant(6, 2), 8)
    assert res.unit == Series.one(2, 8) and res.eigenvalue == 6
    res = diag_normalize((1, -1), P("x*y"), Series.zero(2), 8)
    assert res.normalized == P("x*y", 8)


def test_diag_normalize_rejects_wrong_cofactor():
    with pytest.raises(InputError):
        diag_normalize((2, 3), P("x^3 - y^2"), Series.constant(5, 2), 8)


def test_eigen_support_factor():
    p, q, v = eigen_support_factor(P("x*y + x^2*y^2"), (1, -1))
    assert (p, q) == (1, 1) and v == P("1 + x*y")
    assert eigen_support_factor(P("x^2"), (0, 1))[:2] == (2, 0)
    with pytest.raises(InputError):
        eigen_support_factor(P("x + y"), (1, -1))


def test_eigen_support_factor_ray_and_mixed_signs():
    assert eigen_support_factor(P("x^2*y^2 + x^3*y^3"), (1, -1)) == (2, 2, P("1 + x*y"))
    # weights (1, 1): only constants are annihilated
    assert eigen_support_factor(P("3"), (1, 1)) == (0, 0, P("3"))
    # weights (1, 2) annihilate no monomial other than 1; mixed ray (2, -1) is not monomial type
    assert eigen_support_factor(Series.constant(1, 2), (1, 2))[:2] == (0, 0)


def test_rank_b_examples():
    assert rank_B([D("x", "0"), D("3*x + y", "0")])[1] == 2
    assert rank_B([D("x", "0"), D("2*x", "0")])[1] == 1
    assert rank_B([D("x^2", "0"), D("y^2", "x*y")])[1] == 0
    with pytest.raises(InputError):
        rank_B([D("1", "0"), D("x", "0")])


def _linear(row):
    a, b, c, d = row
    return Derivation([Series({(1, 0): a, (0, 1): b}, 2), Series({(1, 0): c, (0, 1): d}, 2)])


def _apply_plan(b_rows):
    plan = plane_normalization_plan(b_rows)
    d1, d2 = (_linear(r) for r in b_rows)
    return plan, [change_derivation(d1 * r1 + d2 * r2, plan.change) for r1, r2 in plan.combos]


def test_plan_case_two_after_swap():
    plan, pair = _apply_plan([[0, 0, 1, 2], [0, 0, 3, 4]])
    assert plan.kind == CASE_2 and plan.parameter == 0
    assert pair[0] == D("x", "0") and pair[1] == D("y", "0")


def test_plan_case_two_with_parameter():
    # relations forced by f in m^3: a1 c2 = a2 c1, b1 d2 = b2 d1, a1 d2 - a2 d1 + b1 c2 - b2 c1 = 0
    rows = [[1, 0, 2, 0], [0, 1, 0, 2]]
    plan, pair = _apply_plan(rows)
    assert plan.kind == CASE_2 and plan.parameter == 2
    lin = [d.linear_part() for d in pair]
    assert lin[0] == [[1, 0], [0, 0]]
    assert lin[1] == [[2, 0], [1, 0]]


def test_plan_prefers_zero_linear_part():
    plan = plane_normalization_plan([[0, 0, 0, 0], [1, 0, 0, 0]])
    assert plan.kind == CASE_1 and plan.combos[0] == (1, 0)
    plan, pair = _apply_plan([[1, 0, 0, 0], [2, 0, 0, 0]])
    assert plan.kind == CASE_1 and pair[0].is_zero()


def test_plane_basis_of_quartic_is_case_one():
    f = P("x^4 + y^5 + x*y^4")
    nf = normalize_plane_basis(f, analyze(f).basis)
    assert nf.kind == CASE_1
    assert all(v == 0 for row in nf.transformed_basis[0].linear_part() for v in row)


def test_plane_basis_three_lines():
    f = P("x*y*(x + y)")
    nf = normalize_plane_basis(f, analyze(f).basis)
    assert nf.kind == CASE_1


def test_linear_change_round_trip():
    change = LinearChange(((Fraction(1), Fraction(0)), (Fraction(-2), Fraction(1))), "shear")
    f = P("x^3 - y^2 + x*y")
    d = D("2*x", "3*y")
    g = change_series(f, change)
    e = change_derivation(d, change)
    # the derivation acts on f in old coordinates as on g in new ones
    assert e(g) == change_series(d(f), change)
