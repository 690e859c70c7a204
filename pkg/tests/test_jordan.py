import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from freediv.derivation import Derivation, bracket
from freediv.errors import InputError
from freediv.expr import parse
from freediv.jordan import (
    InducedMap, diagonal_coordinates, induced_is_nilpotent, is_nilpotent, is_semisimple_at,
    matrix_jordan_chevalley, nilpotent_cofactor_check, sn_decompose,
)
from freediv.linalg import identity, is_nilpotent as matrix_nilpotent, matmul

from oracles import is_jordan_chevalley_pair, matrix_jordan_parts
from strategies import random_singular_derivation

XY = ["x", "y"]


def D(*coeffs, names=XY):
    return Derivation([parse(c, names) for c in coeffs])


def test_induced_map_dimension_and_blocks():
    mp = InducedMap(D("x", "y^2").truncate(4), 4)
    assert mp.dim == 10
    assert [len(b) for b in mp.blocks()] == [1, 2, 3, 4]


@pytest.mark.parametrize("k", range(3, 9))
def test_resonant_example(k):
    dec = sn_decompose(D("x", "y^2"), k)
    assert dec.semisimple == D("x", "0").truncate(k)
    assert dec.nilpotent == D("0", "y^2").truncate(k)


def test_nilpotent_derivation_has_zero_semisimple_part():
    dec = sn_decompose(D("y", "x^2"), 6)
    assert dec.semisimple.is_zero()
    assert dec.nilpotent == D("y", "x^2").truncate(6)


def test_semisimple_linear_derivation_is_its_own_part():
    d = D("x + y", "-x + y")
    dec = sn_decompose(d, 5)
    assert dec.semisimple == d.truncate(5)
    assert dec.nilpotent.is_zero()


def test_input_errors():
    with pytest.raises(InputError):
        sn_decompose(D("1", "x"), 4)
    with pytest.raises(InputError):
        sn_decompose(D("x", "y"), 1)


def test_matrix_jordan_chevalley_examples():
    s, n = matrix_jordan_chevalley([[2, 1], [0, 2]])
    assert s == [[2, 0], [0, 2]] and n == [[0, 1], [0, 0]]
    s, n = matrix_jordan_chevalley([[0, -1], [1, 0]])
    assert n == [[0, 0], [0, 0]]


def _jordan_matrix(rng):
    """Integer matrix with rational eigenvalues and a nontrivial Jordan structure."""
    n = rng.randint(1, 4)
    j = [[0] * n for _ in range(n)]
    for i in range(n):
        j[i][i] = rng.choice([-1, 0, 1, 2])
        if i and j[i][i] == j[i - 1][i - 1] and rng.random() < 0.6:
            j[i - 1][i] = 1
    while True:
        p = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(p).det() != 0:
            break
    return sympy.Matrix(p) * sympy.Matrix(j) * sympy.Matrix(p).inv()


@settings(max_examples=100)
@given(st.integers(0, 10 ** 6))
def test_matrix_jordan_chevalley_matches_jordan_form(seed):
    m = _jordan_matrix(random.Random(seed))
    rows = [[Fraction(int(v.p), int(v.q)) for v in m.row(i)] for i in range(m.rows)]
    s, n = matrix_jordan_chevalley(rows)
    s_ref, n_ref = matrix_jordan_parts(m)
    assert sympy.Matrix(s) == s_ref
    assert sympy.Matrix(n) == n_ref


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_matrix_jordan_chevalley_properties(m):
    s, n = matrix_jordan_chevalley(m)
    assert [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(s, n)] == [[Fraction(v) for v in r] for r in m]
    assert matmul(s, n) == matmul(n, s)
    assert matrix_nilpotent(n)
    assert is_jordan_chevalley_pair(m, s, n)


def test_random_derivations_properties_and_stability():
    rng = random.Random(7)
    for _ in range(25):
        d = random_singular_derivation(rng, rng.choice([2, 3]))
        a = sn_decompose(d, 4)
        b = sn_decompose(d, 6)
        assert a.semisimple == b.semisimple.truncate(4)
        assert (a.semisimple + a.nilpotent) == d.truncate(4)
        assert bracket(a.semisimple, a.nilpotent).truncate(4).is_zero()
        assert is_nilpotent(a.nilpotent)
        assert is_semisimple_at(a.semisimple, 4)


def test_nilpotency_notions_agree():
    for d in (D("y", "x^2"), D("x", "y^2"), D("x*y", "y^2"), D("x - y", "x - y")):
        assert is_nilpotent(d) == induced_is_nilpotent(d, 5)


def test_nilpotent_cofactor_vanishes():
    assert nilpotent_cofactor_check(D("2*y", "3*x^2"), parse("x^3 - y^2", XY))
    with pytest.raises(InputError):
        nilpotent_cofactor_check(D("x", "y"), parse("x*y", XY))


def test_diagonal_coordinates():
    d = D("x + y", "2*y + x^2")
    ys, weights = diagonal_coordinates(d, 5)
    ds = sn_decompose(d, 5).semisimple
    assert weights == [1, 2]
    for y, lam in zip(ys, weights):
        assert (ds(y) - y.scale(lam)).truncate(5).is_zero()
