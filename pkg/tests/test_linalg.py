from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from freediv import linalg

entries = st.integers(-4, 4)
square = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=150)
@given(square)
def test_charpoly_matches_sympy(m):
    t = sympy.Symbol("t")
    expected = sympy.Poly(sympy.Matrix(m).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert linalg.charpoly(m) == [Fraction(int(c.p), int(c.q)) for c in expected]


@settings(max_examples=150)
@given(square)
def test_rank_and_det_match_sympy(m):
    assert linalg.rank(m) == sympy.Matrix(m).rank()
    assert linalg.det(m) == int(sympy.Matrix(m).det())


@settings(max_examples=100)
@given(st.lists(st.lists(entries, min_size=4, max_size=4), min_size=1, max_size=3))
def test_nullspace_vectors_annihilate(rows):
    sparse = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in rows]
    basis = linalg.sparse_nullspace(sparse, list(range(4)))
    assert len(basis) == 4 - sympy.Matrix(rows).rank()
    for vec in basis:
        for r in sparse:
            assert sum(r.get(j, 0) * v for j, v in vec.items()) == 0


def test_nilpotent_and_inverse():
    assert linalg.is_nilpotent([[0, 1], [0, 0]])
    assert not linalg.is_nilpotent([[1, 0], [0, 0]])
    a = [[2, 1], [1, 1]]
    assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(2)


def test_sparse_solve_inconsistent():
    assert linalg.sparse_solve([{0: Fraction(1)}, {0: Fraction(1)}], [Fraction(1), Fraction(2)], [0]) is None
