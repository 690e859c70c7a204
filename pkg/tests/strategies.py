"""Hypothesis strategies and seeded generators shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from freediv.derivation import Derivation
from freediv.pseries import EXACT, Series, monomials_below

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, nvars=2, max_deg=3, prec=None, max_terms=5):
    """Polynomial series; ``prec=None`` draws either exact or a truncation order."""
    mons = monomials_below(nvars, max_deg + 1)
    chosen = draw(st.lists(st.sampled_from(mons), max_size=max_terms, unique=True))
    terms = {m: draw(small_fractions) for m in chosen}
    if prec is None:
        prec = draw(st.one_of(st.just(EXACT), st.integers(1, max_deg + 2)))
    return Series(terms, nvars, prec)


@st.composite
def same_prec_triples(draw, nvars=2):
    prec = draw(st.one_of(st.just(EXACT), st.integers(1, 5)))
    return tuple(draw(series(nvars, prec=prec)) for _ in range(3))


@st.composite
def derivations(draw, nvars=2, max_deg=2, singular=False):
    lo = 1 if singular else 0
    coeffs = []
    for _ in range(nvars):
        mons = [m for m in monomials_below(nvars, max_deg + 1) if sum(m) >= lo]
        chosen = draw(st.lists(st.sampled_from(mons), max_size=3, unique=True))
        coeffs.append(Series({m: draw(small_fractions) for m in chosen}, nvars))
    return Derivation(coeffs)


def random_singular_derivation(rng: random.Random, nvars: int, max_deg: int = 2) -> Derivation:
    """Each monomial of degree 1..max_deg appears with probability 1/2, coefficient in [-3, 3]."""
    coeffs = []
    for _ in range(nvars):
        terms = {}
        for m in monomials_below(nvars, max_deg + 1):
            if sum(m) >= 1 and rng.random() < 0.5:
                c = rng.randint(-3, 3)
                if c:
                    terms[m] = Fraction(c)
        coeffs.append(Series(terms, nvars))
    return Derivation(coeffs)


def random_derivation_batch(count: int = 200, seed: int = 1) -> list[Derivation]:
    rng = random.Random(seed)
    return [random_singular_derivation(rng, rng.choice([1, 2, 3])) for _ in range(count)]
