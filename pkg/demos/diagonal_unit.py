"""Splitting off a unit along a diagonal vector field.

For weights (1, -1) the field x d/dx - y d/dy has f = xy + x^2 y as an
eigenvector up to the cofactor x/(1 + x).  Removing the non-resonant part of
the cofactor peels off the unit 1 + x and leaves the monomial xy.
"""
from freediv.expr import parse
from freediv.normalize import diag_normalize
from freediv.pseries import to_string

NAMES = ["x", "y"]
f = parse("x*y + x^2*y", NAMES)
res = diag_normalize((1, -1), f, k=10)
print("cofactor   ", to_string(res.cofactor, NAMES))
print("unit u     ", to_string(res.unit, NAMES))
print("g = f / u  ", to_string(res.normalized, NAMES))
print("eigenvalue ", res.eigenvalue)
