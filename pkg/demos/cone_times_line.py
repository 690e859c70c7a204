"""A free divisor whose log module has a non-nilpotent trace-one element.

f = (x1^3 - x2^3) x3 is the cone over three points times a line.  We certify
a basis by Saito's criterion, then find a combination that kills f but whose
linear part has trace one.
"""
from freediv.derivation import Derivation
from freediv.expr import parse
from freediv.jordan import is_nilpotent, sn_decompose
from freediv.logmodule import certify_saito
from freediv.pseries import to_string

NAMES = ["x1", "x2", "x3"]


def D(*coeffs):
    return Derivation([parse(c, NAMES) for c in coeffs])


f = parse("(x1^3 - x2^3)*x3", NAMES)
d1, d2, d3 = D("x1", "x2", "0"), D("x2^2", "x1^2", "0"), D("0", "0", "x3")

basis = certify_saito(f, [d1, d2, d3])
print("det A =", to_string(basis.determinant, NAMES), " unit =", to_string(basis.unit, NAMES))

eta = d3 * 3 - d1
print("eta =", eta.pretty(NAMES))
print("eta(f) =", to_string(eta(f), NAMES))
print("trace =", eta.trace(), " nilpotent:", is_nilpotent(eta))

dec = sn_decompose(d2, 6)
print("d2 = S + N with S =", dec.semisimple.pretty(NAMES), " N =", dec.nilpotent.pretty(NAMES))
