"""Two plane curves on either side of the trace test.

The cusp is quasi-homogeneous: an Euler field gives a basis element of trace
five.  The quartic x^4 + y^5 + x y^4 admits no Euler field with coefficients
in the maximal ideal; all its basis elements have trace zero.
"""
from freediv.expr import parse
from freediv.homogeneity import analyze
from freediv.normalize import normalize_plane_basis

NAMES = ["x", "y"]

for text in ("x^3 - y^2", "x^4 + y^5 + x*y^4"):
    f = parse(text, NAMES)
    report = analyze(f)
    print(f"f = {text}")
    for d, t in zip(report.basis.derivations, report.traces):
        print(f"  {d.pretty(NAMES)}    trace {t}")
    print("  strongly Euler homogeneous:", report.seh.found)
    print("  trace verdict:", report.lct_obstruction)
    if report.order_of_f >= 3:
        nf = normalize_plane_basis(f, report.basis)
        print("  basis normal form:", nf.kind)
