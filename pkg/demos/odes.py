"""Linear differential equations: reduction to constant coefficients and solutions.

Run with ``python3 demos/odes.py``.
"""

from charp import ConstOp, format_elem, parse_op, reduce_with_certificate, solve_constant_ode, solve_linear_ode
from charp import tower_build
from charp.cli import format_poly

t = tower_build({"p": 3, "generators": [{"name": "X", "kind": "base"}]})

# Artin-Schreier type equation y''' = y': one exponential solution per element of F_3
Q = parse_op("D^3 - D", t, ConstOp)
for s in solve_constant_ode(t, Q):
    T = s.extended_tower
    dlog = T.derive(s.solution) / s.solution
    print(f"alpha = {s.alpha}: solution {format_elem(s.solution)} with d(y)/y = {format_elem(dlog)}")

# y''' = y has no root in F_3, so the constant is adjoined formally
for s in solve_constant_ode(t, parse_op("D^3 - 1", t, ConstOp)):
    print("formal root of", format_poly(s.modulus), "verified:", s.verified)

# the Airy operator D^2 - X, reduced and then solved
P = parse_op("D^2 - X", t)
red = reduce_with_certificate(t, P)
print("Airy reduces to", red.operator.format())
Q, U, sols = solve_linear_ode(t, P)
print("transfer operator U =", U.format())
print(len(sols), "solution(s), all verified:", all(s.verified for s in sols))
