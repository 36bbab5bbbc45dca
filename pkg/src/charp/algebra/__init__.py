"""Exact arithmetic: prime fields, polynomials, rational functions, linear algebra."""

from .fields import FpScalar, PrimeField, is_prime
from .finite import FFRoot, GFq, ff_factor_roots
from .linalg import Matrix, matrix_kernel, matrix_min_poly
from .poly import Poly, poly_gcd, poly_lcm, poly_xgcd, squarefree_part
from .ratfunc import RatFunc, RatFuncField
