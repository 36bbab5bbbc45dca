"""Differential algebra in characteristic p.

Towers of differential fields over F_p, constant-coefficient annihilators,
antiderivatives in logarithmic extensions, and linear differential equations.
"""

from .annihilator import (carlitz_coefficient, joint_annihilator, p_annihilator,
                          reduce_to_constant_coeffs, reduce_with_certificate)
from .antideriv import build_unit_chain, integrate, logpol_coefficients, unit_nth
from .errors import (BoundExceeded, CharpError, GenericityFailure, MissingBase, NoRootWithinBound,
                     NonConstantMinPoly, NoTransferFound, ParseError, PreconditionViolated, SpecError,
                     Unsupported, VerificationFailed, ZeroDivisorSplit)
from .expr import format_elem, parse_expr
from .odesolve import (euler_substitution, inseparable_split, solve_constant_ode, solve_linear_ode,
                       transfer_operator)
from .operators import ConstOp, PPoly, SkewOp, parse_op, skew_mul, skew_right_divmod
from .tower import Base, Exp, HyperExp, LinearBlock, Log, Primitive, Tower, tower_build, tower_extend

__version__ = "0.1.0"
