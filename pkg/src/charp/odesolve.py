"""Linear differential equations.

Constant coefficients: write ``Q(T) = P(T^(p^e))`` with ``P' != 0`` and pick
``u`` with ``d^(p^e)(u) = 1``.  Then ``E`` with ``dE = alpha du E`` has
``d^(p^e)(E) = A(alpha) E`` for ``A(T) = sum_i T^(p^(e-i)) (d^(p^i) u)^(p^(e-i))``,
so ``Q(d)(E) = R(alpha) E`` with ``R = P(A(T))``.  Any root ``alpha`` of ``R``
among the constants gives a solution.  Roots in ``F_p`` (or small ``F_(p^m)``)
are found explicitly; otherwise ``alpha`` is adjoined formally and computations
are done modulo the squarefree part of ``R``, splitting the modulus whenever a
zero divisor turns up.

General coefficients go through the skew (Ore) operator ring: reduce to a
constant-coefficient ``Q``, solve it, and move solutions back with a transfer
operator ``U`` satisfying ``P U = L Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.finite import ff_factor_roots, radical
from .algebra.fields import PrimeField
from .algebra.poly import Poly, poly_xgcd, squarefree_part
from .annihilator import constant_kernel, fresh_names, reduce_with_certificate, _companion
from .antideriv import build_unit_chain
from .errors import (GenericityFailure, NoRootWithinBound, NoTransferFound,
                     PreconditionViolated, VerificationFailed, ZeroDivisorSplit)
from .operators import NAIVE_LIMIT, ConstOp, SkewOp, skew_mul, skew_right_divmod
from .tower import HyperExp, Primitive, Tower

__all__ = ["OdeSolution", "QuotientCtx", "inseparable_split", "euler_substitution",
           "solve_constant_ode", "skew_mul", "skew_right_divmod", "transfer_operator",
           "solve_linear_ode", "run_branches"]


def _as_poly(t: Tower, Q) -> Poly:
    if isinstance(Q, Poly):
        return Q
    return ConstOp(t, Q.coeffs, check=False).poly()


def inseparable_split(Q: Poly) -> tuple[Poly, int]:
    """``(P, e)`` with ``Q(T) = P(T^(p^e))`` and ``e`` maximal."""
    if not Q:
        raise PreconditionViolated("zero polynomial")
    p = Q.dom.characteristic
    e = 0
    while Q.degree() > 0 and all(k % p == 0 for k, _ in Q.terms()):
        Q = Poly(Q.c[::p], Q.dom)
        e += 1
    return Q, e


def euler_substitution(t: Tower, e: int):
    """``(t2, u, A)`` with ``d^(p^e)(u) = 1`` in ``t2`` and ``A`` as above."""
    if e < 0:
        raise PreconditionViolated("e must be nonnegative")
    t2, ch = build_unit_chain(t, e)
    u = ch.chain[e]
    p = t.p
    F = t2.field
    coeffs = [F.zero] * (p**e + 1)
    for i in range(e + 1):
        n = p**i
        d = t2.derive_n(u, n) if n <= NAIVE_LIMIT else t2.derive_n_fast(u, n)
        k = p ** (e - i)
        coeffs[k] = coeffs[k] + d**k
    A = Poly(coeffs, F)
    if A.derivative() != Poly.one(F):
        raise VerificationFailed("A' is not 1")
    return t2, u, A


# -- formal adjunction ----------------------------------------------------------

class QuotientCtx:
    """Arithmetic in ``K[alpha]/(modulus)`` for a squarefree monic ``modulus``."""

    def __init__(self, tower: Tower, alpha: str, modulus: Poly):
        if modulus.degree() < 1:
            raise PreconditionViolated("modulus must have positive degree")
        self.tower = tower
        self.alpha = alpha
        self.modulus = modulus.monic()

    def __repr__(self):
        return f"QuotientCtx({self.alpha}; {self.modulus!r})"

    def reduce(self, a: Poly) -> Poly:
        return a % self.modulus

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def inv(self, a: Poly) -> Poly:
        """Inverse modulo the modulus; a proper common factor raises ``ZeroDivisorSplit``."""
        a = self.reduce(a)
        if not a:
            raise ZeroDivisionError("inverse of zero in the quotient")
        g, s, _ = poly_xgcd(a, self.modulus)
        if g.degree() > 0:
            raise ZeroDivisorSplit(g, self.modulus.exact_div(g))
        return self.reduce(s)

    def split(self, exc: ZeroDivisorSplit) -> list["QuotientCtx"]:
        return [QuotientCtx(self.tower, self.alpha, f)
                for f in (exc.factor, exc.cofactor) if f.degree() > 0]


def run_branches(ctx: QuotientCtx, fn) -> list:
    """Run ``fn(ctx)``; on a zero divisor, rerun on both factors of the modulus."""
    out = []
    todo = [ctx]
    while todo:
        c = todo.pop()
        try:
            out.append((c, fn(c)))
        except ZeroDivisorSplit as exc:
            todo.extend(reversed(c.split(exc)))
    return out


@dataclass
class OdeSolution:
    extended_tower: Tower
    solution: object
    alpha: object  # int, an FFRoot, or "formal"
    generator: str | None
    ctx: QuotientCtx | None = None
    verified: bool = False
    construction: dict = field(default_factory=dict)

    @property
    def modulus(self) -> Poly | None:
        return self.ctx.modulus if self.ctx else None


def _apply_const(t2: Tower, Q: ConstOp, y):
    op = ConstOp(t2, {k: t2.elem(c) for k, c in Q.coeffs.items()}, check=False)
    return op.apply(y)


def _formal_zero(tower: Tower, ctx: QuotientCtx, x, E) -> bool:
    """``x / E`` vanishes modulo the modulus, ``x / E`` being polynomial-like in alpha."""
    q = x / E
    lvl = tower.index(ctx.alpha)
    try:
        r = tower.restrict(q, lvl + 1)
    except ValueError:
        return False
    return not ctx.mul(r.num, ctx.inv(r.den))


def _formal_solution(t2, Q, u, mod: Poly, alpha_label, construction) -> list[OdeSolution]:
    name_a, name_e = fresh_names(t2, "alpha", 1)[0], None
    t3 = t2.extend(name_a, Primitive(0))
    name_e = fresh_names(t3, "E", 1)[0]
    a = t3.gen(name_a)
    t4 = t3.extend(name_e, HyperExp(a * t3.derive(t3.elem(u))))
    E = t4.gen(name_e)
    A3 = t3.levels[t3.index(name_a)].field
    modA = Poly([A3.base.convert(c) for c in mod.c], A3.base)
    ctx = QuotientCtx(t4, name_a, modA)
    res = _apply_const(t4, Q, E)
    out = []
    for c, ok in run_branches(ctx, lambda c: _formal_zero(t4, c, res, E)):
        if not ok:
            raise VerificationFailed("formal solution does not verify")
        out.append(OdeSolution(t4, E, alpha_label, name_e, c, True, construction))
    return out


def solve_constant_ode(t: Tower, Q, method: str = "auto", m_bound: int = 6) -> list[OdeSolution]:
    """Solutions of ``Q(d)(y) = 0`` for a constant-coefficient ``Q``.

    ``method`` is ``"finite"`` (roots in ``F_(p^m)``, ``m <= m_bound``, only),
    ``"formal"`` (always adjoin a root formally) or ``"auto"`` (finite roots
    when ``R`` has coefficients in ``F_p``, formal adjunction for the rest).
    """
    if method not in ("auto", "finite", "formal"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(Q, ConstOp):
        for k, c in Q.coeffs.items():
            if not t.is_constant(c):
                raise PreconditionViolated(f"coefficient of order {k} is not constant")
    Qp = _as_poly(t, Q)
    if not Qp:
        raise PreconditionViolated("zero operator")
    if Qp.degree() < 1:
        raise PreconditionViolated("an order-0 operator has only the zero solution")
    Qop = ConstOp.from_poly(t, Qp, check=False)
    P, e = inseparable_split(Qp)
    t2, u, A = euler_substitution(t, e)
    P2 = Poly([t2.elem(c) for c in P.c], t2.field)
    R = P2.compose(A)
    if R.degree() != Qp.degree():
        raise VerificationFailed("deg R differs from deg Q")
    construction = {"e": e, "P": P2, "u": u, "A": A, "R": R}
    p = t.p
    prime = PrimeField(p)
    in_fp = [t2.level_of(c) < 0 for c in R.c]
    out: list[OdeSolution] = []
    rest = squarefree_part(R)
    if all(in_fp) and method != "formal":
        Rp = Poly([_to_int(t2, c) for c in R.c], prime)
        seen = set()
        found = Poly.one(prime)
        for root in ff_factor_roots(Rp, m_bound):
            key = tuple(root.minpoly.c)
            if key in seen:
                continue
            seen.add(key)
            found = found * root.minpoly
            if root.m == 1:
                out.append(_fp_solution(t2, Qop, u, int(root.value), construction))
            else:
                out.extend(_formal_solution(t2, Qop, u, _lift_poly(t2, root.minpoly), root, construction))
        left = radical(Rp).exact_div(found) if found.degree() else radical(Rp)
        rest = _lift_poly(t2, left)
    if method == "finite":
        if not out:
            raise NoRootWithinBound(f"no root of R in F_{p}^m for m <= {m_bound}")
        return out
    if rest.degree() > 0:
        out.extend(_formal_solution(t2, Qop, u, rest, "formal", construction))
    return out


def _to_int(t: Tower, c) -> int:
    x = c
    for _ in range(t.depth):
        x = x.num[0] if x.num else 0
    return int(x)


def _lift_poly(t: Tower, f: Poly) -> Poly:
    return Poly([t.elem(int(c)) for c in f.c], t.field)


def _fp_solution(t2: Tower, Q: ConstOp, u, alpha: int, construction) -> OdeSolution:
    if alpha == 0:
        y, t3, name = t2.one, t2, None
    else:
        name = fresh_names(t2, "E", 1)[0]
        t3 = t2.extend(name, HyperExp(alpha * t2.derive(u)))
        y = t3.gen(name)
    if _apply_const(t3, Q, y):
        raise VerificationFailed(f"solution for alpha={alpha} does not verify")
    return OdeSolution(t3, y, alpha, name, None, True, construction)


# -- general coefficients -------------------------------------------------------

def transfer_operator(t: Tower, P: SkewOp, Q: ConstOp, verify: bool = True) -> SkewOp:
    """``U`` of order below ``order(Q)`` with ``P U`` a left multiple of ``Q``.

    For ``Q(d) f = 0`` this gives ``P(d)(U(d) f) = 0``.  First tries the exact
    quotient ``Q = V P`` (valid when ``P V = Q``), then a constant-coefficient
    ``U`` from the remainders of ``P d^j`` modulo ``Q``.  With ``verify`` the
    operator is applied to a generic solution of ``Q`` in a linear block.
    """
    if P.tower is not t:
        P = SkewOp(t, P.coeffs)
    Qs = SkewOp(t, Q.coeffs)
    N = Qs.order()
    if N < P.order():
        raise PreconditionViolated("order(Q) must be at least order(P)")
    V, r = skew_right_divmod(Qs, P)
    if not r and skew_mul(P, V) == Qs:
        U = V
    else:
        rems = []
        for j in range(N):
            _, rj = skew_right_divmod(skew_mul(P, SkewOp(t, {j: 1})), Qs)
            rems.append([rj[i] for i in range(N)])
        ker = constant_kernel(t, rems)
        if not ker:
            raise NoTransferFound("the transfer system has only the trivial solution")
        U = SkewOp(t, dict(enumerate(ker[0])))
    if verify:
        names = fresh_names(t, "Z", N)
        B = t.extend(None, _companion(t, Qs, names))
        f = B.gen(names[0])
        g = SkewOp(B, {k: B.elem(c) for k, c in U.coeffs.items()}).apply(f)
        if not g:
            raise GenericityFailure("the transferred generic solution is zero")
        if SkewOp(B, {k: B.elem(c) for k, c in P.coeffs.items()}).apply(g):
            raise VerificationFailed("transferred solution does not satisfy P")
    return U


@dataclass
class LinearOdeSolution:
    extended_tower: Tower
    solution: object
    source: OdeSolution
    verified: bool


def solve_linear_ode(t: Tower, P: SkewOp, method: str = "auto", j_max: int | None = None):
    """Experimental: solutions of ``P(d)(y) = 0`` for ``P`` with coefficients in ``t``.

    Returns ``(Q, U, solutions)``.  A solution whose transfer vanishes raises
    ``GenericityFailure``.
    """
    red = reduce_with_certificate(t, P, j_max=j_max)
    Q = red.operator
    U = transfer_operator(t, P, Q)
    out = []
    for s in solve_constant_ode(t, Q, method):
        T = s.extended_tower
        Ul = SkewOp(T, {k: T.elem(c) for k, c in U.coeffs.items()})
        Pl = SkewOp(T, {k: T.elem(c) for k, c in P.coeffs.items()})
        g = Ul.apply(s.solution)
        if not g:
            raise GenericityFailure(f"transfer of the solution for alpha={s.alpha} is zero")
        res = Pl.apply(g)
        if s.ctx is None:
            ok = not res
        else:
            ok = all(v for _, v in run_branches(s.ctx, lambda c: _formal_zero(T, c, res, s.solution)))
        if not ok:
            raise VerificationFailed("transferred solution does not verify")
        out.append(LinearOdeSolution(T, g, s, True))
    return Q, U, out
