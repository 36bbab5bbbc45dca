import pytest
from conftest import intro_tower, rational_tower

from charp import (ConstOp, NoRootWithinBound, PreconditionViolated, SkewOp, euler_substitution,
                   inseparable_split, parse_op, skew_mul, skew_right_divmod, solve_constant_ode,
                   solve_linear_ode, transfer_operator)
from charp.algebra import FFRoot, Poly, PrimeField
from charp.tower import HyperExp


def brute(t, op, y):
    seq = t.derivatives(y, op.order())
    acc = t.zero
    for k, c in op.coeffs.items():
        acc = acc + t.elem(c) * seq[k]
    return acc


def formal_zero(s, Q):
    """``Q(d)(E)/E`` reduces to zero modulo the solution's modulus."""
    T, E = s.extended_tower, s.solution
    q = brute(T, Q, E) / E
    r = T.restrict(q, T.index(s.ctx.alpha) + 1)
    return not s.ctx.mul(r.num, s.ctx.inv(r.den))


def check(t, Q, sols):
    for s in sols:
        if s.ctx is None:
            assert brute(s.extended_tower, Q, s.solution) == 0
        else:
            assert formal_zero(s, Q)
        assert s.verified


# -- the Euler construction -------------------------------------------------

def test_inseparable_split():
    F = PrimeField(3)
    Q = Poly([2, 0, 0, 0, 0, 0, 0, 0, 0, 1], F)  # T^9 - 1
    P, e = inseparable_split(Q)
    assert e == 2 and P == Poly([2, 1], F)
    Q2 = Poly([0, 2, 0, 1], F)  # T^3 - T
    assert inseparable_split(Q2) == (Q2, 0)


@pytest.mark.parametrize("p,e", [(2, 0), (2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
def test_euler_substitution(p, e):
    t2, u, A = euler_substitution(rational_tower(p), e)
    assert A.derivative() == Poly.one(t2.field)
    assert A.degree() == p**e
    assert t2.derive_n(u, p**e) == 1
    # P(A) keeps the degree of Q = P(T^(p^e))
    P = Poly([t2.field.one, t2.field.zero, t2.field.one], t2.field)
    assert P.compose(A).degree() == P.degree() * p**e


@pytest.mark.parametrize("p,e,alpha", [(3, 1, 2), (3, 1, 1), (2, 2, 1), (5, 1, 3)])
def test_carlitz_consistency(p, e, alpha):
    t2, u, A = euler_substitution(rational_tower(p), e)
    t3 = t2.extend("E", HyperExp(alpha * t2.derive(u)))
    E = t3("E")
    Aalpha = sum((t3.elem(c) * alpha**k for k, c in A.terms()), t3.zero)
    assert t3.derive_n(E, p**e) == Aalpha * E


# -- constant coefficients ----------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_artin_schreier_operator(p):
    t = rational_tower(p)
    Q = parse_op(f"D^{p} - D", t, ConstOp)
    sols = solve_constant_ode(t, Q)
    assert sorted(s.alpha for s in sols) == list(range(p))
    check(t, Q, sols)
    one = [s for s in sols if s.alpha == 0][0]
    assert one.solution == 1 and one.generator is None


@pytest.mark.parametrize("p", [3, 5])
def test_formal_adjunction(p):
    t = rational_tower(p)
    Q = parse_op(f"D^{p} - 1", t, ConstOp)
    sols = solve_constant_ode(t, Q)
    assert sols and all(s.alpha == "formal" for s in sols)
    check(t, Q, sols)


def test_order_one():
    t = rational_tower(3)
    sols = solve_constant_ode(t, parse_op("D", t, ConstOp))
    assert [(s.alpha, s.solution) for s in sols] == [(0, 1)]


def test_root_in_extension_field():
    t = rational_tower(3)
    Q = parse_op("D^2 + 1", t, ConstOp)
    sols = solve_constant_ode(t, Q)
    assert len(sols) == 1 and isinstance(sols[0].alpha, FFRoot) and sols[0].alpha.m == 2
    assert sols[0].modulus.degree() == 2
    check(t, Q, sols)


def test_methods():
    t = rational_tower(3)
    Q = parse_op("D^3 - D", t, ConstOp)
    formal = solve_constant_ode(t, Q, method="formal")
    assert all(s.alpha == "formal" for s in formal)
    check(t, Q, formal)
    with pytest.raises(NoRootWithinBound):
        solve_constant_ode(t, parse_op("D^3 - 1", t, ConstOp), method="finite")
    with pytest.raises(ValueError):
        solve_constant_ode(t, Q, method="magic")


def test_constant_coefficients_from_the_tower():
    t = intro_tower(3)
    Q = parse_op("D^3 + X^3*D", t, ConstOp)
    sols = solve_constant_ode(t, Q)
    check(t, Q, sols)


def test_preconditions():
    t = rational_tower(3)
    with pytest.raises(PreconditionViolated):
        solve_constant_ode(t, ConstOp(t, {0: 1}))
    with pytest.raises(PreconditionViolated):
        solve_constant_ode(t, ConstOp(t, {1: t("X")}, check=False))


# -- general coefficients -------------------------------------------------------

def test_transfer_operator_exact_quotient():
    t = rational_tower(3)
    U = transfer_operator(t, parse_op("D", t), parse_op("D^2", t, ConstOp))
    assert U == parse_op("D", t)


def test_airy_solutions():
    t = rational_tower(3)
    P = parse_op("D^2 - X", t)
    Q, U, sols = solve_linear_ode(t, P)
    assert Q == parse_op("D^6 - X^3 - 1", t, ConstOp)
    # P U is a left multiple of Q
    _, rem = skew_right_divmod(skew_mul(P, U), SkewOp(t, Q.coeffs))
    assert not rem
    assert sols
    for s in sols:
        T = s.extended_tower
        res = SkewOp(T, {k: T.elem(c) for k, c in P.coeffs.items()}).apply(s.solution)
        if s.source.ctx is None:
            assert not res
        else:
            r = T.restrict(res / s.source.solution, T.index(s.source.ctx.alpha) + 1)
            assert not s.source.ctx.mul(r.num, s.source.ctx.inv(r.den))
