import random

import pytest
from conftest import intro_tower, random_elem, random_poly, random_tower, rational_tower
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import (BoundExceeded, ConstOp, PPoly, PreconditionViolated, SkewOp, SpecError, carlitz_coefficient,
                   joint_annihilator, p_annihilator, parse_op, reduce_to_constant_coeffs,
                   reduce_with_certificate, skew_mul, skew_right_divmod)
from charp.annihilator import constant_kernel
from charp.tower import Exp, LinearBlock, Log


def brute(t, op, y):
    seq = t.derivatives(y, op.order())
    acc = t.zero
    for k, c in op.coeffs.items():
        acc = acc + t.elem(c) * seq[k]
    return acc


# -- annihilators -------------------------------------------------------------

def test_intro_annihilators():
    t = intro_tower(3)
    # d^3 E = -X^3 E, so the identity term carries X^3
    assert p_annihilator(t, "E") == PPoly(t, {3: 1, 0: t("X^3")})
    assert p_annihilator(t, "X") == PPoly(t, {3: 1})
    P = joint_annihilator(t, ["X", "E"])
    assert P == PPoly(t, {9: 1, 3: t("2*X^6")})
    for y in ("X", "E"):
        assert brute(t, P, t(y)) == 0


def test_annihilator_of_constant_is_d():
    t = intro_tower(5)
    P = p_annihilator(t, t("X^5+E^10"))
    assert P == PPoly(t, {1: 1})


def test_without_identity_term():
    t = intro_tower(3)
    P = p_annihilator(t, "E", identity=False)
    assert 0 not in P.coeffs and P.is_derivation()
    assert brute(t, P, t("E")) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_annihilator_is_sound(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    y = random_elem(rng, t, 1)
    P = p_annihilator(t, y)
    assert all(t.is_constant(c) for c in P.coeffs.values())
    assert all(k == 0 or k == p ** _log(k, p) for k in P.coeffs)
    assert brute(t, P, y) == 0


def _log(k, p):
    j = 0
    while p**j < k:
        j += 1
    assert p**j == k
    return j


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_annihilator_map_is_a_derivation_commuting_with_d(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    P = p_annihilator(t, random_poly(rng, t, 1, 2), identity=False)
    assert P.is_derivation()
    a, b = random_poly(rng, t, 1, 2), random_poly(rng, t, 1, 2)
    assert P.apply(a * b) == P.apply(a) * b + a * P.apply(b)
    assert P.apply(t.derive(a)) == t.derive(P.apply(a))


def test_bound_exceeded():
    t = intro_tower(3).extend("F", Exp("E"))
    with pytest.raises(BoundExceeded) as info:
        p_annihilator(t, t("F*X"), j_max=1)
    assert info.value.j_max == 1


def test_constant_kernel():
    t = rational_tower(3)
    X = t("X")
    vecs = [[X, t.one], [X**2, X], [X**3, t("X^2")]]
    ker = constant_kernel(t, vecs)
    for v in ker:
        assert all(t.is_constant(c) for c in v)
        for i in range(2):
            assert sum((c * w[i] for c, w in zip(v, vecs)), t.zero) == 0


# -- Carlitz coefficients -----------------------------------------------------

@pytest.mark.parametrize("p,r", [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2), (5, 1)])
def test_carlitz_matches_brute_force(p, r):
    rng = random.Random(10 * p + r)
    for _ in range(4):
        base = rational_tower(p)
        u = random_elem(rng, base, 1)
        if base.is_constant(u):
            continue
        t = base.extend("E", Exp(u))
        E = t("E")
        assert t.derive_n(E, p**r) / E == carlitz_coefficient(t, t.elem(u), r)


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
def test_dual_carlitz_for_logarithms(p, r):
    rng = random.Random(p + r)
    for _ in range(4):
        base = rational_tower(p)
        u = random_poly(rng, base, 2, 2)
        if base.is_constant(u):
            continue
        t = base.extend("Z", Log(u))
        z = t("Z")
        acc = t.zero
        for i in range(r + 1):
            acc = acc + t.derive_n(z, p**i) ** (p ** (r - i))
        assert t.derive_n(t.elem(u), p**r) == acc * t.elem(u)


def test_carlitz_rejects_negative_order():
    t = intro_tower(3)
    with pytest.raises(PreconditionViolated):
        carlitz_coefficient(t, "X^2", -1)


# -- reduction to constant coefficients --------------------------------------

def test_airy():
    t = rational_tower(3)
    red = reduce_with_certificate(t, parse_op("D^2 - X", t))
    assert red.operator == parse_op("D^6 + 2 + 2*X^3", t, ConstOp)
    assert red.annihilator == PPoly(t, {3: 1})
    Y = red.block_tower.gen(red.block_names[0])
    assert brute(red.block_tower, red.operator, Y) == 0


def test_reduce_on_existing_block():
    t = rational_tower(3)
    B = t.extend(None, LinearBlock(("Y", "Y1"), (("0", "1"), ("X", "0"))))
    op = parse_op("D^2 - X", B)
    Q = reduce_to_constant_coeffs(B, op, y_names=("Y", "Y1"))
    assert Q == parse_op("D^6 - X^3 - 1", Q.tower, ConstOp)
    for y in ("Y", "Y1"):
        assert brute(B, ConstOp(B, {k: B.elem(c) for k, c in Q.coeffs.items()}, check=False), B(y)) == 0


@pytest.mark.parametrize("src", ["D - 2*X", "D - 2", "D^2 + X*D + 1", "X*D^2 - 1"])
def test_reduce_small_operators(src):
    t = rational_tower(3)
    red = reduce_with_certificate(t, parse_op(src, t))
    assert all(t.is_constant(c) for c in red.operator.coeffs.values())
    Y = red.block_tower.gen(red.block_names[0])
    assert brute(red.block_tower, red.operator, Y) == 0


def test_reduce_rejects_order_zero():
    t = rational_tower(3)
    with pytest.raises(PreconditionViolated):
        reduce_with_certificate(t, parse_op("X", t))


# -- operators ----------------------------------------------------------------

def _rand_op(rng, t, order):
    return SkewOp(t, {k: random_elem(rng, t, 1) for k in range(order + 1)})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_skew_mul_associative_and_acts_by_composition(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    a, b, c = (_rand_op(rng, t, rng.randint(0, 2)) for _ in range(3))
    assert skew_mul(skew_mul(a, b), c) == skew_mul(a, skew_mul(b, c))
    f = random_elem(rng, t, 1)
    assert skew_mul(a, b).apply(f) == a.apply(b.apply(f))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_right_division(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    a, b = _rand_op(rng, t, rng.randint(0, 4)), _rand_op(rng, t, rng.randint(0, 4))
    if not b:
        return
    q, r = skew_right_divmod(a, b)
    assert skew_mul(q, b) + r == a
    assert not r or r.order() < b.order()


def test_operator_parsing_and_printing():
    t = rational_tower(3)
    a = parse_op("(D+X)*(D-X)", t)
    assert a == parse_op("D^2 + 2 + 2*X^2", t)
    assert a.format() == "D^2+(2+2*X^2)"
    assert parse_op("D*X", t) == parse_op("X*D + 1", t)
    with pytest.raises(SpecError):
        parse_op("D^2 - X", t, ConstOp)
    P = parse_op("D^9 + X^3*D^3", t, PPoly)
    assert P.is_derivation()
