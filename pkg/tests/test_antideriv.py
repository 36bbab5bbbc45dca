import random

import pytest
from conftest import intro_tower, random_elem, random_poly, random_tower, rational_tower
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import (BoundExceeded, MissingBase, PreconditionViolated, build_unit_chain, integrate,
                   logpol_coefficients, unit_nth)
from charp.tower import Base, Exp, HyperExp, Log, Primitive, Tower


# -- unit chains ---------------------------------------------------------------

@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)])
def test_unit_chain_levels(p, k):
    t2, ch = build_unit_chain(rational_tower(p), k)
    assert len(ch.chain) == k + 1 and len(ch.new_generators) == k
    for j, u in enumerate(ch.chain):
        assert t2.derive_n(u, p**j) == 1
        x = u ** (p - 1)
        for _ in range(p - 1):
            x = t2.derive_n(x, p**j)
        assert x == -(t2.derive_n(u, p**j) ** (p - 1))
    for name, kind in ch.new_generators:
        assert isinstance(kind, Log)


def test_unit_chain_k0_and_errors():
    t = rational_tower(3)
    t2, ch = build_unit_chain(t, 0)
    assert t2 is t and ch.chain == [t("X")]
    with pytest.raises(PreconditionViolated):
        build_unit_chain(t, -1)
    with pytest.raises(MissingBase):
        build_unit_chain(Tower.empty(3), 1)


def test_unit_nth_examples():
    t = rational_tower(3)
    t1, z1 = unit_nth(t, 1)
    assert t1 is t and z1 == t("X")
    t3, z3 = unit_nth(t, 3)
    (zeta,) = t3.names[1:]
    assert z3 == t3(f"-X^3*{zeta}")
    # z = d(-X^3*zeta) = -X^2, since X^3 is a constant
    t2, z2 = unit_nth(t, 2)
    assert z2 == t2("-X^2")
    assert t2.derive_n(z2, 2) == 1
    with pytest.raises(PreconditionViolated):
        unit_nth(t, 0)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 4), (3, 7), (5, 6)])
def test_unit_nth_general(p, n):
    t2, z = unit_nth(rational_tower(p), n)
    assert t2.derive_n(z, n) == 1


# -- logpol expansion --------------------------------------------------------

def test_logpol_example():
    t = rational_tower(3)
    t3, z = unit_nth(t, 3)
    cs = logpol_coefficients(t3, t3("-X^2"), z, 3)
    assert cs == [1, 0, 0]


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (3, 3), (5, 2)])
def test_logpol_reconstruction(p, n):
    rng = random.Random(p * n)
    t2, z = unit_nth(rational_tower(p), n)
    Z = t2.derivatives(z, n)
    for _ in range(5):
        want = [t2.elem(random_poly(rng, t2.prefix(1), 1, 2)) ** p for _ in range(n)]
        w = sum((c * Z[i + 1] for i, c in enumerate(want)), t2.zero)
        cs = logpol_coefficients(t2, w, z, n)
        assert all(t2.is_constant(c) for c in cs)
        assert sum((c * Z[i + 1] for i, c in enumerate(cs)), t2.zero) == w
        assert cs == want


def test_logpol_preconditions():
    t2, z = unit_nth(rational_tower(3), 2)
    with pytest.raises(PreconditionViolated):
        logpol_coefficients(t2, t2("X"), z, 1)
    with pytest.raises(PreconditionViolated):
        logpol_coefficients(t2, t2("1"), t2("X^2"), 2)
    with pytest.raises(PreconditionViolated):
        logpol_coefficients(t2, t2("1"), z, 2, w_derivatives=[t2("2"), 0, 0])


# -- integration ----------------------------------------------------------------

def test_closed_forms():
    t3 = intro_tower(3)
    assert integrate(t3, "E").value == t3("(1-X^2)/X^3*E")
    t5 = intro_tower(5)
    assert integrate(t5, "E").value == t5("(X^4-2*X^2+2)/(2*X^5)*E")
    for p in (3, 5, 7):
        r = integrate(rational_tower(p), f"X^{p - 1}")
        T = r.extended_tower
        (name, _), = r.new_generators
        assert T.is_constant(r.value - T(f"X^{p}*{name}"))
        assert r.extended
    for p in (3, 5):
        t = Tower.empty(p).extend("X", Base()).extend("E", Exp("X")).extend("F", HyperExp("E"))
        r = integrate(t, "F")
        assert t.is_constant(r.value - (t.derive_n(t("F"), p - 1) - t("F")) / t("E") ** p)


def test_simple_integrals():
    t = rational_tower(5)
    assert integrate(t, 0).value == 0
    r = integrate(t, 1)
    assert t.derive(r.value) == 1 and not r.extended
    r = integrate(t, "1/X")
    assert r.extended and r.extended_tower.derive(r.value) == r.extended_tower("1/X")
    for u in ("X^3 + 2/X^2", "X^3", "X^8 + X"):
        r = integrate(t, u)
        assert not r.extended and r.extended_tower is t and t.derive(r.value) == t(u)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_integrating_a_derivative(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    e = random_elem(rng, t, 2)
    r = integrate(t, t.derive(e))
    T = r.extended_tower
    assert T.is_constant(r.value - T.elem(e))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_soundness(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    u = random_elem(rng, t, rng.randint(1, 3))
    try:
        r = integrate(t, u, max(j for j in range(6) if p**j <= 9))
    except BoundExceeded:
        return
    T = r.extended_tower
    assert T.derive(r.value) == T.elem(u)
    assert r.certificate.apply(u) == 0
    assert T.names[: t.depth] == t.names


def test_missing_base():
    # only a constant generator: integrating 1 needs a logarithm of X
    t = Tower.empty(3).extend("C", Primitive(0))
    with pytest.raises(MissingBase):
        integrate(t, 1)
