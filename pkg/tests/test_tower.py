import json
import random

import pytest
from conftest import intro_tower, random_elem, random_poly, random_tower, rational_tower
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from charp import SpecError
from charp.tower import Base, Exp, HyperExp, LinearBlock, Log, Primitive, Tower, tower_build

seeds = st.integers(min_value=0, max_value=2**32 - 1)
primes = st.sampled_from([2, 3, 5])
fast = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _case(seed, p, depth=3, deg=2):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, depth))
    return rng, t


# -- derivation laws ----------------------------------------------------------

@fast
@given(seeds, primes)
def test_leibniz_and_additivity(seed, p):
    rng, t = _case(seed, p)
    a, b = random_elem(rng, t), random_elem(rng, t)
    d = t.derive
    assert d(a * b) == d(a) * b + a * d(b)
    assert d(a + b) == d(a) + d(b)


@fast
@given(seeds, primes)
def test_quotient_rule(seed, p):
    rng, t = _case(seed, p)
    a, b = random_elem(rng, t), random_elem(rng, t)
    if not b:
        return
    d = t.derive
    assert d(a / b) * b * b == d(a) * b - a * d(b)


@fast
@given(seeds, primes)
def test_pth_powers_are_constants(seed, p):
    rng, t = _case(seed, p)
    e = random_elem(rng, t)
    assert t.is_constant(e**p)


@settings(max_examples=15, deadline=None)
@given(seeds, primes, st.sampled_from([1, 2]))
def test_ppow_derivation_is_a_derivation(seed, p, j):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    a, b = random_poly(rng, t, 1, 2), random_poly(rng, t, 1, 2)
    D = lambda e: t.derive_ppow(e, j)  # noqa: E731
    assert D(a * b) == D(a) * b + a * D(b)
    # the derivation route agrees with repeated application of d
    assert D(a) == t.derive_n(a, p**j)


@fast
@given(seeds, primes, st.integers(0, 30))
def test_fast_derivatives_match_naive(seed, p, n):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 2))
    e = random_poly(rng, t, 1, 2)
    assert t.derive_n_fast(e, n) == t.derive_n(e, n)


@fast
@given(seeds, primes)
def test_chain_rule_for_polynomials_in_an_element(seed, p):
    rng, t = _case(seed, p)
    u = random_elem(rng, t)
    cs = [random_poly(rng, t, 1, 2) for _ in range(rng.randint(1, 4))]
    d = t.derive
    Qu = sum((c * u**i for i, c in enumerate(cs)), t.zero)
    Qprime = sum((i * c * u ** (i - 1) for i, c in enumerate(cs) if i), t.zero)
    Qd = sum((d(c) * u**i for i, c in enumerate(cs)), t.zero)
    assert d(Qu) == d(u) * Qprime + Qd


# -- Frobenius ----------------------------------------------------------------

@fast
@given(seeds, primes)
def test_frobenius_reconstructs(seed, p):
    rng, t = _case(seed, p)
    e = random_elem(rng, t)
    fd = t.frobenius_decompose(e)
    assert fd.reconstruct(t) == e
    for k, g in fd.terms.items():
        assert all(0 <= x < p for x in k)
        assert len(k) == t.depth
        assert t.is_constant(g**p)


@fast
@given(seeds, primes)
def test_pth_root(seed, p):
    rng, t = _case(seed, p)
    e = random_elem(rng, t)
    assert t.pth_root(e**p) == e
    if not t.is_constant(e):
        assert t.pth_root(e) is None or t.pth_root(e) ** p == e


def test_pth_root_of_non_power():
    t = rational_tower(3)
    assert t.pth_root(t("X")) is None
    assert t.pth_root(t("X^3+1")) == t("X+1")


# -- generator rules ----------------------------------------------------------

def test_generator_rules():
    t = rational_tower(3)
    assert t.derive(t("X")) == 1
    tl = t.extend("L", Log("X"))
    assert tl.derive(tl("L")) == tl("1/X")
    te = t.extend("E", Exp("X"))
    assert te.derive(te("E")) == te("E")
    th = intro_tower(3)
    assert th.derive(th("E")) == th("2*X*E")
    tp = th.extend("P", Primitive("E"))
    assert tp.derive(tp("P")) == tp("E")


def test_linear_block_rules():
    t = rational_tower(3)
    B = t.extend(None, LinearBlock(("Y", "Y1"), (("0", "1"), ("X", "0"))))
    assert B.names == ["X", "Y", "Y1"]
    assert B.derive(B("Y")) == B("Y1")
    assert B.derive(B("Y1")) == B("X*Y")
    assert B.derive_n(B("Y"), 2) == B("X*Y")


def test_wilson_identity():
    for p in (2, 3, 5, 7):
        t = rational_tower(p)
        assert t.derive_n(t(f"X^{p - 1}"), p - 1) == p - 1


def test_derive_ppow_of_generators():
    t = intro_tower(3)
    # d^3 is a derivation; compare with three applications of d
    for e in ("X", "E", "X*E", "1/(X+E)"):
        assert t.derive_ppow(t(e), 1) == t.derive_n(t(e), 3)


# -- construction and serialization ------------------------------------------

def test_json_round_trip():
    rng = random.Random(4)
    for _ in range(20):
        t = random_tower(rng, rng.choice([2, 3, 5]), 3)
        t2 = tower_build(t.to_json())
        assert t2.names == t.names
        assert t2.to_dict() == t.to_dict()
        e = random_elem(rng, t)
        from charp.expr import format_elem
        e2 = t2(format_elem(e))
        assert format_elem(t2.derive(e2)) == format_elem(t.derive(e))


def test_build_from_document():
    t = tower_build({"p": 3, "generators": [{"name": "X", "kind": "base"},
                                            {"name": "E", "kind": "hyperexp", "arg": "2*X"},
                                            {"names": ["Y", "Z"], "kind": "linear_block",
                                             "arg": [["0", "1"], ["X", "E"]]}]})
    assert t.names == ["X", "E", "Y", "Z"]
    assert t.derive(t("Z")) == t("X*Y+E*Z")
    assert json.loads(t.to_json())["generators"][2]["kind"] == "linear_block"


@pytest.mark.parametrize("spec", [
    "not json",
    {"generators": []},
    {"p": 4, "generators": []},
    {"p": "3"},
    {"p": 3, "generators": [{"name": "X", "kind": "base"}, {"name": "X", "kind": "log", "arg": "X"}]},
    {"p": 3, "generators": [{"name": "X", "kind": "base"}, {"name": "Z", "kind": "base"}]},
    {"p": 3, "generators": [{"name": "X", "kind": "wave", "arg": "X"}]},
    {"p": 3, "generators": [{"name": "X", "kind": "base"}, {"name": "E", "kind": "exp"}]},
    {"p": 3, "generators": [{"name": "X", "kind": "base"}, {"name": "E", "kind": "exp", "arg": "Q"}]},
    {"p": 3, "generators": [{"name": "X", "kind": "base"}, {"name": "L", "kind": "log", "arg": "0"}]},
    {"p": 3, "generators": [{"name": "1X", "kind": "base"}]},
])
def test_bad_specs(spec):
    with pytest.raises(SpecError):
        tower_build(spec)


def test_towers_are_immutable():
    t = rational_tower(5)
    t2 = t.extend("E", Exp("X"))
    assert t.names == ["X"] and t2.names == ["X", "E"]
    assert t.derive(t("X^2")) == t("2*X")


def test_restrict_and_prefix():
    t = intro_tower(5)
    x = t("X^2+1")
    assert t.level_of(x) == 0
    assert t.restrict(x, 1) == t.prefix(1)("X^2+1")
    with pytest.raises(ValueError):
        t.restrict(t("E"), 1)


def test_tower_without_generators():
    t = Tower.empty(3)
    assert t.derive(2) == 0
    t2 = t.extend("X", Base())
    assert t2.base_name == "X"
    tc = Tower.empty(7).extend("C", Primitive(0))
    assert tc.is_constant(tc("C"))
    with pytest.raises(SpecError):
        tc.elem(Tower.empty(7).extend("C", Primitive(0))("C"))
    assert HyperExp("X") != Exp("X")
