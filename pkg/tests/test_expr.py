import json
import random

import pytest
from conftest import intro_tower, random_elem, random_tower, rational_tower
from hypothesis import given, settings
from hypothesis import strategies as st

from charp import ParseError, format_elem, parse_expr


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5, 7]))
def test_round_trip(seed, p):
    rng = random.Random(seed)
    t = random_tower(rng, p, rng.randint(1, 3))
    e = random_elem(rng, t, 3)
    text = format_elem(e)
    assert parse_expr(text, t) == e
    assert json.loads(format_elem(e, mode="json")) == text


def test_examples():
    t3 = intro_tower(3)
    assert parse_expr("(1-X^2)/X^3*E", t3) == t3("(1+2*X^2)/X^3*E")
    assert format_elem(parse_expr("(1-X^2)/X^3*E", t3)) == "(1+2*X^2)/X^3*E"
    s = rational_tower(3)
    assert parse_expr("X^0", s) == 1
    assert format_elem(s.one) == "1" and format_elem(s.zero) == "0"
    x = parse_expr("1/(X+1)", s)
    assert x.num.degree() == 0 and x.den.degree() == 1
    t5 = intro_tower(5)
    v = t5("(X^4-2*X^2+2)/(2*X^5)*E")
    assert parse_expr(format_elem(v), t5) == v
    assert "-" not in format_elem(v)


def test_precedence_and_associativity():
    t = rational_tower(7)
    assert t("2^3^2") == t("2^9")
    assert t("-X^2") == -(t("X") ** 2)
    assert t("8/2/2") == t("2")
    assert t("1-2-3") == t("-4")
    assert t("2*X+3*X^2") == t("X*(2+3*X)")
    assert t("-(-X)") == t("X")
    assert t("X - X") == 0


@pytest.mark.parametrize("src,offset", [
    ("2X", 1),
    ("X+", 2),
    ("(X", 2),
    ("X)", 1),
    ("Q", 0),
    ("X^-1", 2),
    ("X^Y", 2),
    ("X $ 1", 2),
    ("", 0),
])
def test_errors_carry_offsets(src, offset):
    t = rational_tower(3)
    with pytest.raises(ParseError) as info:
        parse_expr(src, t)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    t = rational_tower(3)
    with pytest.raises(ParseError) as info:
        parse_expr("X+é", t)
    assert info.value.offset == 2
    with pytest.raises(ParseError) as info:
        parse_expr("é+Q", t)
    assert info.value.offset == 0


def test_division_by_zero():
    t = rational_tower(3)
    with pytest.raises(ParseError) as info:
        parse_expr("1/(X-X)", t)
    assert info.value.offset == 1
    with pytest.raises(ParseError):
        parse_expr("X+1/3", t)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="X+-*/^()0123 E", max_size=12))
def test_fuzzed_text_never_crashes(src):
    t = intro_tower(3)
    try:
        parse_expr(src, t)
    except ParseError as exc:
        assert exc.offset is not None and 0 <= exc.offset <= len(src.encode())
