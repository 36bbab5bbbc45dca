"""Table-driven arithmetic in a mid-sized field F_q, used for random evaluation.

Nonzero elements are stored as discrete logarithms to a primitive element and
zero as ``-1``; addition goes through the Zech table ``1 + g^k = g^Z[k]``.
Everything is a table lookup, which makes it cheap to specialize large tower
elements at a random point.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .fields import PrimeField
from .finite import _powmod, is_irreducible
from .poly import Poly

TABLE_LIMIT = 1 << 16
ZERO = -1


class ZechField:
    def __init__(self, p: int, m: int):
        self.p, self.m = p, m
        self.q = p**m
        self.order = self.q - 1
        exp, log = _tables(p, m)
        self.exp = exp  # log -> int encoding (base-p digits)
        self.log = log  # int encoding -> log
        self.zech = [ZERO] * self.order
        for k in range(self.order):
            v = _add_enc(1, exp[k], p, m)
            self.zech[k] = log[v] if v else ZERO
        self.minus_one = 0 if p == 2 else self.order // 2

    def mul(self, a: int, b: int) -> int:
        if a == ZERO or b == ZERO:
            return ZERO
        return (a + b) % self.order

    def add(self, a: int, b: int) -> int:
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        z = self.zech[(b - a) % self.order]
        return ZERO if z == ZERO else (a + z) % self.order

    def neg(self, a: int) -> int:
        return ZERO if a == ZERO else (a + self.minus_one) % self.order

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == ZERO:
            raise ZeroDivisionError("inverse of zero")
        return (-a) % self.order

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 0
        if a == ZERO:
            return ZERO
        return (a * n) % self.order

    def from_int(self, n: int) -> int:
        n %= self.p
        return self.log[n] if n else ZERO

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.order)


def _add_enc(a: int, b: int, p: int, m: int) -> int:
    out, scale = 0, 1
    for _ in range(m):
        out += ((a % p + b % p) % p) * scale
        a //= p
        b //= p
        scale *= p
    return out


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _primitive_modulus(p: int, m: int) -> list[int]:
    """First monic irreducible ``g`` of degree ``m`` whose root generates ``F_q^*``."""
    F = PrimeField(p)
    q = p**m
    x = Poly.monomial(F, 1)
    for tail in itertools.product(range(p), repeat=m):
        g = Poly(list(reversed(tail)) + [1], F)
        if not g[0] or not is_irreducible(g):
            continue
        if all(not _powmod(x, (q - 1) // r, g).is_one() for r in _prime_factors(q - 1)):
            return [int(c) for c in g.c]
    raise AssertionError("no primitive polynomial found")


def _tables(p: int, m: int):
    """Exp/log tables for the class ``s`` of the variable modulo a primitive polynomial."""
    q = p**m
    if m == 1:
        gen = next(a for a in range(1, p) if all(pow(a, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1))) \
            if p > 2 else 1
        exp, x = [], 1
        for _ in range(q - 1):
            exp.append(x)
            x = x * gen % p
        return exp, {e: k for k, e in enumerate(exp)}
    mod = _primitive_modulus(p, m)
    x = [1] + [0] * (m - 1)
    exp = []
    for _ in range(q - 1):
        e = 0
        for d in reversed(x):
            e = e * p + d
        exp.append(e)
        top = x[-1]
        x = [0] + x[:-1]
        if top:
            x = [(a - top * b) % p for a, b in zip(x, mod)]
    return exp, {e: k for k, e in enumerate(exp)}


@lru_cache(maxsize=None)
def zech_field(p: int) -> ZechField | None:
    """The largest ``F_(p^m)`` with at most ``TABLE_LIMIT`` elements, or None if ``p`` is larger."""
    if p > TABLE_LIMIT:
        return None
    m = 1
    while p ** (m + 1) <= TABLE_LIMIT:
        m += 1
    return ZechField(p, m)


# -- specialization of nested rational functions ------------------------------

def eval_elem(Z: ZechField, x, dom, point):
    """Value of ``x`` (in a field of height ``len(point)``) at ``point``.

    ``point[i]`` is substituted for the variable of height ``i + 1``.
    Raises ZeroDivisionError when a denominator vanishes.
    """
    h = len(point)
    if h == 0:
        return Z.from_int(int(x))
    base = dom.base
    v = point[-1]
    sub = point[:-1]
    num = eval_poly(Z, x.num, base, sub, v)
    den = eval_poly(Z, x.den, base, sub, v)
    return Z.mul(num, Z.inv(den))


def eval_poly(Z: ZechField, P, dom, point, v):
    """Horner evaluation of ``P`` (coefficients in ``dom``) at ``v``."""
    acc = ZERO
    for c in reversed(P.c):
        acc = Z.add(Z.mul(acc, v), eval_elem(Z, c, dom, point))
    return acc


def gcd_degree(Z: ZechField, a: list, b: list) -> int:
    """Degree of the gcd of two coefficient lists in encoded form."""
    def trim(c):
        while c and c[-1] == ZERO:
            c.pop()
        return c

    a, b = trim(list(a)), trim(list(b))
    while b:
        r = list(a)
        db = len(b) - 1
        inv = Z.inv(b[-1])
        while len(r) - 1 >= db and r:
            k = len(r) - 1 - db
            c = Z.mul(r[-1], inv)
            for j in range(db):
                r[k + j] = Z.sub(r[k + j], Z.mul(c, b[j]))
            r.pop()
            trim(r)
        a, b = b, r
    return len(a) - 1


def coprime_certificate(a, b, height: int, seed: int = 1) -> bool:
    """True when specialization proves two polynomials over a height-``height`` field coprime.

    A False answer proves nothing.
    """
    Z = zech_field(a.dom.characteristic)
    if Z is None:
        return False
    point = _points(Z.p, height, seed)
    try:
        ea = [eval_elem(Z, c, a.dom, point) for c in a.c]
        eb = [eval_elem(Z, c, b.dom, point) for c in b.c]
    except ZeroDivisionError:
        return False
    if ea[-1] == ZERO or eb[-1] == ZERO:
        return False
    return gcd_degree(Z, ea, eb) == 0


@lru_cache(maxsize=None)
def _points(p: int, height: int, seed: int) -> list:
    Z = zech_field(p)
    rng = random.Random(p * 1000003 + height * 7919 + seed)
    return [Z.random(rng) for _ in range(height)]
