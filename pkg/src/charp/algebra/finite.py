"""Roots of polynomials over F_p in small extensions F_{p^m}.

Roots are grouped by distinct-degree factorization first, so a root of exact
degree ``m`` is only searched for in ``F_{p^m}``.  That field is modelled as
``F_p[s]/(g)`` for the first irreducible ``g`` of degree ``m`` in lexicographic
order.  Below ``EXHAUSTIVE_LIMIT`` elements the search is by evaluation at every
element; above it, by Cantor-Zassenhaus equal-degree splitting.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .fields import Field, PrimeField
from .poly import Poly, poly_gcd

EXHAUSTIVE_LIMIT = 10**6


def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.dom)
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        e >>= 1
        if e:
            base = base * base % mod
    return result


def is_irreducible(f: Poly) -> bool:
    """Rabin-style test over a prime field."""
    p = f.dom.p
    n = f.degree()
    if n <= 0:
        return False
    if n == 1:
        return True
    x = Poly.monomial(f.dom, 1)
    if _powmod(x, p**n, f) != x % f:
        return False
    for q in {d for d in range(2, n + 1) if n % d == 0 and all(d % k for k in range(2, d))}:
        h = _powmod(x, p ** (n // q), f) - x
        if poly_gcd(f, h).degree() > 0:
            return False
    return True


@lru_cache(maxsize=None)
def _modulus(p: int, m: int) -> tuple:
    F = PrimeField(p)
    if m == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=m):
        g = Poly(list(reversed(tail)) + [1], F)
        if g[0] and is_irreducible(g):
            return tuple(g.c)
    raise AssertionError("no irreducible polynomial found")


class GFq(Field):
    """The field F_{p^m} = F_p[s]/(g); raw elements are :class:`GFqElem`."""

    def __init__(self, p: int, m: int):
        self.p, self.m = p, m
        self.q = p**m
        self.characteristic = p
        self.prime = PrimeField(p)
        self.modulus = Poly(list(_modulus(p, m)), self.prime)
        self._zero = GFqElem(Poly.zero(self.prime), self)
        self._one = GFqElem(Poly.one(self.prime), self)

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, GFq) and (other.p, other.m) == (self.p, self.m)

    def __hash__(self):
        return hash(("GF", self.p, self.m))

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def gen(self):
        return GFqElem(Poly.monomial(self.prime, 1) % self.modulus, self)

    def convert(self, x):
        if isinstance(x, GFqElem):
            return x
        return GFqElem(Poly.const(self.prime, x), self)

    def elements(self):
        for tail in itertools.product(range(self.p), repeat=self.m):
            yield GFqElem(Poly(list(tail), self.prime), self)


class GFqElem:
    __slots__ = ("poly", "field")

    def __init__(self, poly: Poly, field: GFq):
        self.poly = poly
        self.field = field

    def _co(self, other):
        return self.field.convert(other)

    def __add__(self, other):
        return GFqElem(self.poly + self._co(other).poly, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return GFqElem(self.poly - self._co(other).poly, self.field)

    def __rsub__(self, other):
        return GFqElem(self._co(other).poly - self.poly, self.field)

    def __neg__(self):
        return GFqElem(-self.poly, self.field)

    def __mul__(self, other):
        return GFqElem(self.poly * self._co(other).poly % self.field.modulus, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GFqElem(_powmod(self.poly, n, self.field.modulus), self.field)

    def inverse(self):
        if not self.poly:
            raise ZeroDivisionError("inverse of 0")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __bool__(self):
        return bool(self.poly)

    def __eq__(self, other):
        try:
            return self.poly == self._co(other).poly
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def in_prime_field(self) -> bool:
        return self.poly.degree() <= 0

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError("element is not in the prime field")
        return self.poly[0]

    def __repr__(self):
        if not self.poly:
            return "0"
        return "+".join(str(c) if i == 0 else (f"{c}*s" if i == 1 else f"{c}*s^{i}")
                        for i, c in self.poly.terms())


@dataclass(frozen=True)
class FFRoot:
    """A root of degree ``m`` over F_p with its minimal polynomial."""

    m: int
    value: GFqElem
    minpoly: Poly

    def as_int(self) -> int | None:
        return int(self.value) if self.m == 1 else None


def radical(f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors of ``f`` over F_p."""
    if f.degree() <= 0:
        return Poly.one(f.dom)
    d = f.derivative()
    if not d:
        p = f.dom.p
        return radical(Poly(f.c[::p], f.dom))
    g = poly_gcd(f, d)
    r = f.exact_div(g).monic()
    if g.degree() == 0:
        return r
    rg = radical(g)
    return (r * rg).exact_div(poly_gcd(r, rg)).monic()


def distinct_degree(f: Poly, m_bound: int) -> dict[int, Poly]:
    """Map ``m`` to the product of the irreducible factors of degree ``m``."""
    F = f.dom
    f = radical(f)
    x = Poly.monomial(F, 1)
    h = x
    out = {}
    for m in range(1, m_bound + 1):
        if f.degree() < m:
            break
        h = _powmod(h, F.p, f)
        g = poly_gcd(f, h - x)
        if g.degree() > 0:
            out[m] = g
            f = f.exact_div(g)
            h = h % f if f.degree() > 0 else h
    return out


def _roots_split(f: Poly, K: GFq, rng: random.Random) -> list:
    """Roots of ``f`` (over K, squarefree, split) by equal-degree splitting."""
    if f.degree() == 0:
        return []
    if f.degree() == 1:
        return [K.neg(K.div(f[0], f[1]))]
    while True:
        delta = _random_elem(K, rng)
        if K.p == 2:
            d = Poly([K.zero, delta], K)
            t, acc = d, d
            for _ in range(K.m - 1):
                t = t * t % f
                acc = acc + t
            h = acc
        else:
            d = Poly([delta, K.one], K)
            h = _powmod(d, (K.q - 1) // 2, f) - Poly.one(K)
        g = poly_gcd(f, h)
        if 0 < g.degree() < f.degree():
            return _roots_split(g, K, rng) + _roots_split(f.exact_div(g), K, rng)


def _random_elem(K: GFq, rng: random.Random):
    return GFqElem(Poly([rng.randrange(K.p) for _ in range(K.m)], K.prime), K)


def minimal_polynomial(a: GFqElem) -> Poly:
    """Minimal polynomial over F_p from the Frobenius orbit of ``a``."""
    K = a.field
    orbit = [a]
    while True:
        b = orbit[-1] ** K.p
        if b == a:
            break
        orbit.append(b)
    acc = Poly.one(K)
    for b in orbit:
        acc = acc * Poly([-b, K.one], K)
    return Poly([int(c) for c in acc.c], K.prime)


def ff_factor_roots(a: Poly, m_bound: int = 6, seed: int = 0) -> list[FFRoot]:
    """All roots of ``a`` (over F_p) lying in F_{p^m} for ``m <= m_bound``.

    Roots of the same degree are returned in a common model of F_{p^m}.
    """
    if not a:
        raise ValueError("roots of the zero polynomial")
    F = a.dom
    if not isinstance(F, PrimeField):
        raise TypeError("ff_factor_roots needs a polynomial over a prime field")
    rng = random.Random(seed)
    out = []
    for m, g in distinct_degree(a, m_bound).items():
        K = GFq(F.p, m)
        gK = Poly([K.convert(c) for c in g.c], K)
        if K.q < EXHAUSTIVE_LIMIT:
            roots = [z for z in K.elements() if not gK(z)]
        else:
            roots = _roots_split(gK, K, rng)
        for z in roots:
            out.append(FFRoot(m, z, minimal_polynomial(z) if m > 1 else Poly([-int(z), 1], F)))
    return out
