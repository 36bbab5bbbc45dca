"""Dense univariate polynomials over an arbitrary field domain."""

from __future__ import annotations

from .fields import Field, PrimeField


class Poly:
    """Immutable dense polynomial; ``c[i]`` is the coefficient of ``T**i``.

    The zero polynomial has an empty coefficient list, so ``degree()`` is -1.
    """

    __slots__ = ("c", "dom", "_hash")

    def __init__(self, coeffs, dom: Field, _trusted: bool = False):
        if _trusted:
            c = coeffs
        else:
            c = dom.trim([dom.convert(x) for x in coeffs])
        self.c = c
        self.dom = dom
        self._hash = None

    @classmethod
    def zero(cls, dom):
        return cls([], dom, True)

    @classmethod
    def one(cls, dom):
        return cls([dom.one], dom, True)

    @classmethod
    def monomial(cls, dom, k: int, coeff=None):
        coeff = dom.one if coeff is None else dom.convert(coeff)
        if dom.is_zero(coeff):
            return cls.zero(dom)
        return cls([dom.zero] * k + [coeff], dom, True)

    @classmethod
    def const(cls, dom, a):
        a = dom.convert(a)
        return cls([] if dom.is_zero(a) else [a], dom, True)

    def degree(self) -> int:
        return len(self.c) - 1

    def lc(self):
        return self.c[-1] if self.c else self.dom.zero

    def __getitem__(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else self.dom.zero

    def __len__(self):
        return len(self.c)

    def __bool__(self):
        return bool(self.c)

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.dom.is_one(self.c[0])

    def is_monic(self) -> bool:
        return bool(self.c) and self.dom.is_one(self.c[-1])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == Poly.const(self.dom, other).c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.c))
        return self._hash

    def _wrap(self, c):
        return Poly(c, self.dom, True)

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        try:
            return Poly.const(self.dom, other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.dom.poly_add(self.c, o.c))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.dom.poly_sub(self.c, o.c))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        neg = self.dom.neg
        return self._wrap([neg(x) for x in self.c])

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self._wrap(self.dom.poly_mul(self.c, other.c))
        try:
            s = self.dom.convert(other)
        except TypeError:
            return NotImplemented
        return self._wrap(self.dom.poly_scale(self.c, s))

    __rmul__ = __mul__

    def scale(self, s):
        return self._wrap(self.dom.poly_scale(self.c, s))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.dom), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        q, r = self.dom.poly_divmod(self.c, other.c)
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        if not self.c or self.dom.is_one(self.c[-1]):
            return self
        return self.scale(self.dom.inv(self.c[-1]))

    def derivative(self) -> "Poly":
        dom = self.dom
        mul, from_int = dom.mul, dom.from_int
        return self._wrap(dom.trim([mul(from_int(i), a) for i, a in enumerate(self.c) if i]))

    def __call__(self, x):
        """Evaluate at a raw domain element by Horner's rule."""
        dom = self.dom
        acc = dom.zero
        for a in reversed(self.c):
            acc = dom.add(dom.mul(acc, x), a)
        return acc

    def horner(self, x, one, embed):
        """Evaluate at ``x`` living in another ring; ``embed`` maps coefficients there."""
        acc = one * 0
        for a in reversed(self.c):
            acc = acc * x + embed(a)
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero(self.dom)
        for a in reversed(self.c):
            acc = acc * other + Poly.const(self.dom, a)
        return acc

    def map(self, f, dom: Field) -> "Poly":
        return Poly([f(a) for a in self.c], dom)

    def terms(self):
        """Yield ``(exponent, coefficient)`` for the nonzero coefficients."""
        for i, a in enumerate(self.c):
            if not self.dom.is_zero(a):
                yield i, a

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for i, a in self.terms():
            s = self.dom.to_str(a)
            parts.append(s if i == 0 else f"({s})*T^{i}")
        return " + ".join(parts)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd.

    Over a rational function field in several variables the work is done on
    integral polynomials (see :mod:`.rpoly`); otherwise by Euclid's algorithm.
    """
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    if a and b and a.degree() > 0 and b.degree() > 0:
        from . import rpoly

        h = rpoly.field_height(a.dom)
        if h:
            from .zech import coprime_certificate

            if coprime_certificate(a, b, h):
                return Poly.one(a.dom)
            p = a.dom.characteristic
            A, _ = rpoly.poly_to_integral(a, h, p)
            B, _ = rpoly.poly_to_integral(b, h, p)
            G = rpoly.gcd_over_fractions(A, B, h + 1, p)
            dom = a.dom
            return Poly([rpoly.integral_to_elem(c, dom, h) for c in G], dom).monic()
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    if not a and not b:
        raise ValueError("gcd of two zero polynomials")
    dom = a.dom
    r0, r1 = a, b
    s0, s1 = Poly.one(dom), Poly.zero(dom)
    t0, t1 = Poly.zero(dom), Poly.one(dom)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    k = dom.inv(r0.lc())
    return r0.scale(k), s0.scale(k), t0.scale(k)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly.zero(a.dom)
    return (a * b // poly_gcd(a, b)).monic()


def squarefree_part(a: Poly) -> Poly:
    """Product of the distinct irreducible factors of ``a``, monic.

    Over a prime field factors whose multiplicity is a multiple of p are
    recovered through p-th roots.  Over other domains only factors on which
    ``a'`` does not vanish are found; the package needs no more there.
    """
    d = a.derivative()
    prime = isinstance(a.dom, PrimeField)
    if not d:
        return squarefree_part(_pth_root_poly(a)) if prime and a.degree() > 0 else a.monic()
    g = poly_gcd(a, d)
    w = (a // g).monic()
    if not prime or g.degree() == 0:
        return w
    # strip the factors of w from g; what is left is a p-th power
    y = poly_gcd(g, w)
    while y.degree() > 0:
        g = g // y
        y = poly_gcd(g, y)
    if g.degree() == 0:
        return w
    return (w * squarefree_part(_pth_root_poly(g))).monic()


def _pth_root_poly(a: Poly) -> Poly:
    """``b`` with ``b(T)^p = a(T)`` for ``a`` in ``F_p[T^p]``."""
    p = a.dom.characteristic
    return Poly(a.c[::p], a.dom)
