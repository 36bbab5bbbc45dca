"""Reduced rational functions in one variable over a field domain.

Elements are kept in canonical form at every step: ``gcd(num, den) = 1`` and
``den`` monic, with zero stored as ``0/1``.  Structural equality is therefore
field equality.  A :class:`RatFuncField` is itself a :class:`Field`, so fields
nest: ``F_p(X)(E)`` is ``RatFuncField(RatFuncField(PrimeField(p), "X"), "E")``.
"""

from __future__ import annotations

from .fields import Field
from .poly import Poly, poly_gcd


class RatFuncField(Field):
    """The field ``base(name)`` of rational functions in ``name``."""

    def __init__(self, base: Field, name: str):
        self.base = base
        self.name = name
        self.level = base.level + 1
        self.characteristic = base.characteristic
        self._zero = RatFunc(Poly.zero(base), Poly.one(base), self)
        self._one = RatFunc(Poly.one(base), Poly.one(base), self)
        self._gen = RatFunc(Poly.monomial(base, 1), Poly.one(base), self)

    def __repr__(self):
        return f"RatFuncField({self.base!r}, {self.name!r})"

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def gen(self):
        return self._gen

    def ancestors(self):
        f = self
        while isinstance(f, RatFuncField):
            yield f
            f = f.base
        yield f

    def const(self, a) -> "RatFunc":
        """Wrap a raw element of ``base`` (already converted) as a constant."""
        if self.base.is_zero(a):
            return self._zero
        return RatFunc(Poly([a], self.base, True), self._one.den, self)

    def from_poly(self, num: Poly) -> "RatFunc":
        return RatFunc(num, self._one.den, self)

    def convert(self, x):
        if isinstance(x, RatFunc):
            if x.field is self:
                return x
            if x.field.level < self.level:
                return self.const(self.base.convert(x))
            raise TypeError(f"cannot move an element of {x.field.name} down to {self.name}")
        return self.const(self.base.convert(x))

    def make(self, num: Poly, den: Poly) -> "RatFunc":
        """Canonical element ``num/den``."""
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return self._zero
        if den.degree() > 0:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.lc()
        if not self.base.is_one(lc):
            k = self.base.inv(lc)
            num, den = num.scale(k), den.scale(k)
        return RatFunc(num, den, self)

    def to_str(self, a):
        return repr(a)


class RatFunc:
    """Canonical fraction ``num/den`` of polynomials over ``field.base``."""

    __slots__ = ("num", "den", "field", "_hash")

    def __init__(self, num: Poly, den: Poly, field: RatFuncField):
        self.num = num
        self.den = den
        self.field = field
        self._hash = None

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFunc) or other.field is not self.field:
            try:
                other = self.field.convert(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.level, self.num, self.den))
        return self._hash

    def _co(self, other):
        if isinstance(other, RatFunc):
            if other.field is self.field:
                return other
            if other.field.level > self.field.level:
                return NotImplemented
        return self.field.convert(other)

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        F = self.field
        if not self.num:
            return o
        if not o.num:
            return self
        a, b, c, d = self.num, self.den, o.num, o.den
        if b.degree() == 0 and d.degree() == 0:
            return RatFunc(a + c, b, F)
        if b == d:
            return F.make(a + c, b)
        if b.degree() == 0:
            return RatFunc(a * d + c, d, F)
        if d.degree() == 0:
            return RatFunc(a + c * b, b, F)
        g = poly_gcd(b, d)
        if g.degree() == 0:
            return RatFunc(a * d + c * b, b * d, F)
        bg, dg = b.exact_div(g), d.exact_div(g)
        return F.make(a * dg + c * bg, b * dg)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.field)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        F = self.field
        if not self.num or not o.num:
            return F.zero
        a, b, c, d = self.num, self.den, o.num, o.den
        if c.degree() == 0 and d.degree() == 0:
            return RatFunc(a.scale(c.c[0]), b, F)
        if a.degree() == 0 and b.degree() == 0:
            return RatFunc(c.scale(a.c[0]), d, F)
        if d.degree() > 0:
            g1 = poly_gcd(a, d)
            if g1.degree() > 0:
                a, d = a.exact_div(g1), d.exact_div(g1)
        if b.degree() > 0:
            g2 = poly_gcd(c, b)
            if g2.degree() > 0:
                c, b = c.exact_div(g2), b.exact_div(g2)
        return RatFunc(a * c, b * d, F)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        base = self.field.base
        k = base.inv(self.num.lc())
        return RatFunc(self.den.scale(k), self.num.scale(k), self.field)

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.field.one
        # powers of a reduced fraction stay reduced
        return RatFunc(self.num ** n, self.den ** n, self.field)

    def __repr__(self):
        if self.den.degree() == 0:
            return f"[{self.num!r}]_{self.field.name}"
        return f"[({self.num!r})/({self.den!r})]_{self.field.name}"
