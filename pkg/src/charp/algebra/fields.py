"""Coefficient domains.

A domain object carries the arithmetic of a field whose *raw* elements may be
plain Python objects.  For the prime field the raw elements are ints in
``range(p)``; every other domain in the package uses element objects that
overload the arithmetic operators, so the default methods below just defer to
those operators.

Dense polynomial kernels live on the domain too, which lets :class:`PrimeField`
replace the generic loops by integer arithmetic with a single reduction.
"""

from __future__ import annotations

import sys
from array import array


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Generic field domain; raw elements support ``+ - * /`` and ``bool``."""

    level = -1
    characteristic = 0

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def convert(self, x):
        return x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return self.one / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a) -> bool:
        return not a

    def is_one(self, a) -> bool:
        return a == self.one

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def from_int(self, n: int):
        return self.convert(n)

    def to_str(self, a) -> str:
        return str(a)

    # -- dense polynomial kernels (coefficient lists, lowest degree first) --

    def trim(self, c: list) -> list:
        while c and self.is_zero(c[-1]):
            c.pop()
        return c

    def poly_add(self, a: list, b: list) -> list:
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        add = self.add
        for i, y in enumerate(b):
            out[i] = add(out[i], y)
        return self.trim(out)

    def poly_sub(self, a: list, b: list) -> list:
        out = list(a) + [self.zero] * (len(b) - len(a))
        sub = self.sub
        for i, y in enumerate(b):
            out[i] = sub(out[i], y)
        return self.trim(out)

    def poly_scale(self, a: list, s) -> list:
        if self.is_zero(s):
            return []
        mul = self.mul
        return self.trim([mul(x, s) for x in a])

    def poly_mul(self, a: list, b: list) -> list:
        if not a or not b:
            return []
        zero, add, mul, is_zero = self.zero, self.add, self.mul, self.is_zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if is_zero(x):
                continue
            for j, y in enumerate(b):
                if not is_zero(y):
                    out[i + j] = add(out[i + j], mul(x, y))
        return self.trim(out)

    def poly_divmod(self, a: list, b: list) -> tuple[list, list]:
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        if len(a) < len(b):
            return [], list(a)
        r = list(a)
        db = len(b) - 1
        inv_lc = self.inv(b[-1])
        q = [self.zero] * (len(a) - db)
        sub, mul, is_zero = self.sub, self.mul, self.is_zero
        for k in range(len(a) - 1, db - 1, -1):
            c = r[k]
            if is_zero(c):
                continue
            c = mul(c, inv_lc)
            q[k - db] = c
            for j in range(db):
                if not is_zero(b[j]):
                    r[k - db + j] = sub(r[k - db + j], mul(c, b[j]))
            r[k] = self.zero
        return self.trim(q), self.trim(r[:db])


class PrimeField(Field):
    """The prime field F_p with ints as raw elements."""

    level = -1

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def convert(self, x):
        if isinstance(x, FpScalar):
            if x.p != self.p:
                raise TypeError(f"element of F_{x.p} used in F_{self.p}")
            return x.value
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot convert {type(x).__name__} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_one(self, a):
        return a == 1

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def trim(self, c: list) -> list:
        while c and not c[-1]:
            c.pop()
        return c

    def poly_add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = [(x + y) % p for x, y in zip(a, b)]
        out.extend(a[len(b):])
        return self.trim(out)

    def poly_sub(self, a, b):
        p = self.p
        n = min(len(a), len(b))
        out = [(x - y) % p for x, y in zip(a, b)]
        out.extend(a[n:])
        out.extend((-y) % p for y in b[n:])
        return self.trim(out)

    def poly_scale(self, a, s):
        p = self.p
        s %= p
        if not s:
            return []
        return [x * s % p for x in a]

    def poly_mul(self, a, b):
        if not a or not b:
            return []
        if min(len(a), len(b)) > KRONECKER_CUTOFF:
            return self.trim(_kronecker_mul(a, b, self.p))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        p = self.p
        return self.trim([v % p for v in out])

    def poly_divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        if len(a) < len(b):
            return [], list(a)
        p = self.p
        if len(b) > NEWTON_CUTOFF and len(a) - len(b) > NEWTON_CUTOFF:
            return _newton_divmod(a, b, p, self.trim)
        r = list(a)
        db = len(b) - 1
        inv_lc = pow(b[-1], p - 2, p)
        q = [0] * (len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = r[k] % p
            if not c:
                continue
            c = c * inv_lc % p
            q[k - db] = c
            if db:
                r[k - db:k] = [x - c * y for x, y in zip(r[k - db:k], b)]
            r[k] = 0
        return self.trim(q), self.trim([v % p for v in r[:db]])


KRONECKER_CUTOFF = 24


def _kronecker_mul(a, b, p):
    """Product of two coefficient lists through one big-integer multiplication.

    Coefficients are packed into fixed-width slots wide enough that no slot of
    the product overflows, so the product's slots are its exact coefficients.
    """
    bound = min(len(a), len(b)) * (p - 1) ** 2
    width = (bound.bit_length() + 7) // 8
    code = next((c for c in _SLOT_CODES if array(c).itemsize >= width), None)
    n = len(a) + len(b) - 1
    if code is None:
        x = int.from_bytes(b"".join(c.to_bytes(width, "little") for c in a), "little")
        y = int.from_bytes(b"".join(c.to_bytes(width, "little") for c in b), "little")
        raw = (x * y).to_bytes(n * width, "little")
        return [int.from_bytes(raw[i:i + width], "little") % p for i in range(0, n * width, width)]
    size = array(code).itemsize
    x = int.from_bytes(array(code, a).tobytes(), sys.byteorder)
    y = int.from_bytes(array(code, b).tobytes(), sys.byteorder)
    out = array(code)
    out.frombytes((x * y).to_bytes(n * size, sys.byteorder))
    return [c % p for c in out]


_SLOT_CODES = ("B", "H", "I", "L", "Q")


NEWTON_CUTOFF = 48


def _mul_trunc(a, b, n, p):
    return _kronecker_mul(a[:n], b[:n], p)[:n]


def _series_inverse(f, n, p):
    """``g`` with ``f*g = 1 mod x^n`` (``f[0] != 0``)."""
    g = [pow(f[0], p - 2, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = _mul_trunc(f, g, k, p)
        e = [(-x) % p for x in fg]
        e[0] = (e[0] + 2) % p
        g = _mul_trunc(g, e, k, p)
    return g


def _newton_divmod(a, b, p, trim):
    """Quotient and remainder through a power series inverse of the reversed divisor."""
    m = len(a) - len(b) + 1
    inv = _series_inverse(b[::-1], m, p)
    q = _mul_trunc(a[::-1], inv, m, p)
    q = q + [0] * (m - len(q))
    q = q[::-1]
    qb = _kronecker_mul(q, b, p)
    r = [(x - y) % p for x, y in zip(a[:len(b) - 1], qb)]
    return trim(q), trim(r)


class FpScalar:
    """A standalone element of F_p with operator overloading."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise TypeError("mixing scalars of different characteristic")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return FpScalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpScalar(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.inverse() * o

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpScalar(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        return False if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpScalar({self.value}, {self.p})"
