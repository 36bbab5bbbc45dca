"""Linear differential operators over a tower.

``ConstOp`` has constant coefficients (they commute with ``d``), so it is just
a polynomial in ``T = d``.  ``SkewOp`` has arbitrary coefficients and
multiplies by the commutation rule ``d a = a d + d(a)``.  Both use the text
syntax ``"D^2 - X"`` with ``D`` standing for the derivation; coefficients are
written to the left of powers of ``D``.
"""

from __future__ import annotations

from .algebra.poly import Poly
from .errors import ParseError, SpecError
from .expr import _byte, evaluate, format_elem, parse_ast

NAIVE_LIMIT = 256


class _OpBase:
    __slots__ = ("tower", "coeffs")
    symbol = "D"

    def __init__(self, tower, coeffs):
        if isinstance(coeffs, Poly):
            coeffs = dict(coeffs.terms())
        elif not isinstance(coeffs, dict):
            coeffs = dict(enumerate(coeffs))
        clean = {}
        for k, a in coeffs.items():
            a = tower.elem(a)
            if a:
                clean[int(k)] = a
        self.tower = tower
        self.coeffs = dict(sorted(clean.items()))

    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def orders(self) -> list[int]:
        return list(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs.get(k, self.tower.zero)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, _OpBase):
            return NotImplemented
        return self.tower is other.tower and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def leading(self):
        return self.coeffs[self.order()]

    def apply(self, y, naive: bool | None = None):
        """``sum a_k d^k(y)``.

        Up to ``NAIVE_LIMIT`` the derivatives come from repeated application of
        ``d``; above it from the p-power derivation images.
        """
        t = self.tower
        if not self.coeffs:
            return t.zero
        n = self.order()
        if naive is None:
            naive = n <= NAIVE_LIMIT
        acc = t.zero
        if naive:
            seq = t.derivatives(y, n)
            for k, a in self.coeffs.items():
                acc = acc + a * seq[k]
        else:
            for k, a in self.coeffs.items():
                acc = acc + a * t.derive_n_fast(y, k)
        return acc

    __call__ = apply

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            a = self.coeffs[k]
            cs = format_elem(a)
            mono = "" if k == 0 else (self.symbol if k == 1 else f"{self.symbol}^{k}")
            if not mono:
                parts.append(cs if "+" not in cs else f"({cs})")
            elif a == 1:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return "+".join(parts)

    def to_json(self) -> list:
        return [{"order": k, "coeff": format_elem(a)} for k, a in self.coeffs.items()]

    def __repr__(self):
        return f"{type(self).__name__}({self.format()})"


class SkewOp(_OpBase):
    """``sum a_i d^i`` with ``a_i`` in the tower."""

    @classmethod
    def d(cls, tower):
        return cls(tower, {1: 1})

    @classmethod
    def scalar(cls, tower, a):
        return cls(tower, {0: a})

    def _co(self, other):
        if isinstance(other, SkewOp):
            if other.tower is not self.tower:
                raise ValueError("operators over different towers")
            return other
        if isinstance(other, ConstOp):
            return SkewOp(self.tower, other.coeffs)
        return SkewOp.scalar(self.tower, other)

    def __add__(self, other):
        o = self._co(other)
        out = dict(self.coeffs)
        for k, a in o.coeffs.items():
            out[k] = out[k] + a if k in out else a
        return SkewOp(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return SkewOp(self.tower, {k: -a for k, a in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        return skew_mul(self, self._co(other))

    def __rmul__(self, other):
        return skew_mul(self._co(other), self)

    def __truediv__(self, other):
        o = self._co(other)
        if o.order() != 0:
            raise ValueError("can only divide an operator by a scalar")
        return skew_mul(self, SkewOp.scalar(self.tower, 1 / o.coeffs[0]))

    def __pow__(self, n: int):
        acc = SkewOp.scalar(self.tower, 1)
        for _ in range(n):
            acc = skew_mul(acc, self)
        return acc


def _left_d(op: SkewOp) -> dict:
    """Coefficients of ``d * op``."""
    t = op.tower
    out: dict = {}
    for k, a in op.coeffs.items():
        da = t.derive(a)
        if da:
            out[k] = out[k] + da if k in out else da
        out[k + 1] = out[k + 1] + a if k + 1 in out else a
    return out


def skew_mul(a: SkewOp, b: SkewOp) -> SkewOp:
    """Composition ``a * b`` in the ring of differential operators."""
    t = a.tower
    if b.tower is not t:
        raise ValueError("operators over different towers")
    acc: dict = {}
    power = b  # d^k * b
    k = 0
    top = a.order()
    while k <= top:
        c = a.coeffs.get(k)
        if c is not None:
            for m, x in power.coeffs.items():
                v = c * x
                acc[m] = acc[m] + v if m in acc else v
        k += 1
        if k <= top:
            power = SkewOp(t, _left_d(power))
    return SkewOp(t, acc)


def skew_right_divmod(a: SkewOp, b: SkewOp) -> tuple[SkewOp, SkewOp]:
    """``(q, r)`` with ``a = q * b + r`` and ``order(r) < order(b)``."""
    if not b:
        raise ZeroDivisionError("division by the zero operator")
    t = a.tower
    m = b.order()
    lb_inv = 1 / b.leading()
    q: dict = {}
    r = a
    while r and r.order() >= m:
        k = r.order()
        c = r.leading() * lb_inv
        q[k - m] = c
        term = skew_mul(SkewOp(t, {k - m: c}), b)
        r = r - term
    return SkewOp(t, q), r


class ConstOp(_OpBase):
    """``sum c_i d^i`` with every ``c_i`` a constant of the tower."""

    def __init__(self, tower, coeffs, check: bool = True):
        super().__init__(tower, coeffs)
        if check:
            for k, a in self.coeffs.items():
                if not tower.is_constant(a):
                    raise ValueError(f"coefficient of order {k} is not a constant")

    def poly(self) -> Poly:
        """The operator as a polynomial in ``T`` over the tower's field."""
        F = self.tower.field
        n = self.order()
        return Poly([self.coeffs.get(k, F.zero) for k in range(n + 1)], F)

    @classmethod
    def from_poly(cls, tower, P: Poly, check: bool = True):
        return cls(tower, dict(P.terms()), check)

    def compose(self, other: "ConstOp") -> "ConstOp":
        """``self(other(T))``; composition of constant-coefficient operators."""
        return ConstOp.from_poly(self.tower, self.poly().compose(other.poly()), check=False)

    def __mul__(self, other):
        return ConstOp.from_poly(self.tower, self.poly() * other.poly(), check=False)


class PPoly(ConstOp):
    """Constant-coefficient operator supported on orders ``{0} U {p^j}``.

    Order 0 is the identity map; the remaining orders are p-powers, so without
    an order-0 term the operator is itself a derivation.
    """

    def __init__(self, tower, coeffs, check: bool = True):
        super().__init__(tower, coeffs, check)
        p = tower.p
        for k in self.coeffs:
            if k and not _is_ppower(k, p):
                raise ValueError(f"order {k} is not a power of {p}")

    @property
    def terms(self) -> list:
        return list(self.coeffs.items())

    def is_derivation(self) -> bool:
        return 0 not in self.coeffs


def _is_ppower(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def parse_op(src: str, tower, kind=SkewOp, symbol: str = "D"):
    """Parse ``"D^6 - (X^3+1)"``; products are composed with the skew rule."""
    node = parse_ast(src)
    if symbol in tower.names:
        raise SpecError(f"operator symbol {symbol!r} clashes with a generator name")
    names = set(tower.names)

    def lookup(name, pos):
        if name == symbol:
            return SkewOp.d(tower)
        if name not in names:
            raise ParseError(f"unknown variable {name!r}", _byte(src, pos), src)
        return SkewOp.scalar(tower, tower.gen(name))

    op = evaluate(node, lookup, lambda n: SkewOp.scalar(tower, n), src)
    if kind is SkewOp:
        return op
    try:
        return kind(tower, op.coeffs)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
