"""Recursive dense polynomials over F_p and their gcd.

Euclid's algorithm over a nested rational function field normalizes every
intermediate coefficient with further gcds one level down, and the sizes of
those coefficients swell quickly.  Clearing denominators and running a
primitive remainder sequence on integral polynomials keeps every intermediate
result as small as the inputs allow and reduces all work to F_p[x].

An element with ``v`` variables is an ``int`` when ``v == 0`` and otherwise a
trimmed list of ``v - 1`` variable elements (coefficient ``i`` multiplies the
``i``-th power of the outermost variable).  Zero is ``0`` or ``[]``.
"""

from __future__ import annotations

from functools import lru_cache

from .fields import PrimeField


@lru_cache(maxsize=None)
def _fp(p: int) -> PrimeField:
    return PrimeField(p)


def _zero(v):
    return 0 if v == 0 else []


def _trim(a):
    while a and (a[-1] == 0 or a[-1] == []):
        a.pop()
    return a


def add(a, b, v, p):
    if v == 0:
        return (a + b) % p
    if v == 1:
        return _fp(p).poly_add(a, b)
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add(out[i], y, v - 1, p)
    return _trim(out)


def neg(a, v, p):
    if v == 0:
        return -a % p
    if v == 1:
        return [-x % p for x in a]
    return [neg(x, v - 1, p) for x in a]


def sub(a, b, v, p):
    if v == 1:
        return _fp(p).poly_sub(a, b)
    return add(a, neg(b, v, p), v, p)


def mul(a, b, v, p):
    if v == 0:
        return a * b % p
    if not a or not b:
        return []
    if v == 1:
        return _fp(p).poly_mul(a, b)
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y, v - 1, p), v - 1, p)
    return _trim(out)


def scale(a, s, v, p):
    """Multiply the ``v``-variable element ``a`` by the ``v - 1`` variable element ``s``."""
    if not a or not s:
        return []
    return _trim([mul(x, s, v - 1, p) for x in a])


def is_unit(a, v) -> bool:
    while v:
        if len(a) != 1:
            return False
        a, v = a[0], v - 1
    return a != 0


def lc_scalar(a, v) -> int:
    while v:
        a, v = a[-1], v - 1
    return a


def divexact(a, b, v, p):
    """``a / b``, which must be exact."""
    if v == 0:
        return a * pow(b, p - 2, p) % p
    if not a:
        return []
    if v == 1:
        q, r = _fp(p).poly_divmod(a, b)
        if r:
            raise ArithmeticError("inexact division")
        return q
    if len(b) == 1:
        return [divexact(x, b[0], v - 1, p) for x in a]
    r = list(a)
    db = len(b) - 1
    q = [[] for _ in range(len(a) - db)] if len(a) > db else []
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        c = divexact(r[-1], b[-1], v - 1, p)
        q[k] = c
        sb = [[] for _ in range(k)] + scale(b, c, v, p)
        r = sub(r, sb, v, p)
    if r:
        raise ArithmeticError("inexact division")
    return _trim(q)


def prem_full(a, b, v, p):
    """``lc(b)^(deg a - deg b + 1) * a mod b``."""
    lb = b[-1]
    db = len(b) - 1
    r = list(a)
    for k in range(len(a) - 1 - db, -1, -1):
        lr = r[db + k] if db + k < len(r) else _zero(v - 1)
        r = [mul(x, lb, v - 1, p) for x in r]
        if lr != 0 and lr != []:
            sb = scale(b, lr, v, p)
            for j, y in enumerate(sb):
                r[k + j] = sub(r[k + j], y, v - 1, p)
        _trim(r)
    return _trim(r)


def subresultant_prs(a, b, v, p):
    """Last nonzero subresultant of ``a`` and ``b`` (``v >= 2``, ``deg a >= deg b >= 1``).

    It is a gcd of the two up to a factor free of the outer variable; the
    known extraneous factors are removed by exact division, so no gcds of
    coefficients are needed along the way.
    """
    g = h = _one(v - 1)
    while True:
        d = len(a) - len(b)
        r = prem_full(a, b, v, p)
        if not r:
            return b
        if len(r) == 1:
            return _one(v)
        a = b
        div = mul(g, _pow(h, d, v - 1, p), v - 1, p)
        b = [divexact(x, div, v - 1, p) for x in r] if not is_unit(div, v - 1) else r
        g = a[-1]
        if d == 0:
            continue
        h = divexact(_pow(g, d, v - 1, p), _pow(h, d - 1, v - 1, p), v - 1, p)


def _pow(x, n, v, p):
    out = _one(v)
    for _ in range(n):
        out = mul(out, x, v, p)
    return out


def content(a, v, p):
    """Gcd of the coefficients of ``a`` (``v >= 2``)."""
    g = _zero(v - 1)
    # small coefficients first: the gcd usually collapses to 1 early
    for x in sorted(a, key=_size):
        g = gcd(g, x, v - 1, p)
        if is_unit(g, v - 1):
            return g
    return g


def _size(x) -> int:
    if isinstance(x, int):
        return 0
    return sum(_size(c) + 1 for c in x)


def primitive_part(a, v, p):
    c = content(a, v, p)
    if is_unit(c, v - 1):
        return a
    return [divexact(x, c, v - 1, p) for x in a]


def normalize(a, v, p):
    """Scale so the innermost leading coefficient is 1."""
    if v == 0:
        return 1 if a else 0
    if not a:
        return a
    s = lc_scalar(a, v)
    if s == 1:
        return a
    inv = pow(s, p - 2, p)
    return _scale_int(a, inv, v, p)


def _scale_int(a, s, v, p):
    if v == 0:
        return a * s % p
    return [_scale_int(x, s, v - 1, p) for x in a]


def gcd(a, b, v, p):
    """Normalized gcd in ``F_p[x_1, ..., x_v]``."""
    if v == 0:
        return 1 if (a or b) else 0
    if not a:
        return normalize(b, v, p)
    if not b:
        return normalize(a, v, p)
    if v == 1:
        F = _fp(p)
        while b:
            a, b = b, F.poly_divmod(a, b)[1]
        return normalize(a, v, p)
    if len(a) == 1 or len(b) == 1:
        # one side is free of the outer variable
        c = a[0] if len(a) == 1 else b[0]
        other = b if len(a) == 1 else a
        return normalize([gcd(c, content(other, v, p), v - 1, p)], v, p)
    ca, cb = content(a, v, p), content(b, v, p)
    c = gcd(ca, cb, v - 1, p)
    if not is_unit(ca, v - 1):
        a = [divexact(x, ca, v - 1, p) for x in a]
    if not is_unit(cb, v - 1):
        b = [divexact(x, cb, v - 1, p) for x in b]
    if len(a) < len(b):
        a, b = b, a
    g = subresultant_prs(a, b, v, p)
    g = None if len(g) == 1 else primitive_part(g, v, p)
    if g is None:
        return normalize([c], v, p)
    return normalize(scale(g, c, v, p), v, p)


def gcd_over_fractions(a, b, v, p):
    """Gcd of ``a`` and ``b`` up to a factor free of the outer variable (``v >= 2``).

    This is all a gcd over the fraction field needs, and it skips the content
    of the inputs, which is the expensive part when they are large.
    """
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return _one(v)
    g = subresultant_prs(a, b, v, p)
    return g if len(g) == 1 else primitive_part(g, v, p)


# -- conversion from nested rational function fields -------------------------

def field_height(dom) -> int | None:
    """Number of rational function layers over a prime field, or None."""
    h = 0
    while not isinstance(dom, PrimeField):
        base = getattr(dom, "base", None)
        if base is None:
            return None
        dom, h = base, h + 1
    return h


def elem_to_frac(x, dom, h: int, p: int):
    """``(num, den)`` with ``h`` variables for an element of a height-``h`` field."""
    if h == 0:
        return int(x) % p, 1
    nn, ln = poly_to_integral(x.num, h - 1, p)
    nd, ld = poly_to_integral(x.den, h - 1, p)
    return scale(nn, ld, h, p), scale(nd, ln, h, p)


def poly_to_integral(P, h: int, p: int):
    """``(A, L)``: ``P = A / L`` with ``A`` in ``h + 1`` variables and ``L`` in ``h``."""
    dom = P.dom
    fracs = [elem_to_frac(c, dom, h, p) for c in P.c]
    L = _one(h)
    for _, d in fracs:
        if not is_unit(d, h):
            g = gcd(L, d, h, p)
            L = mul(L, divexact(d, g, h, p), h, p)
    out = []
    for n, d in fracs:
        out.append(mul(n, divexact(L, d, h, p), h, p) if n != 0 and n != [] else _zero(h))
    return _trim(out), L


def _one(v):
    x = 1
    for _ in range(v):
        x = [x]
    return x


def integral_to_elem(x, dom, h: int):
    """Element of a height-``h`` field from an ``h`` variable integral element."""
    if h == 0:
        return dom.convert(x)
    from .poly import Poly

    base = dom.base
    return dom.from_poly(Poly([integral_to_elem(c, base, h - 1) for c in x], base))
