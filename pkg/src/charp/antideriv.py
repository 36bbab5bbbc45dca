"""Antiderivatives in towers of characteristic p.

An annihilator ``sum c_o d^o(u) = 0`` with constant ``c_o`` is rewritten around
its lowest order ``m`` as ``d^m(u) = sum a_i d^(m+i)(u)``.  Then
``v = sum a_i d^(i-1)(u)`` satisfies ``d^m(dv - u) = 0``.  The defect
``w = dv - u`` is killed by some ``d^n``; it is a constant combination of
``d z, ..., d^n z`` for any ``z`` with ``d^n z = 1``, and such a ``z`` is
obtained from the base variable by adjoining iterated logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .annihilator import fresh_names, p_annihilator
from .errors import MissingBase, PreconditionViolated, VerificationFailed
from .operators import NAIVE_LIMIT, PPoly
from .tower import Log, Tower


def _dn(t: Tower, e, n: int):
    return t.derive_n(e, n) if n <= NAIVE_LIMIT else t.derive_n_fast(e, n)


@dataclass
class UnitDerivChain:
    """``chain[j]`` satisfies ``d^(p^j)(chain[j]) = 1`` in ``tower``."""

    tower: Tower
    chain: list
    new_generators: list = field(default_factory=list)  # (name, Log(u))


@dataclass
class AntiderivResult:
    extended_tower: Tower
    value: object
    new_generators: list
    certificate: PPoly

    @property
    def extended(self) -> bool:
        return bool(self.new_generators)


def build_unit_chain(t: Tower, k: int) -> tuple[Tower, UnitDerivChain]:
    """Adjoin ``k`` logarithms so that ``d^(p^k)`` takes the value 1.

    Level ``j+1`` is ``zeta = log(u_j)`` and ``u_{j+1} = zeta / c_j`` with
    ``c_j = -D(u_j)^p / u_j^p`` for ``D = d^(p^j)``.
    """
    if k < 0:
        raise PreconditionViolated("k must be nonnegative")
    X = t.base_name
    if X is None:
        raise MissingBase("the tower has no base generator X with dX = 1")
    p = t.p
    chain = [t.gen(X)]
    names = fresh_names(t, "zeta", k + 1)[1:] if k else []
    new = []
    for j, name in enumerate(names):
        uj = chain[-1]
        c = -(_dn(t, uj, p**j) ** p) / uj**p
        kind = Log(uj)
        t = t.extend(name, kind)
        new.append((name, t.kind_of(name)))
        nxt = t.gen(name) / t.elem(c)
        chain = [t.elem(x) for x in chain] + [nxt]
        if _dn(t, nxt, p ** (j + 1)) != 1:
            raise VerificationFailed(f"unit chain level {j + 1} does not verify")
    return t, UnitDerivChain(t, chain, new)


def unit_nth(t: Tower, n: int):
    """``(t2, z)`` with ``d^n(z) = 1`` in the extension ``t2``."""
    if n < 1:
        raise PreconditionViolated("n must be at least 1")
    p = t.p
    k = 0
    while p**k < n:
        k += 1
    t2, ch = build_unit_chain(t, k)
    z = _dn(t2, ch.chain[-1], p**k - n)
    if _dn(t2, z, n) != 1:
        raise VerificationFailed("unit_nth result does not verify")
    return t2, z


def logpol_coefficients(t: Tower, w, z, n: int, w_derivatives=None) -> list:
    """Constants ``c_i`` with ``w = sum_{i<n} c_i d^(i+1)(z)``.

    Needs ``d^n(w) = 0`` and ``d^n(z) = 1``.  A caller that already holds
    ``[w, dw, ..., d^n w]`` may pass it as ``w_derivatives``.
    """
    w, z = t.elem(w), t.elem(z)
    if n < 0:
        raise PreconditionViolated("n must be nonnegative")
    if w_derivatives is not None:
        if len(w_derivatives) != n + 1:
            raise PreconditionViolated("w_derivatives must hold orders 0..n")
        W = [t.elem(x) for x in w_derivatives]
        if W[0] != w:
            raise PreconditionViolated("w_derivatives does not start at w")
    else:
        W = t.derivatives(w, n)
    Z = t.derivatives(z, n)
    if W[n]:
        raise PreconditionViolated(f"d^{n}(w) is not zero")
    if Z[n] != 1:
        raise PreconditionViolated(f"d^{n}(z) is not 1")
    # the remainder after i steps is w - sum_{l<i} c_l d^(l+1) z; its
    # derivative of order n-1-i reads off c_i since d^n z = 1
    cs = []
    for i in range(n):
        k = n - 1 - i
        c = W[k]
        for l, cl in enumerate(cs):
            if cl and k + l + 1 <= n:
                c = c - cl * Z[k + l + 1]
        if not t.is_constant(c):
            raise VerificationFailed(f"logpol coefficient {i} is not constant")
        cs.append(c)
    rem = w
    for i, c in enumerate(cs):
        if c:
            rem = rem - c * Z[i + 1]
    if rem:
        raise VerificationFailed("logpol expansion leaves a remainder")
    return cs


def integrate(t: Tower, u, j_max: int | None = None) -> AntiderivResult:
    """An antiderivative of ``u``, in ``t`` or in a logarithmic extension of it."""
    u = t.elem(u)
    P = p_annihilator(t, u, j_max)
    orders = P.orders()
    m = orders[0]
    cm = P.coeffs[m]
    # v = sum a_i d^(i-1)(u) over the orders m+i above m
    top = orders[-1] - m - 1
    seq = t.derivatives(u, top) if 0 <= top <= NAIVE_LIMIT else None
    v = t.zero
    for o in orders[1:]:
        i = o - m
        a = -P.coeffs[o] / cm
        v = v + a * (seq[i - 1] if seq is not None else _dn(t, u, i - 1))
    w = t.derive(v) - u
    # minimal n with d^n(w) = 0, keeping the sequence for the expansion below
    W = [w]
    while W[-1]:
        if len(W) - 1 == m:
            raise VerificationFailed("defect is not killed by d^m")
        W.append(t.derive(W[-1]))
    n = len(W) - 1
    new = []
    if n == 0:
        value, t2 = v, t
    else:
        t2, z = unit_nth(t, n)
        cs = logpol_coefficients(t2, t2.elem(w), z, n, W)
        value = t2.elem(v)
        zi = z
        for i, c in enumerate(cs):
            if i:
                zi = t2.derive(zi)
            if c:
                value = value - c * zi
        # the logarithms were adjoined as a chain; drop the top ones the value does not use
        keep = max(t2.level_of(value) + 1 if value else 0, t.depth)
        if keep < t2.depth:
            value = t2.restrict(value, keep)
            t2 = t if keep == t.depth else t2.prefix(keep)
        new = [(name, t2.kind_of(name)) for name in t2.names[t.depth:]]
    if t2.derive(value) != t2.elem(u):
        raise VerificationFailed("antiderivative does not verify")
    return AntiderivResult(t2, value, new, P)
