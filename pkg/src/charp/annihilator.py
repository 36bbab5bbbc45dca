"""Constant-coefficient annihilators.

Every element ``y`` of a tower of transcendence degree ``k`` satisfies a
relation ``sum c_j d^(p^j)(y) = 0`` (plus possibly ``c * y``) with constant
coefficients ``c_j``: the iterates ``d^(p^j)(y)`` cannot stay linearly
independent over the p-th powers, which span a subfield of index ``p^k``.
The relation is found by writing each iterate in the Frobenius basis
``g**p * t**e`` and solving for the roots ``g`` over the full field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra.linalg import Matrix, matrix_kernel, matrix_min_poly
from .algebra.poly import Poly
from .algebra.rpoly import field_height
from .algebra.zech import ZERO, eval_elem, zech_field
from .errors import BoundExceeded, NonConstantMinPoly, PreconditionViolated, VerificationFailed
from .operators import NAIVE_LIMIT, ConstOp, PPoly, SkewOp
from .tower import LinearBlock, Tower


def default_j_max(t: Tower) -> int:
    return t.depth + 3


def _check_zero(op, ys) -> None:
    for y in ys:
        if op.apply(y):
            raise VerificationFailed(f"annihilator {op.format()} does not kill {y!r}")


def _check_ppoly(P: PPoly, ys, values) -> None:
    """Exact check of ``P(d)(y) = 0`` from the derivatives ``values[o][i] = d^o(y_i)``."""
    for i, y in enumerate(ys):
        acc = P.tower.zero
        for o, c in P.coeffs.items():
            acc = acc + c * values[o][i]
        if acc:
            raise VerificationFailed(f"annihilator {P.format()} does not kill {y!r}")


class Specializer:
    """Evaluate tower elements at a random point of a mid-sized finite field.

    A nonzero minor at the point proves the exact minor nonzero, so the rank
    of a specialized matrix is a lower bound for the exact rank.
    """

    def __init__(self, t: Tower, seed: int = 0):
        self.t = t
        self.Z = zech_field(t.p)
        self.rng = random.Random(seed)
        self.redraw()

    def redraw(self):
        self.point = [self.Z.random(self.rng) for _ in range(self.t.depth)]

    def __call__(self, x):
        """Value at the current point; ZeroDivisionError on a vanishing denominator."""
        return eval_elem(self.Z, x, self.t.field, self.point)


def _zech_rank_rows(Z, rows, ncols) -> list[int]:
    """Indices of a maximal set of independent rows (greedy, in order)."""
    basis = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(rows):
        r = list(row)
        for pc, b in basis:
            if r[pc] != ZERO:
                f = r[pc]
                r = [Z.sub(x, Z.mul(f, y)) for x, y in zip(r, b)]
        piv = next((j for j in range(ncols) if r[j] != ZERO), None)
        if piv is None:
            continue
        inv = Z.inv(r[piv])
        r = [Z.mul(inv, x) for x in r]
        # keep the basis reduced on its pivots
        basis = [(pc, [Z.sub(x, Z.mul(b[piv], y)) for x, y in zip(b, r)]) for pc, b in basis]
        basis.append((piv, r))
        chosen.append(idx)
        if len(chosen) == ncols:
            break
    return chosen


class _DependenceSearch:
    """Columns arrive one at a time; report the first constant relation."""

    def __init__(self, t: Tower, seed: int = 0):
        self.t = t
        self.keys: dict = {}
        self.columns: list = []
        usable = zech_field(t.p) and t.depth and field_height(t.field) == t.depth
        self.spec = Specializer(t, seed) if usable else None
        self.values: list = []  # specialized columns, {key: value}

    def push(self, vals):
        t = self.t
        col = {}
        for i, v in enumerate(vals):
            for e, g in t.frobenius_decompose(v).terms.items():
                col[(i, e)] = g
                self.keys.setdefault((i, e), len(self.keys))
        self.columns.append(col)
        if self.spec is not None:
            for attempt in range(8):
                try:
                    if attempt:
                        self.spec.redraw()
                        self.values = [self._special(c) for c in self.columns[:-1]]
                    self.values.append(self._special(col))
                    break
                except ZeroDivisionError:
                    continue
            else:
                self.spec = None
        return self.relation()

    def _special(self, col):
        return {k: self.spec(g) for k, g in col.items()}

    def relation(self):
        F = self.t.field
        n = len(self.columns)
        if not self.keys:
            return [F.one] + [F.zero] * (n - 1) if n == 1 else None
        keys = list(self.keys)
        if self.spec is not None:
            Z = self.spec.Z
            rows = [[v.get(k, ZERO) for v in self.values] for k in keys]
            chosen = _zech_rank_rows(Z, rows, n)
            if len(chosen) == n:
                return None
            sub = [keys[i] for i in chosen]
        else:
            sub = keys
        ker = matrix_kernel(Matrix([[c.get(k, F.zero) for c in self.columns] for k in sub], F, n))
        if not ker:
            return None
        vec = ker[-1]
        if self.spec is not None:
            # the chosen rows are independent, so the kernel is a line; check the rest
            for k in keys:
                acc = F.zero
                for d, c in zip(vec, self.columns):
                    g = c.get(k)
                    if g is not None and d:
                        acc = acc + d * g
                if acc:
                    return None
        return vec


def joint_annihilator(t: Tower, ys, j_max: int | None = None, identity: bool = True) -> PPoly:
    """One ``P`` with ``P(d)(y) = 0`` for every ``y`` in ``ys``.

    The candidate orders are ``0`` (only when ``identity``) and
    ``1, p, p^2, ...``.  The first linear dependence of the stacked vectors
    ``(d^o(y_1), ..., d^o(y_m))`` over the constants is returned, normalized
    so the highest order has coefficient 1.  With ``identity=False`` the
    result is a derivation.
    """
    ys = [t.elem(y) for y in ys]
    if not ys:
        raise PreconditionViolated("no elements to annihilate")
    if j_max is None:
        j_max = default_j_max(t)
    if j_max < 1:
        raise PreconditionViolated("j_max must be at least 1")
    p = t.p
    orders = []
    values = {}
    search = _DependenceSearch(t)
    if identity:
        orders.append(0)
        values[0] = ys
        rel = search.push(ys)
        if rel is not None:
            return _finish(t, orders, rel, ys, values)
    for j in range(j_max + 1):
        o = p**j
        orders.append(o)
        values[o] = [t.derive_ppow(y, j) for y in ys]
        rel = search.push(values[o])
        if rel is not None:
            return _finish(t, orders, rel, ys, values)
    raise BoundExceeded(f"no annihilator with orders up to {p}^{j_max}",
                        j_max=j_max, theoretical=p**t.depth)


def p_annihilator(t: Tower, y, j_max: int | None = None, identity: bool = True) -> PPoly:
    """Constant-coefficient ``P`` supported on ``{0} U {p^j}`` with ``P(d)(y) = 0``."""
    return joint_annihilator(t, [y], j_max, identity)


def constant_kernel(t: Tower, vectors) -> list[list]:
    """Basis of ``{x constant : sum x_j vectors[j] = 0}``.

    Each entry is split in the Frobenius basis; a kernel vector ``d`` of the
    root system gives the constant relation ``x = d**p``.
    """
    keys: dict = {}
    columns = []
    for vec in vectors:
        col = {}
        for i, v in enumerate(vec):
            for e, g in t.frobenius_decompose(v).terms.items():
                col[(i, e)] = g
                keys.setdefault((i, e), len(keys))
        columns.append(col)
    F = t.field
    n = len(columns)
    rows = [[F.zero] * n for _ in keys]
    for j, col in enumerate(columns):
        for key, g in col.items():
            rows[keys[key]][j] = g
    if not rows:
        ker = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    else:
        ker = matrix_kernel(Matrix(rows, F, n))
    return [[F.pow(d, t.p) for d in vec] for vec in ker]


def _finish(t: Tower, orders, rel, ys, values) -> PPoly:
    p = t.p
    coeffs = {}
    for o, d in zip(orders, rel):
        if d:
            coeffs[o] = t.field.pow(d, p)
    P = PPoly(t, coeffs, check=False)
    for o, c in P.coeffs.items():
        if not t.is_constant(c):
            raise VerificationFailed(f"coefficient of order {o} is not constant")
    _check_ppoly(P, ys, values)
    return P


def carlitz_coefficient(t: Tower, u, r: int) -> object:
    """``A_r = sum_{i<=r} (d^(p^i) u)^(p^(r-i))``.

    For ``E`` with ``dE = du * E`` this is the factor in ``d^(p^r)(E) = A_r E``.
    """
    if r < 0:
        raise PreconditionViolated("r must be nonnegative")
    p = t.p
    acc = t.zero
    for i in range(r + 1):
        n = p**i
        d = t.derive_n(u, n) if n <= NAIVE_LIMIT else t.derive_n_fast(u, n)
        acc = acc + d ** (p ** (r - i))
    return acc


# -- reduction to constant coefficients ---------------------------------------

@dataclass
class Reduction:
    """Output of :func:`reduce_with_certificate`.

    ``matrix`` holds the action of ``D = P(d)`` on the block generators in the
    column convention ``D(Y_j) = sum_i matrix[i][j] Y_i``.
    """

    operator: ConstOp
    annihilator: PPoly
    matrix: Matrix
    minpoly: Poly
    block_tower: Tower
    block_names: tuple


def fresh_names(t: Tower, stem: str, count: int) -> list[str]:
    used = set(t.names) | {"D"}
    out = []
    k = 0
    while len(out) < count:
        name = stem if k == 0 else f"{stem}{k}"
        k += 1
        if name not in used:
            out.append(name)
            used.add(name)
    return out


def _companion(t: Tower, op: SkewOp, names):
    n = op.order()
    lead = op.leading()
    rows = []
    for i in range(n - 1):
        rows.append(tuple(t.one if j == i + 1 else t.zero for j in range(n)))
    rows.append(tuple(-op[j] / lead for j in range(n)))
    return LinearBlock(tuple(names), tuple(rows))


def _coords(B: Tower, v, start: int, m: int) -> list:
    """Coefficients of ``v = sum a_i Y_i`` with ``a_i`` in the first ``start`` levels."""
    sub = B.prefix(start)
    x = v
    coords = [None] * m
    for idx in range(m - 1, -1, -1):
        lvl = start + idx
        base = B.levels[lvl].field.base
        if x.den.degree() != 0 or x.num.degree() > 1:
            raise VerificationFailed("block image is not linear in the block generators")
        coords[idx] = x.num[1] if x.num.degree() == 1 else base.zero
        x = x.num[0] if x.num else base.zero
        # lower coords[idx] from level lvl-1 to start-1
        c = coords[idx]
        for k in range(lvl - 1, start - 1, -1):
            if c.num.degree() > 0 or c.den.degree() > 0:
                raise VerificationFailed("block image is not linear in the block generators")
            c = c.num[0] if c.num else B.levels[k].field.base.zero
        coords[idx] = sub.elem(c)
    if x:
        raise VerificationFailed("block image has an inhomogeneous part")
    return coords


def reduce_with_certificate(t: Tower, op: SkewOp, y_names=None, j_max: int | None = None) -> Reduction:
    """Reduce ``op`` (coefficients in ``t``) to a constant-coefficient operator.

    ``P`` is a joint derivation annihilator of the coefficients, so ``D = P(d)``
    vanishes on them and acts linearly on solutions.  Its matrix on the
    companion basis has a minimal polynomial ``Q`` with constant coefficients;
    ``Q(P(T))`` annihilates every solution of ``op``.

    When ``y_names`` names a linear block of ``t``, that block is used as the
    solution basis and the coefficients live in the levels below it.
    """
    if y_names is None:
        base = t
        if op.tower is not t:
            op = SkewOp(t, op.coeffs)
        n = op.order()
        if n < 1:
            raise PreconditionViolated("operator must have order at least 1")
        names = fresh_names(t, "Y", n)
        B = t.extend(None, _companion(t, op, names))
        start = t.depth
    else:
        names = tuple(y_names)
        start = t.index(names[0])
        if [t.levels[start + i].name for i in range(len(names))] != list(names):
            raise PreconditionViolated("y_names must list a block in order")
        B = t
        base = t.prefix(start)
        try:
            op = SkewOp(base, {k: t.restrict(a, start) for k, a in op.coeffs.items()})
        except ValueError as exc:
            raise PreconditionViolated(f"operator coefficients must lie below the block: {exc}") from None
        if op.order() < 1:
            raise PreconditionViolated("operator must have order at least 1")
    m = len(names)
    P = joint_annihilator(base, list(op.coeffs.values()), j_max, identity=False)
    PB = ConstOp(B, {o: B.elem(c) for o, c in P.coeffs.items()}, check=False)
    F = base.field
    cols = [_coords(B, PB.apply(B.gen(y)), start, m) for y in names]
    M = Matrix([[cols[j][i] for j in range(m)] for i in range(m)], F)
    Q = matrix_min_poly(M)
    for k, c in Q.terms():
        if not base.is_constant(c):
            raise NonConstantMinPoly(f"coefficient of T^{k} in the minimal polynomial is not constant")
    out = ConstOp.from_poly(base, Q.compose(P.poly()))
    check = ConstOp(B, {o: B.elem(c) for o, c in out.coeffs.items()}, check=False)
    _check_zero(check, [B.gen(names[0])])
    return Reduction(out, P, M, Q, B, tuple(names))


def reduce_to_constant_coeffs(t: Tower, op: SkewOp, y_names=None, j_max: int | None = None) -> ConstOp:
    """``Q(P(T))`` annihilating every solution of ``op``; see :func:`reduce_with_certificate`."""
    return reduce_with_certificate(t, op, y_names, j_max).operator
