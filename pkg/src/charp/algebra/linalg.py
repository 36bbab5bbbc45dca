"""Exact linear algebra over a field domain: kernels and minimal polynomials."""

from __future__ import annotations

from .fields import Field
from .poly import Poly, poly_lcm


def _size(dom: Field, a) -> int:
    """Rough size of a raw element, used only to break pivot ties."""
    num = getattr(a, "num", None)
    if num is None:
        return 0
    return num.degree() + a.den.degree() + sum(_size(dom.base, x) for x in num.c)


class Matrix:
    """Dense ``rows x cols`` matrix of raw elements of ``dom``."""

    __slots__ = ("rows", "dom", "nrows", "ncols")

    def __init__(self, rows, dom: Field, ncols: int | None = None):
        self.rows = [[dom.convert(x) for x in r] for r in rows]
        self.dom = dom
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int, dom: Field):
        return cls([[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)], dom)

    @classmethod
    def zeros(cls, n: int, m: int, dom: Field):
        return cls([[dom.zero] * m for _ in range(n)], dom, m)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.rows!r})"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __add__(self, other):
        add = self.dom.add
        return Matrix([[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.dom)

    def scale(self, s):
        mul = self.dom.mul
        return Matrix([[mul(s, a) for a in r] for r in self.rows], self.dom, self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other.rows)) if other.rows else []
            return Matrix([[self._dot(r, c) for c in cols] for r in self.rows], self.dom, other.ncols)
        return NotImplemented

    def apply(self, v: list) -> list:
        return [self._dot(r, v) for r in self.rows]

    def _dot(self, r, c):
        dom = self.dom
        acc = dom.zero
        for a, b in zip(r, c):
            if not dom.is_zero(a) and not dom.is_zero(b):
                acc = dom.add(acc, dom.mul(a, b))
        return acc

    def transpose(self):
        return Matrix([list(c) for c in zip(*self.rows)], self.dom, self.nrows)

    def is_zero(self) -> bool:
        return all(self.dom.is_zero(a) for r in self.rows for a in r)

    def rref(self):
        """Reduced row echelon form and pivot columns.

        Pivot choice: leftmost column first, then the candidate row holding the
        smallest entry, so the output is deterministic.
        """
        dom = self.dom
        A = [list(r) for r in self.rows]
        pivots = []
        row = 0
        for col in range(self.ncols):
            if row >= len(A):
                break
            cands = [i for i in range(row, len(A)) if not dom.is_zero(A[i][col])]
            if not cands:
                continue
            best = min(cands, key=lambda i: (_size(dom, A[i][col]), i))
            A[row], A[best] = A[best], A[row]
            inv = dom.inv(A[row][col])
            A[row] = [dom.mul(inv, x) for x in A[row]]
            for i in range(len(A)):
                if i != row and not dom.is_zero(A[i][col]):
                    f = A[i][col]
                    A[i] = [dom.sub(x, dom.mul(f, y)) if not dom.is_zero(y) else x
                            for x, y in zip(A[i], A[row])]
            pivots.append(col)
            row += 1
        return A[:row], pivots


def matrix_kernel(M: Matrix) -> list[list]:
    """Basis of the right null space ``{v : M v = 0}``.

    One vector per free column, with a 1 in that column.
    """
    dom = M.dom
    R, pivots = M.rref()
    free = [j for j in range(M.ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [dom.zero] * M.ncols
        v[f] = dom.one
        for r, pc in zip(R, pivots):
            v[pc] = dom.neg(r[f])
        basis.append(v)
    return basis


def vector_min_poly(M: Matrix, v: list) -> Poly:
    """Monic least-degree ``Q`` with ``Q(M) v = 0`` (Krylov sequence)."""
    dom = M.dom
    n = M.nrows
    krylov = [v]
    while True:
        cols = len(krylov)
        A = Matrix([[krylov[j][i] for j in range(cols)] for i in range(n)], dom, cols)
        ker = matrix_kernel(A)
        if ker:
            w = ker[0]
            return Poly(w, dom).monic()
        krylov.append(M.apply(krylov[-1]))


def matrix_min_poly(M: Matrix) -> Poly:
    """Monic minimal polynomial: lcm of the minimal polynomials of basis vectors."""
    if not M.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    dom = M.dom
    Q = Poly.one(dom)
    for i in range(M.nrows):
        e = [dom.zero] * M.nrows
        e[i] = dom.one
        # skip vectors already killed by the running lcm
        if all(dom.is_zero(x) for x in poly_apply(Q, M, e)):
            continue
        Q = poly_lcm(Q, vector_min_poly(M, e))
    return Q


def poly_apply(Q: Poly, M: Matrix, v: list) -> list:
    """``Q(M) v`` by Horner's rule on vectors."""
    dom = M.dom
    acc = [dom.zero] * len(v)
    for a in reversed(Q.c):
        acc = M.apply(acc)
        acc = [dom.add(x, dom.mul(a, y)) for x, y in zip(acc, v)]
    return acc


def poly_of_matrix(Q: Poly, M: Matrix) -> Matrix:
    n = M.nrows
    acc = Matrix.zeros(n, n, M.dom)
    I = Matrix.identity(n, M.dom)
    for a in reversed(Q.c):
        acc = acc * M + I.scale(a)
    return acc
