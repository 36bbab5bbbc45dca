"""Towers of differential fields over F_p.

A tower ``F_p(t_0)(t_1)...(t_{n-1})`` is stored as nested
:class:`~charp.algebra.ratfunc.RatFuncField` levels, one per generator, each
with the rule giving ``d(t_i)``.  All generators are treated as independent
transcendentals.  Elements of the tower are the :class:`RatFunc` values of the
top level; lower-level values are lifted on entry.

The derivation is applied level by level with ``D(Q(t)) = Q^D(t) + Q'(t) D(t)``,
where ``Q^D`` applies ``D`` to the coefficients.  The same routine evaluates any
derivation given by its values on the generators, which is how
``d^(p^j)`` (itself a derivation in characteristic p) is computed without
``p^j`` applications of ``d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

from .algebra.fields import PrimeField, is_prime
from .algebra.poly import Poly
from .algebra.ratfunc import RatFunc, RatFuncField
from .errors import SpecError

Elem = Any  # RatFunc of the top level, or an int when the tower has no generators


@dataclass(frozen=True)
class Base:
    """``dX = 1``."""


@dataclass(frozen=True)
class Primitive:
    """``dt = f``."""

    f: Any


@dataclass(frozen=True)
class Log:
    """``dt = du/u``."""

    u: Any


@dataclass(frozen=True)
class HyperExp:
    """``dt = f t``."""

    f: Any


@dataclass(frozen=True)
class Exp:
    """``dt = du t``."""

    u: Any


@dataclass(frozen=True)
class LinearBlock:
    """Generators ``Y_i`` with ``dY_i = sum_j M[i][j] Y_j``."""

    names: tuple
    matrix: tuple


KIND_NAMES = {Base: "base", Primitive: "primitive", Log: "log", HyperExp: "hyperexp",
              Exp: "exp", LinearBlock: "linear_block"}


@dataclass(frozen=True)
class Level:
    name: str
    kind: Any
    field: RatFuncField
    reach: int
    block: tuple = ()


@dataclass(frozen=True)
class FrobDecomp:
    """``e = sum g**p * prod(t_i**k_i)`` over multi-exponents ``k`` in ``{0..p-1}^n``."""

    terms: dict = field(default_factory=dict)

    def reconstruct(self, tower: "Tower") -> Elem:
        acc = tower.zero
        for k, g in self.terms.items():
            acc = acc + g ** tower.p * tower.monomial(k)
        return acc


class Tower:
    """An immutable differential field ``F_p(t_0, ..., t_{n-1})``.

    Build one with :meth:`Tower.empty` followed by :meth:`extend`, or with
    :func:`tower_build` from a serialized description.
    """

    def __init__(self, p: int, levels: tuple = (), rules: tuple = ()):
        if not is_prime(p):
            raise SpecError(f"characteristic {p} is not prime")
        self.p = p
        self.prime = PrimeField(p) if not levels else levels[0].field.base
        self.levels = levels
        self.rules = rules
        self._images = [list(rules)]

    @classmethod
    def empty(cls, p: int) -> "Tower":
        return cls(p)

    # -- structure -------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def field(self):
        return self.levels[-1].field if self.levels else self.prime

    @property
    def names(self) -> list[str]:
        return [lv.name for lv in self.levels]

    def index(self, name: str) -> int:
        for i, lv in enumerate(self.levels):
            if lv.name == name:
                return i
        raise KeyError(name)

    @property
    def base_name(self) -> str | None:
        for lv in self.levels:
            if isinstance(lv.kind, Base):
                return lv.name
        return None

    def __repr__(self):
        gens = ", ".join(f"{lv.name}:{KIND_NAMES[type(lv.kind)]}" for lv in self.levels)
        return f"Tower(p={self.p}; {gens})"

    # -- elements --------------------------------------------------------

    @property
    def zero(self) -> Elem:
        return self.field.zero

    @property
    def one(self) -> Elem:
        return self.field.one

    def gen(self, name: str) -> Elem:
        i = self.index(name)
        return self._lift(self.levels[i].field.gen, i, self.top)

    def gens(self) -> list:
        return [self.gen(n) for n in self.names]

    def monomial(self, exps) -> Elem:
        acc = self.one
        for i, k in enumerate(exps):
            if k:
                acc = acc * self._lift(self.levels[i].field.gen, i, self.top) ** k
        return acc

    def elem(self, x) -> Elem:
        """Coerce ``x`` (int, expression string, or element of a sub-tower) to the top level."""
        if isinstance(x, str):
            from .expr import parse_expr
            return parse_expr(x, self)
        if isinstance(x, RatFunc):
            lvl = x.field.level
            if lvl > self.top or self.levels[lvl].field is not x.field:
                raise SpecError("element does not belong to this tower")
            return self._lift(x, lvl, self.top)
        if isinstance(x, int):
            return self.field.convert(x)
        raise TypeError(f"cannot interpret {type(x).__name__} as a tower element")

    __call__ = elem

    def contains(self, x) -> bool:
        if isinstance(x, RatFunc):
            lvl = x.field.level
            return lvl <= self.top and self.levels[lvl].field is x.field
        return isinstance(x, int)

    def level_of(self, x) -> int:
        """Lowest level containing ``x`` (by inspection of the coefficients)."""
        i = self.top
        while i >= 0 and x.num.degree() <= 0 and x.den.degree() == 0:
            x = x.num[0] if x.num else self.levels[i].field.base.zero
            i -= 1
        return i

    def prefix(self, n: int) -> "Tower":
        """The sub-tower made of the first ``n`` levels."""
        if n == self.depth:
            return self
        return Tower(self.p, self.levels[:n], self.rules[:n])

    def restrict(self, e, n: int) -> Elem:
        """``e`` as an element of ``prefix(n)``; it must not involve higher generators."""
        x = self.elem(e)
        for i in range(self.top, n - 1, -1):
            if x.num.degree() > 0 or x.den.degree() > 0:
                raise ValueError(f"element involves generator {self.levels[i].name!r}")
            x = x.num[0] if x.num else self._zero_at(i - 1)
        return x

    def _lift(self, x, i: int, r: int):
        for k in range(i + 1, r + 1):
            x = self.levels[k].field.const(x)
        return x

    def _zero_at(self, r: int):
        return self.levels[r].field.zero if r >= 0 else 0

    # -- extension -------------------------------------------------------

    def extend(self, name, kind) -> "Tower":
        """New tower with one more generator (or a block of generators)."""
        if isinstance(kind, LinearBlock):
            return self._extend_block(kind)
        if not isinstance(name, str) or not name.isidentifier():
            raise SpecError(f"invalid generator name {name!r}")
        if name in self.names:
            raise SpecError(f"generator name {name!r} already used")
        if isinstance(kind, Base) and self.base_name is not None:
            raise SpecError("a tower has at most one base generator")
        kind = self._resolve(kind)
        if isinstance(kind, Log) and not kind.u:
            raise SpecError("log of zero")
        base_field = self.field
        F = RatFuncField(base_field, name)
        i = self.depth
        t = F.gen
        if isinstance(kind, Base):
            rule = F.one
        elif isinstance(kind, Primitive):
            rule = F.const(kind.f) if self.levels else F.convert(kind.f)
        elif isinstance(kind, Log):
            rule = F.convert(self.derive(kind.u) / kind.u) if self.levels else F.zero
        elif isinstance(kind, HyperExp):
            rule = F.convert(kind.f) * t
        elif isinstance(kind, Exp):
            rule = F.convert(self.derive(kind.u) if self.levels else 0) * t
        else:
            raise SpecError(f"unknown generator kind {kind!r}")
        lv = Level(name, kind, F, i)
        return Tower(self.p, self.levels + (lv,), self.rules + (rule,))

    def _extend_block(self, kind: LinearBlock) -> "Tower":
        names = tuple(kind.names)
        m = len(names)
        if m == 0 or len(kind.matrix) != m or any(len(r) != m for r in kind.matrix):
            raise SpecError("linear block needs a square matrix matching its names")
        for n in names:
            if not isinstance(n, str) or not n.isidentifier():
                raise SpecError(f"invalid generator name {n!r}")
        if len(set(names)) != m or set(names) & set(self.names):
            raise SpecError("linear block names clash")
        matrix = tuple(tuple(self.elem(a) for a in row) for row in kind.matrix)
        kind = LinearBlock(names, matrix)
        levels = list(self.levels)
        F = self.field
        start = self.depth
        top = start + m - 1
        for k, n in enumerate(names):
            F = RatFuncField(F, n)
            levels.append(Level(n, kind, F, top, block=names))
        tower = Tower(self.p, tuple(levels), self.rules + (None,) * m)
        Ys = [tower.gen(n) for n in names]
        rules = []
        for row in matrix:
            acc = tower.zero
            for a, Y in zip(row, Ys):
                acc = acc + tower.elem(a) * Y
            rules.append(acc)
        return Tower(self.p, tuple(levels), self.rules + tuple(rules))

    def _resolve(self, kind):
        """Replace expression-string arguments by elements of this tower."""
        if isinstance(kind, Base):
            return kind
        attr = "f" if isinstance(kind, (Primitive, HyperExp)) else "u"
        val = getattr(kind, attr)
        if not self.levels:
            if isinstance(val, str):
                from .expr import parse_expr
                val = parse_expr(val, self)
            if isinstance(val, RatFunc):
                raise SpecError("argument references an unknown generator")
            return replace(kind, **{attr: self.prime.convert(val)})
        return replace(kind, **{attr: self.elem(val)})

    def kind_of(self, name: str):
        return self.levels[self.index(name)].kind

    def derive_rule(self, name: str) -> Elem:
        """``d(t)`` for the named generator, as a top-level element."""
        i = self.index(name)
        return self._lift(self.rules[i], self.levels[i].reach, self.top)

    # -- derivation --------------------------------------------------------

    def _apply(self, i: int, x, img):
        """Apply the derivation with generator images ``img`` to level-``i`` value ``x``.

        The result lives at level ``levels[i].reach``.
        """
        if i < 0:
            return 0
        r = self.levels[i].reach
        dnum = self._dpoly(i, x.num, img)
        if x.den.degree() == 0:
            return dnum
        F = self.levels[i].field
        dden = self._dpoly(i, x.den, img)
        if not dden:
            return dnum / self._lift(F.from_poly(x.den), i, r)
        return (dnum - self._lift(x, i, r) * dden) / self._lift(F.from_poly(x.den), i, r)

    def _dpoly(self, i: int, P: Poly, img):
        lv = self.levels[i]
        F = lv.field
        r = lv.reach
        part = self._zero_at(r)
        if i > 0:
            rb = self.levels[i - 1].reach
            ds = [self._apply(i - 1, a, img) for a in P.c]
            if rb < i:
                ds = [self._lift(d, rb, i - 1) for d in ds]
                part = self._lift(F.from_poly(Poly(ds, F.base)), i, r)
            else:
                t = self._lift(F.gen, i, r)
                for d in reversed(ds):
                    part = part * t + self._lift(d, rb, r)
        dP = P.derivative()
        if dP:
            part = part + self._lift(F.from_poly(dP), i, r) * img[i]
        return part

    def derive(self, e) -> Elem:
        """The derivation of the tower applied to ``e``."""
        if not self.levels:
            return 0
        return self._apply(self.top, self.elem(e), self.rules)

    def apply_derivation(self, e, images) -> Elem:
        """Derivation determined by ``images[i] = D(t_i)`` (top-level values)."""
        img = [self._lower(self.elem(v), self.levels[i].reach) for i, v in enumerate(images)]
        return self._apply(self.top, self.elem(e), img)

    def _lower(self, x, r: int):
        for _ in range(self.top - r):
            if x.num.degree() > 0 or x.den.degree() > 0:
                raise ValueError("generator image escapes its level")
            x = x.num[0] if x.num else x.field.base.zero
        return x

    def derivatives(self, e, n: int) -> list:
        """``[e, de, ..., d^n e]`` by repeated application of ``d``."""
        if n < 0:
            raise ValueError("negative derivation order")
        seq = [self.elem(e)]
        for _ in range(n):
            seq.append(self.derive(seq[-1]) if seq[-1] else seq[-1])
        return seq

    def derive_n(self, e, n: int) -> Elem:
        """``d^n(e)`` by ``n``-fold application."""
        return self.derivatives(e, n)[-1]

    def ppow_images(self, j: int) -> list:
        """Values of ``d^(p^j)`` on the generators, each at its reach level."""
        while len(self._images) <= j:
            prev = self._images[-1]
            nxt = []
            for i, lv in enumerate(self.levels):
                x = prev[i]
                for _ in range(self.p - 1):
                    if not x:
                        break
                    x = self._apply(lv.reach, x, prev)
                nxt.append(x)
            self._images.append(nxt)
        return self._images[j]

    def derive_ppow(self, e, j: int) -> Elem:
        """``d^(p^j)(e)``, evaluated as a derivation."""
        if not self.levels:
            return 0
        return self._apply(self.top, self.elem(e), self.ppow_images(j))

    def derive_n_fast(self, e, n: int) -> Elem:
        """``d^n(e)`` through the base-p digits of ``n``."""
        x = self.elem(e)
        j = 0
        while n and x:
            n, digit = divmod(n, self.p)
            for _ in range(digit):
                if not x:
                    break
                x = self._apply(self.top, x, self.ppow_images(j))
            j += 1
        return x

    def is_constant(self, e) -> bool:
        return not self.derive(e)

    # -- Frobenius ----------------------------------------------------------

    def frobenius_decompose(self, e) -> FrobDecomp:
        """Write ``e`` as ``sum g_k**p * t**k`` with exponents ``k`` below ``p``."""
        e = self.elem(e)
        if not self.levels:
            return FrobDecomp({(): e} if e else {})
        return FrobDecomp(self._frob(self.top, e))

    def _frob(self, i: int, x) -> dict:
        if i < 0:
            return {(): x} if x else {}
        if not x:
            return {}
        p = self.p
        F = self.levels[i].field
        M = x.num * x.den ** (p - 1) if x.den.degree() > 0 else x.num
        groups: dict = {}
        for k, c in M.terms():
            m, r = divmod(k, p)
            for key, g in self._frob(i - 1, c).items():
                groups.setdefault(key + (r,), {})[m] = g
        out = {}
        zero = F.base.zero
        for key, coeffs in groups.items():
            num = Poly([coeffs.get(m, zero) for m in range(max(coeffs) + 1)], F.base)
            out[key] = F.make(num, x.den)
        return out

    def pth_root(self, e):
        """``r`` with ``r**p == e`` when ``e`` is a p-th power, else ``None``."""
        e = self.elem(e)
        if not self.levels:
            return e
        return self._root(self.top, e)

    def _root(self, i: int, x):
        if i < 0:
            return x
        n = self._poly_root(i, x.num)
        if n is None:
            return None
        d = self._poly_root(i, x.den)
        if d is None:
            return None
        return RatFunc(n, d, self.levels[i].field)

    def _poly_root(self, i: int, P: Poly):
        p = self.p
        base = self.levels[i].field.base
        out = [base.zero] * (P.degree() // p + 1) if P else []
        for k, c in P.terms():
            if k % p:
                return None
            r = self._root(i - 1, c)
            if r is None:
                return None
            out[k // p] = r
        return Poly(out, base, True)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        from .expr import format_elem
        gens = []
        seen_blocks = set()
        for i, lv in enumerate(self.levels):
            k = lv.kind
            sub = Tower(self.p, self.levels[:i], self.rules[:i])
            if isinstance(k, LinearBlock):
                if k.names in seen_blocks:
                    continue
                seen_blocks.add(k.names)
                gens.append({"names": list(k.names), "kind": "linear_block",
                             "arg": [[format_elem(sub.elem(a), sub) for a in row] for row in k.matrix]})
            elif isinstance(k, Base):
                gens.append({"name": lv.name, "kind": "base"})
            else:
                val = k.f if isinstance(k, (Primitive, HyperExp)) else k.u
                arg = format_elem(val, sub) if sub.levels else str(val)
                gens.append({"name": lv.name, "kind": KIND_NAMES[type(k)], "arg": arg})
        return {"p": self.p, "generators": gens}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


_KINDS = {"base": Base, "primitive": Primitive, "log": Log, "hyperexp": HyperExp, "exp": Exp}


def tower_build(spec) -> Tower:
    """Build a tower from its JSON document (dict or string).

    ``{"p": 3, "generators": [{"name": "X", "kind": "base"},
    {"name": "E", "kind": "hyperexp", "arg": "2*X"}]}``
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError(f"tower spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "p" not in spec:
        raise SpecError("tower spec needs a 'p' entry")
    p = spec["p"]
    if not isinstance(p, int):
        raise SpecError("p must be an integer")
    t = Tower.empty(p)
    for g in spec.get("generators", []):
        if not isinstance(g, dict) or "kind" not in g:
            raise SpecError(f"bad generator entry {g!r}")
        kind = g["kind"]
        if kind == "linear_block":
            names = g.get("names", g.get("name"))
            if isinstance(names, str):
                names = [n.strip() for n in names.split(",")]
            arg = g.get("arg")
            if not isinstance(names, list) or not isinstance(arg, list):
                raise SpecError("linear_block needs 'names' and a matrix 'arg'")
            t = t.extend(None, LinearBlock(tuple(names), tuple(tuple(r) for r in arg)))
        elif kind in _KINDS:
            cls = _KINDS[kind]
            if cls is Base:
                t = t.extend(g.get("name"), Base())
            else:
                if "arg" not in g:
                    raise SpecError(f"generator {g.get('name')!r} of kind {kind} needs 'arg'")
                t = t.extend(g.get("name"), cls(g["arg"]))
        else:
            raise SpecError(f"unknown generator kind {kind!r}")
    return t


def tower_extend(t: Tower, name, kind) -> Tower:
    return t.extend(name, kind)
