"""Command line front end: ``python3 -m charp <command> ...``.

Exit codes: 0 success, 2 malformed input, 3 search bound exceeded,
4 unsupported request, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .algebra.poly import Poly
from .annihilator import default_j_max, joint_annihilator, reduce_with_certificate
from .antideriv import integrate
from .errors import CharpError, ParseError, SpecError, Unsupported, VerificationFailed
from .expr import format_elem
from .odesolve import solve_constant_ode, solve_linear_ode
from .operators import ConstOp, parse_op
from .tower import Log, Tower, tower_build

_GEN = re.compile(r"^\s*([^\W\d]\w*)\s*:\s*(\w+)\s*(?:\((.*)\))?\s*$", re.S)
_BLOCK = re.compile(r"^\s*\(([^)]*)\)\s*:\s*linear_block\s*\((.*)\)\s*$", re.S)


def _split_top(src: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in src:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _matrix(src: str) -> list:
    s = src.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise SpecError(f"linear_block matrix must be a bracketed list, got {src!r}")
    rows = []
    for r in _split_top(s[1:-1]):
        r = r.strip()
        if not (r.startswith("[") and r.endswith("]")):
            raise SpecError(f"bad matrix row {r!r}")
        rows.append([x.strip() for x in _split_top(r[1:-1])])
    return rows


def parse_inline(src: str) -> dict:
    """Desugar ``"p=3; X:base; E:hyperexp(2*X); (Y,Y1):linear_block([[0,1],[X,0]])"``."""
    spec: dict = {"generators": []}
    for item in _split_top(src, ";"):
        item = item.strip()
        if not item:
            continue
        if item.replace(" ", "").startswith("p="):
            try:
                spec["p"] = int(item.split("=", 1)[1])
            except ValueError:
                raise SpecError(f"bad characteristic in {item!r}") from None
            continue
        m = _BLOCK.match(item)
        if m:
            names = [n.strip() for n in m.group(1).split(",")]
            spec["generators"].append({"names": names, "kind": "linear_block", "arg": _matrix(m.group(2))})
            continue
        m = _GEN.match(item)
        if not m:
            raise SpecError(f"cannot parse tower item {item!r}")
        g = {"name": m.group(1), "kind": m.group(2)}
        if m.group(3) is not None:
            g["arg"] = m.group(3).strip()
        spec["generators"].append(g)
    if "p" not in spec:
        raise SpecError("inline tower needs 'p=<prime>'")
    return spec


def load_tower(args) -> Tower:
    if args.inline is not None:
        return tower_build(parse_inline(args.inline))
    if args.tower is None:
        raise SpecError("give a tower with --tower FILE or --inline SPEC")
    try:
        with open(args.tower, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read tower file: {exc}") from None
    return tower_build(text)


def format_poly(P: Poly, var: str = "T") -> str:
    """Descending-degree text for a polynomial with tower-element coefficients."""
    if not P:
        return "0"
    parts = []
    for k, c in sorted(P.terms(), reverse=True):
        cs = format_elem(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            parts.append(cs if "+" not in cs else f"({cs})")
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
    return "+".join(parts)


def _j_max(args, t: Tower) -> int:
    if args.j_max is not None:
        return args.j_max
    env = os.environ.get("CHARP_JMAX")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SpecError(f"CHARP_JMAX must be an integer, got {env!r}") from None
    return default_j_max(t)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise SpecError(f"--{n.replace('_', '-')} is required for {args.command}")


# -- commands -------------------------------------------------------------------

def cmd_derive(args, t):
    _need(args, "expr")
    if args.order < 0:
        raise SpecError("--order must be nonnegative")
    e = t.elem(args.expr)
    v = t.derive_n(e, args.order) if args.order <= 256 else t.derive_n_fast(e, args.order)
    return {"value": format_elem(v), "order": args.order}, format_elem(v)


def cmd_annihilate(args, t):
    _need(args, "expr")
    P = joint_annihilator(t, [t.elem(x) for x in args.expr_list], _j_max(args, t))
    return {"certificate": P.to_json(), "operator": P.format(), "verified": True}, P.format()


def cmd_integrate(args, t):
    _need(args, "expr")
    r = integrate(t, t.elem(args.expr), _j_max(args, t))
    T = r.extended_tower
    gens = []
    lines = []
    for name, kind in r.new_generators:
        arg = format_elem(T.prefix(T.index(name)).elem(kind.u)) if isinstance(kind, Log) else ""
        gens.append({"name": name, "dlog_of": arg})
        lines.append(f"# {name} = log({arg})")
    text = "\n".join(lines + [format_elem(r.value)])
    data = {"value": format_elem(r.value), "new_generators": gens,
            "certificate": r.certificate.to_json(), "verified": True}
    if gens:
        data["tower"] = T.to_dict()
    return data, text


def cmd_reduce(args, t):
    _need(args, "op")
    op = parse_op(args.op, t)
    red = reduce_with_certificate(t, op, j_max=_j_max(args, t))
    M = red.matrix
    data = {"operator": red.operator.to_json(), "text": red.operator.format(),
            "annihilator": red.annihilator.to_json(),
            "matrix": [[format_elem(M[i, j]) for j in range(M.ncols)] for i in range(M.nrows)],
            "minpoly": format_poly(red.minpoly), "verified": True}
    return data, red.operator.format()


def _alpha_text(s) -> str:
    a = s.alpha
    if isinstance(a, int):
        return str(a)
    return "formal"


def cmd_solve(args, t):
    _need(args, "op")
    op = parse_op(args.op, t)
    constant = all(t.is_constant(c) for c in op.coeffs.values())
    if not constant:
        if not args.experimental:
            raise Unsupported("operator has non-constant coefficients; pass --experimental")
        Q, U, sols = solve_linear_ode(t, op, args.method, _j_max(args, t))
        items = [{"generator": s.source.generator, "alpha": _alpha_text(s.source),
                  "modulus": format_poly(s.source.modulus) if s.source.modulus else None,
                  "solution": format_elem(s.solution), "verified": s.verified} for s in sols]
        data = {"reduced": Q.format(), "transfer": U.format(), "solutions": items}
        text = "\n".join([f"# reduced: {Q.format()}", f"# transfer: {U.format()}"]
                         + [f"{i['solution']}" for i in items])
        return data, text
    Q = ConstOp(t, op.coeffs)
    sols = solve_constant_ode(t, Q, args.method)
    items = []
    lines = []
    for s in sols:
        mod = format_poly(s.modulus) if s.modulus is not None else None
        items.append({"alpha": _alpha_text(s), "modulus": mod, "generator": s.generator,
                      "verified": s.verified})
        T = s.extended_tower
        if s.generator is None:
            lines.append(f"alpha={_alpha_text(s)}: 1")
        else:
            rule = format_elem(T.derive_rule(s.generator))
            where = f" where {mod} = 0" if mod else ""
            lines.append(f"alpha={_alpha_text(s)}: {s.generator} with D({s.generator}) = {rule}{where}")
    c = sols[0].construction if sols else {}
    data = {"solutions": items,
            "construction": {"e": c.get("e"), "P": format_poly(c["P"]) if c else None,
                             "A": format_poly(c["A"]) if c else None,
                             "R": format_poly(c["R"]) if c else None}}
    return data, "\n".join(lines)


def cmd_verify(args, t):
    _need(args, "d", "equals")
    a = t.elem(args.d)
    b = t.elem(args.equals)
    lhs = t.derive_n(a, args.order)
    ok = lhs == b
    data = {"verified": ok, "lhs": format_elem(lhs), "rhs": format_elem(b)}
    if not ok:
        raise VerificationFailed(f"D^{args.order}({args.d}) = {format_elem(lhs)} differs from {format_elem(b)}")
    return data, "ok"


COMMANDS = {"derive": cmd_derive, "annihilate": cmd_annihilate, "integrate": cmd_integrate,
            "reduce": cmd_reduce, "solve": cmd_solve, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charp", description="Differential algebra in characteristic p.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--tower", help="tower JSON file")
        src.add_argument("--inline", help='inline tower, e.g. "p=3; X:base; E:hyperexp(2*X)"')
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--j-max", type=int, default=None, help="annihilator search bound (default k+3)")
        if name in ("derive", "integrate"):
            sp.add_argument("--expr")
        if name == "annihilate":
            sp.add_argument("--expr", action="append", dest="expr_list")
        if name in ("derive", "verify"):
            sp.add_argument("--order", type=int, default=1)
        if name in ("reduce", "solve"):
            sp.add_argument("--op", help='operator in D, e.g. "D^2 - X"')
        if name == "solve":
            sp.add_argument("--method", choices=("auto", "finite", "formal"), default="auto")
            sp.add_argument("--experimental", action="store_true",
                            help="allow operators with non-constant coefficients")
        if name == "verify":
            sp.add_argument("--d", help="expression to differentiate")
            sp.add_argument("--equals", help="claimed derivative")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage; hand its code back to the caller
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "annihilate":
        args.expr = args.expr_list
    try:
        t = load_tower(args)
        data, text = COMMANDS[args.command](args, t)
    except CharpError as exc:
        if args.format == "json":
            payload = {"error": str(exc), "kind": type(exc).__name__}
            if isinstance(exc, ParseError):
                payload["offset"] = exc.offset
            print(json.dumps(payload), file=out)
        else:
            print(f"error: {exc}", file=err)
        return exc.exit_code
    if args.format == "json":
        print(json.dumps(data), file=out)
    else:
        print(text, file=out)
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
