"""Command line interface: ``vpartition <command> [options]``.

Exit status is 0 on success, 1 when a mathematical check fails (for example
a ``validate`` mismatch) and 2 when the input does not parse or fails the
schema.
"""

from __future__ import annotations

import argparse
import ast
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from pathlib import Path

import jsonschema

from . import formulas, oracle, render
from .arrangement import (Exterior, NoHalfspace, NotSpanning, OnWall, System, adjacent_chambers,
                          chamber_of, enumerate_chambers, get_chamber, validate_system,
                          validity_region)
from .series import Poly

SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["n", "vectors"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "vectors": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "items": {"type": "integer"}},
        },
        "multiplicities": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
    "additionalProperties": False,
}

POLYTOPE_SCHEMA = {
    "type": "object",
    "required": ["normals", "offsets"],
    "properties": {
        "normals": {"type": "array", "minItems": 1,
                    "items": {"type": "array", "items": {"type": "integer"}}},
        "offsets": {"type": "array", "items": {"type": ["integer", "string"]}},
    },
    "additionalProperties": False,
}

_RATIONAL = {"type": ["string", "integer"]}
FORMULA_SCHEMA = {
    "type": "object",
    "required": ["n", "terms"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pole", "coefficients"],
                "properties": {
                    "pole": {"type": "array", "items": _RATIONAL},
                    "coefficients": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["exponent", "coeff"],
                            "properties": {
                                "exponent": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                                "coeff": {"anyOf": [
                                    _RATIONAL,
                                    {"type": "object", "required": ["order", "coeffs"],
                                     "properties": {"order": {"type": "integer", "minimum": 1},
                                                    "coeffs": {"type": "array", "items": _RATIONAL}}},
                                ]},
                            },
                        },
                    },
                },
            },
        },
    },
}


class InputError(Exception):
    """Bad input; reported with exit status 2."""


class CheckFailed(Exception):
    """A mathematical validation failed; exit status 1."""


# ----------------------------------------------------------------- parsing

def _load_json(arg: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        if arg == "-":
            text = sys.stdin.read()
        else:
            try:
                text = Path(arg).read_text()
            except OSError as exc:
                raise InputError(f"cannot read {arg}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _validated(data, schema, what):
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        raise InputError(f"{what}: {exc.message}") from exc
    return data


def load_system(arg: str) -> System:
    data = _validated(_load_json(arg), SYSTEM_SCHEMA, "system")
    try:
        s = System(data["n"], tuple(tuple(v) for v in data["vectors"]), data.get("multiplicities"))
        validate_system(s)
    except (ValueError, NoHalfspace, NotSpanning) as exc:
        raise InputError(f"system: {exc}") from exc
    return s


def parse_int_vector(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected comma separated integers, got {text!r}") from exc
    if n is not None and len(v) != n:
        raise InputError(f"expected {n} entries, got {len(v)}")
    return v


def parse_rational_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"expected comma separated rationals, got {text!r}") from exc


def parse_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise InputError(f"expected a range like -6..6, got {text!r}") from exc


def parse_weight(text: str, nvars: int) -> Poly:
    """Polynomial in ``x1 .. xN`` from an arithmetic expression."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse weight {text!r}") from exc

    def conv(node) -> Poly:
        if isinstance(node, ast.Expression):
            return conv(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.const(nvars, Fraction(node.value))
        if isinstance(node, ast.Name) and node.id.startswith("x") and node.id[1:].isdigit():
            i = int(node.id[1:])
            if not 1 <= i <= nvars:
                raise InputError(f"variable {node.id} out of range x1..x{nvars}")
            return Poly.var(nvars, i - 1)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = conv(node.operand)
            return p * -1 if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise InputError("exponents must be nonnegative integers")
                return conv(node.left) ** node.right.value
            if isinstance(node.op, ast.Div):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise InputError("only division by integer constants is supported")
                return conv(node.left) * Fraction(1, node.right.value)
            a, b = conv(node.left), conv(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise InputError(f"unsupported expression in weight: {ast.dump(node)}")

    return conv(tree)


def _jobs(args) -> int:
    if getattr(args, "jobs", None):
        return max(1, args.jobs)
    env = os.environ.get("VPARTITION_JOBS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


# ----------------------------------------------------------------- output

def dumps(obj, level: int = 0) -> str:
    """JSON with nested containers indented and flat lists kept on one line."""
    pad = "  " * (level + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {dumps(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        items = [pad + dumps(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(obj)


def _emit(obj, fmt: str, text=None, latex=None):
    if fmt == "json":
        print(dumps(obj))
    elif fmt == "latex" and latex is not None:
        print(latex)
    else:
        print(text if text is not None else dumps(obj))


def _emit_qp(qp, fmt):
    _emit(render.quasipoly_to_json(qp), fmt, render.quasipoly_to_text(qp), render.quasipoly_to_latex(qp))


def _chamber(s: System, cid: str | None, lam=None):
    if cid:
        try:
            return get_chamber(s, cid)
        except KeyError as exc:
            raise InputError(f"unknown chamber {cid!r}") from exc
    if lam is None:
        raise InputError("--chamber is required")
    where = chamber_of(s, lam)
    if isinstance(where, Exterior):
        return None
    if isinstance(where, OnWall):
        return adjacent_chambers(s, lam)[0]
    return where


# ---------------------------------------------------------------- commands

def cmd_chambers(args):
    s = load_system(args.system)
    chambers = enumerate_chambers(s)
    data = [c.to_json() for c in chambers]
    lines = []
    for c in chambers:
        ineq = ", ".join(f"{render.compact(Poly.linear(list(a)).format())} > 0" for a in c.inequalities)
        lines.append(f"{c.id}: {ineq}   (interior point {list(c.interior_point)})")
    _emit(data, args.format, "\n".join(lines))


def cmd_formula(args):
    s = load_system(args.system)
    c = _chamber(s, args.chamber)
    h = parse_int_vector(args.h, s.size) if args.h else None
    r = parse_rational_vector(args.r) if args.r else None
    if r is not None and len(r) != s.size:
        raise InputError(f"--r needs {s.size} entries")
    if h is None and r is None:
        qp = formulas.partition_quasipoly(s, c)
    else:
        qp = formulas.euler_maclaurin_quasipoly(s, c, h, r)
    _emit_qp(qp, args.format)


def cmd_count(args):
    s = load_system(args.system)
    lam = parse_int_vector(args.lam, s.n)
    value = oracle.count_points(s, lam)
    _emit(value, args.format, str(value))


def cmd_sum(args):
    s = load_system(args.system)
    f = parse_weight(args.weight, s.size)
    if args.lam is None:
        c = _chamber(s, args.chamber)
        _emit_qp(formulas.weighted_sum_quasipoly(s, c, f), args.format)
        return
    lam = parse_int_vector(args.lam, s.n)
    brute = oracle.sum_weight(s, lam, lambda x: f.evaluate(x))
    out = {"lambda": list(lam), "brute_force": str(brute)}
    c = _chamber(s, args.chamber, lam)
    if c is not None:
        qp = formulas.weighted_sum_quasipoly(s, c, f)
        if qp.in_domain(lam):
            got = qp.evaluate(lam)
            out.update(chamber=c.id, formula=str(got))
            if got != brute:
                _emit(out, "json")
                raise CheckFailed(f"formula {got} differs from brute force {brute}")
    _emit(out, args.format, out.get("formula", out["brute_force"]))


def cmd_volume(args):
    s = load_system(args.system)
    c = _chamber(s, args.chamber)
    p = formulas.volume_polynomial(s, c)
    data = {"chamber": c.id, "poly": render.compact(p.format()), "coefficients": render.poly_to_json(p)}
    _emit(data, args.format, p.format(), render.latex_poly(p))


def cmd_ehrhart(args):
    s = load_system(args.system)
    lam0 = parse_int_vector(args.lam, s.n)
    try:
        e = formulas.ehrhart(s, lam0)
    except formulas.ExteriorPoint as exc:
        raise InputError(str(exc)) from exc
    data = {"chamber": e.chamber, "period": e.period,
            "polys": [render.compact(p.format(["k"])) for p in e.polys]}
    text = f"period {e.period} (chamber {e.chamber})\n" + "\n".join(
        f"  k = {i} mod {e.period}: {p.format(['k'])}" for i, p in enumerate(e.polys))
    _emit(data, args.format, text)


def cmd_exp_sum(args):
    s = load_system(args.system)
    c = _chamber(s, args.chamber)
    try:
        if args.r is not None:
            qp = formulas.exponential_sum_closed_form(s, c, r=parse_rational_vector(args.r))
            if args.lam:
                lam = parse_int_vector(args.lam, s.n)
                v = qp.value(lam)
                _emit({"lambda": list(lam), "value": render.coeff_to_json(v)}, args.format, str(v))
            else:
                _emit_qp(qp, args.format)
            return
        if args.y is None:
            raise InputError("give --r (exact twists) or --y (complex weights)")
        try:
            y = [complex(x) for x in args.y.split(",")]
        except ValueError as exc:
            raise InputError(f"bad complex list {args.y!r}") from exc
        if len(y) != s.size:
            raise InputError(f"--y needs {s.size} entries")
        fe = formulas.exponential_sum_closed_form(s, c, y=y)
    except formulas.GenericityViolated as exc:
        raise CheckFailed(f"genericity violated: {exc}") from exc
    if not args.lam:
        raise InputError("--lambda is required with --y")
    lam = parse_int_vector(args.lam, s.n)
    v = fe.evaluate(lam)
    _emit({"lambda": list(lam), "value": [v.real, v.imag]}, args.format, repr(v))


def cmd_embed(args):
    data = _validated(_load_json(args.polytope), POLYTOPE_SCHEMA, "polytope")
    try:
        p = oracle.InequalityPolytope(tuple(tuple(u) for u in data["normals"]),
                                      tuple(Fraction(h) for h in data["offsets"]))
        emb = oracle.embed_polytope(p)
    except (oracle.Unbounded, oracle.NonSpanning, ValueError) as exc:
        raise InputError(str(exc)) from exc
    out = {"system": {"n": len(emb.a), "vectors": [list(v) for v in emb.phi]},
           "a": list(emb.a), "offsets": list(emb.offsets)}
    _emit(out, args.format)


def cmd_eval(args):
    data = _validated(_load_json(args.formula), FORMULA_SCHEMA, "formula")
    try:
        qp = render.quasipoly_from_json(data)
    except (ValueError, KeyError) as exc:
        raise InputError(f"formula: {exc}") from exc
    lam = parse_int_vector(args.lam, qp.n)
    inside = qp.in_domain(lam)
    if not inside and not args.force:
        raise CheckFailed(f"{list(lam)} is outside the validity region of the formula")
    v = qp.evaluate(lam)
    _emit(str(v), args.format, str(v))


def _sweep_chamber(payload):
    s, cid, box, h = payload
    c = get_chamber(s, cid)
    qp = formulas.partition_quasipoly(s, c) if h is None else formulas.euler_maclaurin_quasipoly(s, c, h)
    region = qp.domain if qp.domain is not None else validity_region(s, c, h)
    pts = [lam for lam in product(box, repeat=s.n) if region.contains(lam)]
    checked = 0
    if h is None:
        expected = oracle.count_table(s, pts)
        for lam in pts:
            got = qp.evaluate(lam)
            checked += 1
            if got != expected[lam]:
                return checked, (cid, list(lam), str(expected[lam]), str(got))
        return checked, None
    # weight prod_i c(x_i, h_i) = prod_i (x_i + 1) ... (x_i + h_i - 1) / (h_i - 1)!
    weight = Poly.const(s.size, 1)
    for i, hi in enumerate(h):
        for j in range(1, hi):
            weight = weight * (Poly.var(s.size, i) + j) * Fraction(1, j)
    for lam in pts:
        exp_ = oracle.sum_weight(s, lam, lambda x: weight.evaluate(x))
        got = qp.evaluate(lam)
        checked += 1
        if got != exp_:
            return checked, (cid, list(lam), str(exp_), str(got))
    return checked, None


def cmd_validate(args):
    s = load_system(args.system)
    box = parse_range(args.box)
    h = parse_int_vector(args.h, s.size) if args.h else None
    chambers = enumerate_chambers(s)
    payloads = [(s, c.id, box, h) for c in chambers]
    jobs = _jobs(args)
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_chamber, payloads))
    else:
        results = [_sweep_chamber(p) for p in payloads]
    total = sum(r[0] for r in results)
    for _, bad in results:
        if bad is not None:
            cid, lam, expected, got = bad
            report = {"status": "mismatch", "system": s.to_json(), "chamber": cid,
                      "lambda": lam, "expected": expected, "got": got}
            _emit(report, args.format,
                  f"MISMATCH system={json.dumps(s.to_json())} chamber={cid} lambda={lam} "
                  f"expected={expected} got={got}")
            raise CheckFailed("validation failed")
    report = {"status": "ok", "chambers": len(chambers), "points": total}
    _emit(report, args.format, f"ok: {total} points in {len(chambers)} chambers")


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vpartition", description="Vector partition functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, system=True):
        sp = sub.add_parser(name, help=help_)
        if system:
            sp.add_argument("--system", required=True, help="system JSON file, inline JSON, or - for stdin")
        sp.add_argument("--format", choices=["json", "text", "latex"], default="json")
        sp.set_defaults(func=func)
        return sp

    add("chambers", cmd_chambers, "list the big chambers")
    sp = add("formula", cmd_formula, "quasi-polynomial of a chamber")
    sp.add_argument("--chamber", required=True)
    sp.add_argument("--h", help="comma separated powers, one per flattened vector")
    sp.add_argument("--r", help="comma separated rational twists, one per flattened vector")
    sp = add("count", cmd_count, "brute-force number of partitions")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp = add("sum", cmd_sum, "weighted sum over the partition polytope")
    sp.add_argument("--weight", required=True, help="polynomial in x1..xN, e.g. 'x1*x2 + 3'")
    sp.add_argument("--chamber")
    sp.add_argument("--lambda", dest="lam")
    sp = add("volume", cmd_volume, "volume polynomial of a chamber")
    sp.add_argument("--chamber", required=True)
    sp = add("ehrhart", cmd_ehrhart, "Ehrhart quasi-polynomial of the dilates of a fiber")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp = add("exp-sum", cmd_exp_sum, "closed form of an exponential sum")
    sp.add_argument("--chamber", required=True)
    sp.add_argument("--r", help="exact twists r (y = 2 pi i r)")
    sp.add_argument("--y", help="complex weights, e.g. 0.3+0.1j,0.2,-0.1j")
    sp.add_argument("--lambda", dest="lam")
    sp = add("embed", cmd_embed, "realise a polytope as a partition polytope", system=False)
    sp.add_argument("--polytope", required=True)
    sp = add("eval", cmd_eval, "evaluate a formula produced by 'formula'", system=False)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--force", action="store_true", help="evaluate outside the validity region")
    sp = add("validate", cmd_validate, "compare every chamber formula with brute force")
    sp.add_argument("--box", default="-6..6")
    sp.add_argument("--h")
    sp.add_argument("--jobs", type=int, help="worker processes (default VPARTITION_JOBS or 1)")
    return p


def _glue_negative_values(argv: list[str]) -> list[str]:
    # "--box -6..6" or "--lambda -1,2" would otherwise be read as an option
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None and len(nxt) > 1
                and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
