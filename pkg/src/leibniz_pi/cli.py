"""Command line driver: leibniz-pi <command> [flags]."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .catalog import (
    ALPHA_FAMILIES,
    NAMES,
    NONZERO_ALPHA,
    CatalogError,
    catalog_dump,
    make_algebra,
    parse_algebra_spec,
    presentation,
    structure_check,
)
from .engine import (
    DEFAULT_COST_CAP,
    CostCapExceeded,
    EngineError,
    VerificationReport,
    codimension,
    in_tideal,
    is_identity,
    rr7_classify,
    verify_presentation,
)
from .freealg import FreeAlgError, ParseError, parse_poly
from .scalars import FieldError, make_field

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_DEGREE = 7

# the acceptance matrix run by `verify --all`
ALL_FIELDS = ("Q", "GF(2)", "GF(3)")
Q_ALPHAS = {"RR2": ("1", "2", "-1"), "RR6": ("1", "2", "-1")}
Q_ALPHAS_DEFAULT = ("0", "1", "2", "-1")
EXTRA = [("RR6", "GF(4)"), ("RR6", "GF(5)")]


class UsageError(Exception):
    pass


# ---- report serialisation ------------------------------------------------

def report_json(r: VerificationReport) -> dict:
    return {
        "algebra": r.algebra,
        "field": r.field,
        "alpha": r.alpha,
        "checks": [c.to_json() for c in r.checks],
        "overall": r.overall,
        "runtime_ms": int(r.runtime_ms),
    }


def emit_report(reports, fmt: str) -> str:
    """Deterministic text for one report or a list of reports."""
    single = isinstance(reports, VerificationReport)
    items = [reports] if single else list(reports)
    if fmt == "json":
        data = report_json(items[0]) if single else [report_json(r) for r in items]
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["algebra", "field", "alpha", "name", "multidegree", "expected", "computed", "pass"])
        for r in items:
            for c in r.checks:
                md = " ".join(f"{v}:{m}" for v, m in c.multidegree)
                w.writerow([r.algebra, r.field, r.alpha or "", c.name, md, c.expected, c.computed,
                            "true" if c.passed else "false"])
        return buf.getvalue()
    lines = []
    for r in items:
        head = f"{r.algebra}" + (f" alpha={r.alpha}" if r.alpha is not None else "") + f" over {r.field}"
        lines.append(f"{head}: {'PASS' if r.overall else 'FAIL'}")
        for c in r.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: expected {c.expected}, computed {c.computed}")
        for n in r.notes:
            lines.append(f"  note: {n}")
    return "\n".join(lines) + "\n"


# ---- helpers ---------------------------------------------------------------

def _field(args):
    if not args.field:
        raise UsageError("--field is required")
    return make_field(args.field)


def _algebra(args, F):
    if not args.algebra:
        raise UsageError("--algebra is required")
    name, alpha = parse_algebra_spec(args.algebra)
    return make_algebra(name, F, alpha)


def _alpha_txt(A):
    return None if A.alpha is None else A.field.fmt(A.alpha)


def _timing() -> bool:
    # wall-clock time breaks byte-identical reports, so it is opt-in
    return os.environ.get("LEIBNIZ_PI_TIMING", "") not in ("", "0")


def _load_gens(spec: str, F):
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
        return [parse_poly(ln, F) for ln in lines if ln]
    name, alpha = parse_algebra_spec(spec)
    return presentation(name, F, alpha).generators


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cap(args):
    return args.cost_cap if args.cost_cap is not None else DEFAULT_COST_CAP


def all_configs():
    """(name, field, alpha) triples of the acceptance matrix."""
    out = []
    for fs in ALL_FIELDS:
        F = make_field(fs)
        for name in NAMES:
            if name == "RR1":
                continue
            if name not in ALPHA_FAMILIES:
                out.append((name, fs, None))
            elif not F.is_finite:
                for a in Q_ALPHAS.get(name, Q_ALPHAS_DEFAULT):
                    out.append((name, fs, a))
            else:
                for a in F.elements():
                    if name in NONZERO_ALPHA and F.is_zero(a):
                        continue
                    out.append((name, fs, F.fmt(a)))
    for name, fs in EXTRA:
        F = make_field(fs)
        for a in F.elements():
            if not F.is_zero(a):
                out.append((name, fs, F.fmt(a)))
    return out


# ---- commands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    D = args.max_degree
    if not 1 <= D <= MAX_DEGREE:
        raise UsageError(f"--max-degree must be between 1 and {MAX_DEGREE}")
    if args.all:
        configs = all_configs()
    else:
        F = _field(args)
        if not args.algebra:
            raise UsageError("--algebra is required (or use --all)")
        name, alpha = parse_algebra_spec(args.algebra)
        configs = [(name, F.name, alpha)]
    reports = []
    for name, fs, alpha in configs:
        F = make_field(fs)
        dd = D if not (args.all and F.is_finite and F.q > 3) else min(D, 4)
        reports.append(verify_presentation(name, F, alpha, dd, cost_cap=_cap(args), timing=_timing()))
    _write(args, emit_report(reports if args.all else reports[0], args.format))
    if any(c.computed.startswith("cost cap") for r in reports for c in r.checks):
        return EXIT_USAGE
    return EXIT_OK if all(r.overall for r in reports) else EXIT_FAIL


def cmd_codim(args) -> int:
    F = _field(args)
    A = _algebra(args, F)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    c = codimension(A, {i: 1 for i in range(1, args.n + 1)}, cost_cap=_cap(args))
    _write(args, _small(args, {"algebra": A.name, "field": F.name, "alpha": _alpha_txt(A), "n": args.n, "codim": c}, str(c)))
    return EXIT_OK


def cmd_identity(args) -> int:
    F = _field(args)
    A = _algebra(args, F)
    if not args.poly:
        raise UsageError("--poly is required")
    f = parse_poly(args.poly, F)
    ok = is_identity(A, f, cost_cap=_cap(args))
    _write(args, _small(args, {"algebra": A.name, "field": F.name, "alpha": _alpha_txt(A), "poly": args.poly, "identity": ok},
                        "true" if ok else "false"))
    return EXIT_OK


def cmd_member(args) -> int:
    F = _field(args)
    if not args.poly or not args.gens:
        raise UsageError("--poly and --gens are required")
    f = parse_poly(args.poly, F)
    gens = _load_gens(args.gens, F)
    ok = in_tideal(f, gens)
    _write(args, _small(args, {"field": F.name, "gens": args.gens, "poly": args.poly, "member": ok},
                        "true" if ok else "false"))
    return EXIT_OK


def cmd_image(args) -> int:
    from .images import classify_image, format_set, image_set

    F = _field(args)
    A = _algebra(args, F)
    if not args.poly:
        raise UsageError("--poly is required")
    f = parse_poly(args.poly, F)
    S = image_set(A, f, cost_cap=_cap(args))
    cls = classify_image(A, f, cost_cap=_cap(args))
    _write(args, _small(args, {"algebra": A.name, "field": F.name, "poly": args.poly, "class": cls.describe(F),
                               "image": format_set(F, S)}, f"{cls.describe(F)} {format_set(F, S)}"))
    return EXIT_OK


def cmd_rr7_case(args) -> int:
    F = _field(args)
    if args.algebra:
        name, alpha = parse_algebra_spec(args.algebra)
        if name != "RR7":
            raise UsageError("rr7-case takes --algebra RR7:alpha=<a>")
        alphas = [F.parse(alpha)] if alpha is not None else list(F.elements())
    else:
        alphas = list(F.elements())
    rows = []
    for a in alphas:
        case = rr7_classify(F, a)
        rows.append({"alpha": F.fmt(a), "case": case.describe(F),
                     "generators": presentation("RR7", F, a).texts()})
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "case", "generators"])
        for r in rows:
            w.writerow([r["alpha"], r["case"], "; ".join(r["generators"])])
        text = buf.getvalue()
    else:
        text = "".join(f"alpha={r['alpha']}: {r['case']}\n" for r in rows)
    _write(args, text)
    return EXIT_OK


def cmd_catalog(args) -> int:
    F = make_field(args.field or "Q")
    if args.algebra:
        name, alpha = parse_algebra_spec(args.algebra)
        A = make_algebra(name, F, alpha)
        data = A.to_json()
        data["structure"] = structure_check(A)
        _write(args, json.dumps(data, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    if args.format == "json":
        _write(args, catalog_dump(F) + "\n")
        return EXIT_OK
    lines = []
    for name in NAMES:
        A = make_algebra(name, F, F.one if name in ALPHA_FAMILIES else None)
        flags = structure_check(A)
        kinds = ", ".join(k for k in ("leibniz", "metabelian", "lie") if flags[k])
        lines.append(f"{A.label}: dim {A.dim}; {kinds}")
        for (i, j), row in sorted(A.table.items()):
            rhs = " + ".join(_term(F, c, k) for k, c in sorted(row.items())).replace("+ -", "- ")
            lines.append(f"  e{i} e{j} = {rhs}")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _term(F, c, k):
    if c == F.one:
        return f"e{k}"
    if c == F.neg(F.one):
        return f"-e{k}"
    txt = F.fmt(c)
    return f"({txt}) e{k}" if "+" in txt else f"{txt} e{k}"


def _small(args, data: dict, text: str) -> str:
    if args.format == "json":
        return json.dumps(data, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(data))
        w.writerow(["" if v is None else str(v).lower() if isinstance(v, bool) else v for v in data.values()])
        return buf.getvalue()
    return text + "\n"


COMMANDS = {
    "verify": cmd_verify,
    "codim": cmd_codim,
    "identity": cmd_identity,
    "member": cmd_member,
    "image": cmd_image,
    "rr7-case": cmd_rr7_case,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leibniz-pi", description="Polynomial identities of small Leibniz algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--algebra")
        s.add_argument("--field")
        s.add_argument("--format", choices=("json", "csv", "text"), default=None)
        s.add_argument("--out")
        s.add_argument("--cost-cap", type=int, dest="cost_cap")
        if name == "verify":
            s.add_argument("--max-degree", type=int, default=5, dest="max_degree")
            s.add_argument("--all", action="store_true")
        if name == "codim":
            s.add_argument("--n", type=int)
        if name in ("identity", "member", "image"):
            s.add_argument("--poly")
        if name == "member":
            s.add_argument("--gens")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.format is None:
        args.format = "json" if args.command == "verify" else "text"
    try:
        return COMMANDS[args.command](args)
    except CostCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, CatalogError, FieldError, ParseError, FreeAlgError, EngineError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
