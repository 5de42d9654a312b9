"""Command-line entry point: ``modeq <subcommand> ...``.

Exit codes: 0 when every check passes, 1 on a bound violation or failed
reconstruction, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import audit as audit_mod
from . import constpipe, evaltree, gradedring, qexp
from .heckefam import ELLIPTIC, HeckeFamily, InvalidLevelError, UnsupportedFamilyError
from .polycore import PolyError, parse_frac

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _family(kind: str, level: str) -> HeckeFamily:
    try:
        return HeckeFamily.parse(kind, level)
    except (InvalidLevelError, UnsupportedFamilyError) as exc:
        raise UsageError(str(exc)) from None


def cmd_sgc(args, out) -> int:
    try:
        pres = gradedring.get_presentation(args.presentation)
    except KeyError:
        raise UsageError(f"unknown presentation {args.presentation!r}") from None
    value = gradedring.sgc(pres)
    if args.verbose:
        print(f"SGC {value}  GC {gradedring.gc(pres)}  ({pres.case_tag})", file=out)
    else:
        print(value, file=out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    fam = _family(args.family, args.level)
    if args.m is not None:
        try:
            b = constpipe.degree_bound(fam, args.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.json:
            print(json.dumps(b.to_json()), file=out)
        else:
            print(b.bound, file=out)
        return EXIT_OK
    rep = constpipe.bound_report(fam)
    if args.json:
        print(json.dumps(rep.to_json(), indent=2), file=out)
        return EXIT_OK
    print(fam.describe(), file=out)
    for b in rep.degree_bounds:
        print(f"m={b.m}: total degree <= {b.bound}  ({b.coefficient} * {b.hecke_degree})", file=out)
    if rep.height_bound is not None:
        print(f"height <= {rep.height_bound:.6g}  (published form {rep.height_bound_published:.6g})", file=out)
    else:
        print("height: " + audit_mod.NO_CONSTANT_NOTE, file=out)
    return EXIT_OK


def cmd_constants(args, out) -> int:
    ledger = constpipe.build_ledger()
    if args.json:
        print(ledger.dumps(), file=out)
        return EXIT_OK
    for e in ledger.entries.values():
        used = "" if e.rounded is None else f" -> {e.rounded:.3g}"
        print(f"{e.name:<28} {e.value:<14.6g}{used:<12} [{e.provenance}] {e.source}", file=out)
    return EXIT_OK


def cmd_gen_phi(args, out) -> int:
    try:
        phi = qexp.phi_elliptic(args.ell, allow_large=args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = audit_mod.serialize_elliptic_db(phi)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _load_set(path: str, fam: HeckeFamily):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8", newline="").read()
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise audit_mod.SchemaError(f"invalid JSON: {exc}") from None
        s = audit_mod.modeq_from_json(obj)
        if s.family != fam:
            raise UsageError(f"file describes {s.family.describe()}, not {fam.describe()}")
        return s
    if fam.kind != ELLIPTIC:
        raise UsageError("the text database format holds elliptic modular polynomials only")
    import io

    return audit_mod.read_elliptic_db(io.StringIO(text), fam.level)


def cmd_audit(args, out) -> int:
    fam = _family(args.family, args.level)
    try:
        s = _load_set(args.path, fam)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    report = audit_mod.audit(s, paranoid=args.paranoid)
    if args.json:
        print(json.dumps(report.to_json(), indent=2), file=out)
    else:
        print(report.text(), file=out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_reconstruct(args, out) -> int:
    try:
        with (sys.stdin if args.path == "-" else open(args.path, encoding="utf-8")) as fh:
            obj = json.load(fh)
        f = parse_frac(f"({obj['num']})/({obj.get('den', '1')})", tuple(obj["variables"]))
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read fraction: {exc}") from None
    n = args.n or len(f.vars)
    if n != len(f.vars):
        raise UsageError(f"fraction has {len(f.vars)} variables, not {n}")
    d = args.d or max(1, f.total_degree())
    t0 = time.perf_counter()
    try:
        r, data = evaltree.reconstruct(
            evaltree.fraction_oracle(f), n, d, args.M, den=f.den, strict=args.strict,
            variables=f.vars, seed=args.seed,
        )
    except (evaltree.ReconstructionError, evaltree.ExhaustedSearchError) as exc:
        report = {"schema": 1, "success": False, "error": str(exc)}
        print(json.dumps(report) if args.json else f"reconstruction failed: {exc}", file=out)
        return EXIT_VIOLATION
    ok = r == f
    report = {
        "schema": 1,
        "success": ok,
        "fraction": {"num": str(r.num), "den": str(r.den)},
        "base_point": list(data.a),
        "tree": data.tree.stats(),
        "conditions": data.conditions,
        "seconds": time.perf_counter() - t0,
    }
    if args.json:
        print(json.dumps(report, indent=2), file=out)
    else:
        st = report["tree"]
        print(f"{'recovered' if ok else 'MISMATCH'}: ({r.num})/({r.den})", file=out)
        print(f"tree n={st['n']} N1={st['N1']} N2={st['N2']} leaves={st['leaves']} "
              f"amplitudes={st['amplitude']} bound={st['bound']} base point={list(data.a)}", file=out)
        print("conditions: " + ", ".join(f"{k}={v}" for k, v in data.conditions.items()), file=out)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--strict", action="store_true", help="use full-scale evaluation-tree conditions")
    common.add_argument("--paranoid", action="store_true", help="re-check coprimality of coefficients")
    common.add_argument("--json", action="store_true", help="emit JSON")
    p = argparse.ArgumentParser(prog="modeq", parents=[common], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sgc", parents=[common], help="symmetric geometric complexity of a presentation")
    s.add_argument("presentation")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_sgc)

    s = sub.add_parser("bounds", parents=[common], help="degree and height bounds for a Hecke family")
    s.add_argument("family")
    s.add_argument("level")
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("constants", parents=[common], help="the explicit height constant ledger")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("gen-phi", parents=[common], help="classical modular polynomial in database format")
    s.add_argument("ell", type=int)
    s.add_argument("--out")
    s.add_argument("--allow-large", action="store_true")
    s.set_defaults(func=cmd_gen_phi)

    s = sub.add_parser("audit", parents=[common], help="check a modular-equation file against the bounds")
    s.add_argument("path", help="file path, or - for stdin")
    s.add_argument("--family", required=True)
    s.add_argument("--level", required=True)
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("reconstruct", parents=[common], help="rebuild a fraction through an evaluation tree")
    s.add_argument("path", help='JSON {"variables": [...], "num": "...", "den": "..."}')
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--M", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_reconstruct)
    return p


def cli_main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, audit_mod.ParseError, audit_mod.SchemaError, PolyError, ValueError) as exc:
        print(f"modeq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


def main() -> None:
    sys.exit(cli_main())
