"""Command-line front end.

All node, rack and row labels are 0-based.  Exit codes: 0 success, 1 a
check failed, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import bounds
from .arraycode import DecodeError, ParameterError, RepairError
from .families import FAMILIES, Code, build_code
from .ffield import FieldError, make_extension_field, make_prime_field
from .fileio import FormatError, decode_symbol, format_codeword, load_spec, read_codeword, spec_to_dict
from .harness import CHECKS, ExperimentConfig, run_experiment

SEED_ENV = "RACKMSR_SEED"

EPILOG = "Nodes, racks and rows are numbered from 0.  Exit codes: 0 ok, 1 check failed, 2 usage error."


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    return 0


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _field(text: str | None):
    if text is None:
        return None
    p, _, m = text.partition("^")
    try:
        p, m = int(p), int(m or 1)
    except ValueError:
        raise UsageError(f"bad field {text!r}; use P or P^M") from None
    return make_prime_field(p) if m == 1 else make_extension_field(p, m)


def _params(args) -> tuple[str, dict]:
    fam = args.family.upper()
    if args.k is None:
        raise UsageError("-k is required")
    if args.helpers is None:
        raise UsageError("--helpers is required")
    if fam == "C2":
        if args.nodes is None:
            raise UsageError("--nodes is required for c2")
        return fam, {"n": args.nodes, "k": args.k, "d": args.helpers}
    if args.racks is None or args.rack_size is None:
        raise UsageError(f"--racks and --rack-size are required for {fam.lower()}")
    params = {"nbar": args.racks, "u": args.rack_size, "k": args.k, "dbar": args.helpers}
    if fam == "RS":
        if args.q is None:
            raise UsageError("-q is required for rs")
        params["q"] = args.q
        params["max_l"] = args.max_l
    return fam, params


def _add_code_args(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True, type=str.lower, choices=[f.lower() for f in FAMILIES])
    p.add_argument("--racks", type=int, help="number of racks nbar")
    p.add_argument("--rack-size", type=int, help="nodes per rack u")
    p.add_argument("--nodes", "-n", type=int, help="number of nodes (c2 only)")
    p.add_argument("-k", type=int, help="code dimension")
    p.add_argument("--helpers", type=int, help="helper racks dbar (helper nodes d for c2)")
    p.add_argument("-q", type=int, help="base field size (rs only)")
    p.add_argument("--field", help="field override, P or P^M (array codes)")
    p.add_argument("--max-l", type=int, default=1024, help="largest sub-packetization rs will build")


def _code_from(args) -> Code:
    if getattr(args, "spec", None):
        return load_spec(args.spec)
    fam, params = _params(args)
    return build_code(fam, params, field=_field(args.field), seed=_seed(args))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    fam, params = _params(args)
    code = build_code(fam, params, field=_field(args.field), seed=_seed(args))
    _emit(json.dumps(spec_to_dict(code), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _read_data(code: Code, path: str):
    F = code.field
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        if code.family == "RS":
            if len(rows) != code.k or any(len(r) != 1 for r in rows):
                raise UsageError(f"data file must have k={code.k} lines of one symbol")
            return [decode_symbol(F, r[0]) for r in rows]
        if len(rows) != code.l or any(len(r) != code.k for r in rows):
            raise UsageError(f"data file must have l={code.l} rows of k={code.k} symbols")
        return [[decode_symbol(F, x) for x in r] for r in rows]
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad data file: {exc}") from None


def cmd_encode(args) -> int:
    code = load_spec(args.spec)
    if args.data:
        cw = code.encode(_read_data(code, args.data))
    elif args.zero:
        cw = code.zero_codeword()
    else:
        cw = code.random_codeword(random.Random(_seed(args)))
    _emit(format_codeword(code, cw), args.out)
    return 0


def cmd_corrupt(args) -> int:
    code = load_spec(args.spec)
    cw = read_codeword(args.codeword, code)
    for node in args.erase or []:
        if not 0 <= node < code.n:
            raise UsageError(f"node {node} out of range 0..{code.n - 1}")
    cw = code.erase(cw, args.erase or [])
    for spot in args.flip or []:
        node, _, row = spot.partition(":")
        node, row = int(node), int(row or 0)
        if code.family == "RS":
            cw[node] = cw[node] + code.field.one
        else:
            cw[row][node] = cw[row][node] + code.field.one
    _emit(format_codeword(code, cw), args.out)
    return 0


def cmd_decode(args) -> int:
    code = load_spec(args.spec)
    cw = code.decode(read_codeword(args.codeword, code))
    _emit(format_codeword(code, cw), args.out)
    return 0


def cmd_repair(args) -> int:
    code = load_spec(args.spec)
    cw = read_codeword(args.codeword, code)
    col, tr = code.repair(cw, args.fail, args.helpers)
    original = code.column(cw, args.fail)
    known = original is not None and (code.family == "RS" or all(x is not None for x in original))
    out = {
        "failed": args.fail,
        "repaired": int(col) if code.family == "RS" else [int(x) for x in col],
        "matches_stored": (col == original) if known else None,
        "transcript": tr.to_dict(),
    }
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    print(f"downloaded {tr.bandwidth} {tr.unit} symbols from helpers {list(tr.helpers)}", file=sys.stderr)
    return 1 if out["matches_stored"] is False else 0


def cmd_verify(args) -> int:
    code = load_spec(args.spec)
    scope = "exhaustive" if args.scope == "exhaustive" else int(args.scope)
    cfg = ExperimentConfig(code.family, code.params(), seed=_seed(args), scope=scope,
                           checks=tuple(args.checks), codewords=args.codewords)
    given = None
    if args.codeword:
        cw = read_codeword(args.codeword, code)
        flat = cw if code.family == "RS" else [x for row in cw for x in row]
        if any(x is None for x in flat):
            raise UsageError("verify needs a complete codeword; decode erasures first")
        given = [cw]
    report = run_experiment(cfg, code, codewords=given)
    text = report.to_json() if args.format == "json" else report.to_tsv()
    _emit(text, args.out)
    return 0 if report.passed else 1


def cmd_bounds(args) -> int:
    code = _code_from(args) if args.spec or args.family else None
    if code is None:
        raise UsageError("give --spec or the code parameters")
    reps = [
        bounds.BoundReport("cutset" if code.family == "C2" else "rack_cutset",
                           {"dbar": code.helpers_needed, "kbar": code.kbar, "l": code.l}, code.bandwidth_bound()),
        bounds.BoundReport("access", {"dbar": code.helpers_needed, "u": code.u, "l": code.l, "s": code.access_s()},
                           code.access_bound()),
        bounds.subpacketization_report(code.racks, code.k, code.helpers_needed, code.u, "a"),
        bounds.subpacketization_report(code.racks, code.k, code.helpers_needed, code.u, "b"),
    ]
    d = code.helpers_needed * code.u + code.u - 1
    if code.u > 1 and code.k % code.u == 0:
        rack, local = bounds.homogeneous_decomposition(d, code.k, code.u, code.l)
        reps.append(bounds.BoundReport("homogeneous_rack_term", {"d": d, "k": code.k, "u": code.u, "l": code.l}, rack))
        reps.append(bounds.BoundReport("homogeneous_local_term", {"d": d, "k": code.k, "u": code.u, "l": code.l}, local))
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in reps], indent=2, sort_keys=True) + "\n"
    else:
        lines = ["name\tvalue\tinputs\tapplicable"]
        for r in reps:
            lines.append(f"{r.name}\t{r.value}\t{json.dumps(r.inputs, sort_keys=True)}\t{r.applicable}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_bench(args) -> int:
    code = _code_from(args)
    scope = "exhaustive" if args.scope == "exhaustive" else int(args.scope)
    checks = ("repair", "uniform-download", "access", "bounds")
    t0 = time.perf_counter()
    report = run_experiment(ExperimentConfig(code.family, code.params(), seed=_seed(args), scope=scope, checks=checks), code)
    elapsed = time.perf_counter() - t0
    c = report.counts
    cols = ["family", "params", "field", "l", "scenarios", "bandwidth", "bound", "access_max", "passed", "seconds"]
    vals = [code.family, json.dumps(code.params(), sort_keys=True), str(code.field),
            code.l, c.get("scenarios"), c.get("bandwidth_max"), code.bandwidth_bound(), c.get("access_max"),
            report.passed, f"{elapsed:.3f}"]
    _emit("\t".join(cols) + "\n" + "\t".join(map(str, vals)) + "\n", args.out)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rackmsr", description="Rack-aware MSR codes: build, encode, repair, verify.",
                                 epilog=EPILOG)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="instantiate a code and write its spec JSON", epilog=EPILOG)
    _add_code_args(p)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("encode", help="encode data (or random/zero data) into a codeword file", epilog=EPILOG)
    p.add_argument("--spec", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--data", help="l rows of k symbols (k lines for rs)")
    g.add_argument("--zero", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("corrupt", help="erase nodes or perturb symbols of a codeword file", epilog=EPILOG)
    p.add_argument("--spec", required=True)
    p.add_argument("--codeword", required=True)
    p.add_argument("--erase", type=_int_list, help="nodes to erase, e.g. 0,3")
    p.add_argument("--flip", action="append", help="NODE:ROW symbol to add 1 to (repeatable)")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("decode", help="fill erased nodes of a codeword file", epilog=EPILOG)
    p.add_argument("--spec", required=True)
    p.add_argument("--codeword", required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("repair", help="repair one node and print the transcript", epilog=EPILOG)
    p.add_argument("--spec", required=True)
    p.add_argument("--codeword", required=True)
    p.add_argument("--fail", type=int, required=True, help="failed node")
    p.add_argument("--helpers", type=_int_list, required=True, help="helper racks (helper nodes for c2)")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("verify", help="run checks and print a report", epilog=EPILOG)
    p.add_argument("--spec", required=True)
    p.add_argument("--codeword", help="use this codeword as the first test word")
    p.add_argument("--checks", type=_check_list, default=list(CHECKS))
    p.add_argument("--scope", default="exhaustive", help="'exhaustive' or a scenario count")
    p.add_argument("--codewords", type=int, default=1, help="random codewords for the mds check")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="print the bound values for a code", epilog=EPILOG)
    p.add_argument("--spec")
    _add_code_args_optional(p)
    p.add_argument("--format", choices=["json", "tsv"], default="tsv")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bench", help="time a repair sweep and print a TSV line", epilog=EPILOG)
    p.add_argument("--spec")
    _add_code_args_optional(p)
    p.add_argument("--scope", default="exhaustive")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bench)
    return ap


def _add_code_args_optional(p):
    _add_code_args(p)
    for act in p._actions:
        if act.dest == "family":
            act.required = False


def _check_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}")
    return names


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError, FormatError, FieldError, RepairError, DecodeError, ValueError) as exc:
        print(f"rackmsr {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"rackmsr {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
