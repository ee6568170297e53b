"""Spec JSON and codeword text formats.

Spec JSON records everything needed to rebuild a code bit-exactly: family,
parameters, field header ``p^m/modulus``, and the chosen special elements as
integers (base-p digit encoding of the polynomial coefficients).

Codeword text: one header line, then the symbols as decimal integers.

    C1 nbar u k dbar FIELD lam            then l lines of n symbols
    C2 n k d FIELD lambdas mus            lists comma-separated, '-' if empty
    C3 nbar u k dbar FIELD lam mus
    RS q u nbar k dbar primes FIELD seed  then n lines, one symbol each

An erased symbol is written ``*``.
"""
from __future__ import annotations

import json
from pathlib import Path

from . import code_c1, code_c3, code_oa, code_rs
from .arraycode import ParameterError, check_shape
from .families import Code
from .ffield import FieldCtx, is_irreducible


class FormatError(ValueError):
    pass


def _ints(xs) -> list[int]:
    return [int(x) for x in xs]


def _csv(xs) -> str:
    xs = _ints(xs)
    return ",".join(map(str, xs)) if xs else "-"


def _parse_csv(text: str) -> list[int]:
    return [] if text == "-" else [int(t) for t in text.split(",")]


def _field_from_header(text: str) -> FieldCtx:
    try:
        ctx = FieldCtx.from_header(text)
    except Exception as exc:
        raise FormatError(f"bad field header {text!r}: {exc}") from None
    if ctx.modulus is not None and not is_irreducible(ctx.modulus, ctx.p):
        raise FormatError(f"modulus in {text!r} is reducible")
    return ctx


def decode_symbol(F: FieldCtx, tok: str):
    """Decimal integer in [0, |F|) to an element; other values are rejected."""
    v = int(tok)
    if not 0 <= v < F.order:
        raise FormatError(f"{v} is outside 0..{F.order - 1}")
    return F(v)


# ---------------------------------------------------------------------------
# spec JSON


def spec_to_dict(code: Code) -> dict:
    s = code.spec
    out = {"family": code.family, "params": code.params(), "field": s.field.header}
    if code.family == "C1":
        out["lam"] = int(s.lam)
    elif code.family == "C2":
        out["lambdas"] = _ints(s.lambdas)
        out["mus"] = _ints(s.mus)
    elif code.family == "C3":
        out["lam"] = int(s.lam)
        out["mus"] = _ints(s.mus)
    else:
        out["primes"] = list(s.primes)
        out["seed"] = s.seed
        out["rack_elems"] = [str(int(x)) for x in s.rack_elems]
        out["lam"] = str(int(s.lam))
        out["mu"] = str(int(s.mu))
    return out


def spec_from_dict(d: dict) -> Code:
    try:
        family = d["family"]
        p = d["params"]
        field = _field_from_header(d["field"])
        if family == "C1":
            spec = code_c1.build_c1(p["nbar"], p["u"], p["k"], p["dbar"], field=field, lam=d["lam"])
        elif family == "C2":
            spec = code_oa.build_c2(p["n"], p["k"], p["d"], field=field, lambdas=d["lambdas"], mus=d["mus"])
        elif family == "C3":
            spec = code_c3.build_c3(p["nbar"], p["u"], p["k"], p["dbar"], field=field, lam=d["lam"], mus=d["mus"])
        elif family == "RS":
            spec = _rs_from_dict(d, p, field)
        else:
            raise FormatError(f"unknown family {family!r}")
    except KeyError as exc:
        raise FormatError(f"spec is missing {exc.args[0]!r}") from None
    return Code(spec)


def _rs_from_dict(d, p, field):
    prm = code_rs.rs_params(p["q"], p["u"], p["nbar"], p["k"], p["dbar"])
    if tuple(d["primes"]) != prm.primes:
        raise FormatError(f"primes {d['primes']} differ from the canonical {list(prm.primes)}")
    if field.m != code_rs._prime_power(prm.q)[1] * prm.l:
        raise FormatError("field degree does not match l")
    spec = code_rs.RSSpec(
        prm.q, prm.u, prm.nbar, prm.k, prm.dbar, prm.primes, field,
        tuple(field(int(x)) for x in d["rack_elems"]), field(int(d["lam"])), field(int(d["mu"])), d["seed"],
    )
    if len(set(spec.points)) != spec.n:
        raise ParameterError("evaluation points are not distinct")
    return spec


def save_spec(path, code: Code):
    Path(path).write_text(json.dumps(spec_to_dict(code), indent=2, sort_keys=True) + "\n")


def load_spec(path) -> Code:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    return spec_from_dict(d)


# ---------------------------------------------------------------------------
# codeword text


def header_line(code: Code) -> str:
    s = code.spec
    f = s.field.header
    if code.family == "C1":
        parts = ["C1", s.nbar, s.u, s.k, s.dbar, f, int(s.lam)]
    elif code.family == "C2":
        parts = ["C2", s.n, s.k, s.d, f, _csv(s.lambdas), _csv(s.mus)]
    elif code.family == "C3":
        parts = ["C3", s.nbar, s.u, s.k, s.dbar, f, int(s.lam), _csv(s.mus)]
    else:
        parts = ["RS", s.q, s.u, s.nbar, s.k, s.dbar, _csv(s.primes), f, s.seed]
    return " ".join(map(str, parts))


def _sym(x) -> str:
    return "*" if x is None else str(int(x))


def format_codeword(code: Code, cw) -> str:
    lines = [header_line(code)]
    if code.family == "RS":
        if len(cw) != code.n:
            raise ValueError(f"codeword must have n={code.n} symbols")
        lines += [_sym(x) for x in cw]
    else:
        check_shape(cw, code.l, code.n)
        lines += [" ".join(_sym(x) for x in row) for row in cw]
    return "\n".join(lines) + "\n"


def parse_codeword(code: Code, text: str):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty codeword file")
    if lines[0] != header_line(code):
        raise FormatError(f"codeword header {lines[0]!r} does not match the spec ({header_line(code)!r})")
    F = code.field

    def sym(tok):
        if tok == "*":
            return None
        try:
            return decode_symbol(F, tok)
        except ValueError as exc:
            raise FormatError(f"bad symbol {tok!r}: {exc}") from None

    body = lines[1:]
    if code.family == "RS":
        if len(body) != code.n:
            raise FormatError(f"expected {code.n} symbol lines, got {len(body)}")
        return [sym(t) for t in body]
    if len(body) != code.l:
        raise FormatError(f"expected {code.l} rows, got {len(body)}")
    cw = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != code.n:
            raise FormatError(f"row {i} has {len(toks)} symbols, expected {code.n}")
        cw.append([sym(t) for t in toks])
    for j in range(code.n):
        col = [row[j] is None for row in cw]
        if any(col) and not all(col):
            raise FormatError(f"node {j} is partially erased")
    return cw


def write_codeword(path, code: Code, cw):
    Path(path).write_text(format_codeword(code, cw))


def read_codeword(path, code: Code):
    return parse_codeword(code, Path(path).read_text())
