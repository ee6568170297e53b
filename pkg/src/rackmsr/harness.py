"""Experiment runner: sweeps failures, meters transcripts, checks bounds.

A :class:`Report` is plain data; ``Report.to_json`` is deterministic for a
fixed config and seed (keys sorted, no timings), which makes reports
diffable across runs.  Wall-clock time is kept on the object for the TSV
summary only.
"""
from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import bounds
from .arraycode import DecodeError
from .bounds import BoundReport
from .families import Code, build_code

CHECKS = ("mds", "repair", "uniform-download", "access", "bounds", "optimal-update")
DEFAULT_CEILING = 5000


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    params: dict
    seed: int = 0
    scope: str | int = "exhaustive"  # or a scenario count to sample
    checks: tuple[str, ...] = CHECKS
    codewords: int = 1
    ceiling: int = DEFAULT_CEILING
    update_probes: int = 100

    def __post_init__(self):
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
        if self.scope != "exhaustive" and not (isinstance(self.scope, int) and self.scope > 0):
            raise ValueError("scope must be 'exhaustive' or a positive scenario count")


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self):
        return {"name": self.name, "status": self.status, "detail": _jsonable(self.detail)}


@dataclass
class Report:
    family: str
    params: dict
    seed: int
    field: str
    l: int
    checks: dict[str, CheckResult] = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    bounds: list[BoundReport] = field(default_factory=list)
    scenarios: list[dict] = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(sorted(self.params.items())),
            "seed": self.seed,
            "field": self.field,
            "l": self.l,
            "passed": self.passed,
            "checks": {k: v.to_dict() for k, v in sorted(self.checks.items())},
            "counts": _jsonable(self.counts),
            "bounds": [b.to_dict() for b in sorted(self.bounds, key=lambda b: b.name)],
            "scenarios": sorted(
                ({k: v for k, v in _jsonable(s).items() if k != "access_rows"} for s in self.scenarios),
                key=lambda s: (s["failed"], s["helpers"]),
            ),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_tsv(self) -> str:
        rows = [("check", "status", "detail")]
        for name, c in sorted(self.checks.items()):
            rows.append((name, c.status, json.dumps(_jsonable(c.detail), sort_keys=True)))
        for b in sorted(self.bounds, key=lambda b: b.name):
            rows.append((f"bound:{b.name}", _fmt(b.value), f"measured={b.measured} attained={b.attained}"))
        rows.append(("wall_clock_s", f"{self.wall_clock:.3f}", ""))
        return "\n".join("\t".join(map(str, r)) for r in rows) + "\n"


def _fmt(x):
    return str(x) if isinstance(x, Fraction) else repr(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# ---------------------------------------------------------------------------
# scenario selection


def _choose(pool: list, size: int, count: int, rng: random.Random) -> list[tuple]:
    """`count` distinct size-subsets of pool (all of them if there are fewer)."""
    total = math.comb(len(pool), size)
    if total <= count:
        return list(combinations(pool, size))
    seen = set()
    while len(seen) < count:
        seen.add(tuple(sorted(rng.sample(pool, size))))
    return sorted(seen)


def repair_scenarios(code: Code, scope="exhaustive", ceiling: int = DEFAULT_CEILING, rng=None) -> list[tuple[int, tuple]]:
    """(failed node, helper set) pairs: exhaustive under the ceiling, else stratified.

    The stratified sample covers every failed node with an equal share of
    randomly chosen helper sets.
    """
    rng = rng or random.Random(0)
    per_node = math.comb(code.racks - 1, code.helpers_needed)
    total = code.n * per_node
    budget = total if scope == "exhaustive" else min(total, int(scope))
    budget = min(budget, ceiling)
    share = max(1, budget // code.n)
    out = []
    for f in range(code.n):
        for hs in _choose(code.helper_pool(f), code.helpers_needed, share, rng):
            out.append((f, hs))
    return out


def erasure_patterns(code: Code, scope="exhaustive", ceiling: int = DEFAULT_CEILING, rng=None) -> list[tuple]:
    rng = rng or random.Random(0)
    total = math.comb(code.n, code.r)
    budget = total if scope == "exhaustive" else min(total, int(scope))
    return _choose(list(range(code.n)), code.r, min(budget, ceiling), rng)


# ---------------------------------------------------------------------------
# checks


def verify_mds(code: Code, codewords, patterns, decoder=None) -> CheckResult:
    """Every pattern of r erasures on every codeword must decode exactly."""
    decoder = decoder or code.decode
    tried = 0
    for ci, cw in enumerate(codewords):
        for pat in patterns:
            tried += 1
            try:
                ok = decoder(code.erase(cw, pat)) == cw
            except (DecodeError, ArithmeticError) as exc:
                return CheckResult("mds", "fail", {"codeword": ci, "erased": list(pat), "error": str(exc)})
            if not ok:
                return CheckResult("mds", "fail", {"codeword": ci, "erased": list(pat), "error": "wrong output"})
    return CheckResult("mds", "pass", {"patterns": len(patterns), "codewords": len(codewords), "decodes": tried})


def run_repair_sweep(code: Code, cw, scenarios) -> tuple[CheckResult, list[dict]]:
    cache: dict = {}
    rows = []
    first_bad = None
    for f, hs in scenarios:
        col, tr = code.repair(cw, f, hs, cache)
        exact = col == code.column(cw, f)
        row = {
            "failed": f,
            "helpers": list(hs),
            "exact": exact,
            "bandwidth": tr.bandwidth,
            "per_helper": tr.per_helper_download(),
            "access": tr.access_count,
            "per_node_access": tr.per_node_access(),
            "access_rows": sorted({tuple(v) for v in tr.accessed.values()}),
            "unit": tr.unit,
        }
        rows.append(row)
        if not exact and first_bad is None:
            first_bad = {"failed": f, "helpers": list(hs)}
    if first_bad is not None:
        return CheckResult("repair", "fail", {"scenario": first_bad}), rows
    return CheckResult("repair", "pass", {"scenarios": len(rows)}), rows


def check_uniform_download(code: Code, rows) -> CheckResult:
    """Each helper must send exactly l/sbar base symbols (needs kbar > 1)."""
    if code.kbar <= 1:
        return CheckResult("uniform-download", "skipped", {"reason": "needs kbar > 1"})
    target = code.per_helper_target()
    for row in rows:
        for h, amount in row["per_helper"].items():
            if amount != target:
                return CheckResult(
                    "uniform-download",
                    "fail",
                    {"failed": row["failed"], "helpers": row["helpers"], "helper": h, "download": amount, "expected": target},
                )
    return CheckResult("uniform-download", "pass", {"per_helper": target})


def access_reports(code: Code, measured: int | None) -> list[BoundReport]:
    """Access bound with s = sbar*u, plus the variant with s = d-k+1, d = dbar*u+u-1."""
    ok, notes = bounds.access_bound_applicable(code.kbar, code.helpers_needed, code.u, code.k)
    out = [
        BoundReport(
            "access",
            {"dbar": code.helpers_needed, "u": code.u, "l": code.l, "s": code.access_s()},
            code.access_bound(),
            measured,
            applicable=ok,
            notes=notes,
        )
    ]
    s_alt = code.access_s() - code.v
    if s_alt != code.access_s():
        out.append(
            BoundReport(
                "access_d_minus_k",
                {"dbar": code.helpers_needed, "u": code.u, "l": code.l, "s": s_alt},
                bounds.access_bound(code.helpers_needed, code.u, code.l, s_alt),
                measured,
                applicable=ok,
                notes=notes + ("s = d-k+1 with d = dbar*u + u - 1",),
            )
        )
    return out


def check_access(code: Code, rows) -> tuple[CheckResult, list[BoundReport]]:
    """Measured access versus the lower bound, plus structural access claims.

    C2 must read exactly l/s rows per helper; C3 exactly l/sbar per helper
    node; both read the same row set on every helper for a fixed failure.
    """
    if not rows:
        return CheckResult("access", "skipped", {"reason": "no repairs ran"}), []
    worst = max(rows, key=lambda r: (r["access"], r["failed"], r["helpers"]))
    reports = access_reports(code, worst["access"])
    bound = reports[0].value
    detail = {
        "measured_max": worst["access"],
        "measured_min": min(r["access"] for r in rows),
        "bound": bound,
        "ratio": Fraction(worst["access"]) / bound,
        "worst": {"failed": worst["failed"], "helpers": worst["helpers"]},
    }
    below = [r for r in rows if r["access"] < bound]
    if below:
        detail["below_bound"] = {"failed": below[0]["failed"], "helpers": below[0]["helpers"]}
        return CheckResult("access", "fail", detail), reports
    if code.family in ("C2", "C3"):
        per_node = Fraction(code.l, code.sbar)
        by_failed: dict[int, set] = {}
        for r in rows:
            if any(a != per_node for a in r["per_node_access"].values()) or len(r["access_rows"]) != 1:
                detail["nonuniform"] = {"failed": r["failed"], "helpers": r["helpers"]}
                return CheckResult("access", "fail", detail), reports
            by_failed.setdefault(r["failed"], set()).update(r["access_rows"])
        split = [f for f, sets in by_failed.items() if len(sets) != 1]
        if split:
            detail["row_sets_differ"] = {"failed": split[0]}
            return CheckResult("access", "fail", detail), reports
        detail["per_node"] = per_node
    if code.family == "C2" and worst["access"] != bound:
        return CheckResult("access", "fail", detail), reports
    return CheckResult("access", "pass", detail), reports


def check_bandwidth(code: Code, rows) -> tuple[CheckResult, list[BoundReport]]:
    """Every scenario must download exactly the cut-set value."""
    bound = code.bandwidth_bound()
    if not rows:
        return CheckResult("bounds", "skipped", {"reason": "no repairs ran"}), []
    worst = max(rows, key=lambda r: (r["bandwidth"], r["failed"], r["helpers"]))
    name = "cutset" if code.family == "C2" else "rack_cutset"
    inputs = {"d": code.helpers_needed, "k": code.k, "l": code.l} if code.family == "C2" else {
        "dbar": code.helpers_needed, "kbar": code.kbar, "l": code.l}
    reports = [BoundReport(name, inputs, bound, worst["bandwidth"])]
    sub_variant = "b" if code.family in ("C2", "C3") else "a"
    reports.append(bounds.subpacketization_report(code.racks, code.k, code.helpers_needed, code.u, sub_variant, code.l))
    off = [r for r in rows if r["bandwidth"] != bound]
    detail = {"bound": bound, "measured_max": worst["bandwidth"], "measured_min": min(r["bandwidth"] for r in rows),
              "unit": rows[0]["unit"]}
    if off:
        detail["off_bound"] = {"failed": off[0]["failed"], "helpers": off[0]["helpers"], "bandwidth": off[0]["bandwidth"]}
        return CheckResult("bounds", "fail", detail), reports
    if reports[1].applicable and code.l < reports[1].value:
        detail["subpacketization_violated"] = True
        return CheckResult("bounds", "fail", detail), reports
    return CheckResult("bounds", "pass", detail), reports


def check_optimal_update(code: Code, rng: random.Random, probes: int) -> CheckResult:
    """Changing one data symbol must change exactly r parity symbols, all in its row."""
    if code.family != "C1":
        return CheckResult("optimal-update", "skipped", {"reason": "only the C1 construction claims optimal update"})
    F = code.field
    data = [[F.random(rng) for _ in range(code.k)] for _ in range(code.l)]
    base = code.encode(data)
    for _ in range(probes):
        i, j = rng.randrange(code.l), rng.randrange(code.k)
        delta = F.random(rng)
        while delta.is_zero():
            delta = F.random(rng)
        changed = [row[:] for row in data]
        changed[i][j] = changed[i][j] + delta
        cw = code.encode(changed)
        diff = [(a, b) for a in range(code.l) for b in range(code.k, code.n) if cw[a][b] != base[a][b]]
        if len(diff) != code.r or any(a != i for a, _ in diff):
            return CheckResult("optimal-update", "fail", {"row": i, "col": j, "changed": [list(d) for d in diff]})
    return CheckResult("optimal-update", "pass", {"probes": probes, "changed_per_probe": code.r})


# ---------------------------------------------------------------------------


def run_experiment(cfg: ExperimentConfig, code: Code | None = None, decoder=None, codewords=None) -> Report:
    """Run the configured checks.

    ``codewords`` are used first as test words (topped up with random ones to
    ``cfg.codewords``); ``decoder`` replaces the code's own erasure decoder.
    """
    start = time.perf_counter()
    code = code or build_code(cfg.family, cfg.params, seed=None)
    rng = random.Random(cfg.seed)
    report = Report(code.family, code.params(), cfg.seed, code.field.header, code.l)
    codewords = list(codewords or [])
    while len(codewords) < max(1, cfg.codewords):
        codewords.append(code.random_codeword(rng))
    report.counts = {"n": code.n, "k": code.k, "racks": code.racks, "u": code.u, "sbar": code.sbar,
                     "degenerate": code.degenerate}

    if "mds" in cfg.checks:
        pats = erasure_patterns(code, cfg.scope, cfg.ceiling, rng)
        report.checks["mds"] = verify_mds(code, codewords, pats, decoder)

    want_repair = {"repair", "uniform-download", "access", "bounds"} & set(cfg.checks)
    if want_repair:
        scen = repair_scenarios(code, cfg.scope, cfg.ceiling, rng)
        res, rows = run_repair_sweep(code, codewords[0], scen)
        report.scenarios = rows
        if "repair" in cfg.checks:
            report.checks["repair"] = res
        if rows:
            report.counts.update(
                scenarios=len(rows),
                bandwidth_max=max(r["bandwidth"] for r in rows),
                bandwidth_min=min(r["bandwidth"] for r in rows),
                access_max=max(r["access"] for r in rows),
                unit=rows[0]["unit"],
            )
        if "uniform-download" in cfg.checks:
            report.checks["uniform-download"] = check_uniform_download(code, rows)
        if "access" in cfg.checks:
            res_a, reps = check_access(code, rows)
            report.checks["access"] = res_a
            report.bounds.extend(reps)
        if "bounds" in cfg.checks:
            res_b, reps = check_bandwidth(code, rows)
            report.checks["bounds"] = res_b
            report.bounds.extend(reps)

    if "optimal-update" in cfg.checks:
        report.checks["optimal-update"] = check_optimal_update(code, rng, cfg.update_probes)

    report.wall_clock = time.perf_counter() - start
    return report
