"""Run the full check suite over a grid of parameter sets and print a TSV table.

    python3 scripts/run_sweeps.py                 # array codes, desk scale
    python3 scripts/run_sweeps.py --with-rs       # adds the GF(3^210) RS code
    python3 scripts/run_sweeps.py --json-dir out  # also keep every Report JSON
"""
from __future__ import annotations

import argparse
from pathlib import Path

from rackmsr.harness import ExperimentConfig, run_experiment

GRID = [
    ("C1", {"nbar": 4, "u": 2, "k": 5, "dbar": 3}),
    ("C1", {"nbar": 3, "u": 2, "k": 3, "dbar": 2}),
    ("C1", {"nbar": 3, "u": 3, "k": 4, "dbar": 2}),
    ("C1", {"nbar": 4, "u": 2, "k": 4, "dbar": 3}),
    ("C2", {"n": 4, "k": 2, "d": 3}),
    ("C2", {"n": 5, "k": 2, "d": 3}),
    ("C2", {"n": 6, "k": 3, "d": 4}),
    ("C2", {"n": 5, "k": 2, "d": 4}),
    ("C3", {"nbar": 3, "u": 2, "k": 3, "dbar": 2}),
    ("C3", {"nbar": 4, "u": 2, "k": 5, "dbar": 3}),
    ("C3", {"nbar": 3, "u": 3, "k": 4, "dbar": 2}),
    ("C3", {"nbar": 4, "u": 2, "k": 4, "dbar": 2}),
]
RS_GRID = [("RS", {"q": 3, "u": 2, "nbar": 3, "k": 3, "dbar": 2})]

COLUMNS = ("family", "params", "l", "field", "scenarios", "bandwidth", "bound", "access", "access_bound",
           "access_ratio", "failed_checks", "seconds")


def row(rep) -> tuple:
    counts = rep.counts
    bw = rep.checks.get("bounds")
    acc = rep.checks.get("access")
    failed = [name for name, c in sorted(rep.checks.items()) if c.status == "fail"]
    params = ",".join(f"{k}={v}" for k, v in sorted(rep.params.items()))
    return (
        rep.family, params, rep.l, rep.field, counts.get("scenarios"),
        counts.get("bandwidth_max"), bw.detail.get("bound") if bw else None,
        counts.get("access_max"), acc.detail.get("bound") if acc else None,
        acc.detail.get("ratio") if acc else None, ",".join(failed) or "-", f"{rep.wall_clock:.2f}",
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--codewords", type=int, default=3)
    ap.add_argument("--with-rs", action="store_true")
    ap.add_argument("--json-dir", type=Path)
    args = ap.parse_args(argv)

    grid = GRID + (RS_GRID if args.with_rs else [])
    print("\t".join(COLUMNS))
    ok = True
    for i, (fam, params) in enumerate(grid):
        rep = run_experiment(ExperimentConfig(fam, params, seed=args.seed, codewords=args.codewords))
        ok &= rep.passed
        print("\t".join(map(str, row(rep))), flush=True)
        if args.json_dir:
            args.json_dir.mkdir(parents=True, exist_ok=True)
            (args.json_dir / f"{i:02d}_{fam}.json").write_text(rep.to_json())
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
