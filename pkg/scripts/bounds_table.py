"""Tabulate the repair bounds over a parameter range (no codes are built).

For each (nbar, u, kbar, dbar) the table lists l = sbar^nbar, the rack cut-set
value, the homogeneous value at d = dbar*u + u - 1 and its saving, the access
bound with s = sbar*u, and both sub-packetization lower bounds.

    python3 scripts/bounds_table.py --max-racks 6 --max-u 3
"""
from __future__ import annotations

import argparse

from rackmsr import bounds


def rows(max_racks: int, max_u: int):
    for nbar in range(2, max_racks + 1):
        for u in range(1, max_u + 1):
            for kbar in range(1, nbar):
                for dbar in range(kbar, nbar):
                    sbar = dbar - kbar + 1
                    l = sbar**nbar
                    k, d = kbar * u, dbar * u + u - 1
                    rack, local = bounds.homogeneous_decomposition(d, k, u, l)
                    yield (
                        nbar, u, kbar, dbar, sbar, l, rack, rack + local, local,
                        bounds.access_bound(dbar, u, l, sbar * u),
                        f"{bounds.subpacketization_bound(nbar, kbar, dbar, u, 'a'):.4f}",
                        f"{bounds.subpacketization_bound(nbar, kbar, dbar, u, 'b'):.4f}",
                    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-racks", type=int, default=5)
    ap.add_argument("--max-u", type=int, default=3)
    args = ap.parse_args(argv)
    print("nbar\tu\tkbar\tdbar\tsbar\tl\track_cutset\thomogeneous\tsaving\taccess\tsubpack_a\tsubpack_b")
    for r in rows(args.max_racks, args.max_u):
        print("\t".join(map(str, r)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
