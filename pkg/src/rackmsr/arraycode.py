"""Shared pieces of the array codes: transcripts, digit maps, data helpers.

A codeword is an l x n list of rows; ``cw[row][node]``.  An erased node has
``None`` in every row of its column.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .ffield import FieldCtx, FieldElement

Array = list[list[FieldElement]]


class ParameterError(ValueError):
    pass


class DecodeError(ValueError):
    pass


class RepairError(ValueError):
    pass


@dataclass
class RepairTranscript:
    """What crossed rack boundaries and what was read during one repair.

    ``downloads`` is keyed by helper id (rack index, or node index for the
    homogeneous code).  ``accessed`` and ``local_reads`` map node -> row
    indices read; local reads happen inside the host rack and are free.
    ``symbol_weight`` converts one downloaded element into base-field symbols
    (1 for array codes, the subfield degree for the RS scheme).
    """

    failed: int
    host: int
    helpers: tuple[int, ...]
    downloads: dict[int, list[FieldElement]] = field(default_factory=dict)
    accessed: dict[int, list[int]] = field(default_factory=dict)
    local_reads: dict[int, list[int]] = field(default_factory=dict)
    symbol_weight: int = 1
    unit: str = "F"

    @property
    def download_count(self) -> int:
        return sum(len(v) for v in self.downloads.values())

    @property
    def bandwidth(self) -> int:
        return self.download_count * self.symbol_weight

    def per_helper_download(self) -> dict[int, int]:
        return {h: len(v) * self.symbol_weight for h, v in sorted(self.downloads.items())}

    @property
    def access_count(self) -> int:
        return sum(len(v) for v in self.accessed.values())

    def per_node_access(self) -> dict[int, int]:
        return {j: len(v) for j, v in sorted(self.accessed.items())}

    def to_dict(self) -> dict:
        return {
            "failed": self.failed,
            "host": self.host,
            "helpers": list(self.helpers),
            "unit": self.unit,
            "symbol_weight": self.symbol_weight,
            "download_count": self.download_count,
            "bandwidth": self.bandwidth,
            "access_count": self.access_count,
            "downloads": {str(h): [int(x) for x in v] for h, v in sorted(self.downloads.items())},
            "accessed": {str(j): list(v) for j, v in sorted(self.accessed.items())},
            "local_reads": {str(j): len(v) for j, v in sorted(self.local_reads.items())},
        }


def digit(i: int, pos: int, base: int) -> int:
    return (i // base**pos) % base


def set_digit(i: int, pos: int, value: int, base: int) -> int:
    w = base**pos
    return i + (value - digit(i, pos, base)) * w


def random_data(ctx: FieldCtx, nrows: int, ncols: int, rng: random.Random) -> Array:
    return [[ctx.random(rng) for _ in range(ncols)] for _ in range(nrows)]


def zero_array(ctx: FieldCtx, nrows: int, ncols: int) -> Array:
    return [[ctx.zero] * ncols for _ in range(nrows)]


def erase(cw: Array, nodes) -> Array:
    nodes = set(nodes)
    return [[None if j in nodes else x for j, x in enumerate(row)] for row in cw]


def erased_nodes(cw: Array) -> list[int]:
    if not cw:
        return []
    return [j for j, x in enumerate(cw[0]) if x is None]


def column(cw: Array, node: int) -> list[FieldElement]:
    return [row[node] for row in cw]


def check_shape(cw: Array, nrows: int, ncols: int, what: str = "codeword"):
    if len(cw) != nrows or any(len(row) != ncols for row in cw):
        raise ValueError(f"{what} must be {nrows} x {ncols}")


def check_helpers(helpers, host: int, count: int, total: int) -> tuple[int, ...]:
    hs = tuple(sorted(set(helpers)))
    if len(hs) != len(tuple(helpers)):
        raise RepairError("helper list has duplicates")
    if host in hs:
        raise RepairError(f"host {host} cannot be a helper")
    if len(hs) != count:
        raise RepairError(f"need exactly {count} helpers, got {len(hs)}")
    if any(h < 0 or h >= total for h in hs):
        raise RepairError(f"helper index out of range 0..{total - 1}")
    return hs
