"""Uniform front end over the four code families.

The harness and CLI talk to a :class:`Code`, which hides whether a codeword
is an l x n array (C1, C2, C3) or a vector of n big-field symbols (RS), and
whether helpers are racks or single nodes (C2).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import bounds, code_c1, code_c3, code_oa, code_rs
from .arraycode import ParameterError, RepairTranscript, erase, random_data, zero_array
from .ffield import FieldCtx

FAMILIES = ("C1", "C2", "C3", "RS")


@dataclass(frozen=True, eq=False)
class Code:
    spec: object

    @property
    def family(self) -> str:
        return self.spec.family

    # shape -----------------------------------------------------------------
    @property
    def field(self) -> FieldCtx:
        return self.spec.field

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def l(self) -> int:
        return self.spec.l

    @property
    def u(self) -> int:
        return 1 if self.family == "C2" else self.spec.u

    @property
    def racks(self) -> int:
        return self.n // self.u

    @property
    def kbar(self) -> int:
        return self.k // self.u

    @property
    def v(self) -> int:
        return self.k - self.kbar * self.u

    @property
    def helpers_needed(self) -> int:
        return self.spec.d if self.family == "C2" else self.spec.dbar

    @property
    def sbar(self) -> int:
        return self.helpers_needed - self.kbar + 1

    @property
    def degenerate(self) -> bool:
        return self.spec.degenerate

    def rack_of(self, node: int) -> int:
        return node // self.u

    def params(self) -> dict:
        s = self.spec
        if self.family == "C2":
            return {"n": s.n, "k": s.k, "d": s.d}
        out = {"nbar": s.nbar, "u": s.u, "k": s.k, "dbar": s.dbar}
        if self.family == "RS":
            out["q"] = s.q
        return out

    # data --------------------------------------------------------------------
    def random_codeword(self, rng: random.Random):
        if self.family == "RS":
            return code_rs.rs_encode(self.spec, [self.field.random(rng) for _ in range(self.k)])
        return self.encode(random_data(self.field, self.l, self.k, rng))

    def zero_codeword(self):
        if self.family == "RS":
            return [self.field.zero] * self.n
        return zero_array(self.field, self.l, self.n)

    def encode(self, data):
        if self.family == "C1":
            return code_c1.encode(self.spec, data)
        if self.family == "C2":
            return code_oa.encode(self.spec, data)
        if self.family == "C3":
            return code_c3.encode(self.spec, data)
        return code_rs.rs_encode(self.spec, data)

    def parity_check(self, cw) -> bool:
        if self.family == "C1":
            return code_c1.parity_check(self.spec, cw)
        if self.family == "C2":
            return code_oa.parity_check(self.spec, cw)
        if self.family == "C3":
            return code_c3.parity_check(self.spec, cw)
        return code_rs.rs_parity_check(self.spec, cw)

    def erase(self, cw, nodes):
        if self.family == "RS":
            nodes = set(nodes)
            return [None if j in nodes else c for j, c in enumerate(cw)]
        return erase(cw, nodes)

    def decode(self, cw):
        if self.family == "C1":
            return code_c1.erasure_decode(self.spec, cw)
        if self.family == "C2":
            return code_oa.erasure_decode(self.spec, cw)
        if self.family == "C3":
            return code_c3.erasure_decode(self.spec, cw)
        return code_rs.rs_decode(self.spec, cw)

    def column(self, cw, node: int):
        if self.family == "RS":
            return cw[node]
        return [row[node] for row in cw]

    # repair ------------------------------------------------------------------
    def helper_pool(self, failed: int) -> list[int]:
        """Valid helper ids (nodes for C2, racks otherwise) for a failed node."""
        host = self.rack_of(failed)
        return [e for e in range(self.racks) if e != host]

    def repair(self, cw, failed: int, helpers, cache: dict | None = None) -> tuple[object, RepairTranscript]:
        if not 0 <= failed < self.n:
            raise ParameterError(f"failed node must be in 0..{self.n - 1}")
        if self.family == "C1":
            return code_c1.repair_node(self.spec, cw, failed, helpers)
        if self.family == "C2":
            return code_oa.repair_node_oa(self.spec, cw, failed, helpers)
        if self.family == "C3":
            return code_c3.repair_node_rack(self.spec, cw, failed, helpers)
        host = self.rack_of(failed)
        space = None
        if cache is not None:
            space = cache.get(host)
            if space is None:
                space = cache[host] = code_rs.build_repair_space(self.spec, host)
        return code_rs.rs_repair(self.spec, cw, failed, helpers, space)

    # bounds ------------------------------------------------------------------
    def bandwidth_bound(self) -> Fraction:
        """Minimum download in base units (field symbols, or GF(q) symbols for RS)."""
        if self.family == "C2":
            return bounds.cutset_bound(self.spec.d, self.k, self.l)
        return bounds.rack_cutset_bound(self.spec.dbar, self.kbar, self.l)

    def access_s(self) -> int:
        return self.sbar * self.u

    def access_bound(self) -> Fraction:
        return bounds.access_bound(self.helpers_needed, self.u, self.l, self.access_s())

    def per_helper_target(self) -> Fraction:
        """Download per helper rack (or node) when download is uniform."""
        return Fraction(self.l, self.sbar)


def build_code(family: str, params: dict, field: FieldCtx | None = None, seed: int | None = None) -> Code:
    family = family.upper()
    p = dict(params)
    try:
        if family == "C1":
            spec = code_c1.build_c1(p["nbar"], p["u"], p["k"], p["dbar"], field=field, lam=p.get("lam"))
        elif family == "C2":
            spec = code_oa.build_c2(p["n"], p["k"], p["d"], field=field)
        elif family == "C3":
            spec = code_c3.build_c3(p["nbar"], p["u"], p["k"], p["dbar"], field=field, mus=p.get("mus"))
        elif family == "RS":
            kw = {} if seed is None else {"seed": seed}
            if "max_l" in p:
                kw["max_l"] = p["max_l"]
            spec = code_rs.build_rs(p["q"], p["u"], p["nbar"], p["k"], p["dbar"], **kw)
        else:
            raise ParameterError(f"unknown family {family!r}; choose one of {', '.join(FAMILIES)}")
    except KeyError as exc:
        raise ParameterError(f"missing parameter {exc.args[0]!r} for {family}") from None
    return Code(spec)
