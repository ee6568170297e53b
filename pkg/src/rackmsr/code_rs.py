"""Scalar Reed-Solomon codes with trace-based optimal rack repair.

Everything lives in one flat field K = GF(q^l), l = sbar * prod(p_i), over the
prime field GF(p) with q = p^e.  Subfields are identified by their degree over
GF(p): F = GF(q^prod p_i), F_i = GF(q^(prod p_i / p_i)).  Rack i (0-based) gets
points lam_i * lam^j, j < u, with lam_i of degree p_i over GF(q) and lam of
order u in GF(q).  Node m = i*u + j stores c_m = f(lam_i lam^j) for a message
polynomial f of degree < k.

Repairing node (i*, j*) from helper racks R uses the dual codewords
(a_m x^(uw) h(x))_m, h vanishing on the racks outside R and i*, and each
helper rack sends p_{i*} traces into F_{i*}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import prod

import numpy as np
from sympy import factorint, nextprime

from . import linalg
from .arraycode import DecodeError, ParameterError, RepairError, RepairTranscript, check_helpers
from .ffield import (
    DEFAULT_SEED,
    FieldCtx,
    FieldElement,
    element_of_degree,
    element_of_order,
    in_subfield,
    make_extension_field,
    trace_to_subfield,
)
from .linalg import Matrix

MAX_L = 1024


def _prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if q < 2 or len(f) != 1:
        raise ParameterError(f"q={q} is not a prime power")
    ((p, e),) = f.items()
    return p, e


def select_primes(count: int, sbar: int, above: int) -> tuple[int, ...]:
    """The smallest `count` primes that are 1 mod sbar and exceed `above`."""
    out = []
    p = above
    while len(out) < count:
        p = nextprime(p)
        if (p - 1) % sbar == 0:
            out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class RSParams:
    q: int
    u: int
    nbar: int
    k: int
    dbar: int
    primes: tuple[int, ...]

    @property
    def n(self):
        return self.nbar * self.u

    @property
    def kbar(self):
        return self.k // self.u

    @property
    def sbar(self):
        return self.dbar - self.kbar + 1

    @property
    def l(self):
        return self.sbar * prod(self.primes)


def rs_params(q: int, u: int, nbar: int, k: int, dbar: int) -> RSParams:
    """Check the parameter constraints and pick the primes; no field is built."""
    _prime_power(q)
    if u < 1 or (q - 1) % u:
        raise ParameterError(f"rack size u={u} must divide q-1={q - 1}")
    if nbar < 2:
        raise ParameterError("need at least 2 racks")
    n = nbar * u
    if not u <= k < n:
        raise ParameterError(f"need u={u} <= k={k} < n={n}")
    kbar = k // u
    if not kbar <= dbar <= nbar - 1:
        raise ParameterError(f"need floor(k/u)={kbar} <= dbar={dbar} <= nbar-1={nbar - 1}")
    sbar = dbar - kbar + 1
    return RSParams(q, u, nbar, k, dbar, select_primes(nbar, sbar, u))


@dataclass(frozen=True, eq=False)
class RSSpec:
    q: int
    u: int
    nbar: int
    k: int
    dbar: int
    primes: tuple[int, ...]
    field: FieldCtx
    rack_elems: tuple[FieldElement, ...]  # lam_i
    lam: FieldElement
    mu: FieldElement
    seed: int

    family = "RS"

    @property
    def n(self):
        return self.nbar * self.u

    @property
    def r(self):
        return self.n - self.k

    @property
    def kbar(self):
        return self.k // self.u

    @property
    def v(self):
        return self.k - self.kbar * self.u

    @property
    def rbar(self):
        return self.nbar - self.kbar

    @property
    def sbar(self):
        return self.dbar - self.kbar + 1

    @property
    def l(self):
        return self.sbar * prod(self.primes)

    @property
    def degenerate(self) -> bool:
        return self.sbar == 1

    @property
    def q_degree(self) -> int:
        """e with q = p^e."""
        return self.field.m // self.l

    def subfield_degree(self, host: int) -> int:
        """[F_host : GF(q)]."""
        return prod(self.primes) // self.primes[host]

    @cached_property
    def points(self) -> tuple[FieldElement, ...]:
        return tuple(self.rack_elems[i] * self.lam**j for i in range(self.nbar) for j in range(self.u))

    @cached_property
    def dual_multipliers(self) -> tuple[FieldElement, ...]:
        pts = self.points
        out = []
        for j, x in enumerate(pts):
            acc = self.field.one
            for jj, y in enumerate(pts):
                if jj != j:
                    acc = acc * (x - y)
            out.append(acc.inverse())
        return tuple(out)


@lru_cache(maxsize=None)
def _big_field(p: int, m: int, seed: int) -> FieldCtx:
    return make_extension_field(p, m, seed=seed)


def build_rs(q: int, u: int, nbar: int, k: int, dbar: int, seed: int = DEFAULT_SEED, max_l: int | None = MAX_L) -> RSSpec:
    prm = rs_params(q, u, nbar, k, dbar)
    if max_l is not None and prm.l > max_l:
        raise ParameterError(f"l={prm.l} exceeds the limit {max_l}; pass a larger max_l to override")
    p, e = _prime_power(q)
    K = _big_field(p, e * prm.l, seed)
    rng = random.Random(seed)
    mu = element_of_degree(K, K.m, rng)
    rack_elems = tuple(element_of_degree(K, e * pi, rng) for pi in prm.primes)
    lam = element_of_order(K, u)
    if prm.sbar > 1 and in_subfield(mu, e * prod(prm.primes)):
        raise ParameterError("mu lies in F")  # pragma: no cover
    spec = RSSpec(q, u, nbar, k, dbar, prm.primes, K, rack_elems, lam, mu, seed)
    if len(set(spec.points)) != spec.n:
        raise ParameterError("evaluation points are not distinct")
    return spec


# ---------------------------------------------------------------------------
# encoding and decoding


def _horner(coeffs, x, zero):
    acc = zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def rs_encode(spec: RSSpec, message) -> list[FieldElement]:
    """c_m = f(point_m) with f = sum message[t] x^t."""
    if len(message) != spec.k:
        raise ValueError(f"message must have k={spec.k} coefficients")
    K = spec.field
    coeffs = [K(x) for x in message]
    return [_horner(coeffs, x, K.zero) for x in spec.points]


def _lagrange_eval(xs, ys, x, one):
    total = x - x
    for a, (xa, ya) in enumerate(zip(xs, ys)):
        num = one
        den = one
        for b, xb in enumerate(xs):
            if b != a:
                num = num * (x - xb)
                den = den * (xa - xb)
        total = total + ya * num / den
    return total


def rs_decode(spec: RSSpec, cw) -> list[FieldElement]:
    """Fill erased (None) symbols by interpolation through k known ones."""
    if len(cw) != spec.n:
        raise ValueError(f"codeword must have n={spec.n} symbols")
    known = [j for j, c in enumerate(cw) if c is not None]
    if len(known) < spec.k:
        raise DecodeError(f"{spec.n - len(known)} erasures exceed r={spec.r}")
    base = known[: spec.k]
    xs = [spec.points[j] for j in base]
    ys = [cw[j] for j in base]
    one = spec.field.one
    out = list(cw)
    for j in range(spec.n):
        val = _lagrange_eval(xs, ys, spec.points[j], one)
        if cw[j] is None:
            out[j] = val
        elif j not in base and val != cw[j]:
            raise DecodeError(f"symbol {j} is inconsistent with the code")
    return out


def rs_parity_check(spec: RSSpec, cw) -> bool:
    for t in range(spec.r):
        acc = spec.field.zero
        for a, x, c in zip(spec.dual_multipliers, spec.points, cw):
            acc = acc + a * x**t * c
        if acc:
            return False
    return True


# ---------------------------------------------------------------------------
# repair


@dataclass(frozen=True, eq=False)
class RepairSpace:
    """Basis of S_host over F_host, plus the dual basis of {e_m lam_host^(uw)}."""

    host: int
    basis: tuple[FieldElement, ...]
    sub_degree: int  # degree of F_host over GF(p)
    functionals: tuple[FieldElement, ...]  # e_m lam_host^(uw), index w*len(basis) + m
    dual: tuple[FieldElement, ...]
    rank_subspace: int
    rank_full: int


def _gfp_rank(vectors) -> int:
    ctx = vectors[0].ctx
    arr = np.array([x.coeffs for x in vectors], dtype=np.int64)
    return linalg.rank_mod_p(arr, ctx.p)


def subfield_basis(K: FieldCtx, sub: int) -> list[FieldElement]:
    """GF(p)-basis 1, gamma, ..., gamma^(sub-1) of the degree-`sub` subfield."""
    gamma = element_of_degree(K, sub, random.Random(sub))
    out = [K.one]
    for _ in range(sub - 1):
        out.append(out[-1] * gamma)
    return out


def build_repair_space(spec: RSSpec, host: int) -> RepairSpace:
    if not 0 <= host < spec.nbar:
        raise ParameterError(f"host rack must be in 0..{spec.nbar - 1}")
    K = spec.field
    sbar, ph = spec.sbar, spec.primes[host]
    # beta = lam_host^u is both the span element and the shift; it has degree
    # p_host over F_host, so {beta^t} is a basis of F over F_host
    beta = spec.rack_elems[host] ** spec.u
    basis = []
    for t in range(sbar):
        for e in range((ph - 1) // sbar):
            basis.append(spec.mu**t * beta ** (t + e * sbar))
    tail = K.zero
    for t in range(sbar):
        tail = tail + spec.mu**t
    basis.append(tail * beta ** (ph - 1))
    if len(basis) != ph:
        raise ParameterError("repair basis has the wrong size")  # pragma: no cover

    sub = spec.q_degree * spec.subfield_degree(host)
    fbasis = subfield_basis(K, sub)
    functionals = []
    for w in range(sbar):
        sw = beta**w
        functionals.extend(b * sw for b in basis)
    rank_sub = _gfp_rank([b * f for b in basis for f in fbasis])
    rank_full = _gfp_rank([x * f for x in functionals for f in fbasis])
    if rank_sub != ph * sub:
        raise ParameterError(f"repair subspace for rack {host} has F-dimension below {ph}")
    if rank_full != K.m:
        raise ParameterError(f"repair subspace shifts for rack {host} do not span the field")

    def tr(x):
        return trace_to_subfield(x, sub)

    gram = Matrix(K, [[tr(a * b) for b in functionals] for a in functionals])
    ginv = linalg.inverse(gram)
    dual = []
    for b in range(len(functionals)):
        acc = K.zero
        for c, f in enumerate(functionals):
            acc = acc + ginv[c, b] * f
        dual.append(acc)
    return RepairSpace(host, tuple(basis), sub, tuple(functionals), tuple(dual), rank_sub, rank_full)


def annihilator_values(spec: RSSpec, host: int, helpers) -> list[FieldElement]:
    """h evaluated at every point; h vanishes on the racks outside helpers + host."""
    others = [i for i in range(spec.nbar) if i != host and i not in helpers]
    roots = [spec.points[i * spec.u + j] for i in others for j in range(spec.u)]
    out = []
    for x in spec.points:
        acc = spec.field.one
        for y in roots:
            acc = acc * (x - y)
        out.append(acc)
    return out


def dual_check(spec: RSSpec, cw, host: int, helpers) -> bool:
    """(a_m x_m^(uw) h(x_m))_m is orthogonal to cw for w < sbar."""
    hv = annihilator_values(spec, host, helpers)
    for w in range(spec.sbar):
        acc = spec.field.zero
        for a, x, h, c in zip(spec.dual_multipliers, spec.points, hv, cw):
            acc = acc + a * x ** (spec.u * w) * h * c
        if acc:
            return False
    return True


def helper_message(spec: RSSpec, space: RepairSpace, cw, rack: int, hv) -> list[FieldElement]:
    """p_host aggregates sum_j h(x_ij) Tr(e_m a_ij c_ij), each in F_host."""
    out = []
    for e in space.basis:
        acc = spec.field.zero
        for j in range(spec.u):
            m = rack * spec.u + j
            acc = acc + hv[m] * trace_to_subfield(e * spec.dual_multipliers[m] * cw[m], space.sub_degree)
        out.append(acc)
    return out


def rs_repair(spec: RSSpec, cw, failed: int, helpers, space: RepairSpace | None = None) -> tuple[FieldElement, RepairTranscript]:
    host, jstar = divmod(failed, spec.u)
    helpers = check_helpers(helpers, host, spec.dbar, spec.nbar)
    if space is None:
        space = build_repair_space(spec, host)
    elif space.host != host:
        raise RepairError("repair space belongs to another rack")
    hv = annihilator_values(spec, host, helpers)
    tr = RepairTranscript(
        failed=failed,
        host=host,
        helpers=helpers,
        symbol_weight=spec.subfield_degree(host),
        unit=f"GF({spec.q})",
    )
    for i in helpers:
        tr.downloads[i] = helper_message(spec, space, cw, i, hv)
        for j in range(spec.u):
            tr.accessed[i * spec.u + j] = list(range(spec.l))
    local = {host * spec.u + j: cw[host * spec.u + j] for j in range(spec.u) if j != jstar}
    for m in local:
        tr.local_reads[m] = list(range(spec.l))
    return reconstruct(spec, space, tr, local, hv), tr


def reconstruct(spec: RSSpec, space: RepairSpace, tr: RepairTranscript, local: dict, hv) -> FieldElement:
    K = spec.field
    a = spec.dual_multipliers
    nb = len(space.basis)
    x = K.zero
    for w in range(spec.sbar):
        for m in range(nb):
            tau = K.zero
            for i in tr.helpers:
                tau = tau - spec.rack_elems[i] ** (spec.u * w) * tr.downloads[i][m]
            x = x + tau * space.dual[w * nb + m]
    for node, c in local.items():
        x = x - a[node] * hv[node] * c
    denom = a[tr.failed] * hv[tr.failed]
    if denom.is_zero():
        raise RepairError("annihilator vanishes at the failed point")  # pragma: no cover
    return x / denom
