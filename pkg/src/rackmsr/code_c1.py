"""Rack-aware MSR array code with optimal repair and optimal update.

Nodes are 0-based, node j = e*u + g sits in rack e at position g.  Row index
j in [0, l) is read as n_racks base-sbar digits, little-endian, so digit e
belongs to rack e.  For row j and t = 0..r-1 the parity checks are

    sum_e sum_g lam^(t*(e*sbar + j_e + g*sbar*nbar)) * c[j][e*u + g] = 0,

so each row on its own is a generalized RS code whose column for node
e*u + g is the point lam^(e*sbar + j_e + g*sbar*nbar).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime

from . import linalg
from .arraycode import (
    Array,
    DecodeError,
    ParameterError,
    RepairTranscript,
    check_helpers,
    check_shape,
    digit,
    erased_nodes,
    set_digit,
)
from .ffield import FieldCtx, FieldElement, element_of_order, make_prime_field, multiplicative_order


@dataclass(frozen=True, eq=False)
class C1Spec:
    nbar: int
    u: int
    k: int
    dbar: int
    field: FieldCtx
    lam: FieldElement

    family = "C1"

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
        return self.sbar**self.nbar

    @property
    def degenerate(self) -> bool:
        return self.sbar == 1

    def exponent(self, node: int, row: int) -> int:
        e, g = divmod(node, self.u)
        return e * self.sbar + digit(row, e, self.sbar) + g * self.sbar * self.nbar

    @cached_property
    def _lam_powers(self):
        order = self.sbar * self.n
        out = [self.field.one]
        for _ in range(order - 1):
            out.append(out[-1] * self.lam)
        return out

    def point(self, node: int, row: int) -> FieldElement:
        return self._lam_powers[self.exponent(node, row)]

    def row_points(self, row: int) -> list[FieldElement]:
        return [self.point(j, row) for j in range(self.n)]


def _validate(nbar, u, k, dbar):
    if u < 1 or nbar < 2:
        raise ParameterError("need at least 2 racks of size >= 1")
    if k < u:
        raise ParameterError(f"k={k} must be at least the rack size u={u}")
    n = nbar * u
    if k >= n:
        raise ParameterError(f"k={k} must be smaller than n={n}")
    kbar = k // u
    if not kbar <= dbar <= nbar - 1:
        raise ParameterError(f"need floor(k/u)={kbar} <= dbar={dbar} <= nbar-1={nbar - 1}")


def smallest_prime_1_mod(modulus: int, above: int) -> int:
    p = modulus + 1
    while not (p > above and isprime(p)):
        p += modulus
    return p


def build_c1(nbar: int, u: int, k: int, dbar: int, field: FieldCtx | None = None, lam=None) -> C1Spec:
    _validate(nbar, u, k, dbar)
    sbar = dbar - k // u + 1
    order = sbar * nbar * u
    if field is None:
        field = make_prime_field(smallest_prime_1_mod(order, order))
    if field.group_order % order or field.order <= order:
        raise ParameterError(f"{field} needs sbar*n={order} dividing |F|-1 and |F| > {order}")
    if lam is None:
        lam = element_of_order(field, order)
    else:
        lam = field(lam)
        if lam.is_zero() or multiplicative_order(lam) != order:
            raise ParameterError(f"lambda must have multiplicative order {order}")
    return C1Spec(nbar, u, k, dbar, field, lam)


# ---------------------------------------------------------------------------


def encode(spec: C1Spec, data: Array) -> Array:
    """Systematic encoding; data occupies nodes 0..k-1, one GRS solve per row."""
    check_shape(data, spec.l, spec.k, "data")
    F = spec.field
    parity_nodes = range(spec.k, spec.n)
    cw = []
    for j, drow in enumerate(data):
        pts = spec.row_points(j)
        rhs = []
        for t in range(spec.r):
            acc = F.zero
            for node, x in enumerate(drow):
                acc = acc + pts[node] ** t * x
            rhs.append(-acc)
        parity = linalg.vandermonde_solve([pts[i] for i in parity_nodes], rhs)
        cw.append([F(x) for x in drow] + parity)
    return cw


def parity_check(spec: C1Spec, cw: Array) -> bool:
    check_shape(cw, spec.l, spec.n)
    for j, row in enumerate(cw):
        pts = spec.row_points(j)
        for t in range(spec.r):
            acc = spec.field.zero
            for x, c in zip(pts, row):
                acc = acc + x**t * c
            if acc:
                return False
    return True


def erasure_decode(spec: C1Spec, cw: Array) -> Array:
    """Fill erased columns row by row from the GRS parities."""
    check_shape(cw, spec.l, spec.n)
    lost = erased_nodes(cw)
    if len(lost) > spec.r:
        raise DecodeError(f"{len(lost)} erasures exceed r={spec.r}")
    if not lost:
        return [list(row) for row in cw]
    F = spec.field
    out = []
    for j, row in enumerate(cw):
        pts = spec.row_points(j)
        sums = []
        for t in range(spec.r):
            acc = F.zero
            for node, c in enumerate(row):
                if c is not None:
                    acc = acc + pts[node] ** t * c
            sums.append(-acc)
        vals = linalg.vandermonde_solve([pts[i] for i in lost], sums[: len(lost)])
        for t in range(len(lost), spec.r):
            chk = F.zero
            for i, x in zip(lost, vals):
                chk = chk + pts[i] ** t * x
            if chk != sums[t]:
                raise DecodeError(f"row {j} is inconsistent with the parity checks")
        new = list(row)
        for i, x in zip(lost, vals):
            new[i] = x
        out.append(new)
    return out


# ---------------------------------------------------------------------------
# repair


def group_rows(spec: C1Spec, host: int) -> list[int]:
    """Representatives j(host, 0): rows whose host-rack digit is 0."""
    return [j for j in range(spec.l) if digit(j, host, spec.sbar) == 0]


def helper_messages(spec: C1Spec, cw: Array, rack: int, host: int) -> tuple[list[FieldElement], dict[int, list[int]]]:
    """Rack-side aggregation: one symbol per row group, reading whole nodes."""
    F = spec.field
    nodes = range(rack * spec.u, (rack + 1) * spec.u)
    msgs = []
    for j0 in group_rows(spec, host):
        acc = F.zero
        for a in range(spec.sbar):
            j = set_digit(j0, host, a, spec.sbar)
            for node in nodes:
                acc = acc + cw[j][node]
        msgs.append(acc)
    accessed = {node: list(range(spec.l)) for node in nodes}
    return msgs, accessed


def repair_node(spec: C1Spec, cw: Array, failed: int, helpers) -> tuple[list[FieldElement], RepairTranscript]:
    host, g1 = divmod(failed, spec.u)
    helpers = check_helpers(helpers, host, spec.dbar, spec.nbar)
    tr = RepairTranscript(failed=failed, host=host, helpers=helpers)
    for b in helpers:
        tr.downloads[b], acc = helper_messages(spec, cw, b, host)
        tr.accessed.update(acc)
    local = [host * spec.u + g for g in range(spec.u) if g != g1]
    for node in local:
        tr.local_reads[node] = list(range(spec.l))
    return _reconstruct(spec, tr, {node: [cw[j][node] for j in range(spec.l)] for node in local}), tr


def _reconstruct(spec: C1Spec, tr: RepairTranscript, local: dict[int, list]) -> list[FieldElement]:
    """Failed-node side: only the downloads and the local columns are used."""
    host = tr.host
    sbar, nbar = spec.sbar, spec.nbar
    alpha_pow = spec._lam_powers[:: spec.u]  # alpha = lam^u has order sbar*nbar
    others = [e for e in range(nbar) if e != host and e not in tr.helpers]
    out = [None] * spec.l
    for gi, j0 in enumerate(group_rows(spec, host)):
        points = [alpha_pow[host * sbar + a] for a in range(sbar)]
        points += [alpha_pow[e * sbar + digit(j0, e, sbar)] for e in others]
        rhs = []
        for w in range(spec.rbar):
            acc = spec.field.zero
            for b in tr.helpers:
                acc = acc + alpha_pow[b * sbar + digit(j0, b, sbar)] ** w * tr.downloads[b][gi]
            rhs.append(-acc)
        sol = linalg.vandermonde_solve(points, rhs)
        for a in range(sbar):
            j = set_digit(j0, host, a, sbar)
            val = sol[a]
            for node, col in local.items():
                val = val - col[j]
            out[j] = val
    return out
