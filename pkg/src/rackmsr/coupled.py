"""Parity-check machinery shared by the optimal-access and low-access codes.

Both codes use rows i in [0, base**ndigits) and couple row i with rows
i(e, p) that differ in one digit.  Node j owns digit ``j // u``: with u = 1
(the homogeneous code) every node has its own digit, with u > 1 a whole rack
shares one.  For row i and t = 0..r-1 the checks are

    sum_j lam_j^t c[i][j] + sum_j [i_{j//u} == 0] sum_p mu_p^t c[i(j//u, p)][j] = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

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
from .ffield import FieldCtx, FieldElement
from .linalg import Matrix


@dataclass(frozen=True, eq=False)
class Layout:
    field: FieldCtx
    n: int
    k: int
    u: int
    base: int
    lambdas: tuple[FieldElement, ...]
    mus: tuple[FieldElement, ...]

    @property
    def r(self):
        return self.n - self.k

    @property
    def ndigits(self):
        return self.n // self.u

    @property
    def l(self):
        return self.base**self.ndigits

    @property
    def kbar(self):
        return self.k // self.u

    @property
    def rbar(self):
        return self.ndigits - self.kbar

    @cached_property
    def _lam_pow(self):
        return [[lam**t for t in range(self.r)] for lam in self.lambdas]

    @cached_property
    def _mu_pow(self):
        return [[mu**t for t in range(self.r)] for mu in self.mus]

    def terms(self, i: int, t: int):
        """(coefficient, node, row) triples of parity check (i, t)."""
        out = []
        for j in range(self.n):
            out.append((self._lam_pow[j][t], j, i))
            pos = j // self.u
            if digit(i, pos, self.base) == 0:
                for p in range(1, self.base):
                    out.append((self._mu_pow[p - 1][t], j, set_digit(i, pos, p, self.base)))
        return out

    @cached_property
    def rack_points(self) -> list[FieldElement]:
        """lam_j^u, equal for all nodes j of one rack (checked)."""
        pts = []
        for e in range(self.ndigits):
            vals = {self.lambdas[e * self.u + g] ** self.u for g in range(self.u)}
            if len(vals) != 1:
                raise ParameterError(f"rack {e}: lam_j^u differs between nodes")
            pts.append(vals.pop())
        return pts

    @cached_property
    def mu_points(self) -> list[FieldElement]:
        return [mu**self.u for mu in self.mus]


def validate_repair_matrices(layout: Layout):
    """Every Vandermonde system met during repair must be invertible.

    The unknown-side points are rack_points[e] for the non-helper racks J and
    mu_p^u; each (n_racks - helpers)-subset J is checked by a rank computation.
    """
    nj = layout.rbar - (layout.base - 1)
    for J in combinations(range(layout.ndigits), nj):
        pts = [layout.rack_points[e] for e in J] + layout.mu_points
        if linalg.rank(Matrix.vandermonde(pts, layout.rbar)) != layout.rbar:
            raise ParameterError(f"repair matrix singular for non-helper racks {J}")


# ---------------------------------------------------------------------------


def parity_check(layout: Layout, cw: Array) -> bool:
    check_shape(cw, layout.l, layout.n)
    F = layout.field
    for i in range(layout.l):
        for t in range(layout.r):
            acc = F.zero
            for coef, j, row in layout.terms(i, t):
                acc = acc + coef * cw[row][j]
            if acc:
                return False
    return True


def parity_check_matrix(layout: Layout) -> Matrix:
    """rl x nl matrix; equation (i, t) is row i*r + t, entry (row, j) is column j*l + row."""
    F = layout.field
    rows = []
    for i in range(layout.l):
        for t in range(layout.r):
            h = [F.zero] * (layout.n * layout.l)
            for coef, j, row in layout.terms(i, t):
                h[j * layout.l + row] = h[j * layout.l + row] + coef
            rows.append(h)
    return Matrix(F, rows)


def generic_decode(layout: Layout, cw: Array) -> Array:
    """Recover erased columns with one linear solve over the full check matrix."""
    check_shape(cw, layout.l, layout.n)
    lost = erased_nodes(cw)
    if len(lost) > layout.r:
        raise DecodeError(f"{len(lost)} erasures exceed r={layout.r}")
    if not lost:
        return [list(row) for row in cw]
    F = layout.field
    unknown = {(row, j): idx for idx, (j, row) in enumerate((j, row) for j in lost for row in range(layout.l))}
    a_rows, b = [], []
    for i in range(layout.l):
        for t in range(layout.r):
            coeffs = [F.zero] * len(unknown)
            acc = F.zero
            for coef, j, row in layout.terms(i, t):
                if (row, j) in unknown:
                    idx = unknown[(row, j)]
                    coeffs[idx] = coeffs[idx] + coef
                else:
                    acc = acc + coef * cw[row][j]
            a_rows.append(coeffs)
            b.append(-acc)
    try:
        sol = linalg.solve(Matrix(F, a_rows), b)
    except (linalg.SingularMatrixError, linalg.InconsistentSystemError) as exc:
        raise DecodeError(str(exc)) from exc
    out = [list(row) for row in cw]
    for (row, j), idx in unknown.items():
        out[row][j] = sol[idx]
    return out


def encode(layout: Layout, data: Array) -> Array:
    """Systematic encoding: parity nodes k..n-1 filled by the generic solve."""
    check_shape(data, layout.l, layout.k, "data")
    F = layout.field
    padded = [[F(x) for x in row] + [None] * layout.r for row in data]
    return generic_decode(layout, padded)


def inductive_decode(layout: Layout, cw: Array) -> Array:
    """Erasure decoding by induction on the zero pattern of the erased digits.

    Rows are handled in order of how many erased positions carry a zero digit.
    Every coupled term c[i(e, p)][j] of an erased node then lies in a row
    with fewer zeros, recovered at an earlier stage, and row i only needs a
    Vandermonde solve in the points lam_j of the erased nodes.
    """
    check_shape(cw, layout.l, layout.n)
    lost = erased_nodes(cw)
    if len(lost) > layout.r:
        raise DecodeError(f"{len(lost)} erasures exceed r={layout.r}")
    if not lost:
        return [list(row) for row in cw]
    F = layout.field
    lost_set = set(lost)
    positions = sorted({j // layout.u for j in lost})
    out = [list(row) for row in cw]

    def zeros(i):
        return sum(digit(i, e, layout.base) == 0 for e in positions)

    points = [layout.lambdas[j] for j in lost]
    for i in sorted(range(layout.l), key=zeros):
        sums = []
        for t in range(layout.r):
            acc = F.zero
            for coef, j, row in layout.terms(i, t):
                if row == i and j in lost_set:
                    continue
                acc = acc + coef * out[row][j]
            sums.append(-acc)
        vals = linalg.vandermonde_solve(points, sums[: len(lost)])
        for t in range(len(lost), layout.r):
            chk = F.zero
            for j, x in zip(lost, vals):
                chk = chk + layout._lam_pow[j][t] * x
            if chk != sums[t]:
                raise DecodeError(f"row {i} is inconsistent with the parity checks")
        for j, x in zip(lost, vals):
            out[i][j] = x
    return out


# ---------------------------------------------------------------------------
# repair


def access_rows(layout: Layout, host: int) -> list[int]:
    return [i for i in range(layout.l) if digit(i, host, layout.base) == 0]


def helper_messages(layout: Layout, cw: Array, rack: int, host: int):
    """Per-rack sums pi_{i,e} over the rows with host digit 0."""
    F = layout.field
    rows = access_rows(layout, host)
    nodes = range(rack * layout.u, (rack + 1) * layout.u)
    msgs = []
    for i in rows:
        acc = F.zero
        for j in nodes:
            acc = acc + cw[i][j]
        msgs.append(acc)
    return msgs, {j: list(rows) for j in nodes}


def repair(layout: Layout, cw: Array, failed: int, helpers, dbar: int) -> tuple[list[FieldElement], RepairTranscript]:
    host, g1 = divmod(failed, layout.u)
    helpers = check_helpers(helpers, host, dbar, layout.ndigits)
    tr = RepairTranscript(failed=failed, host=host, helpers=helpers)
    for e in helpers:
        tr.downloads[e], acc = helper_messages(layout, cw, e, host)
        tr.accessed.update(acc)
    local = [host * layout.u + g for g in range(layout.u) if g != g1]
    for j in local:
        tr.local_reads[j] = list(range(layout.l))
    local_cols = {j: [cw[i][j] for i in range(layout.l)] for j in local}
    return reconstruct(layout, tr, local_cols), tr


def reconstruct(layout: Layout, tr: RepairTranscript, local: dict[int, list]) -> list[FieldElement]:
    """Failed-node side of the repair, using only downloads and local columns.

    Stage a handles the rows of I (host digit 0) whose non-helper digits are
    zero exactly on an a-subset containing the host.  Unknowns per row are
    pi_{i,e} for the non-helper racks e and rho_{i,p}, the sum over zero
    non-helper digits e of pi_{i(e,p),e}; equations use t = u*w only.
    """
    F = layout.field
    base, host = layout.base, tr.host
    rows = access_rows(layout, host)
    pos = {i: idx for idx, i in enumerate(rows)}
    J = [host] + [e for e in range(layout.ndigits) if e != host and e not in tr.helpers]
    alpha = layout.rack_points
    nu = layout.mu_points
    points = [alpha[e] for e in J] + nu
    pi = {}  # (row, rack) -> rack sum, for non-helper racks
    host_sum = [None] * layout.l

    def zeros(i):
        return sum(digit(i, e, base) == 0 for e in J)

    for i in sorted(rows, key=zeros):
        rhs = []
        for w in range(layout.rbar):
            acc = F.zero
            for e in tr.helpers:
                acc = acc + alpha[e] ** w * tr.downloads[e][pos[i]]
                if digit(i, e, base) == 0:
                    for p in range(1, base):
                        acc = acc + nu[p - 1] ** w * tr.downloads[e][pos[set_digit(i, e, p, base)]]
            rhs.append(-acc)
        sol = linalg.vandermonde_solve(points, rhs)
        for e, x in zip(J, sol):
            pi[(i, e)] = x
        host_sum[i] = pi[(i, host)]
        zero_racks = [e for e in J[1:] if digit(i, e, base) == 0]
        for p in range(1, base):
            rho = sol[len(J) + p - 1]
            for e in zero_racks:
                rho = rho - pi[(set_digit(i, e, p, base), e)]
            host_sum[set_digit(i, host, p, base)] = rho
    out = []
    for i in range(layout.l):
        val = host_sum[i]
        for col in local.values():
            val = val - col[i]
        out.append(val)
    return out
