"""Rack-aware low-access MSR code, l = sbar^nbar.

Node j = e*u + g gets lam_j = lam^(e + g*nbar) with lam of order n, so
lam_j^u = lam^(e*u) depends only on the rack.  Rack e owns base-sbar digit e
of the row index, and the parity checks are

    sum_j lam_j^t c[i][j] + sum_j [i_{j//u} == 0] sum_p mu_p^t c[i(j//u, p)][j] = 0.

Repair uses only the checks t = u*w.  Each helper node reads the l/sbar rows
with host digit 0 and each helper rack sends their per-row sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime

from . import coupled
from .arraycode import Array, ParameterError, RepairTranscript
from .ffield import FieldCtx, FieldElement, element_of_order, make_prime_field, multiplicative_order


@dataclass(frozen=True, eq=False)
class C3Spec:
    nbar: int
    u: int
    k: int
    dbar: int
    field: FieldCtx
    lam: FieldElement
    mus: tuple[FieldElement, ...]

    family = "C3"

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

    @cached_property
    def lambdas(self) -> tuple[FieldElement, ...]:
        return tuple(self.lam ** (e + g * self.nbar) for e in range(self.nbar) for g in range(self.u))

    @cached_property
    def layout(self) -> coupled.Layout:
        return coupled.Layout(self.field, self.n, self.k, self.u, self.sbar, self.lambdas, self.mus)


def _validate(nbar, u, k, dbar):
    if u < 1 or nbar < 2:
        raise ParameterError("need at least 2 racks of size >= 1")
    n = nbar * u
    if not u <= k < n:
        raise ParameterError(f"need u={u} <= k={k} < n={n}")
    kbar = k // u
    if not kbar <= dbar <= nbar - 1:
        raise ParameterError(f"need floor(k/u)={kbar} <= dbar={dbar} <= nbar-1={nbar - 1}")


def choose_mus(field: FieldCtx, lam: FieldElement, u: int, nbar: int, count: int) -> tuple[FieldElement, ...] | None:
    """Smallest nonzero mu's outside <lam> whose u-th powers avoid each other and lam^(e*u).

    Zero is admissible but skipped, so the default choice is a unit.
    """
    n = nbar * u
    subgroup = {lam**i for i in range(n)}
    taken = {lam ** (e * u) for e in range(nbar)}
    mus = []
    for x in field.elements():
        if len(mus) == count:
            break
        if x.is_zero() or x in subgroup:
            continue
        xu = x**u
        if xu in taken:
            continue
        mus.append(x)
        taken.add(xu)
    return tuple(mus) if len(mus) == count else None


def check_mus(field: FieldCtx, lam: FieldElement, u: int, nbar: int, mus) -> None:
    n = nbar * u
    subgroup = {lam**i for i in range(n)}
    pts = [lam ** (e * u) for e in range(nbar)] + [mu**u for mu in mus]
    if any(mu in subgroup for mu in mus):
        raise ParameterError("every mu must lie outside the subgroup generated by lambda")
    if len(set(pts)) != len(pts):
        raise ParameterError("the values mu_p^u and lambda^(e*u) must be pairwise distinct")


def build_c3(nbar: int, u: int, k: int, dbar: int, field: FieldCtx | None = None, lam=None, mus=None) -> C3Spec:
    _validate(nbar, u, k, dbar)
    n = nbar * u
    sbar = dbar - k // u + 1
    if field is None:
        p = n + 1
        while True:
            if isprime(p) and p >= n + sbar - 1:
                field = make_prime_field(p)
                lam_c = element_of_order(field, n)
                if choose_mus(field, lam_c, u, nbar, sbar - 1) is not None:
                    break
            p += n
    if field.group_order % n or field.order < n + sbar - 1:
        raise ParameterError(f"{field} needs n={n} dividing |F|-1 and |F| >= n+sbar-1={n + sbar - 1}")
    if lam is None:
        lam = element_of_order(field, n)
    else:
        lam = field(lam)
        if lam.is_zero() or multiplicative_order(lam) != n:
            raise ParameterError(f"lambda must have multiplicative order n={n}")
    if mus is None:
        mus = choose_mus(field, lam, u, nbar, sbar - 1)
        if mus is None:
            raise ParameterError(
                f"{field} has no {sbar - 1} nonzero mu outside <lambda> with distinct u-th powers"
                f" avoiding lambda^(e*u)"
            )
    else:
        mus = tuple(field(x) for x in mus)
        if len(mus) != sbar - 1 or len(set(mus)) != len(mus):
            raise ParameterError(f"need {sbar - 1} distinct mus")
    check_mus(field, lam, u, nbar, mus)
    spec = C3Spec(nbar, u, k, dbar, field, lam, mus)
    coupled.validate_repair_matrices(spec.layout)
    return spec


def encode(spec: C3Spec, data: Array) -> Array:
    return coupled.encode(spec.layout, data)


def parity_check(spec: C3Spec, cw: Array) -> bool:
    return coupled.parity_check(spec.layout, cw)


def erasure_decode(spec: C3Spec, cw: Array) -> Array:
    """Inductive decoder; rows ordered by zero digits of the erased racks."""
    return coupled.inductive_decode(spec.layout, cw)


def generic_decode(spec: C3Spec, cw: Array) -> Array:
    return coupled.generic_decode(spec.layout, cw)


def repair_node_rack(spec: C3Spec, cw: Array, failed: int, helpers) -> tuple[list[FieldElement], RepairTranscript]:
    return coupled.repair(spec.layout, cw, failed, helpers, spec.dbar)


def accessed_rows(spec: C3Spec, failed: int) -> list[int]:
    return coupled.access_rows(spec.layout, failed // spec.u)
