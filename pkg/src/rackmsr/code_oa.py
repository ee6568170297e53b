"""Optimal-access MSR code for homogeneous storage, l = s^n.

Nodes 0..n-1 each own one base-s digit of the row index.  Parity checks, for
every row i and t = 0..r-1:

    sum_j lam_j^t c[i][j] + sum_j [i_j == 0] sum_p mu_p^t c[i(j, p)][j] = 0.

Repair of node f reads rows {i : i_f = 0} on every helper and sends them as
they are, so access equals download.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime, nextprime

from . import coupled
from .arraycode import Array, ParameterError, RepairTranscript
from .ffield import FieldCtx, FieldElement, make_prime_field


@dataclass(frozen=True, eq=False)
class OASpec:
    n: int
    k: int
    d: int
    field: FieldCtx
    lambdas: tuple[FieldElement, ...]
    mus: tuple[FieldElement, ...]

    family = "C2"

    @property
    def r(self):
        return self.n - self.k

    @property
    def s(self):
        return self.d - self.k + 1

    @property
    def l(self):
        return self.s**self.n

    @property
    def degenerate(self) -> bool:
        return self.s == 1

    @cached_property
    def layout(self) -> coupled.Layout:
        return coupled.Layout(self.field, self.n, self.k, 1, self.s, self.lambdas, self.mus)


def build_c2(n: int, k: int, d: int, field: FieldCtx | None = None, lambdas=None, mus=None) -> OASpec:
    if not 1 <= k < n:
        raise ParameterError(f"need 1 <= k < n, got k={k}, n={n}")
    if not k <= d <= n - 1:
        raise ParameterError(f"need k={k} <= d={d} <= n-1={n - 1}")
    s = d - k + 1
    need = n + s - 1
    if field is None:
        field = make_prime_field(need if isprime(need) else nextprime(need))
    if field.order < need:
        raise ParameterError(f"{field} has fewer than n+s-1={need} elements")
    lambdas = tuple(field(j) for j in range(n)) if lambdas is None else tuple(field(x) for x in lambdas)
    mus = tuple(field(n - 1 + p) for p in range(1, s)) if mus is None else tuple(field(x) for x in mus)
    if len(lambdas) != n or len(mus) != s - 1:
        raise ParameterError(f"need {n} lambdas and {s - 1} mus")
    if len(set(lambdas + mus)) != n + s - 1:
        raise ParameterError("lambdas and mus must be n+s-1 distinct elements")
    return OASpec(n, k, d, field, lambdas, mus)


def encode(spec: OASpec, data: Array) -> Array:
    return coupled.encode(spec.layout, data)


def parity_check(spec: OASpec, cw: Array) -> bool:
    return coupled.parity_check(spec.layout, cw)


def erasure_decode(spec: OASpec, cw: Array) -> Array:
    """Inductive decoder over the zero patterns of the erased digits."""
    return coupled.inductive_decode(spec.layout, cw)


def generic_decode(spec: OASpec, cw: Array) -> Array:
    """Reference decoder: one solve against the full parity-check matrix."""
    return coupled.generic_decode(spec.layout, cw)


def repair_node_oa(spec: OASpec, cw: Array, failed: int, helpers) -> tuple[list[FieldElement], RepairTranscript]:
    return coupled.repair(spec.layout, cw, failed, helpers, spec.d)


def accessed_rows(spec: OASpec, failed: int) -> list[int]:
    return coupled.access_rows(spec.layout, failed)
