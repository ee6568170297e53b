"""Closed-form repair bounds for homogeneous and rack-aware MSR codes.

Linear bounds are exact ``Fraction``s so that "attains the bound" is an exact
equality test.  Only the sub-packetization bound has real exponents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    name: str
    inputs: dict
    value: Fraction | float
    measured: int | None = None
    applicable: bool = True
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def attained(self) -> bool | None:
        if self.measured is None:
            return None
        return self.measured == self.value

    @property
    def ratio(self) -> Fraction | None:
        if self.measured is None or self.value == 0:
            return None
        return Fraction(self.measured) / Fraction(self.value)

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            return x

        return {
            "name": self.name,
            "inputs": dict(sorted(self.inputs.items())),
            "value": enc(self.value),
            "measured": self.measured,
            "attained": self.attained,
            "ratio": enc(self.ratio),
            "applicable": self.applicable,
            "notes": list(self.notes),
        }


def cutset_bound(d: int, k: int, l: int) -> Fraction:
    """Minimum repair bandwidth dl/(d-k+1) for a homogeneous MSR code."""
    if d < k:
        raise BoundError(f"need d={d} >= k={k}")
    return Fraction(d * l, d - k + 1)


def rack_cutset_bound(dbar: int, kbar: int, l: int) -> Fraction:
    """Minimum inter-rack repair bandwidth dbar*l/(dbar-kbar+1)."""
    if dbar < kbar:
        raise BoundError(f"need dbar={dbar} >= kbar={kbar}")
    return Fraction(dbar * l, dbar - kbar + 1)


def access_bound(dbar: int, u: int, l: int, s: int) -> Fraction:
    """Minimum number of symbols read on the helper racks, dbar*u*l/s."""
    if s < 1:
        raise BoundError("s must be positive")
    return Fraction(dbar * u * l, s)


def access_bound_applicable(kbar: int, dbar: int, u: int, k: int) -> tuple[bool, tuple[str, ...]]:
    notes = []
    if dbar < kbar + 1:
        notes.append("access bound assumes dbar >= kbar+1")
    if u > k:
        notes.append("access bound assumes u <= k")
    return not notes, tuple(notes)


def subpacketization_bound(nbar: int, kbar: int, dbar: int, u: int, variant: str = "a") -> float:
    """Lower bound on l for rack-aware MSR codes (optimal access variant 'b')."""
    sbar = dbar - kbar + 1
    if sbar < 1:
        raise BoundError(f"need dbar={dbar} >= kbar={kbar}")
    if sbar == 1:
        return 1.0
    s = sbar * u
    if variant == "a":
        first = sbar ** ((nbar - 1) / s)
    elif variant == "b":
        first = sbar ** (nbar / s)
    else:
        raise BoundError(f"unknown variant {variant!r}")
    return min(first, float(sbar ** (kbar - 1)))


def subpacketization_report(nbar: int, k: int, dbar: int, u: int, variant: str = "a", measured: int | None = None) -> BoundReport:
    kbar = k // u
    notes = () if k % u == 0 else ("bound is established only when u divides k",)
    return BoundReport(
        f"subpacketization_{variant}",
        {"nbar": nbar, "k": k, "dbar": dbar, "u": u},
        subpacketization_bound(nbar, kbar, dbar, u, variant),
        measured,
        applicable=not notes,
        notes=notes,
    )


def homogeneous_decomposition(d: int, k: int, u: int, l: int) -> tuple[Fraction, Fraction]:
    """Split dl/(d-k+1) into a rack part and a local part.

    With d = dbar*u + u - 1 and k = kbar*u the homogeneous bound equals
    dbar*l/sbar + (u-1)*l/(d-k+1): the first term is what a rack-aware code
    must download, the second is saved by free intra-rack transfer.
    """
    if k % u:
        raise BoundError(f"u={u} must divide k={k}")
    if (d - (u - 1)) % u or d < u - 1:
        raise BoundError(f"d={d} is not of the form dbar*u + u - 1")
    dbar, kbar = (d - (u - 1)) // u, k // u
    rack = rack_cutset_bound(dbar, kbar, l)
    local = Fraction((u - 1) * l, d - k + 1)
    return rack, local
