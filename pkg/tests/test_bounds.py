from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rackmsr.bounds import (
    BoundError,
    BoundReport,
    access_bound,
    access_bound_applicable,
    cutset_bound,
    homogeneous_decomposition,
    rack_cutset_bound,
    subpacketization_bound,
    subpacketization_report,
)


def test_cutset_examples():
    assert cutset_bound(3, 2, 16) == 24
    assert cutset_bound(4, 4, 5) == 20
    assert cutset_bound(7, 5, 16) == Fraction(112, 3)
    with pytest.raises(BoundError):
        cutset_bound(1, 2, 4)


def test_rack_cutset_examples():
    assert rack_cutset_bound(3, 2, 16) == 24
    assert rack_cutset_bound(2, 1, 8) == 8
    assert rack_cutset_bound(5, 4, 32) == 80
    with pytest.raises(BoundError):
        rack_cutset_bound(1, 2, 4)


def test_access_examples():
    assert access_bound(2, 2, 8, 4) == 8
    assert access_bound(3, 2, 16, 6) == 16
    assert access_bound(3, 1, 16, 2) == cutset_bound(3, 2, 16)
    assert access_bound_applicable(2, 3, 2, 5) == (True, ())
    ok, notes = access_bound_applicable(2, 2, 2, 5)
    assert not ok and notes


def test_subpacketization_examples():
    assert subpacketization_bound(8, 4, 5, 2, "a") == pytest.approx(min(2**1.75, 8), rel=1e-12)
    assert subpacketization_bound(8, 4, 5, 2, "b") == pytest.approx(4.0, rel=1e-12)
    assert subpacketization_bound(5, 3, 3, 2) == 1.0
    with pytest.raises(BoundError):
        subpacketization_bound(8, 4, 5, 2, "c")
    rep = subpacketization_report(3, 3, 2, 2, "b", 8)
    assert not rep.applicable and rep.notes  # 2 does not divide 3


def test_decomposition_examples():
    rack, local = homogeneous_decomposition(7, 4, 2, 16)
    assert (rack, local) == (24, 4) and rack + local == cutset_bound(7, 4, 16) == 28
    assert homogeneous_decomposition(5, 3, 1, 8) == (cutset_bound(5, 3, 8), 0)
    with pytest.raises(BoundError):
        homogeneous_decomposition(6, 4, 2, 16)
    with pytest.raises(BoundError):
        homogeneous_decomposition(7, 3, 2, 16)


@given(st.integers(1, 6), st.integers(1, 5), st.integers(0, 5), st.integers(1, 64))
def test_decomposition_sums_and_discounts(u, kbar, extra, l):
    dbar = kbar + extra
    d, k = dbar * u + u - 1, kbar * u
    rack, local = homogeneous_decomposition(d, k, u, l)
    assert rack + local == cutset_bound(d, k, l)
    assert rack == rack_cutset_bound(dbar, kbar, l) <= cutset_bound(d, k, l)


@given(st.integers(2, 12), st.integers(1, 6), st.integers(0, 6), st.integers(1, 4))
def test_subpacketization_variant_order(nbar, kbar, extra, u):
    dbar = kbar + extra
    if dbar > nbar - 1:
        return
    a = subpacketization_bound(nbar, kbar, dbar, u, "a")
    b = subpacketization_bound(nbar, kbar, dbar, u, "b")
    assert 1.0 <= a <= b


def test_report_fields():
    rep = BoundReport("x", {"b": 1, "a": 2}, Fraction(16, 1), 32)
    assert rep.attained is False and rep.ratio == 2
    d = rep.to_dict()
    assert list(d["inputs"]) == ["a", "b"] and d["value"] == "16"
    assert BoundReport("y", {}, Fraction(3), None).attained is None
