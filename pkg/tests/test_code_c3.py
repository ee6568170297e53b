import random
from fractions import Fraction
from itertools import combinations

import pytest

from oracles import coupled_parity
from rackmsr.arraycode import ParameterError, RepairError, digit, random_data, zero_array
from rackmsr.bounds import access_bound
from rackmsr.code_c3 import accessed_rows, build_c3, encode, erasure_decode, generic_decode, parity_check, repair_node_rack
from rackmsr.ffield import make_prime_field, multiplicative_order


def oracle(spec, cw):
    return coupled_parity(spec.field, spec.lambdas, spec.mus, spec.sbar, spec.u, spec.r, cw)


def test_build_examples(c3_demo):
    s = c3_demo
    assert (s.sbar, s.l, s.field.order, int(s.lam), [int(m) for m in s.mus]) == (2, 8, 13, 4, [2])
    assert multiplicative_order(s.lam) == 6
    lam_group = {s.lam**i for i in range(6)}
    assert all(m not in lam_group for m in s.mus)
    # node e*u+g gets lam^(e + g*nbar)
    assert [s.lambdas[e * 2 + g] for e in range(3) for g in range(2)] == [s.lam ** (e + 3 * g) for e in range(3) for g in range(2)]
    with pytest.raises(ParameterError, match="mu"):
        build_c3(3, 2, 3, 2, field=make_prime_field(7))
    assert build_c3(2, 2, 2, 1).degenerate


def test_mu_power_condition_enforced():
    # with u = 2, mu and -mu are both outside <lam> yet share a square
    spec = build_c3(4, 2, 3, 3)
    F, lam = spec.field, spec.lam
    group = {lam**i for i in range(spec.n)}
    a = next(x for x in F.elements() if x and x not in group)
    with pytest.raises(ParameterError):
        build_c3(4, 2, 3, 3, field=F, lam=int(lam), mus=[int(a), int(-a)])
    with pytest.raises(ParameterError):
        build_c3(4, 2, 3, 3, field=F, lam=int(lam), mus=[int(lam), int(a)])  # inside <lam>
    # zero is outside <lam> and allowed when given explicitly
    zero_mu = build_c3(4, 2, 3, 3, field=F, lam=int(lam), mus=[0, int(a)])
    cw = encode(zero_mu, random_data(F, zero_mu.l, zero_mu.k, random.Random(0)))
    col, _ = repair_node_rack(zero_mu, cw, 0, (1, 2, 3))
    assert col == [row[0] for row in cw] and oracle(zero_mu, cw)
    assert len({m**2 for m in spec.mus}) == len(spec.mus)


def test_encode_decode(c3_demo, rng):
    s = c3_demo
    F = s.field
    assert encode(s, zero_array(F, s.l, s.k)) == zero_array(F, s.l, s.n)
    cw = encode(s, random_data(F, s.l, s.k, rng))
    assert parity_check(s, cw) and oracle(s, cw)
    for pat in combinations(range(s.n), s.r):
        bad = [[None if j in pat else x for j, x in enumerate(row)] for row in cw]
        assert erasure_decode(s, bad) == generic_decode(s, bad) == cw
    cw[0][0] = cw[0][0] + 1
    assert not parity_check(s, cw) and not oracle(s, cw)


def test_repair_low_access(c3_demo, rng):
    s = c3_demo
    cw = encode(s, random_data(s.field, s.l, s.k, rng))
    for f in range(s.n):
        host = f // s.u
        rows = [i for i in range(s.l) if digit(i, host, s.sbar) == 0]
        assert accessed_rows(s, f) == rows
        for hs in combinations([e for e in range(s.nbar) if e != host], s.dbar):
            col, tr = repair_node_rack(s, cw, f, hs)
            assert col == [row[f] for row in cw]
            assert tr.bandwidth == 8 and tr.per_helper_download() == {h: 4 for h in hs}
            assert tr.per_node_access() == {e * s.u + g: 4 for e in hs for g in range(s.u)}
            assert all(v == rows for v in tr.accessed.values())
            assert tr.access_count == 16
            # downloads are intra-rack sums over the accessed rows
            for e in hs:
                assert tr.downloads[e] == [cw[i][e * s.u] + cw[i][e * s.u + 1] for i in rows]
    bound = access_bound(s.dbar, s.u, s.l, s.sbar * s.u)
    assert bound == 8 and Fraction(16) / bound == 2


def test_repair_zero_and_errors(c3_demo):
    s = c3_demo
    z = zero_array(s.field, s.l, s.n)
    col, tr = repair_node_rack(s, z, 5, (0, 1))
    assert all(x == 0 for x in col) and all(x == 0 for v in tr.downloads.values() for x in v)
    with pytest.raises(RepairError):
        repair_node_rack(s, z, 5, (1, 2))


@pytest.mark.parametrize("params", [(4, 2, 5, 3), (3, 3, 4, 2), (4, 2, 4, 2), (2, 2, 2, 1), (4, 2, 3, 2)])
def test_other_parameters(params):
    s = build_c3(*params)
    r = random.Random(sum(params))
    cw = encode(s, random_data(s.field, s.l, s.k, r))
    assert oracle(s, cw)
    for f in range(s.n):
        hs = tuple(e for e in range(s.nbar) if e != f // s.u)[: s.dbar]
        col, tr = repair_node_rack(s, cw, f, hs)
        assert col == [row[f] for row in cw]
        assert tr.bandwidth == s.dbar * s.l // s.sbar
        assert set(tr.per_node_access().values()) == {s.l // s.sbar}
