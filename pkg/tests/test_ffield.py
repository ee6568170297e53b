import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem

from rackmsr.ffield import (
    FieldCtx,
    FieldError,
    canonical_modulus,
    element_degree,
    element_of_degree,
    element_of_order,
    in_subfield,
    is_irreducible,
    make_extension_field,
    make_prime_field,
    multiplicative_order,
    trace_to_subfield,
)

FIELDS = [(2, 1), (5, 1), (17, 1), (2, 2), (2, 8), (3, 2), (3, 5), (7, 3), (5, 13)]


def ctx_for(p, m):
    return make_prime_field(p) if m == 1 else make_extension_field(p, m)


def test_prime_field_examples():
    F = make_prime_field(17)
    assert F(3) ** 8 == 16
    assert F(3) ** 16 == 1
    G = make_prime_field(13)
    assert G(4) * G(10) == 1
    assert G(4).inverse() == 10
    with pytest.raises(FieldError):
        make_prime_field(4)


def test_canonical_moduli():
    assert make_extension_field(2, 2).modulus == (1, 1, 1)
    # x^2 + 1 is the lexicographically first monic irreducible quadratic over GF(3)
    assert make_extension_field(3, 2).modulus == (1, 0, 1)


def test_lex_modulus_matches_brute_force():
    # smallest monic irreducible cubic over GF(5): no roots is enough for degree 3
    def has_root(c):
        return any(sum(ci * x**i for i, ci in enumerate(c)) % 5 == 0 for x in range(5))

    first = None
    for code in range(5**3):
        c = [(code // 5**i) % 5 for i in range(3)] + [1]
        if not has_root(c):
            first = tuple(c)
            break
    assert canonical_modulus(5, 3) == first


def test_irreducibility():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)  # (x+1)^2
    assert not is_irreducible((0, 1, 1), 3)  # x(x+1)
    assert is_irreducible((1, 2, 0, 1), 3)  # x^3 + 2x + 1


@pytest.mark.parametrize("p,m", [(2, 8), (3, 5), (7, 3), (5, 13)])
def test_multiplication_matches_sympy(p, m):
    F = make_extension_field(p, m)
    mod_hi = [ZZ(c) for c in reversed(F.modulus)]
    r = random.Random(p * 100 + m)
    for _ in range(50):
        a, b = F.random(r), F.random(r)
        want = gf_rem(gf_mul([ZZ(c) for c in reversed(a.coeffs)], [ZZ(c) for c in reversed(b.coeffs)], p, ZZ), mod_hi, p, ZZ)
        want = [int(c) for c in reversed(want)]
        want += [0] * (m - len(want))
        assert list((a * b).coeffs) == want


@pytest.mark.parametrize("p,m", FIELDS)
def test_axioms_random_triples(p, m):
    F = ctx_for(p, m)
    r = random.Random(99)
    for _ in range(1000 if F.order < 10**6 else 200):
        a, b, c = F.random(r), F.random(r), F.random(r)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a + 0 == a
        if a:
            assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3**5 - 1), st.integers(0, 3**5 - 1), st.integers(-500, 500))
def test_power_and_division(x, y, e):
    F = make_extension_field(3, 5)
    a, b = F(x), F(y)
    if b:
        assert (a / b) * b == a
    if a:
        assert a**e * a ** (-e) == 1
        assert a ** (e + F.group_order) == a**e


def test_int_encoding_roundtrip():
    F = make_extension_field(3, 5)
    for v in (0, 1, 2, 3, 100, 3**5 - 1):
        assert int(F(v)) == v
    with pytest.raises(FieldError):
        F(3**5)


def test_context_identity_and_mixing():
    A = make_extension_field(2, 8)
    B = FieldCtx(2, 8, A.modulus)
    assert A == B and hash(A) == hash(B)
    with pytest.raises(FieldError):
        A(1) + make_extension_field(3, 2)(1)


def test_header_roundtrip():
    F = make_extension_field(7, 3)
    assert FieldCtx.from_header(F.header) == F
    assert FieldCtx.from_header(make_prime_field(13).header) == make_prime_field(13)


@pytest.mark.parametrize("ctx,order,want", [((17, 1), 16, 3), ((13, 1), 6, 4), ((11, 1), 1, 1)])
def test_element_of_order_examples(ctx, order, want):
    assert element_of_order(ctx_for(*ctx), order) == want


@pytest.mark.parametrize("p,m,order", [(17, 1, 8), (2, 8, 17), (3, 5, 11), (7, 3, 19), (5, 13, 1)])
def test_element_of_order_is_exact(p, m, order):
    x = element_of_order(ctx_for(p, m), order)
    assert multiplicative_order(x) == order


def test_element_of_order_rejects_non_divisor():
    with pytest.raises(FieldError):
        element_of_order(make_prime_field(17), 5)


def test_trace_examples():
    F = make_extension_field(2, 2)
    w = F((0, 1))
    assert trace_to_subfield(F.one, 1) == 0
    assert trace_to_subfield(w, 1) == 1
    G = make_extension_field(3, 2)
    for x in G.elements():
        assert trace_to_subfield(x, 2) == x
    with pytest.raises(FieldError):
        trace_to_subfield(G.one, 3)


@pytest.mark.parametrize("p,m,sub", [(2, 8, 2), (2, 8, 4), (3, 6, 2), (3, 6, 3), (5, 4, 1)])
def test_trace_linear_and_lands_in_subfield(p, m, sub):
    F = make_extension_field(p, m)
    r = random.Random(m * sub)
    alpha_base = element_of_degree(F, sub, r) if sub > 1 else F.one
    for _ in range(30):
        x, y = F.random(r), F.random(r)
        alpha = alpha_base ** r.randrange(F.order)
        t = trace_to_subfield(x, sub)
        assert in_subfield(t, sub)
        assert trace_to_subfield(alpha * x + y, sub) == alpha * t + trace_to_subfield(y, sub)


def test_trace_matches_conjugate_sum():
    F = make_extension_field(3, 6)
    r = random.Random(5)
    for _ in range(10):
        x = F.random(r)
        assert trace_to_subfield(x, 2) == x + x ** (3**2) + x ** (3**4)


def test_element_degree():
    F = make_extension_field(2, 12)
    assert element_degree(F(1)) == 1
    r = random.Random(0)
    for d in (1, 2, 3, 4, 6, 12):
        assert element_degree(element_of_degree(F, d, r)) == d


def test_frobenius_matrix_matches_power():
    F = make_extension_field(5, 7)
    r = random.Random(1)
    x = F.random(r)
    assert x.frobenius() == x**5
    assert x.frobenius(3) == x ** (5**3)
    assert np.array_equal(F.frobenius_matrix(7), np.eye(7, dtype=F.frobenius_matrix(7).dtype))


@pytest.mark.slow
def test_big_field_gf3_210():
    F = make_extension_field(3, 210)
    assert is_irreducible(F.modulus, 3)
    g = F.generator
    assert element_degree(g) == 210
    x = g ** ((3**210 - 1) // (3**3 - 1))
    assert element_degree(x) in (1, 3)
    assert element_degree(x) == 3  # a generator's power onto GF(27)* generates it
    assert x ** (3**3) == x
