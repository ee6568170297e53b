"""Arithmetic in GF(p) and GF(p^m).

Elements of an extension field are stored in the polynomial basis as
coefficient vectors (lowest degree first) over GF(p).  Multiplication is a
convolution followed by a precomputed reduction matrix; the Frobenius map
x -> x^p is GF(p)-linear and is applied as a matrix, which makes traces and
degree computations cheap even for GF(3^210).
"""
from __future__ import annotations

import random
from functools import cached_property, lru_cache

import numpy as np
from sympy import divisors, factorint, isprime

DEFAULT_SEED = 20190101
# fields of degree up to this use the lexicographically smallest modulus
LEX_MODULUS_MAX_DEGREE = 12


class FieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials over GF(p), numpy coefficient arrays, lowest degree first


def _trim(a):
    nz = np.flatnonzero(a)
    if len(nz) == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def _poly_divmod_rem(a, b, p):
    a = _trim(a % p).copy()
    b = _trim(b % p)
    db = len(b) - 1
    inv_lead = pow(int(b[-1]), -1, p)
    while len(a) - 1 >= db and len(a) > 0:
        shift = len(a) - 1 - db
        coef = (int(a[-1]) * inv_lead) % p
        a[shift:] = (a[shift:] - coef * b) % p
        a = _trim(a)
    return a


def _poly_gcd(a, b, p):
    a, b = _trim(a % p), _trim(b % p)
    while len(b):
        a, b = b, _poly_divmod_rem(a, b, p)
    return a


def is_irreducible(coeffs, p: int) -> bool:
    """Ben-Or test for a monic polynomial given low-to-high.

    f is irreducible iff gcd(f, x^(p^i) - x) = 1 for every i <= deg f / 2.
    """
    f = [int(c) % p for c in coeffs]
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    if f[0] == 0:
        return False
    # the field machinery reduces modulo any monic f, irreducible or not
    ring = FieldCtx(p, m, f)
    farr = np.array(f, dtype=ring._dtype)
    x = ring._x_raw
    h = x
    for _ in range(m // 2):
        h = ring._pow_raw(h, p)
        if len(_poly_gcd(farr, (h - x) % p, p)) != 1:
            return False
    return True


def _lex_candidates(p: int, m: int):
    # monic x^m + sum c_i x^i ordered by the base-p integer sum c_i p^i
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        yield tuple(low) + (1,)


@lru_cache(maxsize=None)
def canonical_modulus(p: int, m: int, seed: int = DEFAULT_SEED) -> tuple[int, ...]:
    """Deterministic irreducible modulus of degree m over GF(p), low to high."""
    if m <= LEX_MODULUS_MAX_DEGREE:
        for cand in _lex_candidates(p, m):
            if is_irreducible(cand, p):
                return cand
        raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover
    rng = random.Random(seed)
    while True:
        cand = tuple(rng.randrange(p) for _ in range(m)) + (1,)
        if cand[0] and is_irreducible(cand, p):
            return cand


# ---------------------------------------------------------------------------


class FieldCtx:
    """GF(p^m); contexts compare equal when (p, m, modulus) agree."""

    def __init__(self, p: int, m: int = 1, modulus=None, seed: int | None = None):
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if m == 1:
            modulus = None
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree m")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.seed = seed
        self.order = p**m
        self.group_order = p**m - 1
        self._dtype = np.int64 if p * p * (m + 1) < 2**62 else object
        self._frob_cache: dict[int, np.ndarray] = {}
        self._trace_cache: dict[int, np.ndarray] = {}

    # identity ------------------------------------------------------------
    @property
    def key(self):
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    @property
    def header(self) -> str:
        mod = "-" if self.modulus is None else ",".join(map(str, self.modulus))
        return f"{self.p}^{self.m}/{mod}"

    @classmethod
    def from_header(cls, text: str) -> FieldCtx:
        pm, _, mod = text.partition("/")
        p, _, m = pm.partition("^")
        p, m = int(p), int(m or 1)
        if m == 1:
            return cls(p)
        return cls(p, m, tuple(int(c) for c in mod.split(",")))

    # construction of elements -------------------------------------------
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if self.m == 1:
                return FieldElement(self, value % self.p)
            if value < 0:
                # negative ints are taken as prime-subfield elements
                return self(-value) * self(self.p - 1)
            return FieldElement(self, self._from_int(value))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            raise FieldError("too many coefficients")
        if self.m == 1:
            return FieldElement(self, coeffs[0] if coeffs else 0)
        arr = np.zeros(self.m, dtype=self._dtype)
        arr[: len(coeffs)] = coeffs
        return FieldElement(self, _freeze(arr))

    def _from_int(self, value):
        if value >= self.order:
            raise FieldError(f"{value} does not encode an element of {self}")
        arr = np.zeros(self.m, dtype=self._dtype)
        for i in range(self.m):
            value, arr[i] = divmod(value, self.p)
        return _freeze(arr)

    @cached_property
    def zero(self) -> FieldElement:
        return self(0)

    @cached_property
    def one(self) -> FieldElement:
        return self(1)

    def random(self, rng: random.Random) -> FieldElement:
        if self.m == 1:
            return FieldElement(self, rng.randrange(self.p))
        arr = np.array([rng.randrange(self.p) for _ in range(self.m)], dtype=self._dtype)
        return FieldElement(self, _freeze(arr))

    def elements(self):
        for i in range(self.order):
            yield self(i)

    # raw arithmetic --------------------------------------------------------
    @cached_property
    def _reduction(self):
        # row i holds x^(m+i) mod f, i = 0..m-2
        m, p = self.m, self.p
        red = np.zeros((max(m - 1, 1), m), dtype=self._dtype)
        low = (-np.array(self.modulus[:m], dtype=self._dtype)) % p
        row = low
        for i in range(m - 1):
            red[i] = row
            lead = row[-1]
            row = np.concatenate(([0], row[:-1])).astype(self._dtype)
            row = (row + lead * low) % p
        return red

    @cached_property
    def _reduction_f64(self):
        # float64 BLAS is exact while every partial sum stays below 2^53
        bound = ((self.p - 1) ** 3) * self.m * self.m
        if self._dtype is np.int64 and bound < 2**53:
            return self._reduction.astype(np.float64)
        return None

    def _mul_raw(self, a, b):
        m = self.m
        prod = np.convolve(a, b) if self._dtype is np.int64 else _convolve_obj(a, b)
        if m == 1:
            return _freeze(prod % self.p)
        red = self._reduction_f64
        if red is not None:
            high = (prod[m:].astype(np.float64) @ red).astype(np.int64)
        else:
            high = prod[m:] @ self._reduction
        return _freeze((prod[:m] + high) % self.p)

    def _pow_raw(self, a, e: int):
        result = self.one._v
        base = a
        while e:
            if e & 1:
                result = self._mul_raw(result, base)
            e >>= 1
            if e:
                base = self._mul_raw(base, base)
        return result

    # Frobenius ---------------------------------------------------------------
    def frobenius_matrix(self, t: int = 1) -> np.ndarray:
        """Matrix of x -> x^(p^t) acting on coefficient vectors."""
        t %= self.m
        if t in self._frob_cache:
            return self._frob_cache[t]
        if t == 0:
            mat = np.eye(self.m, dtype=self._dtype)
        elif t == 1:
            xp = self._pow_raw(self._x_raw, self.p)
            cols = [self.one._v]
            for _ in range(1, self.m):
                cols.append(self._mul_raw(cols[-1], xp))
            mat = np.stack(cols, axis=1).astype(self._dtype)
        else:
            half = self.frobenius_matrix(t // 2)
            mat = (half @ half) % self.p
            if t % 2:
                mat = (self.frobenius_matrix(1) @ mat) % self.p
        self._frob_cache[t] = mat
        return mat

    @cached_property
    def _x_raw(self):
        arr = np.zeros(self.m, dtype=self._dtype)
        arr[1] = 1
        return _freeze(arr)

    def frobenius(self, x: FieldElement, t: int = 1) -> FieldElement:
        if self.m == 1:
            return x
        return FieldElement(self, _freeze((self.frobenius_matrix(t) @ x._v) % self.p))

    def trace_matrix(self, m_sub: int) -> np.ndarray:
        if self.m % m_sub:
            raise FieldError(f"{m_sub} does not divide extension degree {self.m}")
        if m_sub not in self._trace_cache:
            acc = np.zeros((self.m, self.m), dtype=self._dtype)
            for j in range(self.m // m_sub):
                acc = (acc + self.frobenius_matrix(m_sub * j)) % self.p
            self._trace_cache[m_sub] = acc
        return self._trace_cache[m_sub]

    # group structure -------------------------------------------------------
    @cached_property
    def group_factors(self) -> dict[int, int]:
        return factorint(self.group_order)

    @cached_property
    def generator(self) -> FieldElement:
        """Primitive element: smallest integer for GF(p), seeded search otherwise."""
        n = self.group_order
        primes = sorted(self.group_factors)
        if self.m == 1:
            candidates = (self(a) for a in range(1, self.p))
        else:
            rng = random.Random(DEFAULT_SEED if self.seed is None else self.seed)
            candidates = (self.random(rng) for _ in iter(int, 1))
        for g in candidates:
            if g.is_zero():
                continue
            if all(g ** (n // ell) != self.one for ell in primes):
                return g
        raise FieldError("no generator found")  # pragma: no cover

    def vector_length(self) -> int:
        return self.m


def _convolve_obj(a, b):
    out = np.zeros(len(a) + len(b) - 1, dtype=object)
    for i, ai in enumerate(a):
        if ai:
            out[i : i + len(b)] += ai * b
    return out


def _freeze(arr):
    arr.setflags(write=False)
    return arr


class FieldElement:
    """Immutable element of a FieldCtx."""

    __slots__ = ("ctx", "_v")

    def __init__(self, ctx: FieldCtx, v):
        self.ctx = ctx
        self._v = v

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise FieldError(f"mixing elements of {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx(int(other))
        return NotImplemented

    @property
    def coeffs(self) -> tuple[int, ...]:
        if self.ctx.m == 1:
            return (self._v,)
        return tuple(int(c) for c in self._v)

    def is_zero(self) -> bool:
        if self.ctx.m == 1:
            return self._v == 0
        return not self._v.any()

    def __bool__(self):
        return not self.is_zero()

    def __int__(self):
        if self.ctx.m == 1:
            return self._v
        p = self.ctx.p
        out = 0
        for c in reversed(self._v):
            out = out * p + int(c)
        return out

    def __index__(self):
        return int(self)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ctx(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            return False
        if self.ctx.m == 1:
            return self._v == other._v
        return np.array_equal(self._v, other._v)

    def __hash__(self):
        if self.ctx.m == 1:
            return hash(self._v)
        return hash(self._v.tobytes())

    def __repr__(self):
        return f"{self.ctx!r}({int(self)})"

    def __str__(self):
        return str(int(self))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        if self.ctx.m == 1:
            return FieldElement(self.ctx, (self._v + other._v) % p)
        return FieldElement(self.ctx, _freeze((self._v + other._v) % p))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        if self.ctx.m == 1:
            return FieldElement(self.ctx, (-self._v) % p)
        return FieldElement(self.ctx, _freeze((-self._v) % p))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.ctx.m == 1:
            return FieldElement(self.ctx, (self._v * other._v) % self.ctx.p)
        return FieldElement(self.ctx, self.ctx._mul_raw(self._v, other._v))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in {self.ctx}")
        if self.ctx.m == 1:
            return FieldElement(self.ctx, pow(self._v, -1, self.ctx.p))
        return self ** (self.ctx.group_order - 1)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.ctx.one
        if self.is_zero():
            return self
        e %= self.ctx.group_order
        if e == 0:
            e = self.ctx.group_order
        if self.ctx.m == 1:
            return FieldElement(self.ctx, pow(self._v, e, self.ctx.p))
        return FieldElement(self.ctx, self.ctx._pow_raw(self._v, e))

    def frobenius(self, t: int = 1) -> FieldElement:
        return self.ctx.frobenius(self, t)


# ---------------------------------------------------------------------------
# public operations


def make_prime_field(p: int) -> FieldCtx:
    return FieldCtx(p)


def make_extension_field(p: int, m: int, seed: int = DEFAULT_SEED) -> FieldCtx:
    """GF(p^m) with the canonical modulus.

    Degrees up to 12 use the smallest monic irreducible; larger degrees use a
    seeded random search, and the seed is kept on the context.
    """
    if not isprime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if m == 1:
        return FieldCtx(p)
    mod = canonical_modulus(p, m, seed)
    return FieldCtx(p, m, mod, seed=seed if m > LEX_MODULUS_MAX_DEGREE else None)


def multiplicative_order(x: FieldElement) -> int:
    if x.is_zero():
        raise FieldError("zero has no multiplicative order")
    n = x.ctx.group_order
    order = n
    for ell, mult in x.ctx.group_factors.items():
        for _ in range(mult):
            if x ** (order // ell) == x.ctx.one:
                order //= ell
            else:
                break
    return order


def element_of_order(ctx: FieldCtx, ord: int) -> FieldElement:
    if ord < 1 or ctx.group_order % ord:
        raise FieldError(f"order {ord} does not divide |{ctx}*| = {ctx.group_order}")
    primes = list(factorint(ord))
    if ctx.m == 1:
        for a in range(1, ctx.p):
            x = ctx(a)
            if x**ord == ctx.one and all(x ** (ord // ell) != ctx.one for ell in primes):
                return x
        raise FieldError("unreachable")  # pragma: no cover
    # x^(N/ord) always has order dividing ord; no factorisation of N needed
    rng = random.Random(ctx.seed if ctx.seed is not None else DEFAULT_SEED)
    while True:
        x = ctx.random(rng)
        if x.is_zero():
            continue
        y = x ** (ctx.group_order // ord)
        if all(y ** (ord // ell) != ctx.one for ell in primes):
            return y


def element_of_degree(ctx: FieldCtx, degree: int, rng: random.Random) -> FieldElement:
    """Random element generating the degree-`degree` subfield as a field.

    Drawn as x^((p^m-1)/(p^degree-1)), which lands uniformly in the subfield's
    multiplicative group, and re-drawn until its degree is exact.
    """
    if degree < 1 or ctx.m % degree:
        raise FieldError(f"{degree} does not divide extension degree {ctx.m}")
    e = ctx.group_order // (ctx.p**degree - 1)
    while True:
        x = ctx.random(rng)
        if x.is_zero():
            continue
        y = x**e
        if element_degree(y) == degree:
            return y


def trace_to_subfield(x: FieldElement, m_sub: int) -> FieldElement:
    """Sum of the conjugates x^(p^(m_sub*j)), landing in GF(p^m_sub)."""
    ctx = x.ctx
    if m_sub < 1 or ctx.m % m_sub:
        raise FieldError(f"{m_sub} does not divide extension degree {ctx.m}")
    if ctx.m == 1:
        return x
    return FieldElement(ctx, _freeze((ctx.trace_matrix(m_sub) @ x._v) % ctx.p))


def element_degree(x: FieldElement) -> int:
    """Degree of the minimal polynomial of x over the prime field."""
    ctx = x.ctx
    for t in divisors(ctx.m):
        if x.frobenius(t) == x:
            return t
    raise FieldError("unreachable")  # pragma: no cover


def in_subfield(x: FieldElement, m_sub: int) -> bool:
    return x.frobenius(m_sub) == x
