import random

import pytest
from hypothesis import given, settings, strategies as st

from scentt.errors import ModulusTooLarge, NoRootExists, NotPrime
from scentt.modmath import (
    Polynomial,
    barrett_mul,
    bit_reverse,
    is_prime,
    is_primitive_root,
    make_context,
    mod_add,
    mod_sub,
    prime_factors,
    primitive_root_of_unity,
    rotate_left_bits,
    rotate_right_bits,
    shoup_mul,
    shoup_precompute,
    shoup_quotient_residue,
)

Q31 = 2013265921


def trial_division_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def test_is_prime_matches_trial_division():
    for n in range(-3, 5000):
        assert is_prime(n) == trial_division_prime(n), n


def test_is_prime_large():
    assert is_prime(Q31)
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


def test_prime_factors():
    assert prime_factors(Q31 - 1) == [2, 3, 5]
    assert prime_factors(2**32 + 1) == [641, 6700417]
    n = 1000003 * 999983
    assert prime_factors(n) == [999983, 1000003]


def test_context_q17():
    ctx = make_context(17, 8)
    assert ctx.omega == 2
    assert ctx.psi == 6
    assert pow(ctx.psi, 2, 17) == ctx.omega
    assert ctx.omega * ctx.omega_inv % 17 == 1
    assert ctx.n_inv * 8 % 17 == 1
    assert ctx.twiddles == tuple(pow(2, j, 17) for j in range(8))
    assert ctx.beta == 33


def test_primitive_root_is_primitive():
    for q, n in [(17, 16), (257, 256), (Q31, 128), (Q31, 1 << 14), (7681, 256)]:
        w = primitive_root_of_unity(q, n)
        assert pow(w, n, q) == 1
        assert all(pow(w, j, q) != 1 for j in range(1, n))
        assert is_primitive_root(w, n, q)


def test_context_errors():
    with pytest.raises(NotPrime):
        make_context(15, 4)
    with pytest.raises(NoRootExists):
        make_context(19, 8)
    with pytest.raises(ModulusTooLarge):
        make_context(2**31 + 11, 2, w=32)  # prime above 2^(w-1)
    with pytest.raises(ValueError):
        make_context(17, 6)


def test_no_psi_when_2n_does_not_divide():
    ctx = make_context(17, 16)
    assert ctx.psi is None


def test_bit_helpers():
    assert [bit_reverse(i, 3) for i in range(8)] == [0, 4, 2, 6, 1, 5, 3, 7]
    for i in range(128):
        assert bit_reverse(bit_reverse(i, 7), 7) == i
        for k in range(7):
            r = rotate_left_bits(i, k, 7)
            assert rotate_right_bits(r, k, 7) == i
            assert r == ((i << k) | (i >> (7 - k))) & 127


def test_add_sub():
    ctx = make_context(17, 8)
    for a in range(17):
        for b in range(17):
            assert mod_add(a, b, ctx) == (a + b) % 17
            assert mod_sub(a, b, ctx) == (a - b) % 17


def test_shoup_constant():
    ctx = make_context(17, 8)
    assert shoup_precompute(5, ctx) == (5 << 33) // 17 == 2526451350


@pytest.mark.parametrize("q", [17, 257])
def test_multipliers_exhaustive(q):
    ctx = make_context(q, 8)
    for b in range(q):
        bp = shoup_precompute(b, ctx)
        for a in range(q):
            naive = a * b % q
            assert shoup_mul(a, b, bp, ctx) == naive
            assert barrett_mul(a, b, ctx) == naive
            assert shoup_quotient_residue(a, b, bp, ctx) < 2 * q


def test_multipliers_random_31bit():
    ctx = make_context(Q31, 128)
    rng = random.Random(1)
    q = ctx.q
    for _ in range(20000):
        a, b = rng.randrange(q), rng.randrange(q)
        bp = shoup_precompute(b, ctx)
        naive = a * b % q
        assert shoup_mul(a, b, bp, ctx) == naive == barrett_mul(a, b, ctx)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, Q31 - 1), st.integers(0, Q31 - 1))
def test_multiplier_property(a, b):
    ctx = make_context(Q31, 128)
    assert shoup_mul(a, b, shoup_precompute(b, ctx), ctx) == a * b % Q31
    assert barrett_mul(a, b, ctx) == a * b % Q31


def test_polynomial_value_semantics():
    p = Polynomial([1, 2, 3])
    assert list(p) == [1, 2, 3]
    assert len(p) == 3 and p[1] == 2
    assert p == Polynomial((1, 2, 3))
    with pytest.raises(Exception):
        p.coeffs = (0,)
