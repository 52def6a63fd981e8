import random

import pytest

from scentt.errors import ContextMismatch, NoPsiExists
from scentt.modmath import Order, make_context
from scentt.reference import (
    _schoolbook_python,
    bit_reversed_to_natural,
    cyclic_mul,
    dft_bruteforce,
    intt,
    negacyclic_mul,
    ntt_constant_geometry,
    ntt_ct,
    ntt_ct_stages,
    ntt_recursive,
    schoolbook_mul,
    twiddle_schedule,
)

Q31 = 2013265921


def rand_poly(rng, n, q):
    return [rng.randrange(q) for _ in range(n)]


def test_spot_value_q17():
    ctx = make_context(17, 8)
    x = [1, 1, 0, 0, 0, 0, 0, 0]
    # X[r] = 1 + 2^r mod 17
    assert list(dft_bruteforce(x, ctx)) == [2, 3, 5, 9, 0, 16, 14, 10]
    assert list(ntt_ct(x, ctx)) == [2, 3, 5, 9, 0, 16, 14, 10]


@pytest.mark.parametrize("q,n", [(17, 8), (17, 16), (257, 64), (Q31, 128), (7681, 256)])
def test_all_routes_agree(q, n):
    ctx = make_context(q, n)
    rng = random.Random(n)
    for _ in range(5):
        x = rand_poly(rng, n, q)
        ref = dft_bruteforce(x, ctx)
        assert ntt_ct(x, ctx) == ref
        assert ntt_recursive(x, ctx) == ref
        cg = ntt_constant_geometry(x, ctx)
        assert cg.order is Order.BIT_REVERSED
        assert bit_reversed_to_natural(cg.coeffs, ctx.log_n) == list(ref.coeffs)
        assert list(intt(ref, ctx)) == x


def test_stage_record_shapes():
    ctx = make_context(Q31, 128)
    rec = []
    ntt_ct_stages(rand_poly(random.Random(0), 128, Q31), ctx, record=rec)
    assert len(rec) == 7
    assert all(len(stage) == 64 for stage in rec)


def test_twiddle_schedule_periodic():
    ctx = make_context(Q31, 128)
    for k in range(7):
        sched = twiddle_schedule(k, ctx)
        assert len(sched) == 1 << k
        for tw, twp in sched:
            assert twp == (tw << ctx.beta) // ctx.q


def test_input_checks():
    ctx = make_context(17, 8)
    with pytest.raises(ContextMismatch):
        ntt_ct([0] * 7, ctx)
    with pytest.raises(ContextMismatch):
        ntt_ct([17] + [0] * 7, ctx)


def test_negacyclic_needs_psi():
    ctx = make_context(17, 16)
    with pytest.raises(NoPsiExists):
        negacyclic_mul([0] * 16, [0] * 16, ctx)


@pytest.mark.parametrize("q,n", [(17, 8), (257, 32), (Q31, 128)])
def test_products_vs_python_schoolbook(q, n):
    ctx = make_context(q, n)
    rng = random.Random(q)
    for _ in range(3):
        a, b = rand_poly(rng, n, q), rand_poly(rng, n, q)
        assert list(negacyclic_mul(a, b, ctx)) == _schoolbook_python(a, b, q, True)
        assert list(cyclic_mul(a, b, ctx)) == _schoolbook_python(a, b, q, False)
        assert schoolbook_mul(a, b, q) == _schoolbook_python(a, b, q, True)


def test_negacyclic_16384_vs_schoolbook():
    n = 1 << 14
    ctx = make_context(Q31, n)
    rng = random.Random(7)
    a, b = rand_poly(rng, n, Q31), rand_poly(rng, n, Q31)
    assert list(negacyclic_mul(a, b, ctx)) == schoolbook_mul(a, b, Q31)
