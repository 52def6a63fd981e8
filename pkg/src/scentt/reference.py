"""Golden-model transforms used as oracles for the hardware model.

Four NTT routes are provided and checked against each other in the tests:

* ``dft_bruteforce``  -- direct evaluation of A(omega^r), O(N^2)
* ``ntt_recursive``   -- even/odd divide and conquer
* ``ntt_ct``          -- iterative in-place Cooley-Tukey, natural in, bit-reversed
  internally, returned in natural order
* ``ntt_constant_geometry`` -- the streaming dataflow of the pipelined
  hardware: every stage reads positions (c, c + N/2) and writes (2c, 2c + 1)
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ContextMismatch, NoPsiExists
from .modmath import (
    ModulusContext,
    Order,
    Polynomial,
    bit_reverse,
    check_poly,
    rotate_right_bits,
)

Butterfly = tuple[int, int, int]


def dft_bruteforce(poly, ctx: ModulusContext) -> Polynomial:
    a = check_poly(poly, ctx)
    q, N, tw = ctx.q, ctx.N, ctx.twiddles
    out = []
    for r in range(N):
        acc = 0
        for i, ai in enumerate(a):
            acc += ai * tw[(r * i) % N]
        out.append(acc % q)
    return Polynomial(out)


def ntt_recursive(poly, ctx: ModulusContext) -> Polynomial:
    a = check_poly(poly, ctx)

    def rec(x: list[int], step: int) -> list[int]:
        n = len(x)
        if n == 1:
            return x
        even = rec(x[0::2], step * 2)
        odd = rec(x[1::2], step * 2)
        out = [0] * n
        for r in range(n // 2):
            t = ctx.twiddles[r * step] * odd[r] % ctx.q
            out[r] = (even[r] + t) % ctx.q
            out[r + n // 2] = (even[r] - t) % ctx.q
        return out

    return Polynomial(rec(a, 1))


def stage_twiddle_exponent(k: int, i: int, N: int) -> int:
    """Power of omega used at stage k by the butterfly whose lower index is i."""
    s = N.bit_length() - 1
    block = i >> (s - k)
    return (N >> (k + 1)) * bit_reverse(block, k)


def ntt_ct_stages(poly, ctx: ModulusContext,
                  record: list[list[Butterfly]] | None = None) -> list[int]:
    """In-place Cooley-Tukey; returns the bit-reversed-order spectrum.

    When ``record`` is given, stage k appends one (a, b, tw) tuple per
    butterfly so the pipeline's consumed operands can be compared stage by
    stage.
    """
    a = check_poly(poly, ctx)
    q, N, s = ctx.q, ctx.N, ctx.log_n
    for k in range(s):
        half = N >> (k + 1)
        stage: list[Butterfly] = []
        for start in range(0, N, 2 * half):
            tw = ctx.twiddles[stage_twiddle_exponent(k, start, N)]
            for i in range(start, start + half):
                x, y = a[i], a[i + half]
                if record is not None:
                    stage.append((x, y, tw))
                t = y * tw % q
                a[i] = (x + t) % q
                a[i + half] = (x - t) % q
        if record is not None:
            record.append(stage)
    return a


def ntt_ct(poly, ctx: ModulusContext) -> Polynomial:
    a = ntt_ct_stages(poly, ctx)
    s = ctx.log_n
    return Polynomial(a[bit_reverse(r, s)] for r in range(ctx.N))


def _inverse_context_twiddles(ctx: ModulusContext) -> list[int]:
    tw = ctx.twiddles
    return [tw[(-j) % ctx.N] for j in range(ctx.N)]


def intt(poly, ctx: ModulusContext) -> Polynomial:
    """Inverse transform: same butterflies with omega^-1, then scale by N^-1."""
    a = check_poly(poly, ctx)
    q, N, s = ctx.q, ctx.N, ctx.log_n
    inv_tw = _inverse_context_twiddles(ctx)
    for k in range(s):
        half = N >> (k + 1)
        for start in range(0, N, 2 * half):
            tw = inv_tw[stage_twiddle_exponent(k, start, N)]
            for i in range(start, start + half):
                x, y = a[i], a[i + half]
                t = y * tw % q
                a[i] = (x + t) % q
                a[i + half] = (x - t) % q
    return Polynomial(a[bit_reverse(r, s)] * ctx.n_inv % q for r in range(N))


def ntt_constant_geometry(poly, ctx: ModulusContext,
                          record: list[list[Butterfly]] | None = None) -> Polynomial:
    """Stream-order transform with the same read/write pattern at every stage.

    Stage k reads positions (c, c + N/2) and writes results to (2c, 2c + 1);
    the output stream is in bit-reversed order and is returned as such.
    """
    x = check_poly(poly, ctx)
    q, N, s = ctx.q, ctx.N, ctx.log_n
    half = N // 2
    for k in range(s):
        y = [0] * N
        stage: list[Butterfly] = []
        for c in range(half):
            tw = ctx.twiddles[twiddle_exponent_at(k, c, N)]
            a, b = x[c], x[c + half]
            if record is not None:
                stage.append((a, b, tw))
            t = b * tw % q
            y[2 * c] = (a + t) % q
            y[2 * c + 1] = (a - t) % q
        if record is not None:
            record.append(stage)
        x = y
    return Polynomial(x, Order.BIT_REVERSED)


def twiddle_exponent_at(k: int, c: int, N: int) -> int:
    """Exponent consumed at stage k, read cycle c of the constant-geometry flow.

    The lower operand at cycle c has original index rotr(c, k); its block
    number (top k bits) fixes the twiddle.
    """
    s = N.bit_length() - 1
    i = rotate_right_bits(c, k, s)
    return stage_twiddle_exponent(k, i, N)


def twiddle_schedule(k: int, ctx: ModulusContext) -> list[tuple[int, int]]:
    """The (tw, tw') sequence PE_k consumes cyclically, in read order.

    Derived by recording the constant-geometry flow over a whole transform and
    checking the sequence repeats with period 2^k.
    """
    s = ctx.log_n
    if not 0 <= k < s:
        raise ValueError(f"stage {k} outside [0, {s})")
    exps = [twiddle_exponent_at(k, c, ctx.N) for c in range(ctx.N // 2)]
    period = 1 << k
    if any(exps[c] != exps[c % period] for c in range(len(exps))):
        raise AssertionError(f"stage {k} twiddle stream is not {period}-periodic")
    return [(ctx.twiddles[e], ctx.shoup_twiddles[e]) for e in exps[:period]]


def bit_reversed_to_natural(x: Sequence[int], bits: int) -> list[int]:
    return [x[bit_reverse(r, bits)] for r in range(len(x))]


def _require_psi(ctx: ModulusContext) -> int:
    if ctx.psi is None:
        raise NoPsiExists(f"q={ctx.q} is not 1 mod 2N={2 * ctx.N}")
    return ctx.psi


def negacyclic_mul(a, b, ctx: ModulusContext,
                   ntt: Callable = ntt_ct) -> Polynomial:
    """a*b mod (x^N + 1, q) via psi weighting, pointwise product, inverse."""
    psi = _require_psi(ctx)
    q, N = ctx.q, ctx.N
    a = check_poly(a, ctx)
    b = check_poly(b, ctx)
    pw = [1] * N
    for i in range(1, N):
        pw[i] = pw[i - 1] * psi % q
    A = ntt([x * p % q for x, p in zip(a, pw)], ctx)
    B = ntt([x * p % q for x, p in zip(b, pw)], ctx)
    c = intt([x * y % q for x, y in zip(A, B)], ctx)
    psi_inv = pow(psi, -1, q)
    out, s = [], 1
    for x in c:
        out.append(x * s % q)
        s = s * psi_inv % q
    return Polynomial(out)


def cyclic_mul(a, b, ctx: ModulusContext, ntt: Callable = ntt_ct) -> Polynomial:
    q = ctx.q
    A = ntt(a, ctx)
    B = ntt(b, ctx)
    return intt([x * y % q for x, y in zip(A, B)], ctx)


def _limbs(x: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array([int(v) for v in x], dtype=np.int64)
    return arr & 0xFFFF, arr >> 16


def schoolbook_mul(a: Sequence[int], b: Sequence[int], q: int,
                   negacyclic: bool = True) -> list[int]:
    """Direct O(N^2) product mod (x^N -/+ 1, q); independent of any transform.

    Coefficients are split into 16-bit limbs so every np.convolve partial sum
    stays below 2^63 for N up to 2^29 and q < 2^32.
    """
    if q >= 1 << 32:
        a_, b_ = [int(v) for v in a], [int(v) for v in b]
        return _schoolbook_python(a_, b_, q, negacyclic)
    N = len(a)
    if len(b) != N:
        raise ContextMismatch("operands differ in length")
    a_lo, a_hi = _limbs(a)
    b_lo, b_hi = _limbs(b)
    parts = {
        0: np.convolve(a_lo, b_lo),
        16: np.convolve(a_lo, b_hi) + np.convolve(a_hi, b_lo),
        32: np.convolve(a_hi, b_hi),
    }
    full = [0] * (2 * N - 1)
    for shift, arr in parts.items():
        for i, v in enumerate(arr.tolist()):
            full[i] += v << shift
    sign = -1 if negacyclic else 1
    out = [full[i] % q for i in range(N)]
    for i in range(N, 2 * N - 1):
        out[i - N] = (out[i - N] + sign * full[i]) % q
    return out


def _schoolbook_python(a, b, q, negacyclic):
    N = len(a)
    out = [0] * N
    for i in range(N):
        for j in range(N):
            k = i + j
            v = a[i] * b[j]
            if k >= N:
                k -= N
                if negacyclic:
                    v = -v
            out[k] += v
    return [v % q for v in out]
