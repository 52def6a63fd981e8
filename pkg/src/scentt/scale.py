"""Large transforms from 128-point kernels, cost estimates and parameter checks."""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, prod
from typing import Callable, Sequence

from .errors import NotCoprime, OutOfRange, SizeMismatch
from .modmath import ModulusContext, Polynomial, check_poly
from .pipesim import (
    DEFAULT_CLOCK_PERIOD_PS,
    PipelineConfig,
    apply_output_permutation,
    derive_output_permutation,
    run_pipeline,
)
from .reference import ntt_ct
from .report import CostReport

Kernel = Callable[[list[list[int]], ModulusContext], list[list[int]]]

KERNEL_POINTS = 128
KERNEL_II = 64
FLUSH_PER_STAGE = 200

# Recorded figures for the key-switch datapath (N = 2^14, L + 1 = 8, 60-bit).
KEYSWITCH_STAGE_CYCLES = 2600
KEYSWITCH_NTT_MODULES = 90
KEYSWITCH_MOD_MULTIPLIERS = 302
KEYSWITCH_MOD_ADDERS = 150
HEAX_KEYSWITCH_PER_S = 2616
HEAX_NTT_2_14_NS = 23894


def reference_kernel(batch: list[list[int]], ctx: ModulusContext) -> list[list[int]]:
    return [list(ntt_ct(p, ctx)) for p in batch]


def pipeline_kernel(**config_kw) -> Kernel:
    """Kernel that streams a whole batch through the cycle-accurate pipeline."""
    cache: dict[int, list[int]] = {}

    def kernel(batch: list[list[int]], ctx: ModulusContext) -> list[list[int]]:
        cfg = PipelineConfig(ctx, trace=False, **config_kw)
        key = (ctx.q, ctx.N, ctx.omega)
        if key not in cache:
            cache[key] = derive_output_permutation(cfg)
        res = run_pipeline(batch, cfg)
        return [list(apply_output_permutation(o, cache[key])) for o in res.outputs]

    return kernel


def four_step_ntt(poly, ctx: ModulusContext, kernel: Kernel = reference_kernel,
                  n1: int | None = None) -> Polynomial:
    """Size-N transform from n1-point and n2-point kernels (N = n1 * n2).

    Input index i = n2*i1 + i2, output index r = r1 + n1*r2:
    column transforms over i1, twiddle omega^(i2*r1), row transforms over i2.
    """
    a = check_poly(poly, ctx)
    N, q = ctx.N, ctx.q
    if n1 is None:
        n1 = KERNEL_POINTS if N == KERNEL_POINTS * KERNEL_POINTS else 1 << (ctx.log_n // 2)
    if N % n1 or n1 < 1:
        raise SizeMismatch(f"N={N} is not divisible by n1={n1}")
    n2 = N // n1
    if n1 & (n1 - 1) or n2 & (n2 - 1):
        raise SizeMismatch("both factors must be powers of two")
    ctx1, ctx2 = ctx.sub_context(n1), ctx.sub_context(n2)

    cols = kernel([a[i2::n2] for i2 in range(n2)], ctx1)       # cols[i2][r1]
    tw = ctx.twiddles
    rows = [[cols[i2][r1] * tw[(i2 * r1) % N] % q for i2 in range(n2)] for r1 in range(n1)]
    freq = kernel(rows, ctx2)                                  # freq[r1][r2]
    out = [0] * N
    for r1 in range(n1):
        for r2 in range(n2):
            out[r1 + n1 * r2] = freq[r1][r2]
    return Polynomial(out)


def big_ntt_cycles(n_big: int = 1 << 14, k_units: int = 1, flush: int | None = None,
                   clock_period_ps: float = DEFAULT_CLOCK_PERIOD_PS) -> CostReport:
    """Cycle estimate for an n_big-point NTT on k_units parallel 128-point cores.

    cycles = stages * (n_big/128 * 64 / K) + flush, with flush defaulting to
    200 cycles per stage (400 for the two-stage 2^14 case). Reordering is free.
    """
    if n_big < KERNEL_POINTS or n_big & (n_big - 1):
        raise SizeMismatch(f"{n_big} is not a power of two >= {KERNEL_POINTS}")
    if k_units < 1:
        raise ValueError("need at least one NTT core")
    bits = n_big.bit_length() - 1
    stages = ceil(bits / 7)
    per_stage = ceil(n_big // KERNEL_POINTS * KERNEL_II / k_units)
    core = stages * per_stage
    if flush is None:
        flush = FLUSH_PER_STAGE * stages
    cycles = core + flush
    return CostReport(
        name=f"ntt-{n_big}",
        cycles=cycles,
        clock_period_ps=clock_period_ps,
        clock_hz=1e12 / clock_period_ps,
        latency_ns=cycles * clock_period_ps / 1000,
        throughput_per_s=1e12 / (cycles * clock_period_ps),
        details={"stages": stages, "k_units": k_units, "core_cycles": core,
                 "flush_cycles": flush,
                 "core_latency_ns": core * clock_period_ps / 1000,
                 "kernels_per_stage": n_big // KERNEL_POINTS},
        notes=["reorder between stages is not counted"],
    )


def keyswitch_estimate(n: int = 1 << 14, levels: int = 8,
                       clock_period_ps: float = DEFAULT_CLOCK_PERIOD_PS,
                       clock_hz: float | None = None,
                       stage_cycles: int = KEYSWITCH_STAGE_CYCLES) -> CostReport:
    """Pipelined key-switch throughput: one outer iteration per level of stage_cycles.

    Throughput is clock rate / cycles, with the rate taken from ``clock_hz`` when
    given and from the period otherwise.
    """
    if levels < 1:
        raise ValueError("levels (L + 1) must be >= 1")
    cycles = stage_cycles * levels
    rate = clock_hz if clock_hz else 1e12 / clock_period_ps
    thr = rate / cycles
    return CostReport(
        name="keyswitch",
        cycles=cycles,
        clock_period_ps=clock_period_ps,
        clock_hz=rate,
        latency_ns=cycles * clock_period_ps / 1000,
        throughput_per_s=thr,
        details={"n": n, "levels": levels, "stage_cycles": stage_cycles,
                 "ntt128_modules": KEYSWITCH_NTT_MODULES,
                 "modular_multipliers": KEYSWITCH_MOD_MULTIPLIERS,
                 "modular_adders": KEYSWITCH_MOD_ADDERS,
                 "heax_keyswitch_per_s": HEAX_KEYSWITCH_PER_S,
                 "speedup_vs_heax": thr / HEAX_KEYSWITCH_PER_S},
        notes=["unit inventory is recorded, not derived",
               "intermediate memory, reroute network and control are ignored"],
    )


@dataclass(frozen=True)
class SecurityCheck:
    satisfied: bool
    margin: float
    required_n: float


def ckks_security_check(n: int, lam: float, log_pql: float) -> SecurityCheck:
    """N >= (lambda + 110) / 7.2 * log2(P * q_L)."""
    if n <= 0 or lam < 0 or log_pql < 0:
        raise ValueError("arguments must be positive")
    need = (lam + 110) / 7.2 * log_pql
    return SecurityCheck(n >= need, n - need, need)


def _check_basis(basis: Sequence[int]) -> None:
    from math import gcd
    for i, p in enumerate(basis):
        if p < 2:
            raise NotCoprime(f"modulus {p} < 2")
        for r in basis[i + 1:]:
            if gcd(p, r) != 1:
                raise NotCoprime(f"{p} and {r} share a factor")


def rns_decompose(x: int, basis: Sequence[int]) -> tuple[int, ...]:
    _check_basis(basis)
    if not 0 <= x < prod(basis):
        raise OutOfRange(f"{x} outside [0, {prod(basis)})")
    return tuple(x % p for p in basis)


def rns_reconstruct(residues: Sequence[int], basis: Sequence[int]) -> int:
    """Chinese remaindering: sum r_i * M_i * (M_i^-1 mod p_i) mod M."""
    _check_basis(basis)
    if len(residues) != len(basis):
        raise SizeMismatch("one residue per modulus required")
    M = prod(basis)
    x = 0
    for r, p in zip(residues, basis):
        if not 0 <= r < p:
            raise OutOfRange(f"residue {r} outside [0, {p})")
        Mi = M // p
        x += r * Mi * pow(Mi, -1, p)
    return x % M
