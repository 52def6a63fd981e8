"""
From 128-point kernels to a key switch
======================================

A 2^14-point transform is two passes of 128-point kernels with a twiddle
multiply in between. The cost model counts kernel slots, not arithmetic.
"""

import random

from scentt.modmath import make_context
from scentt.reference import ntt_ct
from scentt.scale import big_ntt_cycles, ckks_security_check, four_step_ntt, keyswitch_estimate

ctx = make_context(2013265921, 1 << 14)
x = [random.Random(3).randrange(ctx.q) for _ in range(ctx.N)]
print("four-step == direct:", four_step_ntt(x, ctx) == ntt_ct(x, ctx))

###############################################################################
# Cycle estimates at 29.4 ps.

for k in (1, 2, 4):
    r = big_ntt_cycles(k_units=k)
    print(f"K={k}: {r.cycles} cycles, {r.latency_ns:.1f} ns")

ks = keyswitch_estimate()
print(f"key switch: {ks.cycles} cycles, {ks.throughput_per_s:,.0f}/s, "
      f"{ks.details['speedup_vs_heax']:.0f}x HEAX")

###############################################################################
# Is N = 8192 large enough for 80-bit security at log(P*q_L) = 310?

print(ckks_security_check(8192, 80, 310))
