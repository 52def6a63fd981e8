"""
NTT basics over a toy field
===========================

A transform context fixes the modulus, the size and the root of unity.
Everything else (twiddles, Shoup constants, the negacyclic root psi) is
derived from it.
"""

from scentt.modmath import make_context, shoup_mul, shoup_precompute
from scentt.reference import dft_bruteforce, intt, negacyclic_mul, ntt_ct

ctx = make_context(17, 8)
print("q =", ctx.q, " N =", ctx.N, " omega =", ctx.omega, " psi =", ctx.psi)

###############################################################################
# X[r] = sum x[i] * omega^(i*r). With x = 1 + X the spectrum is 1 + 2^r.

x = [1, 1, 0, 0, 0, 0, 0, 0]
print("brute force :", list(dft_bruteforce(x, ctx)))
print("radix-2     :", list(ntt_ct(x, ctx)))
print("inverse     :", list(intt(ntt_ct(x, ctx), ctx)))

###############################################################################
# The butterfly multiplies by a twiddle with a precomputed quotient, so the
# hardware never divides by q.

b = 5
bp = shoup_precompute(b, ctx)
print("TW' for 5:", bp, " 11*5 mod 17 =", shoup_mul(11, b, bp, ctx))

###############################################################################
# Products in Z_q[X]/(X^N + 1): X * X^(N-1) wraps around to -1.

xs = [0, 1, 0, 0, 0, 0, 0, 0]
xn1 = [0, 0, 0, 0, 0, 0, 0, 1]
print("X * X^7 =", list(negacyclic_mul(xs, xn1, ctx)))
