"""Exact modular arithmetic for the NTT datapath.

Everything here works on plain Python integers so the same code covers the
32-bit NTT-128 datapath and the 60-bit large-scale configuration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import ContextMismatch, ModulusTooLarge, NoRootExists, NotPrime

# Deterministic for every n < 3.3e24, which covers all 64-bit moduli.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of the odd composite n (Floyd cycle finding)."""
    from math import gcd
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n in increasing order."""
    out: set[int] = set()
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            out.add(p)
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.add(m)
            continue
        f = _pollard_rho(m)
        stack.extend((f, m // f))
    return sorted(out)


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def smallest_generator(q: int) -> int:
    """Smallest generator of the multiplicative group of Z_q (q prime)."""
    if q == 2:
        return 1
    factors = prime_factors(q - 1)
    g = 2
    while any(pow(g, (q - 1) // f, q) == 1 for f in factors):
        g += 1
    return g


def primitive_root_of_unity(q: int, n: int) -> int:
    """Smallest primitive n-th root of unity mod q.

    All primitive n-th roots are the odd powers of g^((q-1)/n) for n a power of
    two, so the minimum is found in O(n) multiplications.
    """
    if (q - 1) % n:
        raise NoRootExists(f"q={q} is not 1 mod {n}")
    if n == 1:
        return 1
    w0 = pow(smallest_generator(q), (q - 1) // n, q)
    w2 = w0 * w0 % q
    best, cur = w0, w0
    for _ in range(n // 2 - 1):
        cur = cur * w2 % q
        if cur < best:
            best = cur
    return best


def is_primitive_root(w: int, n: int, q: int) -> bool:
    """True iff w has multiplicative order exactly n mod q (n a power of two)."""
    if pow(w, n, q) != 1:
        return False
    return n == 1 or pow(w, n // 2, q) != 1


class Order(Enum):
    NATURAL = "natural"
    BIT_REVERSED = "bit_reversed"
    PIPELINE = "pipeline"


@dataclass(frozen=True)
class ModulusContext:
    q: int
    N: int
    w: int
    beta: int
    omega: int
    omega_inv: int
    n_inv: int
    twiddles: tuple[int, ...] = field(repr=False)
    shoup_twiddles: tuple[int, ...] = field(repr=False)
    psi: int | None = None
    barrett_mu: int = field(default=0, repr=False)

    @property
    def log_n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def psi_inv(self) -> int | None:
        return None if self.psi is None else pow(self.psi, -1, self.q)

    def sub_context(self, n: int) -> "ModulusContext":
        """Context of size n whose root is omega^(N/n), so sizes stay compatible."""
        if self.N % n or not _is_pow2(n):
            raise ContextMismatch(f"{n} does not divide N={self.N}")
        return make_context(self.q, n, self.w, self.beta,
                            omega=pow(self.omega, self.N // n, self.q))


def make_context(q: int, N: int, w: int = 32, beta: int | None = None,
                 omega: int | None = None) -> ModulusContext:
    """Build the arithmetic context for a size-N transform mod q.

    The default root is the smallest primitive N-th root of unity; pass
    ``omega`` to pin a specific one (used for the sub-transforms of the
    four-step decomposition).
    """
    if not _is_pow2(N):
        raise ValueError(f"N={N} is not a power of two")
    if beta is None:
        beta = w + 1
    if not is_prime(q):
        raise NotPrime(f"q={q} is not prime")
    if (q - 1) % N:
        raise NoRootExists(f"q={q} is not 1 mod N={N}")
    if q >= 1 << (w - 1):
        raise ModulusTooLarge(f"q={q} does not fit a {w}-bit datapath (needs q < 2^{w - 1})")
    if omega is None:
        omega = primitive_root_of_unity(q, N)
    elif not is_primitive_root(omega, N, q):
        raise NoRootExists(f"{omega} is not a primitive {N}-th root mod {q}")

    psi = None
    if (q - 1) % (2 * N) == 0:
        # Smallest square root of omega that is a primitive 2N-th root.
        p0 = pow(smallest_generator(q), (q - 1) // (2 * N), q)
        cands = [x for x in (pow(p0, j, q) for j in range(1, 2 * N, 2)) if x * x % q == omega]
        psi = min(cands)

    tw = [1] * N
    for j in range(1, N):
        tw[j] = tw[j - 1] * omega % q
    shoup = tuple((t << beta) // q for t in tw)
    return ModulusContext(
        q=q, N=N, w=w, beta=beta, omega=omega,
        omega_inv=pow(omega, -1, q), n_inv=pow(N, -1, q),
        twiddles=tuple(tw), shoup_twiddles=shoup, psi=psi,
        barrett_mu=(1 << (2 * w)) // q,
    )


@dataclass(frozen=True)
class Polynomial:
    """N coefficients mod q plus a tag recording their index order."""

    coeffs: tuple[int, ...]
    order: Order = Order.NATURAL

    def __init__(self, coeffs: Iterable[int], order: Order = Order.NATURAL):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]


def check_poly(poly: Sequence[int] | Polynomial, ctx: ModulusContext) -> list[int]:
    """Return the coefficients as a list after checking them against ctx."""
    coeffs = list(poly)
    if len(coeffs) != ctx.N:
        raise ContextMismatch(f"length {len(coeffs)} != N={ctx.N}")
    for c in coeffs:
        if not 0 <= c < ctx.q:
            raise ContextMismatch(f"coefficient {c} outside [0, {ctx.q})")
    return coeffs


def mod_add(a: int, b: int, ctx: ModulusContext) -> int:
    r = a + b
    if r >= ctx.q:
        r -= ctx.q
    return r


def mod_sub(a: int, b: int, ctx: ModulusContext) -> int:
    r = a - b
    if r < 0:
        r += ctx.q
    return r


def shoup_precompute(b: int, ctx: ModulusContext) -> int:
    return (b << ctx.beta) // ctx.q


def shoup_quotient_residue(a: int, b: int, b_prime: int, ctx: ModulusContext) -> int:
    """a*b - t*q before the final correction; lies in [0, 2q)."""
    t = (a * b_prime) >> ctx.beta
    return a * b - t * ctx.q


def shoup_mul(a: int, b: int, b_prime: int, ctx: ModulusContext) -> int:
    # Three half multipliers: a*b' (high), a*b (low), t*q (low); one subtractor.
    r = a * b - ((a * b_prime) >> ctx.beta) * ctx.q
    if r >= ctx.q:
        r -= ctx.q
    return r


def barrett_mul(a: int, b: int, ctx: ModulusContext) -> int:
    """a*b mod q via mu = floor(2^(2w)/q); at most two conditional subtractions."""
    x = a * b
    r = x - ((x * ctx.barrett_mu) >> (2 * ctx.w)) * ctx.q
    if r >= ctx.q:
        r -= ctx.q
        if r >= ctx.q:
            r -= ctx.q
    return r


def barrett_residue(a: int, b: int, ctx: ModulusContext) -> int:
    x = a * b
    return x - ((x * ctx.barrett_mu) >> (2 * ctx.w)) * ctx.q


def bit_reverse(i: int, bits: int) -> int:
    j = 0
    for _ in range(bits):
        j = (j << 1) | (i & 1)
        i >>= 1
    return j


def rotate_left_bits(i: int, k: int, bits: int) -> int:
    if bits == 0:
        return i
    k %= bits
    mask = (1 << bits) - 1
    return ((i << k) | (i >> (bits - k))) & mask


def rotate_right_bits(i: int, k: int, bits: int) -> int:
    if bits == 0:
        return i
    return rotate_left_bits(i, bits - k % bits, bits)
