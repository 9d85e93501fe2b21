"""Exact integer and modular arithmetic shared by every sum in the lab.

Smooth-number sieves, multiplicities of prime products, the k-radical
characterising d | m^k, complete exponential sums S_k(q,a) with their
coprime variants, and the multiplicative majorant omega_k.  Everything is
small-modulus by design: factorisation is trial division against a prime
table, and exponential sums are direct O(q) summations (a histogram/FFT
bulk path serves the exhaustive scans).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "SmoothSet",
    "PrimeProductTable",
    "ModularSumValue",
    "smooth_sieve",
    "primes_up_to",
    "primes_in_dyadic",
    "tau_table",
    "factorize",
    "k_radical",
    "count_multiples_pow",
    "radical_sum",
    "complete_sum",
    "coprime_sum",
    "complete_sum_all",
    "coprime_sum_all",
    "omega_k",
    "euler_phi",
    "divisor_count",
    "totient_sieve",
]

FACTOR_LIMIT = 10 ** 12          # trial division is pointless beyond this
SMOOTH_MEMORY_LIMIT = 10 ** 8    # one flag per integer up to the bound
MODULUS_LIMIT = 10 ** 5          # direct summation bound for S_k(q,a)


class KernelError(ValueError):
    pass


def primes_up_to(limit: int) -> np.ndarray:
    """Ascending primes <= limit (classic boolean sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


@lru_cache(maxsize=8)
def _prime_table(limit: int = 10 ** 6) -> np.ndarray:
    return primes_up_to(limit)


def primes_in_dyadic(R: int) -> np.ndarray:
    """Primes p with R/2 < p <= R."""
    ps = primes_up_to(R)
    return ps[ps * 2 > R]


@dataclass(frozen=True)
class SmoothSet:
    """All x <= bound whose prime factors are <= smoothness (1 included)."""

    bound: int
    smoothness: int
    members: np.ndarray

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, x: int) -> bool:
        i = int(np.searchsorted(self.members, x))
        return i < self.members.size and int(self.members[i]) == x


def smooth_sieve(bound: int, smoothness: int) -> SmoothSet:
    """Enumerate the smooth set by a largest-prime-factor sieve."""
    if bound < 1 or smoothness < 1:
        raise KernelError("smooth_sieve needs bound >= 1 and smoothness >= 1")
    if bound > SMOOTH_MEMORY_LIMIT:
        raise KernelError("range too large; use chunked mode")
    gpf = np.zeros(bound + 1, dtype=np.int64)
    for p in range(2, bound + 1):
        if gpf[p] == 0:               # p prime: stamp it on all multiples
            gpf[p::p] = p
    gpf[1] = 1
    members = np.nonzero(gpf[1:] <= smoothness)[0] + 1
    return SmoothSet(bound, smoothness, members.astype(np.int64))


@dataclass(frozen=True)
class PrimeProductTable:
    """tau_t(x): ordered t-tuples of primes in (R/2, R] with product x."""

    R: int
    t: int
    counts: dict[int, int]

    def prime_count(self) -> int:
        return int(primes_in_dyadic(self.R).size)

    def support(self) -> np.ndarray:
        return np.array(sorted(self.counts), dtype=np.int64)

    def multiplicities(self) -> np.ndarray:
        return np.array([self.counts[x] for x in sorted(self.counts)],
                        dtype=np.int64)


def tau_table(R: int, t: int) -> PrimeProductTable:
    if t < 1 or R < 3:
        raise KernelError("tau_table needs t >= 1 and R >= 3")
    ps = [int(p) for p in primes_in_dyadic(R)]
    counts: dict[int, int] = {1: 1}
    for _ in range(t):
        nxt: dict[int, int] = {}
        for x, c in counts.items():
            for p in ps:
                nxt[x * p] = nxt.get(x * p, 0) + c
        counts = nxt
    return PrimeProductTable(R, t, counts)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation [(p, e), ...] by trial division (n <= 10^12)."""
    if n < 1:
        raise KernelError("factorize needs n >= 1")
    if n > FACTOR_LIMIT:
        raise KernelError("unfactored input: modulus beyond trial-division budget")
    out: list[tuple[int, int]] = []
    rem = n
    for p in _prime_table():
        p = int(p)
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            out.append((p, e))
    if rem > 1:
        out.append((rem, 1))
    return out


def k_radical(d: int, k: int) -> int:
    """rho_k(d) = prod p^ceil(v_p(d)/k); the divisor test d | m^k <=> rho_k(d) | m."""
    if d < 1 or k < 2:
        raise KernelError("k_radical needs d >= 1 and k >= 2")
    out = 1
    for p, e in factorize(d):
        out *= p ** ((e + k - 1) // k)
    return out


def count_multiples_pow(M: int, d: int, k: int) -> int:
    """#{1 <= m <= M : d | m^k} = floor(M / rho_k(d))."""
    if M < 0:
        raise KernelError("count_multiples_pow needs M >= 0")
    r = k_radical(d, k) if d > 1 else 1
    count = M // r
    assert count <= M / r
    return count


def radical_sum(D: int, k: int, j: int) -> float:
    """sum_{d <= D} d * rho_k(d)^(-j); slow growth in D is a convergence probe."""
    spf = np.zeros(D + 1, dtype=np.int64)
    for p in range(2, D + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    total = 0.0
    for d in range(1, D + 1):
        rem, rad = d, 1
        while rem > 1:
            p = int(spf[rem])
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            rad *= p ** ((e + k - 1) // k)
        total += d * float(rad) ** (-j)
    return total


@dataclass(frozen=True)
class ModularSumValue:
    re: float
    im: float
    q: int
    a: int
    k: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)


def _check_reduced(q: int, a: int) -> None:
    if not (1 <= a <= q):
        raise KernelError("reduced fraction required: need 1 <= a <= q")
    if math.gcd(a, q) != 1:
        raise KernelError("reduced fraction required: gcd(a, q) != 1")
    if q > MODULUS_LIMIT:
        raise KernelError(f"modulus {q} beyond direct-summation bound")


def _direct_sum(q: int, a: int, k: int, coprime: bool) -> ModularSumValue:
    # math.fsum gives compensated accumulation for both components.
    tw = 2.0 * math.pi * a / q
    res, ims = [], []
    for x in range(1, q + 1):
        if coprime and math.gcd(x, q) != 1:
            continue
        ph = tw * pow(x, k, q)
        res.append(math.cos(ph))
        ims.append(math.sin(ph))
    return ModularSumValue(math.fsum(res), math.fsum(ims), q, a, k)


def complete_sum(q: int, a: int, k: int) -> ModularSumValue:
    """S_k(q,a) = sum_{x=1..q} e(a x^k / q), for a reduced fraction a/q."""
    _check_reduced(q, a)
    return _direct_sum(q, a, k, coprime=False)


def coprime_sum(q: int, a: int, k: int) -> ModularSumValue:
    """S_k^*(q,a): the same sum restricted to gcd(x, q) = 1."""
    _check_reduced(q, a)
    return _direct_sum(q, a, k, coprime=True)


def _modpow_vec(x: np.ndarray, k: int, q: int) -> np.ndarray:
    """x^k mod q elementwise; q < 2^32 keeps the products inside uint64."""
    x = x.astype(np.uint64) % np.uint64(q)
    r = np.ones_like(x)
    b = x.copy()
    e = k
    while e:
        if e & 1:
            r = (r * b) % np.uint64(q)
        b = (b * b) % np.uint64(q)
        e >>= 1
    return r


def power_residue_histogram(q: int, k: int, coprime: bool = False) -> np.ndarray:
    """c[m] = #{x in [1,q] (coprime to q if asked) : x^k = m mod q}."""
    x = np.arange(1, q + 1, dtype=np.uint64)
    if coprime:
        x = x[np.gcd(x, np.uint64(q)) == np.uint64(1)]
    xk = _modpow_vec(x, k, q).astype(np.int64) % q
    return np.bincount(xk, minlength=q).astype(np.float64)


def complete_sum_all(q: int, k: int) -> np.ndarray:
    """S_k(q,a) for every a = 0..q-1 at once, via the residue histogram.

    S_k(q,a) = sum_m c[m] e(am/q) is the conjugate FFT of the histogram.
    """
    return np.conj(np.fft.fft(power_residue_histogram(q, k)))


def coprime_sum_all(q: int, k: int) -> np.ndarray:
    return np.conj(np.fft.fft(power_residue_histogram(q, k, coprime=True)))


def omega_k(q: int, k: int) -> float:
    """Multiplicative majorant with |S_k(q,a)| = O(q omega_k(q)).

    On prime powers p^(ku+v) with 1 <= v <= k it takes k p^(-u-1/2) when
    v = 1 and p^(-u-1) otherwise.
    """
    out = 1.0
    for p, e in factorize(q):
        u, v = (e - 1) // k, (e - 1) % k + 1
        if v == 1:
            out *= k * float(p) ** (-u - 0.5)
        else:
            out *= float(p) ** (-u - 1.0)
    return out


def euler_phi(q: int) -> int:
    out = q
    for p, _ in factorize(q):
        out -= out // p
    return out


def divisor_count(m: int) -> int:
    out = 1
    for _, e in factorize(m):
        out *= e + 1
    return out


def totient_sieve(limit: int) -> np.ndarray:
    """phi(q) for q = 0..limit."""
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:               # p untouched so far => prime
            phi[p::p] -= phi[p::p] // p
    return phi
