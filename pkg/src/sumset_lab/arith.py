"""Number-theoretic primitives: prime sieve, multiplicative tables, primorials.

All tables are plain numpy arrays, immutable after construction (write flag
cleared), so concurrent reads are safe.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._validation import check_int
from .errors import DomainError, ExactOverflowError, RangeError

# Exact integers are capped at the signed 128-bit range.
EXACT_INT_BITS = 127
EXACT_INT_MAX = (1 << EXACT_INT_BITS) - 1


def _freeze(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PrimeSieve:
    """Primality table for 0..limit, indexed by plain integer n."""

    limit: int
    is_prime: np.ndarray

    def __contains__(self, n):
        return 0 <= n <= self.limit and bool(self.is_prime[n])

    @property
    def primes(self):
        return np.flatnonzero(self.is_prime)

    def pi(self, x):
        """Number of primes <= x."""
        if x > self.limit:
            raise RangeError(f"x={x} exceeds sieve limit {self.limit}")
        if x < 2:
            return 0
        return int(np.count_nonzero(self.is_prime[: x + 1]))


def sieve_primes(limit):
    """Sieve of Eratosthenes up to and including ``limit``."""
    limit = check_int(limit, "limit")
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    return PrimeSieve(limit, _freeze(is_prime))


@dataclass(frozen=True, eq=False)
class MultiplicativeTables:
    """Moebius mu, Euler phi and nu (distinct prime factors) for 0..limit.

    Index 0 is a placeholder (all zero).
    """

    limit: int
    mu: np.ndarray
    phi: np.ndarray
    nu: np.ndarray


def multiplicative_tables(limit):
    limit = check_int(limit, "limit", minimum=1)
    mu = np.ones(limit + 1, dtype=np.int8)
    phi = np.arange(limit + 1, dtype=np.int64)
    nu = np.zeros(limit + 1, dtype=np.int16)
    if limit >= 2:
        for p in sieve_primes(limit).primes.tolist():
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
            phi[p::p] -= phi[p::p] // p
            nu[p::p] += 1
    mu[0] = 0
    return MultiplicativeTables(limit, _freeze(mu), _freeze(phi), _freeze(nu))


def euler_phi(n):
    """phi(n) by trial division; for single values outside a table."""
    n = check_int(n, "n", minimum=1)
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def pi_progression(sieve, x, q, a):
    """pi(x; q, a): primes p <= x with p = a (mod q)."""
    x = check_int(x, "x", minimum=1)
    q = check_int(q, "q", minimum=1)
    a = check_int(a, "a", minimum=0)
    if a >= q:
        raise DomainError(f"residue a={a} must satisfy 0 <= a < q={q}")
    if x > sieve.limit:
        raise RangeError(f"x={x} exceeds sieve limit {sieve.limit}")
    return int(np.count_nonzero(sieve.is_prime[a : x + 1 : q]))


@dataclass(frozen=True)
class BrunTitchmarshResult:
    count: int
    bound: float
    holds: bool
    # 4x/(phi(q) log x); only defined for q <= sqrt(x)
    bound_sqrt: float | None = None
    holds_sqrt: bool | None = None


def brun_titchmarsh_check(sieve, x, q, a):
    q = check_int(q, "q", minimum=1)
    x = check_int(x, "x", minimum=1)
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd(a={a}, q={q}) != 1")
    if q >= x:
        raise DomainError(f"need q < x, got q={q}, x={x}")
    count = pi_progression(sieve, x, q, a)
    phi_q = euler_phi(q)
    bound = 2 * x / (phi_q * math.log(x / q))
    result = BrunTitchmarshResult(count, bound, count <= bound)
    if q * q <= x:
        bound_sqrt = 4 * x / (phi_q * math.log(x))
        result = BrunTitchmarshResult(
            count, bound, count <= bound, bound_sqrt, count <= bound_sqrt
        )
    return result


def brun_titchmarsh_sweep(sieve, x_max, constant=2.0):
    """Check pi(x;q,a) <= C x/(phi(q) log(x/q)) for every x <= x_max, q < x, (a,q) = 1.

    For fixed (q, a) the count is a step function that jumps at primes and
    the bound is unimodal in x with its minimum near e*q, so each constant
    stretch is settled by one evaluation. ``constant`` is 2 for the
    classical inequality; other values exist for testing the sweep itself.

    Returns (violating_classes, checked_classes) counted over pairs (q, a).
    """
    x_max = check_int(x_max, "x_max", minimum=2)
    if x_max > sieve.limit:
        raise RangeError(f"x_max={x_max} exceeds sieve limit {sieve.limit}")
    primes = np.flatnonzero(sieve.is_prime[: x_max + 1]).astype(np.int64)
    phi = multiplicative_tables(x_max).phi.astype(np.int64)
    bad, total = _kernels.bt_sweep(primes, phi, x_max, float(constant))
    return int(bad), int(total)


def checked_product(factors):
    """Exact product with an explicit overflow error past the 128-bit cap."""
    result = 1
    for f in factors:
        result *= int(f)
        if result > EXACT_INT_MAX:
            raise ExactOverflowError(
                f"product exceeds 2^{EXACT_INT_BITS} - 1 (exact integer cap)"
            )
    return result


def primes_up_to(k):
    k = check_int(k, "k")
    if k < 2:
        return []
    return sieve_primes(k).primes.tolist()


def primorial(k):
    """Product of all primes <= k, refusing results beyond 2^127 - 1.

    The cap is reached at k = 101; every k <= 100 is representable.
    """
    k = check_int(k, "k")
    if k < 2:
        raise DomainError(f"primorial needs k >= 2, got {k}")
    return checked_product(primes_up_to(k))


def mertens_product(x):
    """prod_{p <= x} (1 - 1/p)."""
    x = check_int(x, "x")
    if x < 2:
        raise DomainError(f"mertens_product needs x >= 2, got {x}")
    primes = sieve_primes(x).primes.astype(np.float64)
    return float(np.prod(1.0 - 1.0 / primes))


def von_mangoldt_table(limit):
    """Lambda(n) for 0..limit: log p at n = p^k, else 0."""
    limit = check_int(limit, "limit", minimum=1)
    lam = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 2:
        for p in sieve_primes(limit).primes.tolist():
            pk = p
            logp = math.log(p)
            while pk <= limit:
                lam[pk] = logp
                pk *= p
    return _freeze(lam)
