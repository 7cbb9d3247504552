import numpy as np
import pytest
from hypothesis import strategies as st

from sumset_lab import IntSet, sieve_primes


@pytest.fixture(scope="session")
def sieve_small():
    return sieve_primes(2 * 4096)


def brute_pairs(A, B, predicate):
    return sum(1 for a in A for b in B if predicate(a + b))


def is_prime_td(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@st.composite
def int_sets(draw, max_n=64, n=None):
    """Nonempty IntSet over [1, n] (n drawn when not given)."""
    n = n if n is not None else draw(st.integers(1, max_n))
    members = draw(st.sets(st.integers(1, n), min_size=1, max_size=n))
    return IntSet.from_members(sorted(members), n)


@st.composite
def set_pairs(draw, max_n=64):
    n = draw(st.integers(1, max_n))
    return draw(int_sets(n=n)), draw(int_sets(n=n))


def random_int_set(n, rng, density=None):
    d = rng.uniform(0.05, 0.9) if density is None else density
    bits = np.zeros(n + 1, dtype=bool)
    bits[1:] = rng.random(n) < d
    if not bits.any():
        bits[int(rng.integers(1, n + 1))] = True
    return IntSet(n, bits)
