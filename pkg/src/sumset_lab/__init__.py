"""Exact counting of prime sums a + b over sets A, B inside [1, N]."""

from .arith import primorial, sieve_primes
from .errors import (
    CapacityError,
    DescriptorParseError,
    DomainError,
    ExactOverflowError,
    PreconditionError,
    RangeError,
    SumsetLabError,
)
from .sumsets import IntSet, bound_report, prime_pair_count, rep_spectrum, set_from_spec

__all__ = [
    "CapacityError",
    "DescriptorParseError",
    "DomainError",
    "ExactOverflowError",
    "IntSet",
    "PreconditionError",
    "RangeError",
    "SumsetLabError",
    "bound_report",
    "prime_pair_count",
    "primorial",
    "rep_spectrum",
    "set_from_spec",
    "sieve_primes",
]
