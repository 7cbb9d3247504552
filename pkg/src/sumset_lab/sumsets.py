"""Finite sets of integers in [1, N] and the sumset quantities built on them.

Sets are dense boolean vectors. The representation function

    r(n) = #{(a, b) in A x B : a + b = n}

is computed exactly, either by the plain double loop or by one big-integer
multiplication (Kronecker substitution backed by GMP).
"""

import math
from dataclasses import asdict, dataclass, field

import gmpy2
import numpy as np

from ._validation import check_int, check_real
from .arith import PrimeSieve, primorial
from .errors import DomainError, RangeError

ENGINES = ("naive", "convolution")
R_CONSTANT = 1000.0

# Slot width for Kronecker substitution; r(n) <= N < 2**32.
_SLOT_DTYPE = np.dtype("<u4")

# Phase-matrix entries per block in fourier_reduced.
_FOURIER_CHUNK = 1 << 22


@dataclass(frozen=True, eq=False)
class IntSet:
    """A subset of {1, ..., n_max} stored as a boolean vector indexed 0..n_max."""

    n_max: int
    bits: np.ndarray
    card: int = field(init=False)

    def __post_init__(self):
        if self.bits.shape != (self.n_max + 1,) or self.bits.dtype != bool:
            raise DomainError("bits must be a bool vector of length n_max + 1")
        if self.bits[0]:
            raise DomainError("0 is not an admissible member")
        self.bits.flags.writeable = False
        object.__setattr__(self, "card", int(np.count_nonzero(self.bits)))

    @classmethod
    def from_members(cls, members, n_max):
        n_max = check_int(n_max, "n_max", minimum=1)
        idx = np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() > n_max):
            raise DomainError(f"members must lie in [1, {n_max}]")
        bits = np.zeros(n_max + 1, dtype=bool)
        bits[idx] = True
        return cls(n_max, bits)

    @property
    def members(self):
        return np.flatnonzero(self.bits)

    def __len__(self):
        return self.card

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, x):
        return 1 <= x <= self.n_max and bool(self.bits[x])

    def __eq__(self, other):
        if not isinstance(other, IntSet):
            return NotImplemented
        return self.n_max == other.n_max and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.n_max, self.bits.tobytes()))

    def __repr__(self):
        return f"IntSet(n_max={self.n_max}, card={self.card})"

    def restrict(self, mask):
        """Sub-set keeping members where ``mask`` (length n_max + 1) is true."""
        return IntSet(self.n_max, self.bits & mask)

    def residue_counts(self, q):
        """m_c = #{x in S : x = c mod q} for c = 0..q-1."""
        return np.bincount(self.members % q, minlength=q)


# -- set descriptors ---------------------------------------------------------


@dataclass(frozen=True)
class ListSpec:
    values: tuple

    def __str__(self):
        return "list:" + ",".join(map(str, self.values))


@dataclass(frozen=True)
class ProgressionSpec:
    modulus: int
    residue: int

    def __str__(self):
        return f"ap:m={self.modulus},c={self.residue}"


@dataclass(frozen=True)
class RandomSpec:
    density: float

    def __str__(self):
        return f"rand:d={self.density!r}"


@dataclass(frozen=True)
class IntervalSpec:
    lo: int
    hi: int

    def __str__(self):
        return f"iv:{self.lo}..{self.hi}"


def set_from_spec(spec, n_max, seed=0):
    """Materialise a set descriptor over [1, n_max].

    ``spec`` is a descriptor object or its text form (``list:1,5,9``,
    ``ap:m=6,c=0``, ``rand:d=0.5``, ``iv:1..1000``). Random sets are drawn
    from a generator seeded only by ``seed``.
    """
    if isinstance(spec, str):
        from .harness.descriptors import parse_descriptor

        spec = parse_descriptor(spec)
    n_max = check_int(n_max, "n_max", minimum=1)
    xs = np.arange(n_max + 1)
    if isinstance(spec, ListSpec):
        out = IntSet.from_members(spec.values, n_max)
    elif isinstance(spec, ProgressionSpec):
        m = check_int(spec.modulus, "modulus", minimum=1)
        c = check_int(spec.residue, "residue", minimum=0)
        if c >= m:
            raise DomainError(f"residue c={c} must be < modulus m={m}")
        bits = xs % m == c
        bits[0] = False
        out = IntSet(n_max, bits)
    elif isinstance(spec, RandomSpec):
        d = check_real(spec.density, "density")
        if not 0 < d <= 1:
            raise DomainError(f"density must lie in (0, 1], got {d}")
        rng = np.random.default_rng(check_int(seed, "seed", minimum=0))
        bits = np.zeros(n_max + 1, dtype=bool)
        bits[1:] = rng.random(n_max) < d
        out = IntSet(n_max, bits)
    elif isinstance(spec, IntervalSpec):
        lo, hi = max(spec.lo, 1), min(spec.hi, n_max)
        bits = (xs >= lo) & (xs <= hi)
        out = IntSet(n_max, bits)
    else:
        raise DomainError(f"unknown set descriptor {spec!r}")
    if out.card == 0:
        raise DomainError(f"descriptor {spec} yields an empty set for N={n_max}")
    return out


def progression(n_max, modulus, residue):
    return set_from_spec(ProgressionSpec(modulus, residue), n_max)


def interval(n_max, lo, hi):
    return set_from_spec(IntervalSpec(lo, hi), n_max)


# -- representation function -------------------------------------------------


@dataclass(frozen=True, eq=False)
class RepSpectrum:
    """r(n) for 0 <= n <= 2 n_max; entries below 2 are always zero."""

    n_max: int
    r: np.ndarray
    engine: str

    def __post_init__(self):
        self.r.flags.writeable = False

    def __getitem__(self, n):
        if 0 <= n <= 2 * self.n_max:
            return int(self.r[n])
        return 0

    @property
    def total(self):
        return int(self.r.sum())


def _check_pair(A, B):
    if A.n_max != B.n_max:
        raise DomainError(f"ambient sizes differ: {A.n_max} != {B.n_max}")


def _spectrum_naive(A, B):
    r = np.zeros(2 * A.n_max + 1, dtype=np.int64)
    b = B.members
    for a in A.members.tolist():
        r[a + b] += 1
    return r


def _as_mpz(bits):
    slots = bits.astype(_SLOT_DTYPE)
    return gmpy2.mpz(int.from_bytes(slots.tobytes(), "little"))


def _spectrum_convolution(A, B):
    # Product of sum x^a and sum x^b evaluated at x = 2**32.
    if A.n_max >= 2**32:
        raise RangeError("n_max too large for 32-bit Kronecker slots")
    prod = _as_mpz(A.bits) * _as_mpz(B.bits)
    n_slots = 2 * A.n_max + 1
    raw = int(prod).to_bytes(n_slots * _SLOT_DTYPE.itemsize, "little")
    return np.frombuffer(raw, dtype=_SLOT_DTYPE).astype(np.int64)


def rep_spectrum(A, B, engine="convolution"):
    _check_pair(A, B)
    if engine == "naive":
        r = _spectrum_naive(A, B)
    elif engine == "convolution":
        r = _spectrum_convolution(A, B)
    else:
        raise DomainError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    return RepSpectrum(A.n_max, r, engine)


def prime_pair_count(A, B, sieve, engine="convolution", spectrum=None):
    """P_{N;A,B}: pairs (a, b) in A x B with a + b prime."""
    _check_pair(A, B)
    if not isinstance(sieve, PrimeSieve) or sieve.limit < 2 * A.n_max:
        raise RangeError(f"sieve must cover 2N = {2 * A.n_max}")
    if spectrum is None:
        spectrum = rep_spectrum(A, B, engine)
    return int(spectrum.r[sieve.is_prime[: 2 * A.n_max + 1]].sum())


def fourier_at_rational(S, a, q):
    """hat S(a/q) = sum_{x in S} e(a x / q)."""
    q = check_int(q, "q", minimum=1)
    counts = S.residue_counts(q)
    c = np.flatnonzero(counts)
    phase = (a % q) * c % q
    return complex(np.sum(counts[c] * np.exp(2j * np.pi * phase / q)))


def fourier_reduced(S, q):
    """hat S(a/q) for every reduced residue a mod q, in increasing a."""
    q = check_int(q, "q", minimum=1)
    a = np.array([x for x in range(q) if math.gcd(x, q) == 1], dtype=np.int64)
    counts = S.residue_counts(q)
    c = np.flatnonzero(counts)
    weights = counts[c].astype(np.float64)
    out = np.empty(a.size, dtype=np.complex128)
    step = max(1, _FOURIER_CHUNK // max(1, c.size))
    for lo in range(0, a.size, step):
        phase = np.outer(a[lo : lo + step], c) % q
        out[lo : lo + step] = np.exp(2j * np.pi * phase / q) @ weights
    return a, out


# -- bound report --------------------------------------------------------------


LOCAL_R_CAP = 40.0


@dataclass(frozen=True)
class BoundReport:
    n_max: int
    card_a: int
    card_b: int
    ratio_r: float
    r_local: float | None
    u: int | None
    m_r: float | None
    q: float | None
    p_exact: int
    brs_bound: float
    main_bound: float
    main_valid: bool
    dense: bool
    trivial_bound: float
    c_brs: float
    c_main: float
    c_trivial: float
    log_convention: str = "natural"

    @property
    def empirical_constants(self):
        return {"brs": self.c_brs, "main": self.c_main, "trivial": self.c_trivial}

    def to_dict(self):
        return asdict(self)


def ratio_r(n_max, card_a, card_b, constant=R_CONSTANT):
    """R = constant * N / sqrt(|A||B|)."""
    return constant * n_max / math.sqrt(card_a * card_b)


def _safe_div(num, den):
    return num / den if den else math.inf


def bound_report(A, B, sieve, *, r_override=None, r_cap=LOCAL_R_CAP, constant=R_CONSTANT, engine="convolution"):
    """Exact P_{N;A,B} next to each upper bound and the observed ratios.

    The local quantities (U, M_R, Q) use ``r_override`` when given, else
    min(R, r_cap), so U stays within the exact-integer cap.
    """
    from .localring import local_params

    _check_pair(A, B)
    if A.card == 0 or B.card == 0:
        raise DomainError("both sets must be nonempty")
    n = A.n_max
    if n < 2:
        raise DomainError("N must be >= 2 so that log N > 0")
    p_exact = prime_pair_count(A, B, sieve, engine)
    prod = A.card * B.card
    R = ratio_r(n, A.card, B.card, constant)
    log_n = math.log(n)
    brs = prod * R / log_n
    loglog_r = math.log(math.log(R)) if R > 1 else -math.inf
    main = prod * loglog_r / log_n
    dense = prod >= n * n / log_n**2
    main_valid = dense and R >= math.e**math.e
    trivial = min(A.card, B.card) * sieve.pi(2 * n)

    r_local = float(r_override) if r_override is not None else min(R, r_cap)
    try:
        lp = local_params(r_local)
        u, m_r, q = lp.u, lp.m_r, lp.q
    except DomainError:
        u = m_r = q = None
    return BoundReport(
        n_max=n,
        card_a=A.card,
        card_b=B.card,
        ratio_r=R,
        r_local=r_local,
        u=u,
        m_r=m_r,
        q=q,
        p_exact=p_exact,
        brs_bound=brs,
        main_bound=main,
        main_valid=main_valid,
        dense=dense,
        trivial_bound=float(trivial),
        c_brs=_safe_div(p_exact, brs),
        c_main=_safe_div(p_exact, main) if main > 0 else math.inf,
        c_trivial=_safe_div(p_exact, trivial),
    )


def primorial_pair(n_max, k):
    """A = multiples of m_k and B = 1 mod m_k inside [1, N]; returns (A, B, m_k)."""
    n_max = check_int(n_max, "N", minimum=1)
    m = primorial(k)
    if 4 * m > n_max:
        raise DomainError(f"need m_k <= N/4, got m_k={m}, N={n_max}")
    A = progression(n_max, m, 0)
    B = progression(n_max, m, 1 % m)
    return A, B, m


def extremal_ratio(p_exact, n_max, card_a, card_b, constant=R_CONSTANT):
    """rho = P log N / (|A||B| log log R)."""
    R = ratio_r(n_max, card_a, card_b, constant)
    return p_exact * math.log(n_max) / (card_a * card_b * math.log(math.log(R)))
