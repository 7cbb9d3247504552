"""Residues modulo U = prod_{p <= R} p: projections, the well-distributed
splitting, pair counts T_J(X, Y) in Z/UZ and the bounds on them.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_int, check_real
from .arith import checked_product, primes_up_to, von_mangoldt_table
from .errors import DomainError, PreconditionError
from .sumsets import IntSet, fourier_reduced, prime_pair_count, rep_spectrum

R_FLOOR = 16.0


@dataclass(frozen=True)
class LocalParams:
    r: float
    u: int
    m_r: float
    q: float
    primes: tuple = field(repr=False)

    @property
    def phi_u(self):
        return checked_product(p - 1 for p in self.primes)

    def j_large(self):
        """Primes p with Q^2 < p <= R."""
        return tuple(p for p in self.primes if p > self.q**2)


def local_params(r, allow_small=False):
    """U, M_R = (R log R / log log R)^2 and Q = log R log log R.

    R must be at least 16 unless ``allow_small`` is set; small R (down to 2)
    is useful for exercising identities at tiny moduli such as U = 30, and
    then M_R and Q are NaN whenever log log R <= 0.
    """
    r = check_real(r, "r")
    floor = 2.0 if allow_small else R_FLOOR
    if r < floor:
        raise DomainError(f"R must be >= {floor:g}, got {r:g}")
    primes = tuple(primes_up_to(math.floor(r)))
    u = checked_product(primes)
    loglog = math.log(math.log(r))
    if loglog > 0:
        m_r = (r * math.log(r) / loglog) ** 2
        q = math.log(r) * loglog
    else:
        m_r = q = math.nan
    return LocalParams(r, u, m_r, q, primes)


def local_params_for_modulus(u):
    """Parameters whose U equals the given squarefree primorial ``u``."""
    u = check_int(u, "u", minimum=2)
    r = 2
    while checked_product(primes_up_to(r)) < u:
        r += 1
    params = local_params(r, allow_small=True)
    if params.u != u:
        raise DomainError(f"{u} is not a primorial")
    return params


# -- projection and splitting --------------------------------------------------


def _residues(values, u):
    values = np.asarray(values)
    if u <= np.iinfo(np.int64).max:
        return values.astype(np.int64) % np.int64(u)
    if values.size and int(values.max()) < u and int(values.min()) >= 0:
        return values.astype(np.int64)
    return np.array([int(v) % u for v in values.tolist()], dtype=object)


@dataclass(frozen=True, eq=False)
class ResidueProfile:
    """Multiplicities m(a) of a set's projection to Z/UZ."""

    u: int
    residues: np.ndarray
    counts: np.ndarray
    threshold: float

    @property
    def mult(self):
        return dict(zip(self.residues.tolist(), self.counts.tolist()))

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def light(self):
        """Classes with m(a) <= threshold (C_1 / D_1)."""
        return self.residues[self.counts <= self.threshold]

    @property
    def heavy(self):
        """Classes with m(a) > threshold (C_2 / D_2)."""
        return self.residues[self.counts > self.threshold]


def project(S, params, card_ref):
    """Residue multiplicities of S mod U; threshold = card_ref * M_R / U."""
    residues, counts = np.unique(_residues(S.members, params.u), return_counts=True)
    threshold = card_ref * params.m_r / params.u
    return ResidueProfile(params.u, residues, counts, threshold)


def root8_floor(n):
    """Largest k with k**8 <= n."""
    k = math.isqrt(math.isqrt(math.isqrt(n)))
    while (k + 1) ** 8 <= n:
        k += 1
    while k**8 > n:
        k -= 1
    return k


@dataclass(frozen=True, eq=False)
class SplitResult:
    a1: IntSet
    a2: IntSet
    a3: IntSet
    a4: IntSet
    b1: IntSet
    b2: IntSet
    params: LocalParams
    profile_a2: ResidueProfile
    profile_b: ResidueProfile
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    u_below_root8: bool

    @property
    def d1(self):
        return self.profile_a2.threshold

    @property
    def d2(self):
        return self.profile_b.threshold


def _split_by_classes(S, heavy, u):
    mask = np.zeros(S.n_max + 1, dtype=bool)
    if len(heavy):
        members = S.members
        hit = np.isin(_residues(members, u), heavy)
        mask[members[hit]] = True
    return S.restrict(~mask), S.restrict(mask)


def _max_class(S, u):
    if S.card == 0:
        return 0
    return int(np.unique(_residues(S.members, u), return_counts=True)[1].max())


def split_well_distributed(A, B, params):
    """A = A1 + A3 + A4 and B = B1 + B2 with A3, B1 well distributed mod U.

    A1 = A cap [1, floor(N^(1/8))]; classes of A2 = A minus A1 whose size
    exceeds |A2| M_R / U go to A4, likewise for B with |B| M_R / U.
    """
    if A.n_max != B.n_max:
        raise DomainError("ambient sizes differ")
    n = A.n_max
    cut = root8_floor(n)
    low = np.zeros(n + 1, dtype=bool)
    low[: cut + 1] = True
    a1, a2 = A.restrict(low), A.restrict(~low)
    prof_a = project(a2, params, a2.card)
    prof_b = project(B, params, B.card)
    a3, a4 = _split_by_classes(a2, prof_a.heavy, params.u)
    b1, b2 = _split_by_classes(B, prof_b.heavy, params.u)

    bound_heavy = params.u / params.m_r
    assert prof_a.heavy.size <= bound_heavy and prof_b.heavy.size <= bound_heavy
    cond_i = a3.card >= 2 * prof_a.threshold and b1.card >= 2 * prof_b.threshold
    cond_ii = _max_class(a3, params.u) <= prof_a.threshold and _max_class(b1, params.u) <= prof_b.threshold
    cond_iii = a3.card == 0 or int(a3.members.min()) ** 8 > n
    assert cond_ii and cond_iii
    return SplitResult(
        a1, a2, a3, a4, b1, b2, params, prof_a, prof_b,
        cond_i, cond_ii, cond_iii, params.u**8 <= n,
    )


def partition_counts(split, A, B, sieve):
    """Prime-pair counts on each piece together with the two partition identities."""
    P = lambda X, Y: prime_pair_count(X, Y, sieve)  # noqa: E731
    counts = {
        "A,B": P(A, B),
        "A1,B": P(split.a1, B),
        "A2,B": P(split.a2, B),
        "A3,B1": P(split.a3, split.b1),
        "A3,B2": P(split.a3, split.b2),
        "A4,B1": P(split.a4, split.b1),
        "A4,B2": P(split.a4, split.b2),
    }
    first = counts["A,B"] == counts["A1,B"] + counts["A2,B"]
    second = counts["A2,B"] == (
        counts["A3,B1"] + counts["A3,B2"] + counts["A4,B1"] + counts["A4,B2"]
    )
    sets_ok = (
        np.array_equal(split.a1.bits | split.a2.bits, A.bits)
        and not np.any(split.a1.bits & split.a2.bits)
        and np.array_equal(split.a3.bits | split.a4.bits, split.a2.bits)
        and not np.any(split.a3.bits & split.a4.bits)
        and np.array_equal(split.b1.bits | split.b2.bits, B.bits)
        and not np.any(split.b1.bits & split.b2.bits)
    )
    return counts, first and second and sets_ok


# -- T_J(X, Y) -------------------------------------------------------------------


def residue_set(values, u):
    """Distinct residues mod u as a sorted array."""
    if not isinstance(values, np.ndarray):
        values = np.array(sorted(int(v) for v in values))
    return np.unique(_residues(values, u))


def _check_j(J, params):
    J = tuple(sorted(set(int(p) for p in J)))
    for p in J:
        if p not in params.primes:
            raise DomainError(f"{p} is not a prime factor of U={params.u}")
    return J


def _t_count_naive(X, Y, J):
    total = 0
    ys = [int(y) for y in Y]
    for x in X.tolist():
        x = int(x)
        total += sum(1 for y in ys if all((x + y) % p for p in J))
    return total


def _match_count(kx, ky):
    keys_x, cx = np.unique(kx, return_counts=True)
    keys_y, cy = np.unique(ky, return_counts=True)
    common, ix, iy = np.intersect1d(keys_x, keys_y, assume_unique=True, return_indices=True)
    return int(np.dot(cx[ix], cy[iy])), common


def _t_count_crt(X, Y, J):
    # Inclusion-exclusion over D subset of J of #{(x, y) : x + y = 0 mod p, p in D}.
    # Each residue is seen through its components mod p; a pair matches on D
    # iff the component keys agree, with keys recompressed at every step.
    if not J:
        return len(X) * len(Y)
    comp_x = [(X % p).astype(np.int64) for p in J]
    comp_y = [(-Y % p).astype(np.int64) for p in J]

    total = len(X) * len(Y)

    def descend(start, sign, kx, ky, ix, iy):
        nonlocal total
        for j in range(start, len(J)):
            p = J[j]
            nx = kx * p + comp_x[j][ix]
            ny = ky * p + comp_y[j][iy]
            count, common = _match_count(nx, ny)
            if count == 0:
                continue
            total += -sign * count
            keep_x = np.isin(nx, common)
            keep_y = np.isin(ny, common)
            # recompress keys to a dense range so they never overflow
            _, inv = np.unique(np.concatenate([nx[keep_x], ny[keep_y]]), return_inverse=True)
            nkx = inv[: keep_x.sum()].astype(np.int64)
            nky = inv[keep_x.sum():].astype(np.int64)
            descend(j + 1, -sign, nkx, nky, ix[keep_x], iy[keep_y])

    descend(0, 1, np.zeros(len(X), dtype=np.int64), np.zeros(len(Y), dtype=np.int64),
            np.arange(len(X)), np.arange(len(Y)))
    return total


def t_count(X, Y, J, params, engine="crt"):
    """#{(x, y) in X x Y : x + y != 0 mod p for every p in J}."""
    J = _check_j(J, params)
    X = residue_set(X, params.u)
    Y = residue_set(Y, params.u)
    if engine == "crt":
        return _t_count_crt(X, Y, J)
    if engine == "naive":
        return _t_count_naive(X, Y, J)
    raise DomainError(f"unknown engine {engine!r}")


@dataclass(frozen=True)
class TBound:
    count: int
    bound: float
    holds: bool


def t_bound_check(X, Y, J, t, params):
    """T_J(X, Y) against |X||Y| exp(-sum 1/p) exp(L(X,Y)/t + t w(J))."""
    J = _check_j(J, params)
    t = check_int(t, "t", minimum=1)
    if J and t * t > min(J):
        raise DomainError(f"t={t} exceeds sqrt(min J) = {math.sqrt(min(J)):.4g}")
    X = residue_set(X, params.u)
    Y = residue_set(Y, params.u)
    if len(X) == 0 or len(Y) == 0:
        raise DomainError("X and Y must be nonempty")
    count = _t_count_crt(X, Y, J)
    size = len(X) * len(Y)
    spread = 2 * math.log(params.u) - math.log(len(X)) - math.log(len(Y))
    w = sum(1 / p**2 for p in J)
    bound = size * math.exp(-sum(1 / p for p in J)) * math.exp(spread / t + t * w)
    return TBound(count, bound, count <= bound * (1 + 1e-9))


@dataclass(frozen=True)
class TInvertible:
    count: int
    bound: float
    holds: bool
    hypothesis_ok: bool

    @property
    def margin(self):
        return self.bound / self.count if self.count else math.inf


def t_invertible_check(X, Y, params):
    """T(X, Y) against phi(P)/P |X||Y| exp(36 / log log R), P = prod_{Q^2 < p <= R} p.

    The size hypothesis |X|, |Y| >= U/M_R is reported, not enforced.
    """
    X = residue_set(X, params.u)
    Y = residue_set(Y, params.u)
    count = _t_count_crt(X, Y, params.primes)
    density = math.prod(1 - 1 / p for p in params.j_large())
    bound = density * len(X) * len(Y) * math.exp(36 / math.log(math.log(params.r)))
    floor = params.u / params.m_r
    hypothesis_ok = len(X) >= floor and len(Y) >= floor
    return TInvertible(count, bound, count <= bound * (1 + 1e-9), hypothesis_ok)


# -- sums coprime to U ---------------------------------------------------------------


def _squarefree_divisors(primes):
    divisors = [(1, 1, 1)]  # (q, mu(q), phi(q))
    for p in primes:
        divisors += [(q * p, -m, f * (p - 1)) for q, m, f in divisors]
    return sorted(divisors)


@dataclass(frozen=True)
class TUIdentity:
    fourier_side: float
    count_side: float
    rel_err: float
    imag_rel: float

    @property
    def ok(self):
        return self.rel_err <= 1e-6 and self.imag_rel <= 1e-6


def tu_identity_check(A3, B1, params):
    """sum_{q | U} mu(q)/phi(q) sum*_a hat A3(a/q) hat B1(a/q) against
    (U/phi(U)) #{(a, b) : gcd(a + b, U) = 1}."""
    if A3.card == 0 or B1.card == 0:
        raise DomainError("sets must be nonempty")
    fourier = 0j
    for q, mu, phi in _squarefree_divisors(params.primes):
        _, fa = fourier_reduced(A3, q)
        _, fb = fourier_reduced(B1, q)
        fourier += mu / phi * complex(np.sum(fa * fb))
    spectrum = rep_spectrum(A3, B1, "naive")
    n = np.arange(spectrum.r.size)
    coprime = np.ones(n.size, dtype=bool)
    for p in params.primes:
        coprime &= n % p != 0
    pairs = int(spectrum.r[coprime].sum())
    count_side = params.u / params.phi_u * pairs
    scale = max(1.0, abs(count_side))
    return TUIdentity(fourier.real, count_side, abs(fourier.real - count_side) / scale, abs(fourier.imag) / scale)


@dataclass(frozen=True)
class DenBound:
    lhs: float
    rhs: float
    holds: bool


def denbound_check(A3, B1, sieve, n_ref):
    """P_{N;A3,B1} log N <= 8 sum_{a, b} Lambda(a + b), given every a > N^(1/8)."""
    n_ref = check_int(n_ref, "n_ref", minimum=2)
    if A3.card and int(A3.members.min()) ** 8 <= n_ref:
        raise PreconditionError("every element of A3 must exceed n_ref^(1/8)")
    spectrum = rep_spectrum(A3, B1)
    lam = von_mangoldt_table(2 * A3.n_max)
    lhs = prime_pair_count(A3, B1, sieve, spectrum=spectrum) * math.log(n_ref)
    rhs = 8 * float(np.dot(spectrum.r.astype(np.float64), lam))
    return DenBound(lhs, rhs, lhs <= rhs * (1 + 1e-12))
