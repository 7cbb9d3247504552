"""Sieve weights, the truncated von Mangoldt split and exponential-sum checks."""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_real
from .arith import multiplicative_tables, von_mangoldt_table
from .errors import RangeError
from .sumsets import fourier_reduced, rep_spectrum


def _tables_for(limit, tables):
    if tables is None:
        return multiplicative_tables(max(limit, 1))
    if tables.limit < limit:
        raise RangeError(f"multiplicative tables cover {tables.limit}, need {limit}")
    return tables


def _kahan_sum(values):
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


# -- omega(q, L) ---------------------------------------------------------------


def omega(q, l_cap, tables=None):
    """omega(q, L) = -sum_{l <= L, q | l} mu(l) log(l) / l.

    Summed in increasing l with Kahan compensation.
    """
    q = check_int(q, "q", minimum=1)
    l_cap = check_real(l_cap, "l_cap", minimum=1)
    top = math.floor(l_cap)
    tables = _tables_for(top, tables)
    if q > top:
        return 0.0
    mu = tables.mu
    terms = (-int(mu[l]) * math.log(l) / l for l in range(q, top + 1, q) if mu[l])
    return _kahan_sum(terms)


@dataclass(frozen=True)
class OmegaTable:
    l_cap: float
    values: dict

    def __getitem__(self, q):
        return self.values.get(q, 0.0)


def omega_table(l_cap, tables=None):
    """omega(q, L) for every 1 <= q <= L (zero beyond)."""
    top = math.floor(check_real(l_cap, "l_cap", minimum=1))
    tables = _tables_for(top, tables)
    return OmegaTable(l_cap, {q: omega(q, l_cap, tables) for q in range(1, top + 1)})


@dataclass(frozen=True)
class OmegaEstimates:
    omega: float
    main: float
    err_bound_scale: float
    crude_bound: float
    crude_ok: bool


def omega_estimates_check(q, l_cap, alpha=100.0, tables=None):
    """Compare omega(q, L) with mu(q)/phi(q) and with (log 2L)^2 / q.

    ``err_bound_scale`` is |omega - mu(q)/phi(q)| divided by
    2^nu(q) log(2q) / (q (log L)^alpha); it stays bounded as L grows when
    q <= sqrt(L). Only reported, never asserted.
    """
    q = check_int(q, "q", minimum=1)
    l_cap = check_real(l_cap, "l_cap", minimum=1)
    tables = _tables_for(max(q, math.floor(l_cap)), tables)
    w = omega(q, l_cap, tables)
    main = int(tables.mu[q]) / int(tables.phi[q])
    scale = 2 ** int(tables.nu[q]) * math.log(2 * q) / q
    err = abs(w - main)
    try:
        err_scale = err * math.log(l_cap) ** alpha / scale
    except OverflowError:
        err_scale = math.inf
    crude = math.log(2 * l_cap) ** 2 / q
    return OmegaEstimates(w, main, err_scale, crude, abs(w) <= crude)


def omega_crude_sweep(q_max, l_max):
    """Count (q, L) with |omega(q, L)| > (log 2L)^2 / q over integer grids.

    omega(q, .) is constant on [l, l + 1) while the bound increases, so
    integer L covers every real L in [1, l_max + 1).
    Returns (violations, checked).
    """
    q_max = check_int(q_max, "q_max", minimum=1)
    l_max = check_int(l_max, "l_max", minimum=1)
    tables = multiplicative_tables(max(q_max, l_max))
    ls = np.arange(1, l_max + 1)
    mu = tables.mu[: l_max + 1].astype(np.float64)
    term = np.zeros(l_max + 1)
    term[1:] = -mu[1:] * np.log(ls) / ls
    bound_by_l = np.log(2.0 * ls) ** 2
    violations = 0
    for q in range(1, q_max + 1):
        # partial sums at L = 1..l_max: terms only at multiples of q
        at_mult = np.zeros(l_max + 1)
        at_mult[q::q] = term[q::q]
        w = np.cumsum(at_mult)[1:]
        violations += int(np.count_nonzero(np.abs(w) > bound_by_l / q))
    return violations, q_max * l_max


# -- the Lambda split ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LambdaSplit:
    """Lambda^sharp and Lambda^flat on 0..n_cap (index 0 unused)."""

    n_cap: int
    l_cap: float
    sharp: np.ndarray
    flat: np.ndarray

    @property
    def total(self):
        return self.sharp + self.flat


def lambda_split(n_cap, l_cap, tables=None):
    """Split -sum_{d | n} mu(d) log d at d <= L and d > L.

    Each squarefree d adds -mu(d) log d to all its multiples.
    """
    n_cap = check_int(n_cap, "n_cap", minimum=2)
    l_cap = check_real(l_cap, "l_cap", minimum=0)
    tables = _tables_for(n_cap, tables)
    sharp = np.zeros(n_cap + 1)
    flat = np.zeros(n_cap + 1)
    mu = tables.mu
    for d in np.flatnonzero(mu[2 : n_cap + 1]).tolist():
        d += 2
        target = sharp if d <= l_cap else flat
        target[d::d] -= int(mu[d]) * math.log(d)
    sharp.flags.writeable = False
    flat.flags.writeable = False
    return LambdaSplit(n_cap, l_cap, sharp, flat)


def von_mangoldt(n_cap):
    return von_mangoldt_table(n_cap)


def flat_exp_sum(split, t):
    """sum_{1 <= n <= n_cap} Lambda^flat(n) e(n t)."""
    t = check_real(t, "t")
    n = np.arange(1, split.n_cap + 1)
    phase = np.mod(n * t, 1.0)
    return complex(np.sum(split.flat[1:] * np.exp(2j * np.pi * phase)))


# -- large sieve -----------------------------------------------------------------


@dataclass(frozen=True)
class LargeSieveResult:
    lhs: float
    rhs: float
    holds: bool


def farey_sums(coeffs, q_cap):
    """S(a/q) = sum_n a_n e(n a / q) for 1 <= q <= Q and reduced a, as {q: array}."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = np.arange(1, coeffs.size + 1)
    out = {}
    for q in range(1, math.floor(q_cap) + 1):
        residues = np.zeros(q, dtype=np.complex128)
        np.add.at(residues, n % q, coeffs)
        a = np.array([x for x in range(q) if math.gcd(x, q) == 1])
        phase = np.outer(a, np.arange(q)) % q
        out[q] = np.exp(2j * np.pi * phase / q) @ residues
    return out


def large_sieve_check(coeffs, q_cap):
    """Both sides of sum_{q<=Q} sum*_a |S(a/q)|^2 <= (N + Q^2) sum |a_n|^2."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.ndim != 1 or coeffs.size < 1:
        raise RangeError("coefficients must be a nonempty vector")
    q_cap = check_real(q_cap, "q_cap", minimum=1)
    lhs = float(sum(np.sum(np.abs(s) ** 2) for s in farey_sums(coeffs, q_cap).values()))
    rhs = float((coeffs.size + q_cap**2) * np.sum(np.abs(coeffs) ** 2))
    return LargeSieveResult(lhs, rhs, lhs <= rhs * (1 + 1e-9))


# -- exact Fourier identities ----------------------------------------------------


def _pair_sum_reduced(A, B, q):
    """sum*_{a mod q} hat A(a/q) hat B(a/q)."""
    _, fa = fourier_reduced(A, q)
    _, fb = fourier_reduced(B, q)
    return complex(np.sum(fa * fb))


@dataclass(frozen=True)
class MultiplesIdentity:
    direct: int
    fourier: complex
    match: bool


def multiples_identity_check(spectrum, d, A, B):
    """sum_{d | n} r(n) against (1/d) sum_{q | d} sum*_a hat A(a/q) hat B(a/q)."""
    d = check_int(d, "d", minimum=1)
    direct = int(spectrum.r[::d].sum())
    fourier = sum(_pair_sum_reduced(A, B, q) for q in range(1, d + 1) if d % q == 0) / d
    match = abs(direct - fourier) <= 1e-6 * max(1, direct)
    return MultiplesIdentity(direct, fourier, match)


@dataclass(frozen=True)
class SharpIdentity:
    lhs: float
    rhs: float
    rel_err: float
    imag_rel: float

    @property
    def ok(self):
        return self.rel_err <= 1e-6 and self.imag_rel <= 1e-6


def sharp_identity_check(A, B, l_cap, tables=None, spectrum=None):
    """sum_n r(n) Lambda^sharp(n) against sum_{q <= L} omega(q, L) sum*_a hat A hat B."""
    l_cap = check_real(l_cap, "l_cap", minimum=1)
    n_cap = 2 * A.n_max
    tables = _tables_for(max(n_cap, math.floor(l_cap)), tables)
    if spectrum is None:
        spectrum = rep_spectrum(A, B, "naive")
    split = lambda_split(n_cap, l_cap, tables)
    lhs = float(np.dot(spectrum.r.astype(np.float64), split.sharp))
    rhs_c = 0j
    for q in range(1, math.floor(l_cap) + 1):
        w = omega(q, l_cap, tables)
        if w:
            rhs_c += w * _pair_sum_reduced(A, B, q)
    scale = max(1.0, abs(lhs))
    return SharpIdentity(lhs, rhs_c.real, abs(lhs - rhs_c.real) / scale, abs(rhs_c.imag) / scale)
