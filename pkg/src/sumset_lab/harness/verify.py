"""The fixed-seed verification suite behind ``sumset-lab verify``.

Each check family builds its own seeded inputs, so results do not depend on
which families run or in which order the worker threads finish.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import analytic, arith, localring, optimize, sumsets
from ..sumsets import IntSet

TOL = 1e-6
THREADS_ENV = "SUMSET_LAB_THREADS"


@dataclass(frozen=True)
class CheckResult:
    family: str
    check: str
    passed: bool
    instances: int
    residual: float
    detail: dict = field(default_factory=dict)


def thread_cap():
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def random_set(n_max, rng, density=None):
    """Nonempty random subset of [1, n_max]."""
    d = rng.uniform(0.05, 0.9) if density is None else density
    bits = np.zeros(n_max + 1, dtype=bool)
    while True:
        bits[1:] = rng.random(n_max) < d
        if bits.any():
            return IntSet(n_max, bits.copy())


def _rng(family, seed):
    return np.random.default_rng([seed, sum(map(ord, family))])


# -- individual families -----------------------------------------------------------


def _large_sieve(seed, **_):
    rng = _rng("large-sieve", seed)
    worst, fails, count = 0.0, 0, 200
    for _ in range(count):
        n = int(rng.integers(1, 257))
        q = int(rng.integers(1, 17))
        coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
        res = analytic.large_sieve_check(coeffs, q)
        worst = max(worst, res.lhs / res.rhs)
        fails += not res.holds
    return CheckResult("large-sieve", "large_sieve_check", fails == 0, count, worst)


def _brun_titchmarsh(seed, bt_x_max=20_000, **_):
    sieve = arith.sieve_primes(bt_x_max)
    bad, checked = arith.brun_titchmarsh_sweep(sieve, bt_x_max)
    return CheckResult(
        "brun-titchmarsh", "brun_titchmarsh_sweep", bad == 0, checked, float(bad), {"x_max": bt_x_max}
    )


def _omega(seed, **_):
    bad, checked = analytic.omega_crude_sweep(1000, 1000)
    return CheckResult("omega", "omega_crude_sweep", bad == 0, checked, float(bad))


def _lambda_split(seed, **_):
    n_cap = 20_000
    tables = arith.multiplicative_tables(n_cap)
    lam = analytic.von_mangoldt(n_cap)
    worst = 0.0
    for l_cap in (1, 10, 100, 1000):
        split = analytic.lambda_split(n_cap, l_cap, tables)
        worst = max(worst, float(np.max(np.abs(split.total[1:] - lam[1:]))))
    # Chebyshev psi(x) against log lcm(1..x)
    psi = np.cumsum(lam)
    rel = 0.0
    lcm = 1
    for x in range(1, 1001):
        lcm = math.lcm(lcm, x)
        exact = math.log(lcm)
        rel = max(rel, abs(psi[x] - exact) / max(1.0, exact))
    return CheckResult(
        "lambda-split", "lambda_split", bool(worst <= 1e-9 and rel <= TOL), n_cap, worst,
        {"psi_rel_err": float(rel)},
    )


def _multiples(seed, **_):
    rng = _rng("multiples", seed)
    worst, ok, count = 0.0, True, 10
    for _ in range(count):
        n = int(rng.integers(8, 257))
        A, B = random_set(n, rng), random_set(n, rng)
        spec = sumsets.rep_spectrum(A, B)
        for d in range(1, 13):
            res = analytic.multiples_identity_check(spec, d, A, B)
            worst = max(worst, abs(res.direct - res.fourier) / max(1, res.direct))
            ok &= res.match
    return CheckResult("multiples", "multiples_identity_check", ok, count * 12, worst)


def _sharp(seed, inject_fault=False, **_):
    rng = _rng("sharp", seed)
    worst, ok, count = 0.0, True, 10
    for i in range(count):
        n = int(rng.integers(8, 257))
        A, B = random_set(n, rng), random_set(n, rng)
        spectrum = None
        if inject_fault and i == 0:
            good = sumsets.rep_spectrum(A, B, "naive")
            r = good.r.copy()
            r[2] += 1
            spectrum = sumsets.RepSpectrum(good.n_max, r, "fault")
        res = analytic.sharp_identity_check(A, B, float(rng.integers(2, 60)), spectrum=spectrum)
        worst = max(worst, res.rel_err, res.imag_rel)
        ok &= res.ok
    return CheckResult("sharp", "sharp_identity_check", ok, count, worst)


def _tu(seed, **_):
    rng = _rng("tu", seed)
    params = localring.local_params_for_modulus(30)
    worst, ok, count = 0.0, True, 10
    for _ in range(count):
        n = int(rng.integers(8, 257))
        res = localring.tu_identity_check(random_set(n, rng), random_set(n, rng), params)
        worst = max(worst, res.rel_err, res.imag_rel)
        ok &= res.ok
    return CheckResult("tu", "tu_identity_check", ok, count, worst)


def _t_bound(seed, **_):
    rng = _rng("t-bound", seed)
    big = localring.local_params(16)
    cases = []
    for _ in range(4):
        X = rng.choice(big.u, big.u // 8, replace=False)
        Y = rng.choice(big.u, big.u // 8, replace=False)
        cases.append((X, Y, big.j_large(), 1, big))
    small = localring.local_params_for_modulus(2310)
    for _ in range(20):
        X = rng.choice(small.u, int(rng.integers(1, 200)), replace=False)
        Y = rng.choice(small.u, int(rng.integers(1, 200)), replace=False)
        J = tuple(p for p in small.primes if rng.random() < 0.5)
        t_max = math.isqrt(min(J)) if J else 3
        cases.append((X, Y, J, int(rng.integers(1, t_max + 1)), small))
    worst, ok = 0.0, True
    for X, Y, J, t, params in cases:
        res = localring.t_bound_check(X, Y, J, t, params)
        worst = max(worst, res.count / res.bound)
        ok &= res.holds
    inv = localring.t_invertible_check(
        rng.choice(big.u, big.u // 4, replace=False), rng.choice(big.u, big.u // 4, replace=False), big
    )
    return CheckResult(
        "t-bound", "t_bound_check", ok, len(cases), worst,
        {"prop_margin": inv.margin, "prop_holds": inv.holds, "prop_hypothesis_ok": inv.hypothesis_ok},
    )


def _t_count(seed, **_):
    rng = _rng("t-count", seed)
    mismatches, count = 0, 30
    for _ in range(count):
        params = localring.local_params_for_modulus(int(rng.choice([6, 30, 210])))
        X = rng.choice(params.u, int(rng.integers(1, min(50, params.u) + 1)), replace=False)
        Y = rng.choice(params.u, int(rng.integers(1, min(50, params.u) + 1)), replace=False)
        J = tuple(p for p in params.primes if rng.random() < 0.6)
        fast = localring.t_count(X, Y, J, params)
        slow = localring.t_count(X, Y, J, params, engine="naive")
        mismatches += fast != slow
    return CheckResult("t-count", "t_count", mismatches == 0, count, float(mismatches))


def _optimizer(seed, **_):
    rng = _rng("optimizer", seed)
    structure_ok, worst, count = True, -math.inf, 20
    for _ in range(count):
        m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        k1 = optimize.CappedSimplex(m, float(rng.uniform(0.5, m)), 1.0)
        k2 = optimize.CappedSimplex(n, float(rng.uniform(0.5, n)), 1.0)
        for k in (k1, k2):
            structure_ok &= all(vertex_structure_ok(v, k) for v in optimize.vertex_iter(k))
        problem = optimize.BilinearProblem(rng.normal(size=(m, n)), k1, k2)
        _, _, best = optimize.maximize_bilinear(problem)
        gap = optimize.dominance_check(problem, 2000, int(rng.integers(1 << 31)))
        worst = max(worst, gap / max(1.0, abs(best)))
    return CheckResult(
        "optimizer", "maximize_bilinear", bool(structure_ok and worst <= 1e-9), count, worst,
        {"vertex_structure": bool(structure_ok)},
    )


def vertex_structure_ok(v, k, tol=1e-9):
    """At most one coordinate strictly between 0 and cap; support size l with
    (l - 1) cap < total <= l cap."""
    if not k.contains(v):
        return False
    scale = k.cap * tol
    frac = np.count_nonzero((v > scale) & (v < k.cap - scale))
    l = np.count_nonzero(v > scale)
    return frac <= 1 and l * k.cap >= k.total * (1 - tol) and (l - 1) * k.cap < k.total * (1 + tol)


def _split_inputs(seed, count):
    rng = _rng("partition", seed)
    params = localring.local_params(16)
    n = 4096
    for _ in range(count):
        if rng.random() < 0.3:
            # one heavy class so A4 is nonempty
            base = random_set(n, rng, 0.05)
            bits = base.bits.copy()
            bits[7::params.u] = True
            bits[1 + params.u :: 2] = True
            bits[0] = False
            A = IntSet(n, bits)
        else:
            A = random_set(n, rng)
        yield A, random_set(n, rng), params


def _partition(seed, **_):
    sieve = arith.sieve_primes(2 * 4096)
    ok, count = True, 0
    for A, B, params in _split_inputs(seed, 8):
        split = localring.split_well_distributed(A, B, params)
        _, good = localring.partition_counts(split, A, B, sieve)
        ok &= good
        count += 1
    return CheckResult("partition", "partition_counts", bool(ok), count, 0.0 if ok else 1.0)


def _denbound(seed, **_):
    sieve = arith.sieve_primes(2 * 4096)
    ok, worst, count = True, 0.0, 0
    for A, B, params in _split_inputs(seed, 8):
        split = localring.split_well_distributed(A, B, params)
        if split.a3.card == 0 or split.b1.card == 0:
            continue
        res = localring.denbound_check(split.a3, split.b1, sieve, A.n_max)
        ok &= res.holds
        worst = max(worst, res.lhs / res.rhs if res.rhs else 0.0)
        count += 1
    return CheckResult("denbound", "denbound_check", bool(ok), count, worst)


FAMILIES = {
    "large-sieve": _large_sieve,
    "brun-titchmarsh": _brun_titchmarsh,
    "omega": _omega,
    "lambda-split": _lambda_split,
    "multiples": _multiples,
    "sharp": _sharp,
    "tu": _tu,
    "t-bound": _t_bound,
    "t-count": _t_count,
    "optimizer": _optimizer,
    "partition": _partition,
    "denbound": _denbound,
}


def run_suite(families=None, seed=0, inject_fault=False, threads=None, **options):
    """Run the selected families concurrently; results come back in registry order."""
    names = list(FAMILIES) if not families else list(families)
    unknown = [n for n in names if n not in FAMILIES]
    if unknown:
        raise KeyError(f"unknown check family: {', '.join(unknown)}")
    workers = min(threads or thread_cap(), len(names))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = {
            name: pool.submit(FAMILIES[name], seed, inject_fault=inject_fault, **options)
            for name in names
        }
        return [futures[name].result() for name in FAMILIES if name in futures]
