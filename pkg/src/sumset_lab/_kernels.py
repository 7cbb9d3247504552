"""Compiled inner loops (numba). Pure functions over numpy arrays."""

import math

import numba
import numpy as np


@numba.njit(cache=True)
def _bt_value(x, q, phi_q, const):
    return const * x / (phi_q * math.log(x / q))


@numba.njit(cache=True)
def _bt_stretch_bad(k, lo, hi, q, phi_q, x_star, f_min, const):
    # The bound is unimodal in x with minimum near x_star = e*q.
    if lo < q + 1:
        lo = q + 1
    if lo > hi:
        return -1
    if k <= f_min:
        return 0
    if lo >= x_star:
        worst = _bt_value(lo, q, phi_q, const)
    elif hi <= x_star:
        worst = _bt_value(hi, q, phi_q, const)
    else:
        worst = f_min
    return 1 if k > worst * (1 + 1e-12) else 0


@numba.njit(cache=True)
def bt_sweep(primes, phi, x_max, const):
    """Violating and checked residue classes (q, a) for all 1 <= q < x_max."""
    bad_classes = 0
    classes = 0
    last = np.zeros(x_max + 1, dtype=np.int64)
    cnt = np.zeros(x_max + 1, dtype=np.int64)
    bad = np.zeros(x_max + 1, dtype=np.uint8)
    seen = np.zeros(x_max + 1, dtype=np.uint8)
    touched = np.zeros(primes.size, dtype=np.int64)
    for q in range(1, x_max):
        phi_q = float(phi[q])
        x_star = math.e * q
        c1 = max(math.floor(x_star), q + 1)
        if c1 >= x_max:
            f_min = _bt_value(x_max, q, phi_q, const)
        else:
            f_min = min(_bt_value(c1, q, phi_q, const), _bt_value(c1 + 1, q, phi_q, const))
        nt = 0
        for i in range(primes.size):
            p = primes[i]
            if p <= q and q % p == 0:
                continue
            r = np.uint32(p) % np.uint32(q)
            if cnt[r] > 0:
                s = _bt_stretch_bad(cnt[r], last[r], p - 1, q, phi_q, x_star, f_min, const)
                if s >= 0:
                    seen[r] = 1
                    if s == 1:
                        bad[r] = 1
            else:
                touched[nt] = r
                nt += 1
            cnt[r] += 1
            last[r] = p
        for j in range(nt):
            r = touched[j]
            s = _bt_stretch_bad(cnt[r], last[r], x_max, q, phi_q, x_star, f_min, const)
            if s >= 0:
                seen[r] = 1
                if s == 1:
                    bad[r] = 1
            classes += seen[r]
            bad_classes += bad[r]
            cnt[r] = 0
            seen[r] = 0
            bad[r] = 0
    return bad_classes, classes
