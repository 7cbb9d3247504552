"""Subcommand bodies, kept free of any terminal handling so they can be tested directly."""

import math

import numpy as np

from .. import analytic, arith, localring, sumsets
from .reports import RunConfig, derive_seed


def build_pair(config):
    A = sumsets.set_from_spec(config.a_spec, config.n_max, derive_seed(config.seed, "A"))
    B = sumsets.set_from_spec(config.b_spec, config.n_max, derive_seed(config.seed, "B"))
    return A, B


def count(config, engine="convolution"):
    A, B = build_pair(config)
    sieve = arith.sieve_primes(max(2, 2 * config.n_max))
    return sumsets.bound_report(A, B, sieve, r_override=config.r_override, engine=engine)


def extremal(n_max, k, engine="convolution"):
    """Exact P for the primorial pair, its ratio rho, and r(n) >= floor(n/m) spot checks."""
    A, B, m = sumsets.primorial_pair(n_max, k)
    sieve = arith.sieve_primes(2 * n_max)
    spectrum = sumsets.rep_spectrum(A, B, engine)
    p_exact = sumsets.prime_pair_count(A, B, sieve, spectrum=spectrum)
    R = sumsets.ratio_r(n_max, A.card, B.card)
    ns = np.arange(2 * m + 1, n_max + 1, m)
    slack = spectrum.r[ns] - ns // m
    return {
        "n_max": n_max,
        "k": k,
        "m_k": m,
        "card_a": A.card,
        "card_b": B.card,
        "ratio_r": R,
        "p_exact": p_exact,
        "rho": sumsets.extremal_ratio(p_exact, n_max, A.card, B.card),
        "r_checks": int(ns.size),
        "r_checks_ok": bool(np.all(slack >= 0)),
        "r_min_slack": int(slack.min()) if ns.size else 0,
    }


def omega(q, l_cap, alpha=100.0):
    est = analytic.omega_estimates_check(q, l_cap, alpha)
    return {
        "q": q,
        "L": l_cap,
        "omega": est.omega,
        "main": est.main,
        "deviation": est.omega - est.main,
        "err_bound_scale": est.err_bound_scale,
        "crude_bound": est.crude_bound,
        "crude_ok": est.crude_ok,
    }


def expsum(n_max, ts, l_cap=None):
    """|sum_{n <= 2N} Lambda^flat(n) e(nt)| with L = sqrt(N) unless given."""
    l_cap = math.sqrt(n_max) if l_cap is None else l_cap
    split = analytic.lambda_split(2 * n_max, l_cap)
    rows = []
    for t in ts:
        z = analytic.flat_exp_sum(split, t)
        rows.append({"t": t, "re": z.real, "im": z.imag, "abs": abs(z), "scaled": abs(z) / n_max})
    return {"n_max": n_max, "L": l_cap, "values": rows}


def local(config):
    """Local parameters, the well-distribution split and the bound checks on its pieces."""
    A, B = build_pair(config)
    r = config.r_override if config.r_override is not None else min(
        sumsets.ratio_r(config.n_max, A.card, B.card), sumsets.LOCAL_R_CAP
    )
    params = localring.local_params(r)
    split = localring.split_well_distributed(A, B, params)
    sieve = arith.sieve_primes(2 * config.n_max)
    counts, partition_ok = localring.partition_counts(split, A, B, sieve)
    out = {
        "r": params.r,
        "u": params.u,
        "m_r": params.m_r,
        "q": params.q,
        "j_large": list(params.j_large()),
        "pieces": {
            name: getattr(split, name).card for name in ("a1", "a2", "a3", "a4", "b1", "b2")
        },
        "heavy_classes_a": int(split.profile_a2.heavy.size),
        "heavy_classes_b": int(split.profile_b.heavy.size),
        "cond_i": bool(split.cond_i),
        "cond_ii": bool(split.cond_ii),
        "cond_iii": bool(split.cond_iii),
        "u_below_root8": bool(split.u_below_root8),
        "counts": counts,
        "partition_ok": bool(partition_ok),
    }
    if split.a3.card and split.b1.card:
        inv = localring.t_invertible_check(split.a3.members, split.b1.members, params)
        den = localring.denbound_check(split.a3, split.b1, sieve, config.n_max)
        out.update(
            t_count=inv.count,
            t_bound=inv.bound,
            t_margin=inv.margin,
            t_hypothesis_ok=inv.hypothesis_ok,
            den_lhs=den.lhs,
            den_rhs=den.rhs,
            den_ok=den.holds,
        )
    return out

