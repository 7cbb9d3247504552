"""Bilinear maximisation over products of capped simplices.

A capped simplex is {x in R^m : sum x_i = P, 0 <= x_i <= D}. Its extreme
points put D on l - 1 coordinates and the remainder P - (l - 1) D on one
more, where l = ceil(P / D); when D divides P exactly there is no
fractional coordinate. Bilinear forms attain their maximum at a pair of
such vertices, so small instances are solved by enumeration.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_real
from .errors import CapacityError, DomainError

MAX_DIM = 24
_REL_TOL = 1e-12
_BATCH = 4096


@dataclass(frozen=True)
class CappedSimplex:
    dim: int
    total: float
    cap: float

    def __post_init__(self):
        check_int(self.dim, "dim", minimum=1)
        check_real(self.total, "total", minimum=0)
        check_real(self.cap, "cap")
        if self.cap <= 0:
            raise DomainError(f"cap must be positive, got {self.cap}")
        if self.total > self.dim * self.cap * (1 + _REL_TOL):
            raise DomainError(
                f"empty polytope: total {self.total} exceeds dim*cap = {self.dim * self.cap}"
            )

    def support_size(self):
        """(l, remainder): number of nonzero coordinates at a vertex and the
        value of the fractional one (0.0 when every nonzero equals cap)."""
        ratio = self.total / self.cap
        nearest = round(ratio)
        if abs(ratio - nearest) <= _REL_TOL * max(1.0, ratio):
            return min(nearest, self.dim), 0.0
        l = math.ceil(ratio)
        return l, self.total - (l - 1) * self.cap

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        scale = max(1.0, self.total)
        return (
            x.shape == (self.dim,)
            and abs(x.sum() - self.total) <= tol * scale
            and x.min() >= -tol * self.cap
            and x.max() <= self.cap * (1 + tol)
        )


@dataclass(frozen=True)
class BilinearProblem:
    coeffs: np.ndarray
    k1: CappedSimplex
    k2: CappedSimplex

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.k1.dim, self.k2.dim):
            raise DomainError(
                f"coefficient shape {coeffs.shape} does not match ({self.k1.dim}, {self.k2.dim})"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def value(self, x, y):
        return float(np.asarray(x) @ self.coeffs @ np.asarray(y))


def vertex_iter(k):
    """Yield every extreme point of ``k`` once.

    Order: supports in lexicographic order of their index sets, then the
    position of the fractional coordinate inside the support.
    """
    if k.dim > MAX_DIM:
        raise CapacityError(f"dim {k.dim} exceeds enumeration cap {MAX_DIM}")
    l, rem = k.support_size()
    for support in itertools.combinations(range(k.dim), l):
        if rem == 0.0:
            v = np.zeros(k.dim)
            v[list(support)] = k.cap
            yield v
            continue
        for j in support:
            v = np.zeros(k.dim)
            v[list(support)] = k.cap
            v[j] = rem
            yield v


def vertex_count(k):
    l, rem = k.support_size()
    n = math.comb(k.dim, l)
    return n * l if rem else n


def _batches(k):
    it = vertex_iter(k)
    while True:
        chunk = list(itertools.islice(it, _BATCH))
        if not chunk:
            return
        yield np.array(chunk)


def maximize_bilinear(problem):
    """Best vertex pair (x*, y*, f(x*, y*)) by exhaustive search.

    Ties keep the first pair in vertex_iter order (x outer, y inner).
    """
    V2 = np.array(list(vertex_iter(problem.k2)))
    best = (None, None, -math.inf)
    for V1 in _batches(problem.k1):
        values = V1 @ problem.coeffs @ V2.T
        i, j = np.unravel_index(np.argmax(values), values.shape)
        if values[i, j] > best[2]:
            best = (V1[i].copy(), V2[j].copy(), float(values[i, j]))
    return best


def sample_points(k, count, rng):
    """Random feasible points, one per row.

    Each row is a Dirichlet draw scaled to the total; any excess over the cap
    is clipped and spread over the unclipped coordinates in proportion to
    their remaining room. Feasible by construction, not uniform.
    """
    x = rng.dirichlet(np.ones(k.dim), size=count) * k.total
    for _ in range(k.dim + 1):
        over = x > k.cap
        if not over.any():
            break
        excess = np.where(over, x - k.cap, 0.0).sum(axis=1)
        x = np.minimum(x, k.cap)
        room = k.cap - x
        room_sum = room.sum(axis=1)
        share = np.divide(excess, room_sum, out=np.zeros_like(excess), where=room_sum > 0)
        x += room * share[:, None]
    return np.minimum(x, k.cap)


def dominance_check(problem, samples, seed):
    """max over random feasible (x, y) of f(x, y) - f(x*, y*)."""
    samples = check_int(samples, "samples", minimum=1)
    rng = np.random.default_rng(seed)
    _, _, best = maximize_bilinear(problem)
    xs = sample_points(problem.k1, samples, rng)
    ys = sample_points(problem.k2, samples, rng)
    values = np.einsum("ij,jk,ik->i", xs, problem.coeffs, ys)
    return float(values.max() - best)


def grid_points(k, steps):
    """Feasible points whose coordinates are multiples of cap/steps.

    Needs total to be a multiple of the step (within rounding).
    """
    step = k.cap / steps
    units = round(k.total / step)
    if abs(units * step - k.total) > 1e-9 * max(1.0, k.total):
        raise DomainError("total is not a multiple of the grid step")
    pts = []

    def rec(prefix, left, slots):
        if slots == 1:
            if left <= steps:
                pts.append(prefix + [left])
            return
        for v in range(min(left, steps) + 1):
            rec(prefix + [v], left - v, slots - 1)

    rec([], units, k.dim)
    return np.array(pts, dtype=float) * step


# -- the local-ring application ---------------------------------------------------


def _invertible_matrix(xs, ys, primes):
    ok = np.ones((len(xs), len(ys)), dtype=bool)
    for p in primes:
        ok &= ((xs % p)[:, None] + (ys % p)[None, :]) % p != 0
    return ok


def apply_to_local(a3_profile, b1_profile, params, exact=False):
    """Upper bound for sum c(a, b) m(a) n(b) over the two residue profiles.

    c(a, b) = 1 when a + b is a unit mod U. The multiplicities form a feasible
    point of the capped simplices with totals |A3|, |B1| and caps D1, D2 (the
    profile thresholds), so the bilinear maximum bounds the sum. With
    ``exact`` the maximum is found by vertex enumeration; otherwise a
    two-stage greedy relaxation is used (best y for each row, then best x),
    which is never below the maximum.

    Returns (upper, direct); raises AssertionError if upper < direct.
    """
    if a3_profile.u != b1_profile.u:
        raise DomainError("profiles over different moduli")
    xs = a3_profile.residues.astype(np.int64)
    ys = b1_profile.residues.astype(np.int64)
    c = _invertible_matrix(xs, ys, params.primes).astype(float)
    m = a3_profile.counts.astype(float)
    n = b1_profile.counts.astype(float)
    direct = float(m @ c @ n)
    # caps never below the largest class, so the profile itself stays feasible;
    # at tiny U the threshold is NaN (log log R <= 0) and the class maximum is used
    d1 = _cap(a3_profile.threshold, m)
    d2 = _cap(b1_profile.threshold, n)
    total_a, total_b = float(m.sum()), float(n.sum())
    if exact:
        if len(xs) > MAX_DIM or len(ys) > MAX_DIM:
            raise CapacityError(f"profile supports {len(xs)}x{len(ys)} exceed cap {MAX_DIM}")
        problem = BilinearProblem(c, CappedSimplex(len(xs), total_a, d1), CappedSimplex(len(ys), total_b, d2))
        upper = maximize_bilinear(problem)[2]
    else:
        row_best = _greedy_linear_max(c, total_b, d2)
        upper = _greedy_linear_max(row_best[None, :], total_a, d1)[0]
    assert upper >= direct * (1 - 1e-12), (upper, direct)
    return upper, direct


def _cap(threshold, counts):
    top = float(counts.max(initial=0))
    return max(threshold, top) if math.isfinite(threshold) else top


def _greedy_linear_max(weights, total, cap):
    """max of w . x over the capped simplex, for each row w of ``weights``.

    The maximiser fills cap on the largest weights first.
    """
    w = -np.sort(-weights, axis=1)
    full = int(min(total // cap, w.shape[1]))
    out = cap * w[:, :full].sum(axis=1)
    rem = total - full * cap
    if full < w.shape[1] and rem > 0:
        out += rem * w[:, full]
    return out
