import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumset_lab import localring, optimize
from sumset_lab.errors import CapacityError, DomainError
from sumset_lab.harness.verify import vertex_structure_ok
from sumset_lab.optimize import BilinearProblem, CappedSimplex

from .conftest import random_int_set


def verts(k):
    return [tuple(v) for v in optimize.vertex_iter(k)]


class TestVertices:
    def test_unit_simplex(self):
        assert verts(CappedSimplex(2, 1, 1)) == [(1, 0), (0, 1)]

    def test_fractional_remainder(self):
        vs = verts(CappedSimplex(3, 1.5, 1))
        assert len(vs) == 6 == optimize.vertex_count(CappedSimplex(3, 1.5, 1))
        assert sorted(vs) == sorted(
            tuple(1.0 if i == a else 0.5 if i == b else 0.0 for i in range(3))
            for a, b in itertools.permutations(range(3), 2)
        )

    def test_point_polytope(self):
        assert verts(CappedSimplex(2, 2, 1)) == [(1, 1)]

    def test_empty_polytope_rejected(self):
        with pytest.raises(DomainError):
            CappedSimplex(2, 3, 1)
        with pytest.raises(DomainError):
            CappedSimplex(2, 1, 0)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            next(optimize.vertex_iter(CappedSimplex(25, 3, 1)))

    @given(st.integers(1, 9), st.floats(0.01, 1), st.floats(0.1, 3))
    @settings(max_examples=100, deadline=None)
    def test_structure(self, dim, frac, cap):
        k = CappedSimplex(dim, frac * dim * cap, cap)
        vs = list(optimize.vertex_iter(k))
        assert len(vs) == optimize.vertex_count(k)
        assert len({tuple(v) for v in vs}) == len(vs)
        assert all(vertex_structure_ok(v, k) for v in vs)


class TestMaximize:
    def test_identity(self):
        k = CappedSimplex(2, 1, 1)
        x, y, val = optimize.maximize_bilinear(BilinearProblem(np.eye(2), k, k))
        assert val == 1 and x.tolist() == [1, 0] and y.tolist() == [1, 0]

    def test_all_ones(self):
        k1, k2 = CappedSimplex(3, 1.5, 1), CappedSimplex(4, 2.2, 0.8)
        prob = BilinearProblem(np.ones((3, 4)), k1, k2)
        assert optimize.maximize_bilinear(prob)[2] == pytest.approx(1.5 * 2.2)
        assert optimize.dominance_check(prob, 10_000, 0) <= 1e-9 * 3.3

    def test_zero(self):
        k = CappedSimplex(3, 1, 1)
        assert optimize.maximize_bilinear(BilinearProblem(np.zeros((3, 3)), k, k))[2] == 0

    def test_shape_mismatch(self):
        k = CappedSimplex(3, 1, 1)
        with pytest.raises(DomainError):
            BilinearProblem(np.zeros((2, 3)), k, k)

    def test_identity_dominance(self):
        k = CappedSimplex(2, 1, 1)
        assert optimize.dominance_check(BilinearProblem(np.eye(2), k, k), 10_000, 1) <= 0

    def test_point_polytope_samples(self):
        k = CappedSimplex(3, 3, 1)
        pts = optimize.sample_points(k, 50, np.random.default_rng(0))
        assert np.allclose(pts, 1.0)

    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_samples_feasible(self, m, n, seed):
        rng = np.random.default_rng(seed)
        k = CappedSimplex(m, float(rng.uniform(0, m)) * 0.9, 0.9)
        assert all(k.contains(p) for p in optimize.sample_points(k, 200, rng))

    @pytest.mark.parametrize("seed", range(6))
    def test_grid_oracle(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        steps = 50
        cap = 1.0
        k1 = CappedSimplex(m, int(rng.integers(1, m * steps + 1)) * cap / steps, cap)
        k2 = CappedSimplex(n, int(rng.integers(1, n * steps + 1)) * cap / steps, cap)
        alpha = rng.normal(size=(m, n))
        best = optimize.maximize_bilinear(BilinearProblem(alpha, k1, k2))[2]
        g1, g2 = optimize.grid_points(k1, steps), optimize.grid_points(k2, steps)
        grid_best = float(np.max(g1 @ alpha @ g2.T))
        slack = 2 * (cap / steps) * np.abs(alpha).sum()
        assert grid_best <= best + 1e-9
        assert best - grid_best <= slack


class TestApplyToLocal:
    def _profiles(self, A, B, params):
        return localring.project(A, params, A.card), localring.project(B, params, B.card)

    def test_random_u30(self):
        params = localring.local_params_for_modulus(30)
        rng = np.random.default_rng(11)
        for _ in range(10):
            pa, pb = self._profiles(random_int_set(300, rng), random_int_set(300, rng), params)
            upper, direct = optimize.apply_to_local(pa, pb, params)
            ms, ns = pa.mult, pb.mult
            oracle = sum(
                ms[a] * ns[b] for a in ms for b in ns if math.gcd(a + b, 30) == 1
            )
            assert direct == oracle and upper >= direct

    def test_exact_mode_bounded_by_relaxation(self):
        params = localring.local_params_for_modulus(6)
        rng = np.random.default_rng(2)
        pa, pb = self._profiles(random_int_set(60, rng), random_int_set(60, rng), params)
        exact, direct = optimize.apply_to_local(pa, pb, params, exact=True)
        relaxed, _ = optimize.apply_to_local(pa, pb, params)
        assert direct <= exact * (1 + 1e-12) and exact <= relaxed * (1 + 1e-12)

    def test_single_class(self):
        from sumset_lab import IntSet

        params = localring.local_params_for_modulus(30)
        A = IntSet.from_members([1, 31, 61], 100)
        B = IntSet.from_members([6, 36], 100)
        upper, direct = optimize.apply_to_local(*self._profiles(A, B, params), params)
        assert upper == direct == 3 * 2  # 1 + 6 = 7 is a unit mod 30

    def test_uniform_profiles(self):
        params = localring.local_params_for_modulus(30)
        res = np.arange(30)
        # cap equal to the common multiplicity: the polytope is a single point
        prof = localring.ResidueProfile(30, res, np.full(30, 10), 10.0)
        upper, direct = optimize.apply_to_local(prof, prof, params)
        assert upper == pytest.approx(direct, rel=1e-12) and direct == 30 * 8 * 100

    def test_exact_capacity(self):
        from sumset_lab import sumsets

        params = localring.local_params_for_modulus(30)
        A = sumsets.interval(300, 1, 300)
        with pytest.raises(CapacityError):
            optimize.apply_to_local(*self._profiles(A, A, params), params, exact=True)
