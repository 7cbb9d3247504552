import math

import pytest

from sumset_lab.harness import sweep, verify

# Largest P log N / (|A||B| log log R) over dense cells of the default sweep (seed 0);
# the maximiser is the primorial cell N = 10^6, k = 3.
SWEEP_MAX_RHO = 1.3989197355161314


def test_suite_passes_by_default():
    results = verify.run_suite()
    assert [r.family for r in results] == list(verify.FAMILIES)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_fault_injection_names_sharp_check():
    (res,) = verify.run_suite(["sharp"], inject_fault=True)
    assert not res.passed and res.check == "sharp_identity_check"


def test_filter_runs_only_selected():
    results = verify.run_suite(["large-sieve", "t-count"], threads=1)
    assert [r.family for r in results] == ["large-sieve", "t-count"]


def test_unknown_family():
    with pytest.raises(KeyError):
        verify.run_suite(["nope"])


def test_results_independent_of_threads(monkeypatch):
    monkeypatch.setenv(verify.THREADS_ENV, "1")
    assert verify.thread_cap() == 1
    one = verify.run_suite(["multiples", "tu", "optimizer"])
    monkeypatch.setenv(verify.THREADS_ENV, "3")
    assert verify.run_suite(["multiples", "tu", "optimizer"]) == one


def test_sweep_empty():
    assert sweep.run_sweep(n_values=()) == []
    assert math.isnan(sweep.max_dense_rho([]))


def test_full_density_matches_interval():
    rows = sweep.run_sweep(("random", "interval"), (5000,), {"random": (1.0,), "interval": (1.0,)})
    r, i = rows
    assert (r.report.p_exact, r.rho) == (i.report.p_exact, i.rho)


def test_primorial_cells_and_skips():
    rows = sweep.run_sweep(("primorial",), (10**4,), {"primorial": (2, 3, 5, 7, 11, 13)})
    assert [r.param for r in rows] == [2, 3, 5, 7, 11]  # m_13 = 30030 > N/4


@pytest.mark.slow
def test_default_sweep_fixture():
    rows = sweep.run_sweep()
    assert len(rows) == 42
    assert sum(r.family == "primorial" and r.n_max == 10**6 for r in rows) == 5
    assert sweep.max_dense_rho(rows) == pytest.approx(SWEEP_MAX_RHO, rel=1e-9)
    assert len({r.config_hash for r in rows}) == len(rows)
