"""Parameter sweeps over set families, one BoundReport per cell."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .. import arith, sumsets
from .reports import RunConfig, derive_seed
from .verify import thread_cap

DEFAULT_N = (10_000, 100_000, 1_000_000)
DEFAULT_PARAMS = {
    "random": (0.25, 0.5, 1.0),
    "progression": (3, 4, 5),
    "interval": (0.25, 0.5, 1.0),
    "primorial": (2, 3, 5, 7, 11),
}
FAMILIES = tuple(DEFAULT_PARAMS)

CSV_COLUMNS = (
    "family", "N", "param", "card_a", "card_b", "R", "P",
    "brs_bound", "main_bound", "c_brs", "c_main", "dense", "rho", "config_hash",
)
PLOT_COLUMNS = ("family", "N", "param", "x", "y")


@dataclass(frozen=True)
class SweepRow:
    family: str
    n_max: int
    param: float
    report: sumsets.BoundReport
    config_hash: str

    @property
    def rho(self):
        """P log N / (|A||B| log log R), or NaN when log log R <= 0."""
        r = self.report
        loglog = _loglog(r.ratio_r)
        return r.p_exact * math.log(r.n_max) / (r.card_a * r.card_b * loglog) if loglog > 0 else math.nan

    def as_csv(self):
        r = self.report
        return {
            "family": self.family, "N": self.n_max, "param": self.param,
            "card_a": r.card_a, "card_b": r.card_b, "R": r.ratio_r, "P": r.p_exact,
            "brs_bound": r.brs_bound, "main_bound": r.main_bound,
            "c_brs": r.c_brs, "c_main": r.c_main, "dense": r.dense, "rho": self.rho,
            "config_hash": self.config_hash,
        }

    def as_plot(self):
        r = self.report
        return {
            "family": self.family, "N": self.n_max, "param": self.param,
            "x": _loglog(r.ratio_r),
            "y": r.p_exact * math.log(r.n_max) / (r.card_a * r.card_b),
        }


def _loglog(x):
    return math.log(math.log(x)) if x > 1 else -math.inf


def cell_descriptors(family, n_max, param):
    """Descriptor strings for (A, B), or None when the cell is not admissible."""
    if family == "random":
        d = f"rand:d={float(param)!r}"
        return d, d
    if family == "progression":
        return f"ap:m={int(param)},c=0", f"ap:m={int(param)},c=1"
    if family == "interval":
        hi = math.floor(float(param) * n_max)
        return (f"iv:1..{hi}",) * 2 if hi >= 1 else None
    if family == "primorial":
        m = arith.primorial(int(param))
        if 4 * m > n_max:
            return None
        return f"ap:m={m},c=0", f"ap:m={m},c=1"
    raise KeyError(f"unknown sweep family {family!r}")


def run_cell(family, n_max, param, seed, sieve):
    specs = cell_descriptors(family, n_max, param)
    if specs is None:
        return None
    a_spec, b_spec = specs
    A = sumsets.set_from_spec(a_spec, n_max, derive_seed(seed, family, n_max, param, "A"))
    B = sumsets.set_from_spec(b_spec, n_max, derive_seed(seed, family, n_max, param, "B"))
    report = sumsets.bound_report(A, B, sieve)
    config = RunConfig("sweep", n_max, a_spec, b_spec, seed, extra={"family": family, "param": param})
    return SweepRow(family, n_max, param, report, config.content_hash())


def run_sweep(families=FAMILIES, n_values=DEFAULT_N, params=None, seed=0, threads=None):
    """All admissible cells, ordered by family, N, then parameter."""
    params = params or {}
    cells = [
        (fam, n, p)
        for fam in families
        for n in n_values
        for p in params.get(fam, DEFAULT_PARAMS[fam])
    ]
    if not cells:
        return []
    sieve = arith.sieve_primes(2 * max(n for _, n, _ in cells))
    workers = max(1, min(threads or thread_cap(), len(cells)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda c: run_cell(*c, seed, sieve), cells))
    return [r for r in rows if r is not None]


def max_dense_rho(rows):
    """Largest finite rho over cells with |A||B| >= N^2 / (log N)^2."""
    vals = [r.rho for r in rows if r.report.dense and math.isfinite(r.rho)]
    return max(vals) if vals else math.nan
