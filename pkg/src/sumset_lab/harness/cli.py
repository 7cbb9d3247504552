"""``sumset-lab`` command line.

Exit status: 0 on success, 1 when a verification check fails, 2 on usage,
parse or domain errors.
"""

import math
import sys
from dataclasses import asdict

import click

from ..errors import SumsetLabError
from . import commands, sweep as sweep_mod, verify as verify_mod
from .reports import RunConfig, dumps_csv, dumps_json, human_table, write_text

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class _Group(click.Group):
    """Maps library errors to exit status 2 with a one-line message."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (SumsetLabError, OverflowError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_USAGE)


@click.group(cls=_Group)
@click.version_option(package_name="artifact")
def main():
    """Exact prime-pair counts in sumsets and the checks around them."""


def _emit(config, payload, csv_rows=None, csv_columns=None):
    if config.output is None:
        return
    if config.format == "csv":
        if csv_rows is None:
            csv_columns = sorted(k for k, v in payload.items() if not isinstance(v, (dict, list)))
            csv_rows = [payload]
        text = dumps_csv(csv_columns, csv_rows)
    else:
        text = dumps_json({"config": asdict(config) | {"hash": config.content_hash()}, "result": payload})
    write_text(config.output, text)


def _common_output(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)(f)
    return click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="machine-readable report")(f)


def _set_options(f):
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--b", "b_spec", required=True, help="descriptor for B, e.g. iv:1..1000")(f)
    f = click.option("--a", "a_spec", required=True, help="descriptor for A, e.g. rand:d=0.5")(f)
    return click.option("--n", "n_max", type=click.IntRange(min=2), required=True, help="ambient bound N")(f)


@main.command()
@_set_options
@click.option("--r-override", type=float, default=None, help="R used for the local parameters")
@click.option("--engine", type=click.Choice(["convolution", "naive"]), default="convolution", show_default=True)
@_common_output
def count(n_max, a_spec, b_spec, seed, r_override, engine, output, fmt):
    """Exact P_{N;A,B} with the upper bounds and empirical constants."""
    config = RunConfig("count", n_max, a_spec, b_spec, seed, r_override, output, fmt, {"engine": engine})
    report = commands.count(config, engine)
    payload = report.to_dict()
    click.echo(human_table(payload.items()))
    _emit(config, payload)


@main.command()
@click.option("--n", "n_max", type=click.IntRange(min=2), required=True)
@click.option("--k", type=click.IntRange(min=2), required=True, help="primes up to k form m_k")
@_common_output
def extremal(n_max, k, output, fmt):
    """Primorial construction: A = 0 mod m_k, B = 1 mod m_k."""
    config = RunConfig("extremal", n_max, seed=0, output=output, format=fmt, extra={"k": k})
    payload = commands.extremal(n_max, k)
    click.echo(human_table(payload.items()))
    _emit(config, payload)


@main.command()
@click.option("--filter", "families", multiple=True, type=click.Choice(list(verify_mod.FAMILIES)),
              help="run only these families (repeatable)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--inject-fault", is_flag=True, hidden=True)
@_common_output
def verify(families, seed, inject_fault, output, fmt):
    """Run the identity and inequality suite; exit 1 if any check fails."""
    config = RunConfig("verify", seed=seed, output=output, format=fmt,
                       extra={"families": sorted(families), "inject_fault": inject_fault})
    results = verify_mod.run_suite(families, seed=seed, inject_fault=inject_fault)
    width = max(len(r.check) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{status}  {r.check.ljust(width)}  n={r.instances:<9} residual={r.residual:.3e}")
    rows = [asdict(r) for r in results]
    _emit(config, {"checks": rows}, rows, ("family", "check", "passed", "instances", "residual"))
    failed = [r.check for r in results if not r.passed]
    if failed:
        click.echo(f"failed: {', '.join(failed)}", err=True)
        sys.exit(EXIT_CHECK_FAILED)


def _number_list(text, kind):
    return tuple(kind(x) for x in text.split(",") if x.strip())


@main.command()
@click.option("--family", "families", multiple=True, type=click.Choice(sweep_mod.FAMILIES),
              help="families to run (repeatable; default all)")
@click.option("--n-list", default=",".join(map(str, sweep_mod.DEFAULT_N)), show_default=True,
              help="comma-separated N values")
@click.option("--params", default=None, help="comma-separated parameters for every chosen family")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="CSV of bound reports")
@click.option("--plot-data", type=click.Path(dir_okay=False), default=None, help="CSV of (log log R, P log N/|A||B|)")
def sweep(families, n_list, params, seed, output, plot_data):
    """Grid of bound reports over set families and N."""
    families = families or sweep_mod.FAMILIES
    n_values = _number_list(n_list, int)
    param_map = {f: _number_list(params, float) for f in families} if params else None
    rows = sweep_mod.run_sweep(families, n_values, param_map, seed)
    csv_rows = [r.as_csv() for r in rows]
    for row in csv_rows:
        click.echo(
            f"{row['family']:<12} N={row['N']:<8} param={row['param']:<6} "
            f"P={row['P']:<12} rho={row['rho']:.6f}"
        )
    rho = sweep_mod.max_dense_rho(rows)
    click.echo(f"max rho over dense cells: {rho:.12g}" if math.isfinite(rho) else "no dense cells")
    if output:
        write_text(output, dumps_csv(sweep_mod.CSV_COLUMNS, csv_rows))
    if plot_data:
        write_text(plot_data, dumps_csv(sweep_mod.PLOT_COLUMNS, [r.as_plot() for r in rows]))


@main.command()
@click.option("--q", type=click.IntRange(min=1), required=True)
@click.option("--l", "l_cap", type=float, required=True, help="truncation L")
@click.option("--alpha", type=float, default=100.0, show_default=True)
@_common_output
def omega(q, l_cap, alpha, output, fmt):
    """The sieve weight omega(q, L) against its main term."""
    config = RunConfig("omega", output=output, format=fmt, extra={"q": q, "L": l_cap, "alpha": alpha})
    payload = commands.omega(q, l_cap, alpha)
    click.echo(human_table(payload.items()))
    _emit(config, payload)


@main.command()
@click.option("--n", "n_max", type=click.IntRange(min=2), required=True)
@click.option("--t", "ts", type=float, multiple=True, default=(0.0, 0.25, 0.5), show_default=True)
@click.option("--l", "l_cap", type=float, default=None, help="truncation L (default sqrt(N))")
@_common_output
def expsum(n_max, ts, l_cap, output, fmt):
    """Exponential sums of the Lambda^flat tail over [1, 2N]."""
    config = RunConfig("expsum", n_max, output=output, format=fmt, extra={"t": list(ts), "L": l_cap})
    payload = commands.expsum(n_max, ts, l_cap)
    click.echo(f"N={n_max}  L={payload['L']:.6g}")
    for row in payload["values"]:
        click.echo(f"t={row['t']:<6g} |S|={row['abs']:.12g}  |S|/N={row['scaled']:.6g}")
    _emit(config, payload, payload["values"], ("t", "re", "im", "abs", "scaled"))


@main.command()
@_set_options
@click.option("--r-override", type=float, default=None, help="R for U, M_R, Q (default min(R, 40))")
@_common_output
def local(n_max, a_spec, b_spec, seed, r_override, output, fmt):
    """Split into well-distributed pieces mod U and check the local bounds."""
    config = RunConfig("local", n_max, a_spec, b_spec, seed, r_override, output, fmt)
    payload = commands.local(config)
    flat = [(k, v) for k, v in payload.items() if not isinstance(v, dict)]
    flat += [(f"|{k}|", v) for k, v in payload["pieces"].items()]
    flat += [(f"P[{k}]", v) for k, v in payload["counts"].items()]
    click.echo(human_table(flat))
    _emit(config, payload)
