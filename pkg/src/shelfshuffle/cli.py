"""Command-line front door for all computations, experiments and the server.

Data goes to stdout, diagnostics to stderr; check-style subcommands exit
nonzero when a verification fails.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import random
import sys
from fractions import Fraction

import click

from . import errata as errata_mod
from . import exact, montecarlo, oracle, shuffle, strategy
from .params import Prob, format_probability, format_value, parse_probability

HALF = Fraction(1, 2)


def _parse_p(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_probability(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _parse_p_multiple(ctx, param, value):
    if not value:
        return ()
    return tuple(_parse_p(ctx, param, v) for v in value)


def _resolve_backend(p: Prob, backend: str) -> tuple[Prob, str]:
    if backend == "float":
        return float(p), "float"
    if not isinstance(p, Fraction):
        return p, "float"
    return p, "exact"


p_option = click.option(
    "--p", "p", default="1/2", callback=_parse_p, show_default=True,
    help='Top-placement probability, as "a/b" or a decimal.',
)
p_multi_option = click.option(
    "--p", "ps", multiple=True, callback=_parse_p_multiple,
    help="Probability; may be repeated.",
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table",
    show_default=True,
)
backend_option = click.option(
    "--backend", type=click.Choice(["exact", "float"]), default="exact", show_default=True,
)


def _emit_pairs(pairs: list[tuple], fmt: str, headers: tuple[str, str]) -> None:
    if fmt == "json":
        click.echo(json.dumps({str(k): v for k, v in pairs}, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(headers)
        writer.writerows(pairs)
        click.echo(buf.getvalue().rstrip("\n"))
    else:
        width = max(len(str(k)) for k, _ in pairs)
        for k, v in pairs:
            click.echo(f"{str(k):>{width}}  {v}")


def _fail(message: str) -> None:
    click.echo(f"FAIL: {message}", err=True)
    sys.exit(1)


def friendly_errors(fn):
    """Surface domain validation errors as clean CLI errors, not tracebacks."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            raise click.ClickException(str(exc))

    return wrapper


@click.group()
def main():
    """Exact laws, optimal strategy and simulation for the single-shelf
    shuffle guessing game."""


@main.command()
@click.option("--n", type=int)
@p_option
@backend_option
@format_option
@click.option(
    "--check-binomial-regime", is_flag=True,
    help="For p < 1/2: verify the law is 1 + Binomial(n-1, 1-p) up to the "
    "high-guess threshold and differs just past it.",
)
@friendly_errors
def pmf(n, p, backend, fmt, check_binomial_regime):
    """Law of the number of correct guesses."""
    if check_binomial_regime:
        from math import comb

        threshold = strategy.high_guess_threshold(p)
        laws = exact.total_pmf_range(threshold + 1, p)
        for size in range(1, threshold + 1):
            if exact.binomial_regime_pmf(size, p).probs != laws[size - 1].probs:
                _fail(f"binomial regime mismatch at n={size}, p={format_probability(p)}")
        beyond = threshold + 1
        shifted = {
            1 + k: comb(beyond - 1, k) * (1 - p) ** k * p ** (beyond - 1 - k)
            for k in range(beyond)
        }
        if laws[beyond - 1].probs == shifted:
            _fail(f"law unexpectedly still binomial at n={beyond}")
        click.echo(
            f"PASS: law == 1 + Binomial(n-1, 1-p) for n <= {threshold}, differs at {beyond}"
        )
        return
    if n is None:
        raise click.UsageError("provide --n")
    p, backend = _resolve_backend(p, backend)
    law = exact.total_pmf(n, p, backend=backend)
    if fmt == "json":
        click.echo(json.dumps({str(k): format_value(v) for k, v in sorted(law.probs.items())}))
        return
    pairs = [(k, format_value(v)) for k, v in sorted(law.probs.items())]
    _emit_pairs(pairs, fmt, ("score", "probability"))


@main.command()
@click.option("--n", type=int, required=True)
@p_option
@backend_option
@format_option
@friendly_errors
def joint(n, p, backend, fmt):
    """Joint law of (lucky, certified) correct guesses."""
    p, backend = _resolve_backend(p, backend)
    law = exact.joint_pmf(n, p, backend=backend)
    pairs = [(f"{l},{c}", format_value(v)) for (l, c), v in sorted(law.probs.items())]
    if fmt == "json":
        click.echo(json.dumps(law.to_json_dict()))
        return
    _emit_pairs(pairs, fmt, ("lucky,certified", "probability"))


@main.command()
@click.option("--n", type=int)
@click.option("--nmax", type=int, help="Verify over 2..nmax instead of printing one n.")
@p_option
@click.option("--refined", is_flag=True, help="Include the lucky/certified split moments.")
@friendly_errors
def moments(n, nmax, p, refined):
    """Mean and variance of the score (and of the split, with --refined).

    With --nmax, verifies the closed-form moment formulas against the exact
    law over the whole range and exits nonzero on any mismatch.
    """
    if nmax is not None:
        failures = 0
        for size in range(2, nmax + 1):
            law = exact.total_pmf(size, p)
            cf = exact.closed_form_moments(size, p)
            if law.mean() != cf.mean:
                failures += 1
                click.echo(f"mean mismatch at n={size}", err=True)
            if size >= 3 and law.variance() != cf.variance:
                failures += 1
                click.echo(f"variance mismatch at n={size}", err=True)
            if refined:
                jaw = exact.joint_pmf(size, p)
                if jaw.marginal_total().probs != law.probs:
                    failures += 1
                    click.echo(f"joint marginal mismatch at n={size}", err=True)
                if p == HALF and size >= 3:
                    rf = exact.refined_closed_form_moments(size)
                    if (
                        jaw.mean_lucky() != Fraction(size, 4)
                        or jaw.mean_certified() != Fraction(size, 2)
                        or jaw.var_lucky() != rf.var_lucky
                        or jaw.var_certified() != rf.var_certified
                        or jaw.covariance() != rf.covariance
                    ):
                        failures += 1
                        click.echo(f"refined moment mismatch at n={size}", err=True)
        if failures:
            _fail(f"{failures} moment mismatches for p={format_probability(p)}")
        click.echo(f"PASS: closed-form moments == exact law for n <= {nmax}, p={format_probability(p)}")
        return
    if n is None:
        raise click.UsageError("provide --n or --nmax")
    law = exact.total_pmf(n, p)
    click.echo(f"mean {format_value(law.mean())}")
    click.echo(f"variance {format_value(law.variance())}")
    if refined:
        jaw = exact.joint_pmf(n, p)
        click.echo(f"mean_lucky {format_value(jaw.mean_lucky())}")
        click.echo(f"mean_certified {format_value(jaw.mean_certified())}")
        click.echo(f"var_lucky {format_value(jaw.var_lucky())}")
        click.echo(f"var_certified {format_value(jaw.var_certified())}")
        click.echo(f"covariance {format_value(jaw.covariance())}")


@main.command("position-matrix")
@click.option("--n", type=int, required=True)
@p_option
@format_option
@click.option("--verify", is_flag=True, help="Check double stochasticity, support and symmetry.")
@friendly_errors
def position_matrix(n, p, fmt, verify):
    """Exact card-to-position probability matrix."""
    matrix = shuffle.position_matrix(n, p)
    if verify:
        one = Fraction(1) if isinstance(p, Fraction) else 1.0
        for i, row in enumerate(matrix, 1):
            if sum(row) != one:
                _fail(f"row {i} does not sum to 1")
        for j in range(n):
            if sum(matrix[i][j] for i in range(n)) != one:
                _fail(f"column {j + 1} does not sum to 1")
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                inside = i + 1 <= j <= n - i
                if inside != (matrix[i - 1][j - 1] == 0):
                    _fail(f"support pattern violated at ({i}, {j})")
        click.echo(f"PASS: doubly stochastic with support j <= i or j >= n-i+1 (n={n})")
        return
    rows = [[format_value(v) for v in row] for row in matrix]
    if fmt == "json":
        click.echo(json.dumps({"n": n, "p": format_probability(p), "rows": rows}))
    elif fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf).writerows(rows)
        click.echo(buf.getvalue().rstrip("\n"))
    else:
        for row in rows:
            click.echo("  ".join(str(v) for v in row))


@main.command("first-card")
@click.option("--n", type=int, required=True)
@p_option
@format_option
@friendly_errors
def first_card(n, p, fmt):
    """Law of the first drawn card."""
    law = shuffle.first_card_law(n, p)
    pairs = [(i + 1, format_value(v)) for i, v in enumerate(law)]
    _emit_pairs(pairs, fmt, ("label", "probability"))


@main.command()
@click.option("--n", type=int, required=True)
@p_option
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
@friendly_errors
def play(n, p, seed, fmt):
    """Auto-play one seeded game with the optimal strategy and print the trace."""
    rng = random.Random(seed)
    deck = shuffle.shelf_shuffle(n, p, rng)
    record = strategy.play_game(deck, p)
    if fmt == "json":
        click.echo(json.dumps(record.to_json_dict()))
        return
    for step, (guess, shown, cls) in enumerate(
        zip(record.guesses, record.shown, record.classifications), 1
    ):
        click.echo(f"{step:>3}  guess {guess:>4}  shown {shown:>4}  {cls.value}")
    click.echo(
        f"totals: {record.total_correct} correct "
        f"({record.lucky} lucky, {record.certified} certified)"
    )


@main.command()
@click.option("--n", type=int, required=True)
@p_option
@click.option("--reps", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@format_option
@click.option("--clt", is_flag=True, help="Exact float-DP normal-distance check instead of sampling.")
@click.option("--clt-tolerance", type=float, default=0.03, show_default=True)
@click.option(
    "--tv-tolerance", type=float, default=None,
    help="Fail (nonzero exit) if the TV distance to the exact law exceeds this.",
)
@friendly_errors
def simulate(n, p, reps, seed, workers, fmt, clt, clt_tolerance, tv_tolerance):
    """Seeded Monte Carlo runs (or the exact CLT check with --clt)."""
    if clt:
        deviation = montecarlo.clt_deviation(n, p)
        click.echo(f"normal sup-distance at n={n}: {deviation:.6f}")
        if deviation > clt_tolerance:
            _fail(f"sup-distance {deviation:.6f} exceeds {clt_tolerance}")
        click.echo(f"PASS: standardized exact law within {clt_tolerance} of normal")
        return
    config = montecarlo.SimConfig(n=n, p=p, replications=reps, seed=seed, workers=workers)
    reference = None
    if n <= 2000:
        p_ref = config.resolved_bias()
        reference = exact.total_pmf(n, p_ref) if isinstance(p_ref, Fraction) else exact.total_pmf(n, p_ref, backend="float")
    summary = montecarlo.simulate(config, reference=reference)
    if tv_tolerance is not None:
        if summary.tv_to_reference is None:
            _fail("no exact reference law available for the TV check at this n")
        if float(summary.tv_to_reference) > tv_tolerance:
            _fail(f"TV {float(summary.tv_to_reference):.5f} exceeds {tv_tolerance}")
        click.echo(f"PASS: TV {float(summary.tv_to_reference):.5f} <= {tv_tolerance}", err=True)
    if fmt == "json":
        click.echo(json.dumps(summary.to_json_dict()))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(summary.csv_header())
        writer.writerow(summary.to_csv_row())
        click.echo(buf.getvalue().rstrip("\n"))
    else:
        for key, value in summary.to_json_dict().items():
            if key != "counts":
                click.echo(f"{key}: {value}")


@main.command("oracle-check")
@click.option("--n", type=int, help="Check a single deck size.")
@click.option("--nmax", type=int, help="Check every deck size up to nmax.")
@p_multi_option
@friendly_errors
def oracle_check(n, nmax, ps):
    """Verify the dynamic program and position matrix against enumeration."""
    if n is None and nmax is None:
        raise click.UsageError("provide --n or --nmax")
    sizes = [n] if nmax is None else list(range(1, nmax + 1))
    ps = ps or (HALF,)
    for p in ps:
        for size in sizes:
            result = oracle.enumerate_all(size, p)
            law = exact.total_pmf(size, p)
            jaw = exact.joint_pmf(size, p)
            if result.total_law != law.probs:
                _fail(f"score law mismatch at n={size}, p={format_probability(p)}")
            if result.joint_law != jaw.probs:
                _fail(f"joint law mismatch at n={size}, p={format_probability(p)}")
            if result.position_matrix != shuffle.position_matrix(size, p):
                _fail(f"position matrix mismatch at n={size}, p={format_probability(p)}")
            if p >= HALF and result.total_law.get(size, 0) != exact.perfect_score_probability(size, p):
                _fail(f"perfect-score probability != p^(n-1) at n={size}, p={format_probability(p)}")
    click.echo("PASS: DP == enumeration")


@main.command("gf-check")
@click.option("--nmax", type=int, default=40, show_default=True)
@click.option("--joint-nmax", type=int, default=None, help="Defaults to nmax.")
@p_multi_option
@friendly_errors
def gf_check(nmax, joint_nmax, ps):
    """Verify generating-function series against the dynamic program."""
    ps = ps or (HALF,)
    joint_nmax = joint_nmax if joint_nmax is not None else nmax
    for p in ps:
        series = exact.total_pgf_series(nmax, p)
        for size in range(1, nmax + 1):
            if series.pmf_dict(size) != exact.total_pmf(size, p).probs:
                _fail(f"biased series != DP at n={size}, p={format_probability(p)}")
        if p == HALF:
            sym = exact.total_pgf_series_symmetric(nmax)
            for size in range(1, nmax + 1):
                if sym.pmf_dict(size) != exact.total_pmf(size, p).probs:
                    _fail(f"balanced series != DP at n={size}")
            tri = exact.joint_pgf_series(joint_nmax)
            for size in range(1, joint_nmax + 1):
                if tri.pmf_dict(size) != exact.joint_pmf(size, p).probs:
                    _fail(f"trivariate series != joint DP at n={size}")
        else:
            tri = exact.joint_pgf_series_biased(joint_nmax, p)
            for size in range(1, joint_nmax + 1):
                if tri.pmf_dict(size) != exact.joint_pmf(size, p).probs:
                    _fail(f"biased joint series != joint DP at n={size}, p={format_probability(p)}")
    click.echo(f"PASS: series == DP for n <= {nmax} (joint n <= {joint_nmax})")


@main.command("phase-sweep")
@click.option("--lambda", "lam", type=float, default=1.0, show_default=True)
@click.option("--alpha", "alphas", type=float, multiple=True, default=(1.0,), show_default=True)
@click.option("--n", "ns", type=int, multiple=True, required=True)
@format_option
@click.option(
    "--tv-tolerance", type=float, default=None,
    help="Fail (nonzero exit) if any Poisson TV distance exceeds this.",
)
@friendly_errors
def phase_sweep(lam, alphas, ns, fmt, tv_tolerance):
    """Near-deterministic regime: perfect-score probability and Poisson fit."""
    lam_exact = int(lam) if lam.is_integer() else lam
    alphas = [int(a) if float(a).is_integer() else a for a in alphas]
    rows = montecarlo.phase_transition_sweep(lam_exact, alphas, list(ns))
    if tv_tolerance is not None:
        worst = max((row["tv_poisson"] for row in rows if "tv_poisson" in row), default=None)
        if worst is None:
            _fail("no row was within the DP budget for a Poisson TV value")
        if worst > tv_tolerance:
            _fail(f"Poisson TV {worst:.5f} exceeds {tv_tolerance}")
        click.echo(f"PASS: Poisson TV {worst:.2e} <= {tv_tolerance}", err=True)
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    keys = sorted({k for row in rows for k in row})
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys)
        writer.writeheader()
        writer.writerows(rows)
        click.echo(buf.getvalue().rstrip("\n"))
        return
    for row in rows:
        click.echo("  ".join(f"{k}={row[k]}" for k in keys if k in row))


@main.command("optimality-check")
@click.option("--n", type=int, help="Check a single deck size.")
@click.option("--nmax", type=int, help="Check every deck size up to nmax.")
@p_multi_option
@friendly_errors
def optimality_check(n, nmax, ps):
    """Certify that the strategy attains the stepwise argmax everywhere."""
    if n is None and nmax is None:
        raise click.UsageError("provide --n or --nmax")
    sizes = [n] if nmax is None else list(range(1, nmax + 1))
    ps = ps or (HALF,)
    for p in ps:
        for size in sizes:
            report = oracle.verify_strategy_optimality(size, p)
            if not report.passed:
                for line in report.lines():
                    click.echo(line, err=True)
                _fail(f"strategy not optimal at n={size}, p={format_probability(p)}")
    click.echo("PASS: strategy attains the stepwise argmax")


@main.command()
@format_option
def errata(fmt):
    """Adjudicated discrepancies in the published closed forms, with evidence."""
    if fmt == "json":
        click.echo(json.dumps(errata_mod.errata_json(), indent=2))
        return
    for line in errata_mod.errata_lines():
        click.echo(line)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True, envvar="SHELFSHUFFLE_HOST")
@click.option("--port", type=int, default=8000, show_default=True, envvar="SHELFSHUFFLE_PORT")
@click.option("--ttl", type=float, default=3600.0, show_default=True, help="Session TTL seconds.")
@click.option(
    "--cors-origin", "cors_origins", multiple=True, envvar="SHELFSHUFFLE_CORS_ORIGIN",
    help="Allowed UI origin; may be repeated. Defaults to *.",
)
def serve(host, port, ttl, cors_origins):
    """Run the HTTP API for the interactive game."""
    import uvicorn

    from .server import create_app

    app = create_app(ttl_seconds=ttl, cors_origins=list(cors_origins) or None)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
