"""Command-line interface: ``retromaser <command> [options]``.

Exit status: 0 success, 1 usage error, 2 impossible detection record
(empty posterior), 3 verification failure.
"""

from __future__ import annotations

import math
import re
import sys

import click

from .core import DetectionSequence, EmptySupportError, MaserParams, RetromaserError
from .figures import FIGURES, figure_state
from .oracle import sequence_likelihood
from .output import to_csv, to_json
from .pom import TABLE1_ROWS, build_pom, table1_deviation
from .retrodiction import PriorSpec, retrodict_state, support_report
from .verify import run_checks

EXIT_USAGE = 1
EXIT_EMPTY = 2
EXIT_VERIFY = 3


class VerificationFailed(RetromaserError):
    pass


_PI_RE = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*$", re.IGNORECASE)


def parse_theta(text: str) -> float:
    """Accept a float, ``pi``, or a multiple such as ``0.5pi`` / ``2*pi``."""
    match = _PI_RE.match(str(text))
    if match:
        coeff = match.group(1)
        return (float(coeff) if coeff else 1.0) * math.pi
    return float(text)


def _theta_cb(ctx, param, value):
    try:
        return parse_theta(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a number or 'pi'") from None


def _sequence_cb(ctx, param, value):
    try:
        return DetectionSequence.parse(value)
    except RetromaserError as exc:
        raise click.BadParameter(str(exc)) from None


def _prior_cb(ctx, param, value):
    try:
        return PriorSpec.parse(value)
    except RetromaserError as exc:
        raise click.BadParameter(str(exc)) from None


def _params(theta, n_max) -> MaserParams:
    try:
        return MaserParams(theta=theta, n_max=n_max)
    except RetromaserError as exc:
        raise click.UsageError(str(exc)) from None


def _emit(text: str, output):
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


sequence_opt = click.option("--sequence", "-s", default="", callback=_sequence_cb,
                            help="Chronological detections, e.g. 'gege'.")
theta_opt = click.option("--theta", "-t", default="pi", callback=_theta_cb,
                         help="Coupling-time product lambda*tau; accepts 'pi'.")
n_max_opt = click.option("--n-max", "-N", default=25, show_default=True, type=int,
                         help="Photon-number truncation.")
prior_opt = click.option("--prior", "-p", default="uniform", callback=_prior_cb,
                         help="uniform | cap:K | path to an n,value CSV.")
format_opt = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                          show_default=True)
output_opt = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                          help="Write here instead of standard output.")


@click.group()
def cli():
    """Micromaser field POM elements and retrodictive photon statistics."""


@cli.command()
@sequence_opt
@theta_opt
@n_max_opt
@format_opt
@output_opt
def pom(sequence, theta, n_max, fmt, output):
    """Raw POM coefficients C_n for a detection sequence."""
    params = _params(theta, n_max)
    element = build_pom(sequence, params)
    rows = list(enumerate(element.values))
    if fmt == "csv":
        _emit(to_csv(rows), output)
    else:
        _emit(to_json(rows, theta, n_max, str(sequence)), output)


def _emit_state(state, params, fmt, output, **extra):
    report = support_report(state)
    rows = list(enumerate(state.probabilities))
    if fmt == "csv":
        click.echo(f"# {report.summary()}", err=True)
        _emit(to_csv(rows), output)
    else:
        _emit(to_json(rows, params.theta, params.n_max, str(state.sequence), str(state.prior),
                      support=report.as_dict(), **extra), output)


@cli.command()
@sequence_opt
@theta_opt
@n_max_opt
@prior_opt
@format_opt
@output_opt
def retrodict(sequence, theta, n_max, prior, fmt, output):
    """Normalized photon-number distribution before the first atom."""
    params = _params(theta, n_max)
    _emit_state(retrodict_state(sequence, prior, params), params, fmt, output)


@cli.command()
@sequence_opt
@theta_opt
@n_max_opt
@prior_opt
@format_opt
@output_opt
def predict(sequence, theta, n_max, prior, fmt, output):
    """Forward likelihood P(sequence | n) for each initial photon number."""
    params = _params(theta, n_max)
    likelihood = sequence_likelihood(sequence, params).per_initial_n
    evidence = float(prior.weights(n_max).normalized().weights @ likelihood)
    rows = list(enumerate(likelihood))
    if fmt == "csv":
        click.echo(f"# P(sequence) under prior {prior}: {evidence!r}", err=True)
        _emit(to_csv(rows), output)
    else:
        _emit(to_json(rows, theta, n_max, str(sequence), str(prior), evidence=evidence), output)


@cli.command()
@click.argument("figure_id", type=click.Choice(list(FIGURES)))
@n_max_opt
@format_opt
@output_opt
def figure(figure_id, n_max, fmt, output):
    """Data behind one of the published figures (1a 1b 2a 2b 2c 3 4a 4b)."""
    state = figure_state(figure_id, n_max)
    params = MaserParams(theta=FIGURES[figure_id].theta, n_max=n_max)
    _emit_state(state, params, fmt, output, figure=figure_id)


@cli.command()
@theta_opt
@n_max_opt
@format_opt
@output_opt
def table1(theta, n_max, fmt, output):
    """Max gap between the iterated POM and the closed-form two-atom table."""
    params = _params(theta, n_max)
    rows = [(row, table1_deviation(row, params)) for row in TABLE1_ROWS]
    if fmt == "csv":
        _emit(to_csv(rows, header=("row", "max_deviation")), output)
    else:
        _emit(to_json(rows, theta, n_max), output)


@cli.command()
@theta_opt
@n_max_opt
def verify(theta, n_max):
    """Run the built-in invariant checks; exit 3 on any failure."""
    results = run_checks(_params(theta, n_max))
    for result in results:
        click.echo(result.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationFailed(f"failed checks: {', '.join(failed)}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="retromaser", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except EmptySupportError as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_EMPTY
    except VerificationFailed as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_VERIFY
    except RetromaserError as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
