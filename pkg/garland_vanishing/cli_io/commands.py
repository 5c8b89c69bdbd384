import json
import logging
from functools import wraps

import click
import numpy as np
import scipy

from .. import __version__
from ..core.cochains import CochainNormContext
from ..core.cohomology import h1_dimension, per_link_inequality_check
from ..core.complex_core import SimplicialComplex
from ..core.constants import CROSSCHECK_INCONSISTENT, VERDICT_HYPOTHESIS_FAILED
from ..core.group_action import Group
from ..core.representations import Representation
from ..core.spectral import evaluate_criterion
from .constants import EXIT_INCONSISTENT
from .identities import run_identity_suites
from .models import AnalysisConfig, RunReport
from .utils import (
    emit,
    input_digest,
    list_versions,
    open_archive,
    parse_complex,
    parse_group,
    parse_representation,
    snapshot_report,
)

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Pipeline stages
# ----------------------------------------------------------------------
def load_inputs(
    config: AnalysisConfig,
) -> tuple[SimplicialComplex, Group, Representation]:
    complex_ = parse_complex(config.complex_path)
    group = parse_group(config.group_path, complex_, config.cap)
    representation = parse_representation(config.representation_path, group)
    logger.debug(
        "inputs: n=%d, |V|=%d, |Γ|=%d, dim π=%d, C=%.6g",
        complex_.dimension,
        len(complex_.labels),
        group.order,
        representation.dim,
        representation.bound,
    )
    return complex_, group, representation


def _provenance(config: AnalysisConfig) -> dict:
    return {
        "input_digest": input_digest(
            [config.complex_path, config.group_path, config.representation_path]
        ),
        "seed": config.seed,
        "samples": config.samples,
        "p": config.p,
        "tolerances": {
            "rank": config.tol_rank,
            "eig": config.tol_eig,
            "identity": config.tol_identity,
        },
        "versions": {
            "garland_vanishing": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }


def _identity_dicts(config, complex_, group, representation) -> list[dict]:
    results = run_identity_suites(
        complex_,
        group,
        representation,
        samples=config.samples,
        seed=config.seed,
        p=config.p,
        tol=config.tol_identity,
        rank_tol=config.tol_rank,
    )
    return [r.to_dict() for r in results]


def run_spectrum(config: AnalysisConfig) -> RunReport:
    complex_, group, representation = load_inputs(config)
    spectral = evaluate_criterion(complex_, group, representation, config.tol_eig)
    return RunReport("spectrum", _provenance(config), spectral=spectral.to_dict())


def run_cohomology(config: AnalysisConfig) -> RunReport:
    complex_, group, representation = load_inputs(config)
    spectral = None
    if complex_.dimension == 2:
        spectral = evaluate_criterion(complex_, group, representation, config.tol_eig)
    ctx = CochainNormContext(complex_, group, representation, p=config.p)
    cohomology = h1_dimension(ctx, spectral, config.tol_rank)
    report = RunReport("cohomology", _provenance(config), cohomology=cohomology.to_dict())
    if cohomology.crosscheck == CROSSCHECK_INCONSISTENT:
        report.exit_code = EXIT_INCONSISTENT
        report.notes.append("criterion passed but H¹ is nonzero")
    return report


def run_check_identities(config: AnalysisConfig) -> RunReport:
    complex_, group, representation = load_inputs(config)
    report = RunReport(
        "check-identities",
        _provenance(config),
        identities=_identity_dicts(config, complex_, group, representation),
    )
    if report.failed_identities:
        report.exit_code = EXIT_INCONSISTENT
        report.notes.append(f"failed identities: {', '.join(report.failed_identities)}")
    return report


def run_analyze(config: AnalysisConfig) -> RunReport:
    complex_, group, representation = load_inputs(config)
    report = RunReport("analyze", _provenance(config))

    spectral = evaluate_criterion(complex_, group, representation, config.tol_eig)
    report.spectral = spectral.to_dict()

    ctx = CochainNormContext(complex_, group, representation, p=config.p)
    cohomology = h1_dimension(ctx, spectral, config.tol_rank)
    report.cohomology = cohomology.to_dict()

    if spectral.verdict != VERDICT_HYPOTHESIS_FAILED:
        inequality = per_link_inequality_check(
            ctx,
            samples=config.samples,
            rng=np.random.default_rng(config.seed),
            rank_tol=config.tol_rank,
        )
        report.inequality = inequality.to_dict()
        if not inequality.holds:
            report.notes.append("per-link inequality violated on a sample")

    report.identities = _identity_dicts(config, complex_, group, representation)

    if cohomology.crosscheck == CROSSCHECK_INCONSISTENT:
        report.exit_code = EXIT_INCONSISTENT
        report.notes.append("criterion passed but H¹ is nonzero")
    if report.failed_identities:
        report.exit_code = EXIT_INCONSISTENT
        report.notes.append(f"failed identities: {', '.join(report.failed_identities)}")
    return report


# ----------------------------------------------------------------------
# Shared options
# ----------------------------------------------------------------------
def input_options(command):
    command = click.option(
        "--representation",
        "representation_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Representation JSON; trivial 1-dim when omitted.",
    )(command)
    command = click.option(
        "--group",
        "group_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Group JSON; trivial group when omitted.",
    )(command)
    return click.argument("complex_path", type=click.Path(dir_okay=False))(command)


def analysis_options(command):
    options = [
        click.option("--p", "p", type=float, default=None, help="Norm exponent (>= 1)."),
        click.option("--seed", type=int, default=None),
        click.option("--samples", type=int, default=None, help="Random samples per check."),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["human", "json", "csv"]),
            default=None,
        ),
        click.option("--cap", type=int, default=None, help="Group closure cap."),
        click.option("--tol-rank", type=float, default=None),
        click.option("--tol-eig", type=float, default=None),
        click.option("--tol-identity", type=float, default=None),
        click.option(
            "--output",
            "-o",
            type=click.Path(dir_okay=False, writable=True),
            default=None,
            help="Write the report to a file instead of stdout.",
        ),
        click.option("--archive", "archive_url", default=None, help="SQLAlchemy URL."),
        click.option("--note", default="", help="Note stored with the archived version."),
    ]
    for option in reversed(options):
        command = option(command)
    return input_options(command)


def _stage(runner):
    """Wrap a ``run_*`` function as a click callback."""

    def decorator(command):
        @wraps(command)
        def wrapped(output, note, **kwargs):
            config = AnalysisConfig.from_env(**kwargs)
            report = runner(config)
            text = emit(report, config.output_format)
            if output:
                with open(output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                click.echo(text, nl=False)
            if config.archive_url:
                with open_archive(config.archive_url) as session:
                    snapshot_report(session, report, note)
            click.get_current_context().exit(report.exit_code)

        return wrapped

    return decorator


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------
@click.command("analyze")
@analysis_options
@_stage(run_analyze)
def analyze(**_):
    """Criterion, cohomology, per-link inequality and identity suites."""


@click.command("check-identities")
@analysis_options
@_stage(run_check_identities)
def check_identities(**_):
    """Run the numerical identity suites."""


@click.command("spectrum")
@analysis_options
@_stage(run_spectrum)
def spectrum(**_):
    """Link spectral gaps and the criterion verdict."""


@click.command("cohomology")
@analysis_options
@_stage(run_cohomology)
def cohomology(**_):
    """Ranks of the differentials and dim H^k."""


@click.command("history")
@input_options
@click.option("--archive", "archive_url", default=None, help="SQLAlchemy URL.")
def history(complex_path, group_path, representation_path, archive_url):
    """List archived versions for an input set."""
    config = AnalysisConfig.from_env(archive_url=archive_url)
    if not config.archive_url:
        raise click.UsageError("no archive configured (--archive or GARLAND_VANISHING_ARCHIVE_URL)")
    digest = input_digest([complex_path, group_path, representation_path])
    with open_archive(config.archive_url) as session:
        versions = list_versions(session, digest)
    click.echo(json.dumps(versions, ensure_ascii=False, indent=2))


COMMANDS = (analyze, check_identities, spectrum, cohomology, history)
