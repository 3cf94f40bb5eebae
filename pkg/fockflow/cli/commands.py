"""
CLI commands for fockflow
"""

import functools
import json
import sys
from typing import Any, Dict, List, Optional, Tuple

import click
import pydantic
import yaml

from ..core.exceptions import (
    ArtifactIOError,
    CLIError,
    ConfigurationError,
    FockFlowError,
    UnknownIdentityError,
    ValidationError,
)
from ..core.runner import create_runner
from ..core.verification import registered_identities
from ..models.field_grid import DiskRegion, FieldGrid, FieldGridSpec, RectRegion
from ..models.image_system import ImageSystem, ObliqueStripDomain, StripDomain, WedgeDomain
from ..models.job_config import JobConfig
from ..models.report import VerificationReport
from ..models.state_spec import state_adapter
from ..utils.helpers import parse_complex, split_spec

EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

DEFAULT_REP = "vortex:6.283185307179586"


def exit_code_for(error: BaseException) -> int:
    """Exit code of an exception: 2 config/parse, 3 domain, 4 I/O"""
    if isinstance(error, (pydantic.ValidationError, ValidationError, ConfigurationError, CLIError,
                          UnknownIdentityError, ValueError)):
        return EXIT_USAGE
    if isinstance(error, (ArtifactIOError, OSError)):
        return EXIT_IO
    return EXIT_DOMAIN


def emit_error(error: BaseException, code: int) -> None:
    """Machine-readable error object on stderr"""
    payload = {"error": type(error).__name__, "message": str(error), "exit_code": code}
    click.echo(json.dumps(payload), err=True)


def handle_job_errors(func):
    """Decorator mapping job failures to exit codes and a JSON error object"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (FockFlowError, pydantic.ValidationError, ValueError, OSError) as e:
            code = exit_code_for(e)
            ctx = click.get_current_context()
            logger = ctx.obj.get('logger') if ctx.obj else None
            if logger:
                logger.debug(f"job failed with exit code {code}: {e}")
            emit_error(e, code)
            sys.exit(code)

    return wrapper


# Flag parsing


def parse_grid(text: str) -> FieldGridSpec:
    """x_min:x_max:y_min:y_max:n[:ny]"""
    parts = split_spec(text, 5, "grid")
    try:
        nx = int(parts[4])
        ny = int(parts[5]) if len(parts) > 5 else nx
        return FieldGridSpec(
            x_min=float(parts[0]), x_max=float(parts[1]), y_min=float(parts[2]), y_max=float(parts[3]), nx=nx, ny=ny
        )
    except ValueError as e:
        raise CLIError(f"Invalid grid spec '{text}': {e}")


def parse_region(text: str):
    """disk:<center>:<radius> or rect:x_min:x_max:y_min:y_max"""
    parts = split_spec(text, 3, "region")
    try:
        if parts[0] == "disk" and len(parts) == 3:
            return DiskRegion(center=parse_complex(parts[1]), radius=float(parts[2]))
        if parts[0] == "rect" and len(parts) == 5:
            return RectRegion(
                x_min=float(parts[1]), x_max=float(parts[2]), y_min=float(parts[3]), y_max=float(parts[4])
            )
    except ValueError as e:
        raise CLIError(f"Invalid region spec '{text}': {e}")
    raise CLIError(f"Invalid region spec '{text}' (expected disk:<c>:<r> or rect:<x0>:<x1>:<y0>:<y1>)")


def parse_domain(text: str):
    """wedge:<n>, strip:<h> or oblique:<h>:<beta>"""
    parts = split_spec(text, 2, "domain")
    try:
        if parts[0] == "wedge" and len(parts) == 2:
            return WedgeDomain(n=int(parts[1]))
        if parts[0] == "strip" and len(parts) == 2:
            return StripDomain(h=float(parts[1]))
        if parts[0] == "oblique" and len(parts) == 3:
            return ObliqueStripDomain(h=float(parts[1]), beta=float(parts[2]))
    except ValueError as e:
        raise CLIError(f"Invalid domain spec '{text}': {e}")
    raise CLIError(f"Invalid domain spec '{text}' (expected wedge:<n>, strip:<h> or oblique:<h>:<beta>)")


def _truncation(max_terms: Optional[int], tol: Optional[float]) -> Optional[Dict[str, Any]]:
    if max_terms is None and tol is None:
        return None
    values: Dict[str, Any] = {}
    if max_terms is not None:
        values["max_terms"] = max_terms
    if tol is not None:
        values["tol"] = tol
    return values


def _execute(ctx: click.Context, payload: Dict[str, Any]) -> None:
    """Validate a job, run it and route its artifact"""
    config = ctx.obj['config']
    output_helper = ctx.obj['output_helper']

    if payload.get("trunc") is not None:
        payload["trunc"] = {**config.truncation_config.model_dump(), **payload["trunc"]}
    job = JobConfig.model_validate({k: v for k, v in payload.items() if v is not None})

    with create_runner(config, output_helper) as runner:
        outcome = runner.run(job)

    if job.output is None:
        click.echo(outcome.text, nl=False)
    else:
        output_helper.print_success(f"Wrote {job.resolved_format.value} artifact to {job.output}")
    if outcome.rows:
        output_helper.print_table(outcome.rows, title="Verification battery")
    elif outcome.summary:
        output_helper.print_info(", ".join(f"{k}={v}" for k, v in outcome.summary.items()))

    if not outcome.passed:
        output_helper.print_error(f"Verification failed: {', '.join(outcome.summary.get('failed', []))}")
        sys.exit(EXIT_VERIFICATION_FAILED)


def state_option(required: bool = True):
    return click.option(
        '--state',
        required=required,
        help='State as JSON, e.g. \'{"kind":"cat","parity":"odd","alpha":"1+0i"}\''
    )


def rep_option(func):
    return click.option(
        '--rep',
        default=DEFAULT_REP,
        show_default=True,
        help='Flow representation: vortex:<G>, source:<N> or mixed:<N>:<G>'
    )(func)


def truncation_options(func):
    func = click.option('--max-terms', type=int, help='Series term budget (default from config)')(func)
    func = click.option('--tol', type=float, help='Series relative tolerance (default from config)')(func)
    return func


def output_options(func):
    func = click.option('--out', 'output', type=click.Path(dir_okay=False), help='Artifact path; stdout when omitted')(func)
    func = click.option(
        '--format', 'output_format', type=click.Choice(['csv', 'json', 'svg']),
        help='Artifact format (default: from --out suffix, else json)'
    )(func)
    return func


@click.command()
@state_option()
@rep_option
@click.option('--z', 'point', required=True, help='Evaluation point, e.g. 0.5+1i')
@truncation_options
@output_options
@click.pass_context
@handle_job_errors
def eval_command(ctx: click.Context, state: str, rep: str, point: str, max_terms: Optional[int],
                 tol: Optional[float], output: Optional[str], output_format: Optional[str]):
    """
    Evaluate Psi, Psi', the complex potential and the velocity at a point

    Examples:

        fockflow eval --state '{"kind":"fock","n":2}' --z 0.5+0.5i
    """
    _execute(ctx, {
        "command": "eval", "state": state, "rep": rep, "point": point,
        "trunc": _truncation(max_terms, tol), "output": output, "format": output_format,
    })


@click.command()
@state_option()
@rep_option
@click.option('--grid', required=True, help='x_min:x_max:y_min:y_max:n[:ny]')
@truncation_options
@output_options
@click.pass_context
@handle_job_errors
def field_command(ctx: click.Context, state: str, rep: str, grid: str, max_terms: Optional[int],
                  tol: Optional[float], output: Optional[str], output_format: Optional[str]):
    """
    Sample phi, psi, u and v on a grid (CSV or JSON)

    Examples:

        fockflow field --state '{"kind":"cat","parity":"odd","alpha":"1+0i"}' \\
            --rep vortex:6.2832 --grid -4:4:-4:4:200 --out field.csv
    """
    _execute(ctx, {
        "command": "field", "state": state, "rep": rep, "grid": parse_grid(grid),
        "trunc": _truncation(max_terms, tol), "output": output, "format": output_format,
    })


@click.command()
@state_option()
@click.option('--region', required=True, help='disk:<center>:<radius> or rect:x_min:x_max:y_min:y_max')
@truncation_options
@output_options
@click.pass_context
@handle_job_errors
def zeros_command(ctx: click.Context, state: str, region: str, max_terms: Optional[int], tol: Optional[float],
                  output: Optional[str], output_format: Optional[str]):
    """
    Find the zeros of Psi (the flow's point singularities) in a region

    Examples:

        fockflow zeros --state '{"kind":"cat","parity":"odd","alpha":"1+0i"}' --region disk:0:4
    """
    _execute(ctx, {
        "command": "zeros", "state": state, "region": parse_region(region),
        "trunc": _truncation(max_terms, tol), "output": output, "format": output_format,
    })


@click.command()
@state_option(required=False)
@rep_option
@click.option('--domain', help='wedge:<n>, strip:<h> or oblique:<h>:<beta>')
@click.option('--base', help='Base singularity position for --domain, e.g. 0.2+0.1i')
@click.option('--M', 'M', type=int, default=10, show_default=True, help='Truncation index of image lattices')
@output_options
@click.pass_context
@handle_job_errors
def images_command(ctx: click.Context, state: Optional[str], rep: str, domain: Optional[str], base: Optional[str],
                   M: int, output: Optional[str], output_format: Optional[str]):
    """
    List the image singularities of a state or of a bounded domain

    Examples:

        fockflow images --state '{"kind":"qcoherent","q":0.5,"alpha":"1+0i"}' --M 4 --out imgs.json

        fockflow images --domain wedge:3 --base 1+0.5i
    """
    _execute(ctx, {
        "command": "images", "state": state, "rep": rep,
        "domain": parse_domain(domain) if domain else None, "base": base, "M": M,
        "output": output, "format": output_format,
    })


@click.command()
@click.option('--all', 'run_all', is_flag=True, help='Run the whole battery')
@click.option('--name', 'names', multiple=True, help='Battery item to run (repeatable)')
@click.option('--seed', type=int, help='Base seed (default from config)')
@output_options
@click.pass_context
@handle_job_errors
def verify_command(ctx: click.Context, run_all: bool, names: Tuple[str, ...], seed: Optional[int],
                   output: Optional[str], output_format: Optional[str]):
    """
    Run identity checks and print their reports; exits 1 if any fails

    Examples:

        fockflow verify --all

        fockflow verify --name strip_closed_form --name cat_zero_lattice
    """
    if not run_all and not names:
        raise CLIError(f"pass --all or --name (one of: {', '.join(registered_identities())})")
    _execute(ctx, {
        "command": "verify", "names": None if run_all else list(names), "seed": seed,
        "output": output, "format": output_format,
    })


@click.command()
@state_option()
@rep_option
@click.option('--grid', required=True, help='Plot window x_min:x_max:y_min:y_max:n (n is ignored)')
@click.option('--seed-point', 'seed_points', multiple=True, help='Streamline seed (repeatable)')
@click.option('--step', type=float, help='RK4 step (default from config)')
@click.option('--n-steps', type=int, help='Maximum steps per streamline (default from config)')
@truncation_options
@output_options
@click.pass_context
@handle_job_errors
def streamlines_command(ctx: click.Context, state: str, rep: str, grid: str, seed_points: Tuple[str, ...],
                        step: Optional[float], n_steps: Optional[int], max_terms: Optional[int],
                        tol: Optional[float], output: Optional[str], output_format: Optional[str]):
    """
    Trace streamlines and render them (SVG) or list them (JSON)

    Examples:

        fockflow streamlines --state '{"kind":"fock","n":1}' --grid -2:2:-2:2:2 --out lines.svg
    """
    _execute(ctx, {
        "command": "streamlines", "state": state, "rep": rep, "grid": parse_grid(grid),
        "seeds": list(seed_points) or None, "step": step, "n_steps": n_steps,
        "trunc": _truncation(max_terms, tol), "output": output, "format": output_format,
    })


@click.command()
@click.option('--job', 'job_path', required=True, type=click.Path(exists=True, dir_okay=False),
              help='YAML or JSON job file')
@click.pass_context
@handle_job_errors
def run_command(ctx: click.Context, job_path: str):
    """
    Run a job described in a YAML or JSON file

    Grid, region and domain entries take the same text forms as the flags or
    their full mappings.

    Examples:

        fockflow run --job cat_field.yaml
    """
    try:
        with open(job_path, 'r', encoding='utf-8') as f:
            payload = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise CLIError(f"Invalid job file {job_path}: {e}")
    if not isinstance(payload, dict):
        raise CLIError(f"Job file {job_path} must hold a mapping")

    parsers = {"grid": parse_grid, "region": parse_region, "domain": parse_domain}
    for key, parser in parsers.items():
        if isinstance(payload.get(key), str):
            payload[key] = parser(payload[key])
    _execute(ctx, payload)


SCHEMAS = {
    "StateSpec": lambda: state_adapter.json_schema(),
    "ImageSystem": lambda: ImageSystem.model_json_schema(),
    "VerificationReport": lambda: VerificationReport.model_json_schema(by_alias=True),
    "FieldGrid": lambda: FieldGrid.model_json_schema(),
    "JobConfig": lambda: JobConfig.model_json_schema(),
}


@click.command()
@click.option('--name', type=click.Choice(sorted(SCHEMAS)), help='Print one schema instead of all')
@click.pass_context
def schema_command(ctx: click.Context, name: Optional[str]):
    """Print the JSON schemas of the published artifact types"""
    selected: List[str] = [name] if name else sorted(SCHEMAS)
    schemas = {key: SCHEMAS[key]() for key in selected}
    click.echo(json.dumps(schemas[name] if name else schemas, indent=2))

