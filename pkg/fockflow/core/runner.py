"""
Job runner: executes one validated job and renders its artifact
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..config.settings import Config
from ..models.field_grid import FieldGridSpec, RectRegion, StreamlineSet, Zero
from ..models.flow_spec import FlowRep, FlowSpec, MixedRep, VortexRep
from ..models.image_system import (
    FlowDecomposition,
    Singularity,
    SingularityKind,
    StripDomain,
    WedgeDomain,
)
from ..models.job_config import JobCommand, JobConfig, OutputFormat
from ..models.report import VerificationReport
from ..models.state_spec import CatState, DisplacedState, QCoherentState, Truncation
from ..utils.exporters import (
    field_to_csv,
    list_to_json,
    model_to_json,
    streamlines_to_svg,
    write_artifact,
)
from ..utils.helpers import RichOutputHelper, format_complex, safe_json_dumps
from ..utils.logger import ContextualLogger, get_logger
from .analysis import ZeroFinder, sample_field, seed_points, trace_streamline
from .exceptions import FockFlowError, ValidationError
from .flow import potential, velocity
from .images import (
    cat_image_system,
    displaced_flow_decomposition,
    q_image_system,
    strip_image_system,
    wedge_image_system,
)
from .states import eval_state, eval_state_derivative
from .verification import run_battery

logger = get_logger(__name__)


@dataclass
class JobOutcome:
    """Rendered artifact text plus what the CLI reports about it"""
    command: JobCommand
    text: str
    passed: bool = True
    summary: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    elapsed: float = 0.0


class JobRunner:
    """
    Runs CLI jobs against a loaded configuration

    Config defaults (truncation, zero search, streamline stepping,
    verification seed) apply wherever the job leaves a value unset.
    """

    def __init__(self, config: Config, output_helper: Optional[RichOutputHelper] = None):
        """
        Initialize the runner

        Args:
            config: Application configuration
            output_helper: Optional Rich output helper for console formatting
        """
        self.config = config
        self.output_helper = output_helper or RichOutputHelper(enabled=config.app_config.enable_rich_output)
        self.finder = ZeroFinder.from_config(config)
        self.logger = ContextualLogger(logger, {"component": "runner"})

        self._handlers = {
            JobCommand.EVAL: self._run_eval,
            JobCommand.FIELD: self._run_field,
            JobCommand.ZEROS: self._run_zeros,
            JobCommand.IMAGES: self._run_images,
            JobCommand.VERIFY: self._run_verify,
            JobCommand.STREAMLINES: self._run_streamlines,
        }

    @property
    def indent(self) -> int:
        return self.config.app_config.json_indent

    def truncation(self, job: JobConfig) -> Truncation:
        """The job's truncation, else the configured default"""
        if job.trunc is not None:
            return job.trunc
        return Truncation(**self.config.truncation_config.model_dump())

    def flow_spec(self, job: JobConfig) -> FlowSpec:
        return FlowSpec(state=job.state, rep=job.rep, trunc=self.truncation(job))

    def run(self, job: JobConfig) -> JobOutcome:
        """
        Execute a job and write its artifact when an output path is set

        Args:
            job: Validated job

        Returns:
            Outcome with the artifact text

        Raises:
            FockFlowError: Domain errors from the core modules
            ArtifactIOError: If the artifact cannot be written
        """
        with self.logger.timed(f"{job.command.value} job") as timing:
            outcome = self._handlers[job.command](job)
            if job.output is not None:
                write_artifact(job.output, outcome.text)
                outcome.summary["output"] = str(job.output)
        outcome.elapsed = timing["elapsed"]
        return outcome

    def _run_eval(self, job: JobConfig) -> JobOutcome:
        fs = self.flow_spec(job)
        z = job.point
        conjugate_velocity = velocity(fs, z)
        result = {
            "z": format_complex(z),
            "psi": format_complex(eval_state(fs.state, z, fs.trunc)),
            "dpsi": format_complex(eval_state_derivative(fs.state, z, fs.trunc)),
            "potential": format_complex(potential(fs, z)),
            "velocity": format_complex(conjugate_velocity),
            "u": conjugate_velocity.real,
            "v": -conjugate_velocity.imag,
        }
        return JobOutcome(job.command, safe_json_dumps(result, indent=self.indent) + "\n")

    def _run_field(self, job: JobConfig) -> JobOutcome:
        grid = sample_field(self.flow_spec(job), job.grid, self.finder)
        if job.resolved_format == OutputFormat.CSV:
            text = field_to_csv(grid)
        else:
            text = model_to_json(grid, self.indent)
        return JobOutcome(job.command, text, summary={"nodes": job.grid.nx * job.grid.ny, "masked": int(grid.mask.sum())})

    def _run_zeros(self, job: JobConfig) -> JobOutcome:
        zeros = self.finder.find(job.state, job.region, self.truncation(job))
        return JobOutcome(job.command, list_to_json(zeros, Zero, self.indent), summary={"zeros": len(zeros)})

    def _run_images(self, job: JobConfig) -> JobOutcome:
        if job.domain is not None:
            if isinstance(job.domain, WedgeDomain):
                system = wedge_image_system(job.base, job.rep, job.domain.n)
            elif isinstance(job.domain, StripDomain):
                system = strip_image_system(job.base, job.rep, job.domain.h, job.M)
            else:
                system = strip_image_system(job.base, job.rep, job.domain.h, job.M, beta=job.domain.beta)
        elif isinstance(job.state, QCoherentState):
            system = q_image_system(job.state.q, job.state.alpha, job.M, job.rep)
        elif isinstance(job.state, CatState):
            system = cat_image_system(job.state.alpha, job.state.parity, job.rep, job.M)
        elif isinstance(job.state, DisplacedState):
            singularity, background = displaced_flow_decomposition(job.state.n, job.state.alpha, job.rep)
            decomposition = FlowDecomposition(singularity=singularity, background=background)
            return JobOutcome(job.command, model_to_json(decomposition, self.indent))
        else:
            raise ValidationError(
                f"no image system for '{job.state.kind}' states; pass a domain and a base position"
            )
        return JobOutcome(
            job.command,
            model_to_json(system, self.indent),
            summary={"singularities": len(system.singularities), "domain": system.domain.kind},
        )

    def _run_verify(self, job: JobConfig) -> JobOutcome:
        seed = job.seed if job.seed is not None else self.config.verification_config.seed
        reports: List[VerificationReport] = run_battery(job.names, job.params, seed)
        failed = [report.name for report in reports if not report.passed]
        return JobOutcome(
            job.command,
            list_to_json(reports, VerificationReport, self.indent),
            passed=not failed,
            summary={"items": len(reports), "failed": failed},
            rows=[
                {"name": r.name, "max_error": f"{r.max_error:.3e}", "tolerance": f"{r.tolerance:.1e}",
                 "pass": "yes" if r.passed else "NO"}
                for r in reports
            ],
        )

    def _run_streamlines(self, job: JobConfig) -> JobOutcome:
        fs = self.flow_spec(job)
        grid: FieldGridSpec = job.grid
        settings = self.config.streamline_config
        bounds = (grid.x_min, grid.x_max, grid.y_min, grid.y_max)

        region = RectRegion(x_min=grid.x_min, x_max=grid.x_max, y_min=grid.y_min, y_max=grid.y_max)
        try:
            zeros = self.finder.find(fs.state, region, fs.trunc)
        except FockFlowError as e:
            self.logger.warning(f"no singularity markers: {e}")
            zeros = []

        seeds = job.seeds
        if seeds is None:
            seeds = _default_seeds(zeros, grid, settings.seeds_per_singularity)

        lines = []
        for seed in seeds:
            try:
                lines.append(trace_streamline(
                    fs, seed, job.step or settings.step, job.n_steps or settings.n_steps, bounds
                ))
            except FockFlowError as e:
                self.logger.warning(f"skipping seed {format_complex(seed)}: {e}")

        markers = [_marker(zero, job.rep) for zero in zeros]
        result = StreamlineSet(grid=grid, streamlines=lines, singularities=[m for m in markers if m is not None])
        if job.resolved_format == OutputFormat.SVG:
            text = streamlines_to_svg(result, title=f"{fs.state.kind} / {fs.rep.kind}")
        else:
            text = model_to_json(result, self.indent)
        return JobOutcome(job.command, text, summary={"streamlines": len(lines), "markers": len(result.singularities)})

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.logger.debug(f"job aborted: {exc_val}")


def _default_seeds(zeros: List[Zero], grid: FieldGridSpec, per_zero: int) -> List[complex]:
    """Rings around each zero; a line across the grid when there are none"""
    extent = min(grid.x_max - grid.x_min, grid.y_max - grid.y_min)
    if zeros:
        return seed_points([zero.position for zero in zeros], per_zero, 0.1 * extent)
    x_mid = (grid.x_min + grid.x_max) / 2.0
    count = 2 * per_zero
    return [
        complex(x_mid, grid.y_min + (grid.y_max - grid.y_min) * (j + 0.5) / count)
        for j in range(count)
    ]


def _marker(zero: Zero, rep: FlowRep) -> Optional[Singularity]:
    if isinstance(rep, VortexRep) or (isinstance(rep, MixedRep) and rep.gamma != 0):
        strength = rep.gamma
        kind = SingularityKind.VORTEX if strength > 0 else SingularityKind.ANTI_VORTEX
    else:
        strength = rep.n_strength
        kind = SingularityKind.SOURCE if strength > 0 else SingularityKind.SINK
    if strength == 0 or not math.isfinite(strength):
        return None
    return Singularity.at(zero.position, kind, abs(strength), zero.multiplicity)


def create_runner(config: Config, output_helper: Optional[RichOutputHelper] = None) -> JobRunner:
    """
    Factory function to create a job runner

    Args:
        config: Application configuration
        output_helper: Optional Rich output helper

    Returns:
        JobRunner instance
    """
    return JobRunner(config, output_helper)
