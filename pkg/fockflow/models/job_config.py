"""
Job configuration: one CLI job as a validated model
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional

from pydantic import Field, field_validator, model_validator

from .common import ComplexValue, FockFlowModel
from .field_grid import FieldGridSpec, Region
from .flow_spec import FlowRep, VortexRep, parse_flow_rep
from .image_system import DomainSpec
from .state_spec import StateSpec, Truncation, parse_state


class JobCommand(str, Enum):
    """Jobs the CLI can run"""
    EVAL = "eval"
    FIELD = "field"
    ZEROS = "zeros"
    IMAGES = "images"
    VERIFY = "verify"
    STREAMLINES = "streamlines"


class OutputFormat(str, Enum):
    """Artifact formats"""
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


OUTPUT_FORMATS: Dict[JobCommand, FrozenSet[OutputFormat]] = {
    JobCommand.EVAL: frozenset({OutputFormat.JSON}),
    JobCommand.FIELD: frozenset({OutputFormat.CSV, OutputFormat.JSON}),
    JobCommand.ZEROS: frozenset({OutputFormat.JSON}),
    JobCommand.IMAGES: frozenset({OutputFormat.JSON}),
    JobCommand.VERIFY: frozenset({OutputFormat.JSON}),
    JobCommand.STREAMLINES: frozenset({OutputFormat.SVG, OutputFormat.JSON}),
}

REQUIRED_FIELDS: Dict[JobCommand, tuple] = {
    JobCommand.EVAL: ("state", "point"),
    JobCommand.FIELD: ("state", "grid"),
    JobCommand.ZEROS: ("state", "region"),
    JobCommand.IMAGES: (),
    JobCommand.VERIFY: (),
    JobCommand.STREAMLINES: ("state", "grid"),
}


class JobConfig(FockFlowModel):
    """
    A single job: command, inputs and artifact destination

    The output format defaults to the output file's suffix, or JSON.
    """
    command: JobCommand
    state: Optional[StateSpec] = None
    rep: FlowRep = VortexRep(gamma=2.0 * math.pi)
    trunc: Optional[Truncation] = None

    point: Optional[ComplexValue] = None
    grid: Optional[FieldGridSpec] = None
    region: Optional[Region] = None
    domain: Optional[DomainSpec] = None
    base: Optional[ComplexValue] = None
    M: int = Field(default=10, ge=0)

    names: Optional[List[str]] = None
    seed: Optional[int] = None
    params: Dict[str, Dict[str, Any]] = Field(default_factory=dict)

    seeds: Optional[List[ComplexValue]] = None
    step: Optional[float] = Field(default=None, gt=0)
    n_steps: Optional[int] = Field(default=None, ge=1)

    output: Optional[Path] = None
    format: Optional[OutputFormat] = None

    @field_validator("state", mode="before")
    @classmethod
    def _parse_state(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_state(value)
        return value

    @field_validator("rep", mode="before")
    @classmethod
    def _parse_rep(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_flow_rep(value)
        return value

    @model_validator(mode="after")
    def _check_job(self) -> "JobConfig":
        missing = [name for name in REQUIRED_FIELDS[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"'{self.command.value}' needs {', '.join(missing)}")
        if self.command == JobCommand.IMAGES:
            if self.domain is not None and self.base is None:
                raise ValueError("'images' with a domain needs a base singularity position")
            if self.domain is None and self.state is None:
                raise ValueError("'images' needs a state or a domain with a base position")
        if self.resolved_format not in OUTPUT_FORMATS[self.command]:
            allowed = ", ".join(sorted(f.value for f in OUTPUT_FORMATS[self.command]))
            raise ValueError(f"'{self.command.value}' writes {allowed}, not {self.resolved_format.value}")
        return self

    @property
    def resolved_format(self) -> OutputFormat:
        """Explicit format, else the output suffix, else JSON"""
        if self.format is not None:
            return self.format
        if self.output is not None and self.output.suffix:
            suffix = self.output.suffix.lstrip(".").lower()
            try:
                return OutputFormat(suffix)
            except ValueError:
                raise ValueError(f"cannot infer an output format from '{self.output.name}'")
        return OutputFormat.JSON
