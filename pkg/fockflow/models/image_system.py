"""
Image system models: singularities, domains and generated image listings
"""

import math
from enum import Enum
from typing import Annotated, List, Literal, Optional, Union

from pydantic import Field, field_validator

from .common import ComplexValue, FockFlowModel


class SingularityKind(str, Enum):
    """Point singularity kinds; anti_vortex and sink carry negative effective strength"""
    VORTEX = "vortex"
    ANTI_VORTEX = "anti_vortex"
    SOURCE = "source"
    SINK = "sink"

    @property
    def sign(self) -> int:
        return -1 if self in (SingularityKind.ANTI_VORTEX, SingularityKind.SINK) else 1

    @property
    def is_vortex(self) -> bool:
        return self in (SingularityKind.VORTEX, SingularityKind.ANTI_VORTEX)


class Singularity(FockFlowModel):
    """A point vortex or source listed by an image system"""
    re: float
    im: float
    kind: SingularityKind
    strength: float = Field(gt=0)
    multiplicity: int = Field(default=1, ge=1)

    @property
    def position(self) -> complex:
        return complex(self.re, self.im)

    @property
    def effective_strength(self) -> float:
        """Signed strength times multiplicity"""
        return self.kind.sign * self.strength * self.multiplicity

    @classmethod
    def at(cls, position: complex, kind: SingularityKind, strength: float, multiplicity: int = 1) -> "Singularity":
        return cls(re=position.real, im=position.imag, kind=kind, strength=strength, multiplicity=multiplicity)


class WedgeDomain(FockFlowModel):
    """Wedge 0 < arg z < pi/n"""
    kind: Literal["wedge"] = "wedge"
    n: int = Field(ge=1)

    @property
    def angle(self) -> float:
        return math.pi / self.n


class StripDomain(FockFlowModel):
    """Horizontal strip |Im z| < h/2"""
    kind: Literal["strip"] = "strip"
    h: float = Field(gt=0)


class ObliqueStripDomain(FockFlowModel):
    """Strip of width h whose centre line passes through `offset` at inclination beta"""
    kind: Literal["oblique_strip"] = "oblique_strip"
    h: float = Field(gt=0)
    beta: float
    offset: ComplexValue = 0j

    @field_validator("beta")
    @classmethod
    def _beta_range(cls, value: float) -> float:
        # beta = pi/2 is the vertical strip (purely imaginary alpha)
        if not (-math.pi / 2 < value <= math.pi / 2):
            raise ValueError("beta must lie in (-pi/2, pi/2]")
        return value


class GeometricDomain(FockFlowModel):
    """q-geometric image set of the Jackson q-exponential"""
    kind: Literal["geometric"] = "geometric"
    q: float = Field(gt=0)
    alpha: ComplexValue


DomainSpec = Annotated[Union[WedgeDomain, StripDomain, ObliqueStripDomain], Field(discriminator="kind")]
ImageDomain = Annotated[
    Union[WedgeDomain, StripDomain, ObliqueStripDomain, GeometricDomain],
    Field(discriminator="kind"),
]


class ImageSystem(FockFlowModel):
    """Generator descriptor plus the explicit finite list of singularities"""
    domain: ImageDomain
    truncation_index: int = Field(ge=0)
    singularities: List[Singularity]
    truncated: bool
    lattice_inclination: Optional[float] = None


class FlowDecomposition(FockFlowModel):
    """Point singularity plus uniform background stream of a displaced state"""
    singularity: Optional[Singularity] = None
    background: ComplexValue
