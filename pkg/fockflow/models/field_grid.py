"""
Sampling grids, sampled flow fields and search regions
"""

from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BeforeValidator, Field, PlainSerializer, WithJsonSchema, model_validator

from .common import ComplexValue, FockFlowModel
from .image_system import Singularity


class FieldGridSpec(FockFlowModel):
    """Rectangular node lattice x_min + i dx, y_min + j dy (nx by ny nodes)"""
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = Field(ge=2)
    ny: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_extent(self) -> "FieldGridSpec":
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid bounds must satisfy x_min < x_max and y_min < y_max")
        return self

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Node coordinates; refining by 2 reproduces coincident nodes bit for bit"""
        x = self.x_min + np.arange(self.nx) * self.dx
        y = self.y_min + np.arange(self.ny) * self.dy
        return x, y

    def nodes(self) -> np.ndarray:
        """Complex node array of shape (nx, ny), 'ij' indexing"""
        x, y = self.axes()
        xx, yy = np.meshgrid(x, y, indexing="ij")
        return xx + 1j * yy


def _rows_to_masked(value: Any) -> Any:
    if isinstance(value, np.ma.MaskedArray):
        return value
    if isinstance(value, np.ndarray):
        return np.ma.masked_invalid(value.astype(float))
    rows = [[np.nan if item is None else float(item) for item in row] for row in value]
    data = np.asarray(rows, dtype=float)
    return np.ma.masked_invalid(data)


def _masked_to_rows(value: np.ma.MaskedArray) -> List[List[Optional[float]]]:
    masked = np.ma.getmaskarray(value)
    data = np.ma.getdata(value)
    return [
        [None if masked[i, j] else float(data[i, j]) for j in range(data.shape[1])]
        for i in range(data.shape[0])
    ]


def _mask_to_rows(value: np.ndarray) -> List[List[bool]]:
    return np.asarray(value, dtype=bool).tolist()


FieldArray = Annotated[
    np.ma.MaskedArray,
    BeforeValidator(_rows_to_masked),
    PlainSerializer(_masked_to_rows, when_used="json"),
    WithJsonSchema({
        "type": "array",
        "items": {"type": "array", "items": {"type": ["number", "null"]}},
        "description": "nx rows of ny values; null at masked nodes",
    }),
]

MaskArray = Annotated[
    np.ndarray,
    BeforeValidator(lambda value: np.asarray(value, dtype=bool)),
    PlainSerializer(_mask_to_rows, when_used="json"),
    WithJsonSchema({
        "type": "array",
        "items": {"type": "array", "items": {"type": "boolean"}},
        "description": "true where the node lies within the guard distance of a singularity",
    }),
]


class FieldGrid(FockFlowModel):
    """Sampled potential phi, stream function psi and velocity (u, v) on a grid"""
    grid: FieldGridSpec
    phi: FieldArray
    psi: FieldArray
    u: FieldArray
    v: FieldArray
    mask: MaskArray

    @model_validator(mode="after")
    def _check_shapes(self) -> "FieldGrid":
        shape = (self.grid.nx, self.grid.ny)
        for name in ("phi", "psi", "u", "v", "mask"):
            if np.shape(getattr(self, name)) != shape:
                raise ValueError(f"{name} must have shape {shape}")
        return self


class DiskRegion(FockFlowModel):
    """Disk |z - center| < radius"""
    kind: Literal["disk"] = "disk"
    center: ComplexValue = 0j
    radius: float = Field(gt=0)

    def bounding_box(self) -> Tuple[float, float, float, float]:
        c = self.center
        return c.real - self.radius, c.real + self.radius, c.imag - self.radius, c.imag + self.radius

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


class RectRegion(FockFlowModel):
    """Rectangle x_min < Re z < x_max, y_min < Im z < y_max"""
    kind: Literal["rect"] = "rect"
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @model_validator(mode="after")
    def _check_extent(self) -> "RectRegion":
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("rectangle must satisfy x_min < x_max and y_min < y_max")
        return self

    def bounding_box(self) -> Tuple[float, float, float, float]:
        return self.x_min, self.x_max, self.y_min, self.y_max

    def contains(self, z: complex) -> bool:
        return self.x_min < z.real < self.x_max and self.y_min < z.imag < self.y_max


Region = Annotated[Union[DiskRegion, RectRegion], Field(discriminator="kind")]


class Zero(FockFlowModel):
    """Isolated zero of a wave function with its multiplicity"""
    position: ComplexValue
    multiplicity: int = Field(ge=1)


class StreamlineSet(FockFlowModel):
    """Traced streamlines and the singularities drawn with them"""
    grid: FieldGridSpec
    streamlines: List[List[ComplexValue]]
    singularities: List[Singularity] = Field(default_factory=list)
