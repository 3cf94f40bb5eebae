"""
Artifact writers: CSV fields through pandas, JSON through pydantic and SVG
streamline figures through matplotlib
"""

import io
from pathlib import Path
from typing import Any, List, Type

import numpy as np
import pandas as pd
from matplotlib import rc_context
from matplotlib.figure import Figure
from pydantic import BaseModel, TypeAdapter

from ..core.exceptions import ArtifactIOError
from ..models.field_grid import FieldGrid, StreamlineSet
from ..models.image_system import SingularityKind
from .logger import get_logger

logger = get_logger(__name__)

FIELD_COLUMNS = ["x", "y", "phi", "psi", "u", "v", "masked"]

# marker shape per singularity kind
MARKER_SHAPES = {
    SingularityKind.VORTEX: "o",
    SingularityKind.ANTI_VORTEX: "s",
    SingularityKind.SOURCE: "^",
    SingularityKind.SINK: "v",
}

_SVG_RC = {"svg.hashsalt": "fockflow", "svg.fonttype": "none"}


def field_to_frame(field: FieldGrid) -> pd.DataFrame:
    """
    Flatten a sampled field to one row per node, x varying slowest

    Args:
        field: Sampled field

    Returns:
        DataFrame with columns x, y, phi, psi, u, v, masked
    """
    x, y = field.grid.axes()
    xx, yy = np.meshgrid(x, y, indexing="ij")
    frame = pd.DataFrame({
        "x": xx.ravel(),
        "y": yy.ravel(),
        "phi": field.phi.filled(np.nan).ravel(),
        "psi": field.psi.filled(np.nan).ravel(),
        "u": field.u.filled(np.nan).ravel(),
        "v": field.v.filled(np.nan).ravel(),
        "masked": np.asarray(field.mask, dtype=int).ravel(),
    })
    return frame[FIELD_COLUMNS]


def field_to_csv(field: FieldGrid) -> str:
    """CSV text of a field; masked nodes leave phi, psi, u, v empty"""
    buffer = io.StringIO()
    field_to_frame(field).to_csv(buffer, index=False, float_format="%.17g", na_rep="", lineterminator="\n")
    return buffer.getvalue()


def model_to_json(model: BaseModel, indent: int = 2) -> str:
    """JSON text of a pydantic model, using published field names"""
    return model.model_dump_json(indent=indent, by_alias=True) + "\n"


def list_to_json(items: List[Any], item_type: Type[BaseModel], indent: int = 2) -> str:
    """JSON array of models of one type"""
    return TypeAdapter(List[item_type]).dump_json(items, indent=indent, by_alias=True).decode("utf-8") + "\n"


def streamlines_to_svg(streamlines: StreamlineSet, title: str = "") -> str:
    """
    Render streamlines and singularity markers as a static SVG figure

    Each streamline is a line artist with gid "streamline-<i>"; each marker
    has gid "marker-<kind>-<i>" and the shape of its kind (vortex circle,
    anti-vortex square, source up-triangle, sink down-triangle).

    Args:
        streamlines: Traced streamlines and singularities
        title: Optional figure title

    Returns:
        SVG document text, identical for identical inputs
    """
    grid = streamlines.grid
    with rc_context(_SVG_RC):
        figure = Figure(figsize=(6, 6))
        axes = figure.add_subplot()
        for i, line in enumerate(streamlines.streamlines):
            points = np.asarray(line, dtype=complex)
            axes.plot(points.real, points.imag, color="tab:blue", linewidth=0.8, gid=f"streamline-{i}")
        for i, sing in enumerate(streamlines.singularities):
            axes.plot(
                [sing.re],
                [sing.im],
                marker=MARKER_SHAPES[sing.kind],
                linestyle="none",
                color="tab:red" if sing.kind.sign > 0 else "tab:purple",
                gid=f"marker-{sing.kind.value}-{i}",
            )
        axes.set_xlim(grid.x_min, grid.x_max)
        axes.set_ylim(grid.y_min, grid.y_max)
        axes.set_aspect("equal")
        if title:
            axes.set_title(title)

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def write_artifact(path: Path, text: str) -> Path:
    """
    Write artifact text to a file

    Args:
        path: Destination
        text: Content

    Returns:
        The written path

    Raises:
        ArtifactIOError: If the file cannot be written
    """
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise ArtifactIOError(f"Cannot write {path}: {e}")
    logger.info(f"wrote {len(text)} characters to {path}")
    return path
