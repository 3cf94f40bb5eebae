import json

import numpy as np
import pytest

from fockflow.core.analysis import sample_field
from fockflow.core.exceptions import ArtifactIOError
from fockflow.models.field_grid import FieldGridSpec, StreamlineSet, Zero
from fockflow.models.flow_spec import FlowSpec
from fockflow.models.image_system import Singularity, SingularityKind
from fockflow.models.state_spec import FockState
from fockflow.utils.exporters import (
    FIELD_COLUMNS,
    field_to_csv,
    field_to_frame,
    list_to_json,
    model_to_json,
    streamlines_to_svg,
    write_artifact,
)


@pytest.fixture
def fock_field(unit_vortex):
    fs = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    return sample_field(fs, FieldGridSpec(x_min=-1, x_max=1, y_min=-1, y_max=1, nx=3, ny=3))


def test_field_frame_layout(fock_field):
    frame = field_to_frame(fock_field)
    assert list(frame.columns) == FIELD_COLUMNS
    assert len(frame) == 9
    # x varies slowest
    assert list(frame["x"][:3]) == [-1.0, -1.0, -1.0]
    assert frame["masked"].tolist().count(1) == 1


def test_field_csv_leaves_masked_values_empty(fock_field):
    lines = field_to_csv(fock_field).splitlines()
    assert lines[0] == "x,y,phi,psi,u,v,masked"
    center = lines[1 + 4]
    assert center.startswith("0,0,")
    assert center.endswith(",,,,1")


def test_field_json_uses_null_for_masked(fock_field):
    data = json.loads(model_to_json(fock_field))
    assert data["phi"][1][1] is None
    assert data["mask"][1][1] is True
    assert data["grid"]["nx"] == 3


def test_list_to_json_formats_complex():
    text = list_to_json([Zero(position=1 - 1j, multiplicity=2)], Zero)
    assert json.loads(text) == [{"position": "1.0-1.0i", "multiplicity": 2}]


def test_svg_is_reproducible_and_tagged():
    grid = FieldGridSpec(x_min=-2, x_max=2, y_min=-2, y_max=2, nx=2, ny=2)
    lines = StreamlineSet(
        grid=grid,
        streamlines=[[1 + 0j, 0.9 + 0.4j, 0.6 + 0.8j]],
        singularities=[Singularity.at(0j, SingularityKind.VORTEX, 1.0), Singularity.at(1j, SingularityKind.SINK, 1.0)],
    )
    first = streamlines_to_svg(lines, title="fock")
    assert first == streamlines_to_svg(lines, title="fock")
    assert 'id="streamline-0"' in first
    assert 'id="marker-vortex-0"' in first
    assert 'id="marker-sink-1"' in first


def test_write_artifact(tmp_path):
    path = write_artifact(tmp_path / "out.json", "{}\n")
    assert path.read_text() == "{}\n"
    with pytest.raises(ArtifactIOError):
        write_artifact(tmp_path / "missing" / "out.json", "{}")


def test_mask_column_matches_field(fock_field):
    frame = field_to_frame(fock_field)
    assert np.array_equal(frame["masked"].to_numpy().reshape(3, 3), fock_field.mask.astype(int))
