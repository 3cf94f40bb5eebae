import cmath
import math

import numpy as np
import pytest

from conftest import close
from fockflow.core.analysis import (
    ZeroFinder,
    count_zeros,
    find_zeros,
    sample_field,
    seed_points,
    trace_streamline,
    winding_number,
)
from fockflow.core.exceptions import MultiplicityCapError, SeedSingularityError
from fockflow.core.flow import potential
from fockflow.models.field_grid import DiskRegion, FieldGridSpec, RectRegion
from fockflow.models.flow_spec import CircleContour, FlowSpec
from fockflow.models.state_spec import (
    CatState,
    CoefficientState,
    CoherentState,
    DisplacedState,
    FockState,
    QCoherentState,
    QutritState,
)


def test_count_zeros():
    assert count_zeros(FockState(n=3), CircleContour(radius=1.0)) == 3
    assert count_zeros(CatState(parity="odd", alpha=1), CircleContour(radius=4.0)) == 3
    assert count_zeros(CoherentState(alpha=2 - 1j), CircleContour(center=0.5, radius=2.0)) == 0


def test_winding_number_of_polynomial():
    assert winding_number(lambda z: z ** 2 - 0.25, CircleContour(radius=1.0, samples=256)) == pytest.approx(2.0)
    assert winding_number(lambda z: z - 3, CircleContour(radius=1.0, samples=256)) == pytest.approx(0.0, abs=1e-12)


def test_cat_zeros_in_disk():
    zeros = find_zeros(CatState(parity="odd", alpha=1), DiskRegion(radius=4.0))
    assert len(zeros) == 3
    by_height = sorted(zeros, key=lambda zero: zero.position.imag)
    for zero, expected in zip(by_height, [-math.pi * 1j, 0j, math.pi * 1j]):
        assert abs(zero.position - expected) < 1e-8
        assert zero.multiplicity == 1


@pytest.mark.parametrize("alpha", [1, cmath.exp(1j * math.pi / 4), 2j])
def test_cat_zero_lattice(alpha):
    period = 1j * math.pi / alpha
    radius = 3.5 * math.pi / abs(alpha)
    zeros = find_zeros(CatState(parity="odd", alpha=alpha), DiskRegion(radius=radius))
    assert len(zeros) == 7
    for zero in zeros:
        n = round((zero.position / period).real)
        assert abs(zero.position - n * period) < 1e-8


def test_displaced_zero_multiplicity():
    zeros = find_zeros(DisplacedState(n=2, alpha=1 + 1j), DiskRegion(radius=3.0))
    assert len(zeros) == 1
    assert abs(zeros[0].position - (1 - 1j)) < 1e-8
    assert zeros[0].multiplicity == 2


def test_multiplicity_cap():
    finder = ZeroFinder(multiplicity_cap=3)
    with pytest.raises(MultiplicityCapError):
        finder.find(FockState(n=5), DiskRegion(radius=1.0))


def test_rect_region_filters_zeros():
    zeros = find_zeros(CatState(parity="odd", alpha=1), RectRegion(x_min=-1, x_max=1, y_min=1, y_max=4))
    assert [round(z.position.imag, 8) for z in zeros] == [round(math.pi, 8)]


def test_small_q_state_has_no_zeros():
    assert find_zeros(QCoherentState(q=0.5, alpha=1), DiskRegion(radius=1.0)) == []


def test_finder_reads_config(config):
    finder = ZeroFinder.from_config(config)
    assert finder.max_depth == config.zero_search_config.max_depth
    assert finder.samples == config.quadrature_config.samples


def test_sample_field_masks_zero_and_refines_exactly(unit_vortex):
    fs = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    coarse = sample_field(fs, FieldGridSpec(x_min=-1, x_max=1, y_min=-1, y_max=1, nx=3, ny=3))
    fine = sample_field(fs, FieldGridSpec(x_min=-1, x_max=1, y_min=-1, y_max=1, nx=5, ny=5))

    assert coarse.mask[1, 1]
    assert fine.mask[2, 2]
    assert int(coarse.mask.sum()) == 1

    for name in ("phi", "psi", "u", "v"):
        a = getattr(coarse, name)
        b = getattr(fine, name)[::2, ::2]
        assert np.array_equal(np.ma.getmaskarray(a), np.ma.getmaskarray(b))
        assert np.array_equal(a.compressed(), b.compressed())


def test_sample_field_velocity_components(unit_vortex):
    fs = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    field = sample_field(fs, FieldGridSpec(x_min=1, x_max=2, y_min=-0.5, y_max=0.5, nx=2, ny=3))
    # conjugate velocity i / z at z = 1 gives (u, v) = (0, -1)
    assert field.u[0, 1] == pytest.approx(0.0, abs=1e-15)
    assert field.v[0, 1] == pytest.approx(-1.0)


def test_vortex_streamline_is_a_circle(unit_vortex):
    fs = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    points = trace_streamline(fs, 1.0, 1e-2, 300)
    assert len(points) == 301
    assert max(abs(abs(z) - 1.0) for z in points) < 1e-8


def test_streamline_stops_at_bounds(unit_source):
    fs = FlowSpec(state=FockState(n=1), rep=unit_source)
    points = trace_streamline(fs, 0.5 + 0.1j, 0.05, 1000, bounds=(-2, 2, -2, 2))
    assert len(points) < 1001
    assert all(-2 <= z.real <= 2 and -2 <= z.imag <= 2 for z in points)
    assert abs(points[-1]) > abs(points[0])


def test_streamline_seed_on_singularity(unit_vortex):
    fs = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    with pytest.raises(SeedSingularityError):
        trace_streamline(fs, 0, 1e-3, 10)


def test_seed_points_ring():
    seeds = seed_points([0, 2j], 4, 0.5)
    assert len(seeds) == 8
    assert all(close(abs(z), 0.5) for z in seeds[:4])
    assert all(close(abs(z - 2j), 0.5) for z in seeds[4:])


@pytest.mark.parametrize("state, radius", [
    (FockState(n=3), 1.0),
    (CoherentState(alpha=1 + 1j), 2.0),
    (DisplacedState(n=2, alpha=0.5 - 0.5j), 2.0),
    (CatState(parity="odd", alpha=1), 4.0),
    (CatState(parity="even", alpha=1), 4.0),
    (QutritState(sector=1, alpha=1.0), 1.5),
    (QCoherentState(q=2.0, alpha=1), 5.0),
    (CoefficientState(c=[1.0, 0.5j, -0.25]), 3.0),
])
def test_found_zeros_agree_with_contour_count(state, radius):
    zeros = find_zeros(state, DiskRegion(radius=radius))
    assert sum(z.multiplicity for z in zeros) == count_zeros(state, CircleContour(radius=radius))


@pytest.mark.parametrize("state, seed", [
    (FockState(n=1), 1.0),
    (FockState(n=2), 0.5 + 0.5j),
    (CatState(parity="odd", alpha=1), 0.5 + 0.2j),
])
def test_stream_function_is_conserved_along_streamline(state, seed, unit_vortex):
    fs = FlowSpec(state=state, rep=unit_vortex)
    points = trace_streamline(fs, seed, 1e-3, 10_000)
    assert len(points) == 10_001
    psi0 = potential(fs, seed).imag
    assert max(abs(potential(fs, z).imag - psi0) for z in points[::50]) <= 1e-5
