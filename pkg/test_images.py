import cmath
import math

import pytest

from conftest import close
from fockflow.core.analysis import winding_number
from fockflow.core.exceptions import ValidationError
from fockflow.core.images import (
    cat_image_system,
    cat_lattice_velocity,
    closed_form_strip,
    displaced_flow_decomposition,
    image_system_velocity,
    oblique_strip_flow,
    oblique_strip_velocity,
    q_image_system,
    reflect,
    richardson,
    singularity_velocity,
    strip_boundary_points,
    strip_flow,
    strip_image_system,
    strip_log_derivative,
    strip_velocity,
    strip_wavefunction,
    wedge_flow,
    wedge_image_system,
    wedge_wavefunction,
)
from fockflow.core.flow import contour_integral_velocity, velocity
from fockflow.models.flow_spec import CircleContour, FlowSpec, MixedRep, SourceRep, VortexRep
from fockflow.models.image_system import ObliqueStripDomain, SingularityKind, StripDomain, WedgeDomain
from fockflow.models.state_spec import CatState, DisplacedState, FockState, Parity


def positions(system):
    return sorted((s.position for s in system.singularities), key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def test_richardson_removes_inverse_powers():
    def partial(M):
        return 2.0 + 3.0 / M - 5.0 / M ** 2

    assert close(richardson([partial(10), partial(20), partial(40)]), 2.0, rel=1e-13)


def test_reflect_is_involution():
    w = 0.7 - 0.4j
    assert reflect(w, 0.0) == w.conjugate()
    assert close(reflect(reflect(w, 0.6), 0.6), w)
    assert close(reflect(cmath.exp(0.6j), 0.6), cmath.exp(0.6j))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_wedge_wavefunction_periodicity(n, unit_vortex):
    s = DisplacedState(n=1, alpha=0.3 + 0.2j)
    rotation = cmath.exp(2j * math.pi / n)
    for z in (0.4 + 0.3j, -1.1 + 0.2j, 0.2 - 0.9j):
        assert close(wedge_wavefunction(s, unit_vortex, n, rotation * z), wedge_wavefunction(s, unit_vortex, n, z), rel=1e-12)


def test_wedge_boundary_rays(unit_vortex, unit_source):
    s = DisplacedState(n=1, alpha=0.3 + 0.2j)
    n = 3
    for r in (0.2, 0.9, 1.7, 2.6):
        for angle in (0.0, math.pi / n):
            z = r * cmath.exp(1j * angle)
            assert abs(abs(wedge_wavefunction(s, unit_vortex, n, z)) - 1) < 1e-10
            value = wedge_wavefunction(s, unit_source, n, z)
            assert abs(value.imag) <= 1e-10 * max(1.0, abs(value))


def test_wedge_flow_stream_function_constant_on_boundary(unit_vortex):
    base = FlowSpec(state=DisplacedState(n=1, alpha=0.5 - 0.4j), rep=unit_vortex)
    values = [wedge_flow(base, 2, x).imag for x in (0.3, 1.0, 2.2)]
    assert max(values) - min(values) < 1e-10


def test_wedge_image_system(unit_vortex):
    system = wedge_image_system(1 + 0.5j, unit_vortex, 3)
    assert system.domain == WedgeDomain(n=3)
    assert len(system.singularities) == 6
    assert not system.truncated
    kinds = [s.kind for s in system.singularities]
    assert kinds.count(SingularityKind.VORTEX) == 3
    assert kinds.count(SingularityKind.ANTI_VORTEX) == 3
    assert any(close(s.position, 1 - 0.5j) for s in system.singularities)


def test_closed_form_strip_values():
    assert closed_form_strip("vortex", 1.0, 0) == 0
    assert close(closed_form_strip("source", math.pi, 1), math.sinh(1.0))
    for x in (-2.0, 0.1, 3.0):
        assert abs(abs(closed_form_strip("vortex", 1.0, x + 0.5j)) - 1) < 1e-12
    with pytest.raises(ValidationError):
        closed_form_strip("doublet", 1.0, 0)


def test_strip_product_matches_tanh(unit_vortex):
    z = 0.3 + 0.2j
    product = strip_wavefunction(FockState(n=1), unit_vortex, 1.0, z, 400)
    ratio = product / cmath.tanh(math.pi * z / 2)
    assert abs(abs(ratio) - 1) < 1e-6
    assert close(ratio, 1j, rel=1e-6)


def test_strip_source_log_derivative_matches_coth(unit_source):
    z = 0.4
    value = strip_log_derivative(FockState(n=1), unit_source, 1.0, z, 400)
    assert close(value, math.pi / math.tanh(math.pi * z), rel=1e-5)


def test_strip_velocity_matches_closed_form(unit_vortex):
    z = 0.3
    expected = 1j * math.pi / math.sinh(math.pi * z)
    assert close(strip_velocity(0j, unit_vortex, 1.0, z, 200), expected, rel=1e-6)


@pytest.mark.parametrize("beta", [0.0, math.pi / 6, -math.pi / 4])
def test_oblique_strip_boundary_is_streamline(beta, unit_source):
    base = 0.1 + 0.05j
    direction = cmath.exp(1j * beta)
    for side in (1, -1):
        for w in strip_boundary_points(1.0, beta, [-1.3, -0.2, 0.6, 1.4], side=side):
            v = oblique_strip_velocity(base, unit_source, 1.0, beta, complex(w), 500)
            assert abs((v * direction).imag) < 1e-6


def test_strip_image_system_layout(unit_vortex):
    system = strip_image_system(0.1 + 0.2j, unit_vortex, 1.0, 3)
    assert system.domain == StripDomain(h=1.0)
    assert system.truncated
    assert len(system.singularities) == 14
    assert close(system.lattice_inclination, math.pi / 2)

    oblique = strip_image_system(0.1, unit_vortex, 1.0, 2, beta=math.pi / 6)
    assert isinstance(oblique.domain, ObliqueStripDomain)


def test_image_system_velocity_approaches_strip_velocity(unit_vortex):
    system = strip_image_system(0j, unit_vortex, 1.0, 2000)
    z = 0.25 + 0.1j
    assert close(image_system_velocity(system, z), strip_velocity(0j, unit_vortex, 1.0, z, 50), rel=1e-3)


def test_mixed_rep_has_no_point_images():
    with pytest.raises(ValidationError):
        wedge_image_system(1j, MixedRep(n_strength=1, gamma=1), 2)


def test_cat_image_systems(unit_vortex):
    odd = cat_image_system(1, Parity.ODD, unit_vortex, 2)
    expected = sorted([0j, math.pi * 1j, -math.pi * 1j, 2 * math.pi * 1j, -2 * math.pi * 1j],
                      key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    assert all(close(a, b, abs_tol=1e-12) for a, b in zip(positions(odd), expected))
    assert len({s.strength for s in odd.singularities}) == 1

    even = cat_image_system(1j, Parity.EVEN, unit_vortex, 1)
    assert all(abs(z.imag) < 1e-12 for z in positions(even))
    assert all(close(a, b, abs_tol=1e-12) for a, b in zip(positions(even), [-math.pi / 2, math.pi / 2, 3 * math.pi / 2]))
    assert close(even.domain.h, math.pi)


def test_cat_lattice_velocity_matches_coth(unit_vortex):
    z = 0.4 + 0.3j
    assert close(cat_lattice_velocity(1, Parity.ODD, unit_vortex, z, 400), 1j / cmath.tanh(z), rel=1e-8)


def test_q_image_systems(unit_vortex):
    poles = q_image_system(0.5, 1, 2)
    assert [s.position for s in poles.singularities] == [2, 4, 8]
    assert all(s.kind == SingularityKind.ANTI_VORTEX for s in poles.singularities)

    zeros = q_image_system(2.0, 1, 2, unit_vortex)
    assert [s.position for s in zeros.singularities] == [-2, -4, -8]
    assert all(s.kind == SingularityKind.VORTEX for s in zeros.singularities)


def test_displaced_decomposition(unit_vortex):
    singularity, background = displaced_flow_decomposition(2, 1 + 1j, unit_vortex)
    assert singularity.position == 1 - 1j
    assert singularity.multiplicity == 2
    assert singularity.effective_strength == pytest.approx(4 * math.pi)
    assert close(background, -1 + 1j)

    none, uniform = displaced_flow_decomposition(0, 1 + 1j, unit_vortex)
    assert none is None
    assert close(uniform, -1 + 1j)

    fs = FlowSpec(state=DisplacedState(n=2, alpha=1 + 1j), rep=unit_vortex)
    for z in (0.3 + 0.2j, -1.0 + 0.5j, 2.0 - 2.0j):
        residual = velocity(fs, z) - background - singularity_velocity(singularity, z)
        assert abs(residual) < 1e-10


def test_source_rep_images_keep_sign(unit_source):
    system = wedge_image_system(1 + 1j, unit_source, 2)
    assert all(s.kind == SingularityKind.SOURCE for s in system.singularities)


def test_strip_flow_velocity_by_differencing(unit_vortex):
    base = FlowSpec(state=FockState(n=1), rep=unit_vortex)
    z, dz = 0.3 + 0.1j, 1e-5
    derivative = (strip_flow(base, 1.0, z + dz, 200) - strip_flow(base, 1.0, z - dz, 200)) / (2 * dz)
    assert close(derivative, 1j * math.pi / cmath.sinh(math.pi * z), rel=1e-6)


def test_oblique_strip_flow_reduces_to_strip_flow(unit_source):
    base = FlowSpec(state=FockState(n=1), rep=unit_source)
    z = 0.2 - 0.15j
    assert close(oblique_strip_flow(base, 1.0, 0.0, z, 30), strip_flow(base, 1.0, z, 30), rel=1e-12)
    with pytest.raises(ValidationError):
        oblique_strip_flow(base, 1.0, -math.pi / 2, z, 3)
    with pytest.raises(ValidationError):
        strip_flow(base, -1.0, z, 3)


@pytest.mark.parametrize("beta", [0.0, math.pi / 6, -math.pi / 4])
@pytest.mark.parametrize("rep, upper", [
    (VortexRep(gamma=2 * math.pi), 0.0),
    (SourceRep(n_strength=2 * math.pi), math.pi),
])
def test_oblique_strip_flow_stream_function_on_walls(beta, rep, upper):
    base = FlowSpec(state=FockState(n=1), rep=rep)
    ts = [-1.0, -0.35, 0.4, 1.0]
    for w in strip_boundary_points(1.0, beta, ts, side=-1):
        assert abs(oblique_strip_flow(base, 1.0, beta, complex(w), 100).imag) < 1e-6
    for w in strip_boundary_points(1.0, beta, ts, side=1):
        assert abs(oblique_strip_flow(base, 1.0, beta, complex(w), 100).imag - upper) < 1e-6


def test_oblique_strip_flow_on_lower_line_at_large_M(unit_source):
    base = FlowSpec(state=FockState(n=1), rep=unit_source)
    beta = math.pi / 6
    for x in (-0.8, 0.25, 0.9):
        z = complex(x, x * math.tan(beta) - 1.0 / (2 * math.cos(beta)))
        assert abs(oblique_strip_flow(base, 1.0, beta, z, 500).imag) < 1e-6


def test_unextrapolated_strip_flow_drifts_on_lower_line(unit_source):
    base = FlowSpec(state=FockState(n=1), rep=unit_source)
    values = [oblique_strip_flow(base, 1.0, 0.0, complex(x, -0.5), 50, extrapolate=False).imag for x in (-1.0, 1.0)]
    # the truncated lattice is not symmetric about the lower wall
    assert abs(values[0] - values[1]) > 1e-3
    assert abs(oblique_strip_flow(base, 1.0, 0.0, -0.5j, 50)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_wedge_zeros_are_rotated_copies(n, unit_vortex):
    s = DisplacedState(n=1, alpha=0.6 - 0.3j)
    base_zero = 0.6 + 0.3j
    rotations = [cmath.exp(-2j * math.pi * k / n) for k in range(n)]

    def psi(z):
        return wedge_wavefunction(s, unit_vortex, n, z)

    for r in rotations:
        assert abs(psi(r * base_zero)) < 1e-12
        assert round(winding_number(psi, CircleContour(center=r * base_zero, radius=0.05))) == 1
        assert round(winding_number(psi, CircleContour(center=r * base_zero.conjugate(), radius=0.05))) == -1
    # zeros minus poles inside |z| < 2, with the n mirror poles found above
    assert round(winding_number(psi, CircleContour(radius=2.0, samples=4096))) == 0


@pytest.mark.parametrize("rep, expected", [
    (VortexRep(gamma=2 * math.pi), lambda z: 1j * math.pi / cmath.sinh(math.pi * z)),
    (SourceRep(n_strength=2 * math.pi), lambda z: math.pi / cmath.tanh(math.pi * z)),
])
def test_strip_velocity_partial_sums_converge_at_first_order(rep, expected):
    z = 0.3 + 0.1j
    errors = [abs(strip_velocity(0j, rep, 1.0, z, M, extrapolate=False) - expected(z)) for M in (50, 100, 200)]
    for a, b in zip(errors, errors[1:]):
        assert a / b >= 1.9


@pytest.mark.parametrize("parity", list(Parity))
@pytest.mark.parametrize("alpha", [1, cmath.exp(1j * math.pi / 4), 2j])
def test_cat_images_have_equal_strength(parity, alpha, unit_vortex):
    system = cat_image_system(alpha, parity, unit_vortex, 2)
    fs = FlowSpec(state=CatState(parity=parity, alpha=alpha), rep=unit_vortex)
    values = [contour_integral_velocity(fs, CircleContour(center=s.position, radius=0.1)) for s in system.singularities]
    spread = max(abs(v - values[0]) for v in values)
    assert spread <= 1e-6 * abs(values[0])
