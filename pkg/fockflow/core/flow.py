"""
Complex potentials, conjugate velocities, contour integrals and boundary
checks of the flows generated by wave functions
"""

import cmath
import math
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from ..models.flow_spec import (
    CircleContour,
    Contour,
    FlowRep,
    FlowSpec,
    PolylineContour,
    SourceRep,
    VortexRep,
)
from ..models.report import VerificationReport
from ..utils.logger import get_logger
from .exceptions import ContourSingularityError, FockFlowError, SingularityError
from .states import SINGULARITY_GUARD, eval_state, log_derivative

logger = get_logger(__name__)

# Gauss-Legendre order of each polyline panel
PANEL_ORDER = 16


def potential(fs: FlowSpec, z: complex) -> complex:
    """
    Complex potential f(z) = prefactor * Log Psi(z), principal branch

    phi = Re f is the velocity potential and psi = Im f the stream function.
    The value jumps across the branch cut where Psi(z) crosses the negative
    real axis; compare flows through velocity() when that matters.

    Args:
        fs: Flow spec
        z: Evaluation point

    Returns:
        f(z)

    Raises:
        SingularityError: When |Psi(z)| is below the singularity guard
    """
    z = complex(z)
    psi = eval_state(fs.state, z, fs.trunc)
    if abs(psi) < SINGULARITY_GUARD:
        raise SingularityError(z)
    return fs.rep.prefactor * cmath.log(psi)


def velocity(fs: FlowSpec, z: complex) -> complex:
    """
    Conjugate velocity v = df/dz = u - i v = prefactor * Psi'(z) / Psi(z)

    Args:
        fs: Flow spec
        z: Evaluation point

    Returns:
        Conjugate velocity; physical components are (Re, -Im)

    Raises:
        SingularityError: At zeros of Psi
    """
    return fs.rep.prefactor * log_derivative(fs.state, complex(z), fs.trunc)


def velocity_components(fs: FlowSpec, z: complex) -> Tuple[float, float]:
    """Physical velocity (u, v) at z"""
    conjugate_velocity = velocity(fs, z)
    return conjugate_velocity.real, -conjugate_velocity.imag


def contour_nodes(contour: Contour) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature nodes and complex weights with sum(w * g(z)) ~ closed integral of g dz

    Circles use the trapezoidal rule on `samples` equispaced nodes. Polylines
    are split into Gauss-Legendre panels, about `samples` nodes in total,
    distributed by edge length.

    Args:
        contour: Circle or closed polyline

    Returns:
        (nodes, weights)
    """
    if isinstance(contour, CircleContour):
        theta = 2.0 * np.pi * np.arange(contour.samples) / contour.samples
        unit = np.exp(1j * theta)
        nodes = contour.center + contour.radius * unit
        weights = 1j * contour.radius * unit * (2.0 * np.pi / contour.samples)
        return nodes, weights

    points = np.asarray(contour.points, dtype=complex)
    edges = np.diff(points)
    lengths = np.abs(edges)
    perimeter = lengths.sum()
    x, w = np.polynomial.legendre.leggauss(PANEL_ORDER)
    node_chunks, weight_chunks = [], []
    for start, edge, length in zip(points[:-1], edges, lengths):
        if length == 0:
            continue
        panels = max(1, int(math.ceil(contour.samples * length / perimeter / PANEL_ORDER)))
        for p in range(panels):
            a = start + edge * p / panels
            half = edge / panels / 2.0
            node_chunks.append(a + half * (x + 1.0))
            weight_chunks.append(half * w)
    return np.concatenate(node_chunks), np.concatenate(weight_chunks)


def contour_integral(func: Callable[[complex], complex], contour: Contour) -> complex:
    """
    Closed contour integral of an analytic integrand

    Args:
        func: Scalar integrand
        contour: Integration contour

    Returns:
        Integral value

    Raises:
        ContourSingularityError: If the integrand is singular at a node
    """
    nodes, weights = contour_nodes(contour)
    values = np.empty(len(nodes), dtype=complex)
    for j, node in enumerate(nodes):
        node = complex(node)
        try:
            values[j] = func(node)
        except SingularityError:
            raise ContourSingularityError(node, f"Contour passes through a singularity at z = {node}")
    return complex(np.sum(weights * values))


def contour_integral_velocity(fs: FlowSpec, c: Contour) -> complex:
    """
    Closed integral of the conjugate velocity

    Around a zero of multiplicity m this is -m Gamma for a vortex and
    i m N for a source.

    Args:
        fs: Flow spec
        c: Contour avoiding the zeros of Psi

    Returns:
        Contour integral
    """
    return contour_integral(lambda z: velocity(fs, z), c)


def enclosed_strengths(fs: FlowSpec, c: Contour) -> Tuple[float, float]:
    """
    Circulation and flux enclosed by a contour, as (Gamma, N)

    Gamma = -Re and N = Im of the velocity contour integral, so a vortex
    rep around one simple zero reports its own Gamma.
    """
    integral = contour_integral_velocity(fs, c)
    return -integral.real, integral.imag


def _boundary_errors(rep: FlowRep, values: Iterable[complex]) -> Iterable[float]:
    for value in values:
        modulus_error = abs(abs(value) - 1.0)
        real_error = abs(value.imag)
        if isinstance(rep, VortexRep):
            yield modulus_error
        elif isinstance(rep, SourceRep):
            yield real_error
        else:
            yield max(modulus_error, real_error)


def check_boundary_condition(
    rep: FlowRep,
    wavefunction: Callable[[complex], complex],
    curve: Sequence[complex],
    tolerance: float = 1e-10,
    name: str = "boundary",
) -> VerificationReport:
    """
    Check that a curve is a streamline of the flow generated by `wavefunction`

    A vortex flow needs |Psi| = 1 on the curve, a source flow needs Psi real,
    a mixed flow needs both.

    Args:
        rep: Flow representation
        wavefunction: Callable returning Psi(z)
        curve: Sample points on the curve
        tolerance: Pass threshold on the maximum error
        name: Report name

    Returns:
        Report; points where Psi cannot be evaluated count as failures
    """
    values, unevaluable = [], 0
    for z in curve:
        try:
            values.append(complex(wavefunction(complex(z))))
        except FockFlowError as e:
            logger.debug(f"boundary sample {z} not evaluable: {e}")
            unevaluable += 1
    errors = list(_boundary_errors(rep, values)) + [math.inf] * unevaluable
    details = {"rep": rep.kind}
    if unevaluable:
        details["unevaluable_points"] = unevaluable
    return VerificationReport.from_errors(name, errors, tolerance, details)


def check_boundary(fs: FlowSpec, curve: Sequence[complex], tolerance: float = 1e-10) -> VerificationReport:
    """
    Boundary condition of a flow spec's own wave function on a curve

    Args:
        fs: Flow spec
        curve: Sample points
        tolerance: Pass threshold

    Returns:
        Verification report
    """
    return check_boundary_condition(
        fs.rep, lambda z: eval_state(fs.state, z, fs.trunc), curve, tolerance, name=f"boundary:{fs.state.kind}"
    )


def rep_strengths(rep: FlowRep) -> Tuple[float, float]:
    """(N, Gamma) carried by a representation"""
    if isinstance(rep, VortexRep):
        return 0.0, rep.gamma
    if isinstance(rep, SourceRep):
        return rep.n_strength, 0.0
    return rep.n_strength, rep.gamma
