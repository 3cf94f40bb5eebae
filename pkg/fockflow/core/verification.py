"""
Battery of named identity checks over deterministic, seeded sample sets
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..models.field_grid import DiskRegion
from ..models.flow_spec import CircleContour, FlowSpec, SourceRep, VortexRep
from ..models.report import VerificationReport
from ..models.state_spec import (
    CatState,
    CoefficientState,
    DisplacedState,
    FockState,
    Parity,
    QCoherentState,
    QutritState,
    Truncation,
)
from ..utils.helpers import format_complex
from ..utils.logger import ContextualLogger, get_logger
from .analysis import find_zeros
from .exceptions import FockFlowError, UnknownIdentityError, ValidationError
from .flow import check_boundary_condition, enclosed_strengths, potential, velocity
from .images import (
    closed_form_strip,
    oblique_strip_flow,
    oblique_strip_velocity,
    reflect,
    strip_boundary_points,
    strip_wavefunction_log,
    wedge_wavefunction,
)
from .qcalc import q_exponential, q_exponential_poles, q_exponential_product, q_exponential_zeros, q_product_factors
from .states import OMEGA, eval_state

logger = ContextualLogger(get_logger(__name__), {"component": "verification"})

DEFAULT_SEED = 20240917

Errors = Tuple[List[float], Dict[str, Any]]


@dataclass
class Identity:
    """A registered check: sample errors from a seeded generator and parameters"""
    name: str
    check: Callable[..., Errors]
    defaults: Dict[str, Any] = field(default_factory=dict)


_REGISTRY: Dict[str, Identity] = {}


def identity(name: str, **defaults):
    """Register a check function under `name` with default parameters (tolerance included)"""
    def decorator(func: Callable[..., Errors]) -> Callable[..., Errors]:
        _REGISTRY[name] = Identity(name=name, check=func, defaults=defaults)
        return func
    return decorator


def registered_identities() -> List[str]:
    """Names of the battery items in execution order"""
    return list(_REGISTRY)


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return format_complex(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _disk_points(rng: np.random.Generator, count: int, radius: float, center: complex = 0j) -> List[complex]:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    theta = rng.uniform(0.0, 2.0 * math.pi, count)
    return [complex(p) for p in center + r * np.exp(1j * theta)]


def _safely(errors: List[float], func: Callable[[], float]) -> None:
    # unevaluable samples count as failures
    try:
        errors.append(func())
    except FockFlowError as e:
        logger.debug(f"sample not evaluable: {e}")
        errors.append(math.inf)


UNIT_VORTEX = VortexRep(gamma=2.0 * math.pi)
UNIT_SOURCE = SourceRep(n_strength=2.0 * math.pi)


# Wedges


@identity("wedge_periodicity", tolerance=1e-12, n_values=(2, 3, 4, 5), alpha=0.3 + 0.2j, samples=20, radius=2.0)
def _wedge_periodicity(rng, tolerance, n_values, alpha, samples, radius) -> Errors:
    state = DisplacedState(n=1, alpha=alpha)
    errors: List[float] = []
    for n in n_values:
        rotation = cmath.exp(2j * math.pi / n)
        for z in _disk_points(rng, samples, radius):
            _safely(errors, lambda: _relative(
                wedge_wavefunction(state, UNIT_VORTEX, n, rotation * z),
                wedge_wavefunction(state, UNIT_VORTEX, n, z),
            ))
    return errors, {"state": state.model_dump(mode="json")}


@identity("wedge_boundary", tolerance=1e-10, n_values=(2, 3, 4, 5), alpha=0.3 + 0.2j, ray_samples=25, ray_length=3.0)
def _wedge_boundary(rng, tolerance, n_values, alpha, ray_samples, ray_length) -> Errors:
    state = DisplacedState(n=1, alpha=alpha)
    radii = np.linspace(0.1, ray_length, ray_samples)
    errors: List[float] = []
    per_n = {}
    for n in n_values:
        edge = cmath.exp(1j * math.pi / n)
        curve = [complex(r) for r in radii] + [complex(r * edge) for r in radii]
        report = check_boundary_condition(
            UNIT_VORTEX, lambda z: wedge_wavefunction(state, UNIT_VORTEX, n, z), curve, tolerance, name=f"wedge:{n}"
        )
        per_n[str(n)] = report.max_error
        errors.extend([report.max_error] * report.sample_count)
    return errors, {"state": state.model_dump(mode="json"), "max_error_per_n": per_n}


# Strips


@identity("strip_closed_form", tolerance=1e-5, h=1.0, M=400, samples=25, reference=0.3 + 0.1j)
def _strip_closed_form(rng, tolerance, h, M, samples, reference) -> Errors:
    state = FockState(n=1)

    def product(z: complex) -> complex:
        return cmath.exp(strip_wavefunction_log(state, UNIT_VORTEX, h, z, M))

    constant = product(reference) / closed_form_strip("vortex", h, reference)
    xs = rng.uniform(-h, h, samples)
    ys = rng.uniform(-0.45 * h, 0.45 * h, samples)
    errors: List[float] = [abs(abs(constant) - 1.0)]
    for x, y in zip(xs, ys):
        z = complex(x, y)
        expected = constant * closed_form_strip("vortex", h, z)
        _safely(errors, lambda: abs(product(z) - expected) / abs(expected))
    return errors, {"constant": constant}


@identity("strip_combined_periodicity", tolerance=1e-5, h=1.0, M=400, samples=20,
          beta=math.pi / 6, base_zero=0.1 + 0.05j, velocity_M=200, velocity_tolerance=1e-8)
def _strip_combined_periodicity(rng, tolerance, h, M, samples, beta, base_zero, velocity_M, velocity_tolerance) -> Errors:
    state = FockState(n=1)
    points = [complex(x, y) for x, y in zip(rng.uniform(-h, h, samples), rng.uniform(-0.4 * h, 0.4 * h, samples))]

    errors: List[float] = []
    for z in points:
        # Fbar(z + ih) = F(z) at product level: conj(Psi_h(conj(z) + ih)) Psi_h(z) = 1
        _safely(errors, lambda: abs(cmath.exp(
            strip_wavefunction_log(state, UNIT_VORTEX, h, z, M)
            + strip_wavefunction_log(state, UNIT_VORTEX, h, z.conjugate() + 1j * h, M).conjugate()
        ) - 1.0))

    # oblique strip, velocity level: exp(-2 i beta) conj(v(R(z + i h e^{i beta}))) = v(z)
    shift = 1j * h * cmath.exp(1j * beta)
    velocity_errors: List[float] = []
    for z in points:
        w = z * cmath.exp(1j * beta)
        _safely(velocity_errors, lambda: abs(
            cmath.exp(-2j * beta)
            * oblique_strip_velocity(base_zero, UNIT_VORTEX, h, beta, reflect(w + shift, beta), velocity_M).conjugate()
            - oblique_strip_velocity(base_zero, UNIT_VORTEX, h, beta, w, velocity_M)
        ))
    # scaled so one report tolerance covers both levels
    errors.extend(e * tolerance / velocity_tolerance for e in velocity_errors)
    return errors, {"velocity_max_error": max(velocity_errors)}


@identity("oblique_boundary", tolerance=1e-6, h=1.0, M=500, betas=(0.0, math.pi / 6, -math.pi / 4),
          line_samples=21, half_length=2.0, potential_samples=5)
def _oblique_boundary(rng, tolerance, h, M, betas, line_samples, half_length, potential_samples) -> Errors:
    ts = np.linspace(-half_length, half_length, line_samples)
    potential_ts = np.linspace(-0.5 * half_length, 0.5 * half_length, potential_samples)
    base = FlowSpec(state=FockState(n=1), rep=UNIT_SOURCE)
    # stream function on the upper line: the flux between the walls
    upper_value = UNIT_SOURCE.n_strength / 2.0
    errors: List[float] = []
    per_beta = {}
    for beta in betas:
        direction = cmath.exp(1j * beta)
        local: List[float] = []
        for side in (1, -1):
            for z in strip_boundary_points(h, beta, ts, side=side):
                # normal component of the velocity on a line inclined at beta
                _safely(local, lambda: abs(
                    (oblique_strip_velocity(0j, UNIT_SOURCE, h, beta, complex(z), M) * direction).imag
                ))
            expected = upper_value if side == 1 else 0.0
            for z in strip_boundary_points(h, beta, potential_ts, side=side):
                _safely(local, lambda: abs(oblique_strip_flow(base, h, beta, complex(z), M).imag - expected))
        per_beta[f"{beta:.6f}"] = max(local)
        errors.extend(local)
    return errors, {"rep": "source", "upper_line_value": upper_value, "max_error_per_beta": per_beta}


# Cat states


CAT_ALPHAS = (1 + 0j, cmath.exp(1j * math.pi / 4), 2j)


@identity("cat_velocity_periodicity", tolerance=1e-10, alphas=CAT_ALPHAS, offset=0.13 + 0.07j, spacing=0.2, size=5)
def _cat_velocity_periodicity(rng, tolerance, alphas, offset, spacing, size) -> Errors:
    errors: List[float] = []
    for alpha in alphas:
        period = 1j * math.pi / alpha
        for parity in Parity:
            fs = FlowSpec(state=CatState(parity=parity, alpha=alpha), rep=UNIT_VORTEX)
            for j in range(size):
                for k in range(size):
                    z = offset + spacing * complex(j, k)
                    _safely(errors, lambda: _relative(velocity(fs, z + period), velocity(fs, z)))
    return errors, {}


@identity("cat_zero_lattice", tolerance=1e-8, alphas=CAT_ALPHAS, max_index=3)
def _cat_zero_lattice(rng, tolerance, alphas, max_index) -> Errors:
    errors: List[float] = []
    found = {}
    for alpha in alphas:
        expected = [1j * math.pi * n / alpha for n in range(-max_index, max_index + 1)]
        radius = (max_index + 0.5) * math.pi / abs(alpha)
        try:
            zeros = find_zeros(CatState(parity=Parity.ODD, alpha=alpha), DiskRegion(radius=radius))
        except FockFlowError as e:
            logger.warning(f"zero search failed for alpha = {alpha}: {e}")
            errors.append(math.inf)
            continue
        found[format_complex(alpha)] = len(zeros)
        if len(zeros) != len(expected) or any(zero.multiplicity != 1 for zero in zeros):
            errors.append(math.inf)
            continue
        for target in expected:
            errors.append(min(abs(zero.position - target) for zero in zeros))
    return errors, {"zeros_found": found}


# Qutrits


QUTRIT_ALPHAS = (1 + 0j, 0.8 * cmath.exp(1j * math.pi / 5))


def _central_difference(func: Callable[[complex], complex], z: complex, h: float) -> complex:
    return (func(z + h) - func(z - h)) / (2.0 * h)


@identity("qutrit_derivative_cycle", tolerance=1e-6, alphas=QUTRIT_ALPHAS, samples=10, radius=1.5, step=1e-3)
def _qutrit_derivative_cycle(rng, tolerance, alphas, samples, radius, step) -> Errors:
    errors: List[float] = []
    for alpha in alphas:
        for sector in range(3):
            state = QutritState(sector=sector, alpha=alpha)
            successor = QutritState(sector=(sector + 2) % 3, alpha=alpha)

            def psi(w: complex) -> complex:
                return eval_state(state, w)

            for z in _disk_points(rng, samples, radius):
                def numeric() -> float:
                    # Richardson-extrapolated central difference
                    coarse = _central_difference(psi, z, step)
                    fine = _central_difference(psi, z, step / 2.0)
                    derivative = (4.0 * fine - coarse) / 3.0
                    return _relative(derivative, alpha * eval_state(successor, z))

                _safely(errors, numeric)
    return errors, {}


@identity("qutrit_equivariance", tolerance=1e-10, alphas=QUTRIT_ALPHAS, samples=15, radius=1.3)
def _qutrit_equivariance(rng, tolerance, alphas, samples, radius) -> Errors:
    errors: List[float] = []
    grading: List[float] = []
    literal: List[float] = []
    for alpha in alphas:
        for sector in range(3):
            state = QutritState(sector=sector, alpha=alpha)
            fs = FlowSpec(state=state, rep=UNIT_VORTEX)
            for z in _disk_points(rng, samples, radius):
                try:
                    rotated = velocity(fs, OMEGA * z)
                    plain = velocity(fs, z)
                    grading.append(_relative(eval_state(state, OMEGA * z), OMEGA ** sector * eval_state(state, z)))
                except FockFlowError as e:
                    logger.debug(f"qutrit sample {z} not evaluable: {e}")
                    errors.append(math.inf)
                    continue
                errors.append(_relative(OMEGA * rotated, plain))
                literal.append(_relative(rotated, plain))
    return errors, {
        "grading_max_error": max(grading) if grading else None,
        # the plain invariance v(omega z) = v(z) does not hold; equivariance carries the factor omega
        "literal_invariance_max_deviation": max(literal) if literal else None,
    }


# q-exponential


Q_RADII = {2.0: 1.5, 3.0: 1.0}


def _q_radius(q: float) -> float:
    if q < 1:
        return 0.5 / (1.0 - q)
    return Q_RADII.get(q, 1.0)


@identity("q_series_product", tolerance=1e-10, q_values=(2.0, 3.0, 0.5, 0.8), samples=50, max_terms=256)
def _q_series_product(rng, tolerance, q_values, samples, max_terms) -> Errors:
    t = Truncation(max_terms=max_terms)
    errors: List[float] = []
    for q in q_values:
        for x in _disk_points(rng, samples, _q_radius(q)):
            _safely(errors, lambda: abs(q_exponential(q, x, t) - q_exponential_product(q, x, t))
                    / abs(q_exponential_product(q, x, t)))
    return errors, {"radii": {str(q): _q_radius(q) for q in q_values}}


@identity("q_zero_progression", tolerance=1e-13, q_values=(2.0, 3.0, 0.5, 0.8), alphas=(1 + 0j, 0.6 - 0.3j), count=10)
def _q_zero_progression(rng, tolerance, q_values, alphas, count) -> Errors:
    errors: List[float] = []
    for q in q_values:
        for alpha in alphas:
            if q > 1:
                zeros = q_exponential_zeros(q, alpha, count)
                errors.extend(abs(b / a - q) / q for a, b in zip(zeros, zeros[1:]))
                # each zero annihilates its own product factor
                errors.extend(abs(q_product_factors(q, alpha * z, k + 1)[k]) for k, z in enumerate(zeros))
            else:
                poles = q_exponential_poles(q, alpha, count)
                errors.extend(abs(b / a - q) / q for a, b in zip(poles[1:], poles))
                errors.extend(abs(1.0 - q ** k * (1.0 - q) * alpha * p) for k, p in enumerate(poles))
    return errors, {}


# Flows


@identity("circulation_strength", tolerance=1e-8, radius=0.5, samples=1024, gamma=2.0 * math.pi, n_strength=1.5)
def _circulation_strength(rng, tolerance, radius, samples, gamma, n_strength) -> Errors:
    cases = [
        (FockState(n=1), 0j),
        (DisplacedState(n=1, alpha=0.4 + 0.3j), 0.4 - 0.3j),
        (CatState(parity=Parity.ODD, alpha=1.0), 1j * math.pi),
    ]
    errors: List[float] = []
    for state, zero in cases:
        contour = CircleContour(center=zero, radius=radius, samples=samples)
        vortex = FlowSpec(state=state, rep=VortexRep(gamma=gamma))
        source = FlowSpec(state=state, rep=SourceRep(n_strength=n_strength))
        _safely(errors, lambda: abs(enclosed_strengths(vortex, contour)[0] - gamma))
        _safely(errors, lambda: abs(enclosed_strengths(source, contour)[1] - n_strength))
    return errors, {"cases": len(cases)}


@identity("boundary_unimodular", tolerance=1e-12, widths=(1.0, 2.5), samples=41, half_length=5.0)
def _boundary_unimodular(rng, tolerance, widths, samples, half_length) -> Errors:
    xs = np.linspace(-half_length, half_length, samples)
    errors: List[float] = []
    for h in widths:
        curve = [complex(x, side * h / 2.0) for side in (1, -1) for x in xs]
        report = check_boundary_condition(UNIT_VORTEX, lambda z: closed_form_strip("vortex", h, z), curve, tolerance)
        errors.extend([report.max_error] * report.sample_count)
    return errors, {}


@identity("boundary_real", tolerance=1e-12, widths=(1.0, 2.5), samples=41, half_length=3.0)
def _boundary_real(rng, tolerance, widths, samples, half_length) -> Errors:
    curve = [complex(x, 0.0) for x in np.linspace(-half_length, half_length, samples)]
    errors: List[float] = []
    for h in widths:
        report = check_boundary_condition(UNIT_SOURCE, lambda z: closed_form_strip("source", h, z), curve, tolerance)
        errors.extend([report.max_error] * report.sample_count)
    return errors, {}


@identity("normalization_freedom", tolerance=1e-13, scale=1e3 * cmath.exp(1j * math.pi / 3), samples=8, radius=1.2,
          zero_radius=2.5, zero_shift_tolerance=1e-9)
def _normalization_freedom(rng, tolerance, scale, samples, radius, zero_radius, zero_shift_tolerance) -> Errors:
    coefficient_states = [
        CoefficientState(c=[1.0, 0.5j, -0.25]),
        CoefficientState(c=[-1.0, 0.0, 1.0]),
        CoefficientState(c=[0.3 - 0.2j, 1.0, 0.0, 0.4j]),
    ]
    states = [
        FockState(n=2),
        DisplacedState(n=1, alpha=0.3 - 0.2j),
        CatState(parity=Parity.EVEN, alpha=0.7),
        QutritState(sector=1, alpha=1.0),
        QCoherentState(q=2.0, alpha=0.5),
        *coefficient_states,
    ]
    log_scale = cmath.log(scale)
    errors: List[float] = []
    for rep in (UNIT_VORTEX, UNIT_SOURCE):
        # every coefficient multiplied by B: the velocity field is unchanged
        for state in coefficient_states:
            plain = FlowSpec(state=state, rep=rep)
            scaled = FlowSpec(state=CoefficientState(c=[scale * c for c in state.c]), rep=rep)
            for z in _disk_points(rng, samples, radius):
                _safely(errors, lambda: _relative(velocity(scaled, z), velocity(plain, z)))

        # the overall factor B shifts the potential by prefactor Log B
        for state in states:
            plain = FlowSpec(state=state, rep=rep)
            scaled = FlowSpec(state=state.model_copy(update={"scale": scale}), rep=rep)
            for z in _disk_points(rng, samples, radius):

                def potential_shift() -> float:
                    # f_B - f_1 = prefactor (Log B + 2 pi i k)
                    difference = (potential(scaled, z) - potential(plain, z)) / rep.prefactor - log_scale
                    winding = round(difference.imag / (2.0 * math.pi))
                    return abs(difference - 2j * math.pi * winding)

                _safely(errors, potential_shift)

    # zeros do not move under coefficient scaling by 10^3
    region = DiskRegion(radius=zero_radius)
    zero_shifts: List[float] = []
    for state in coefficient_states:
        plain = find_zeros(state, region)
        scaled = find_zeros(CoefficientState(c=[1e3 * c for c in state.c]), region)
        if [z.multiplicity for z in plain] != [z.multiplicity for z in scaled]:
            zero_shifts.append(math.inf)
            continue
        zero_shifts.extend(abs(a.position - b.position) for a, b in zip(plain, scaled))
    errors.extend(e * tolerance / zero_shift_tolerance for e in zero_shifts)
    return errors, {"zero_max_shift": max(zero_shifts, default=0.0)}


# Runner


def verify_identity(name: str, params: Optional[Dict[str, Any]] = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    """
    Run one battery item

    Args:
        name: Registered identity name
        params: Overrides of the item's default parameters
        seed: Base seed; the item uses seed + its battery index

    Returns:
        Verification report with the parameters used in its details

    Raises:
        UnknownIdentityError: If the name is not registered
        ValidationError: On parameters the item does not take
    """
    if name not in _REGISTRY:
        raise UnknownIdentityError(name, registered_identities())
    item = _REGISTRY[name]
    arguments = {**item.defaults, **(params or {})}
    unknown = set(arguments) - set(item.defaults)
    if unknown:
        raise ValidationError(f"{name} has no parameter(s) {sorted(unknown)}; known: {sorted(item.defaults)}")

    index = registered_identities().index(name)
    rng = np.random.default_rng(seed + index)
    log = logger.with_context(identity=name, seed=seed + index)
    with log.timed("check"):
        errors, details = item.check(rng, **arguments)
    tolerance = arguments["tolerance"]
    report_details = _jsonable({"params": arguments, "seed": seed + index, **details})
    report = VerificationReport.from_errors(name, errors, tolerance, report_details)
    log.info(f"max_error={report.max_error:.3e} pass={report.passed}")
    return report


def run_battery(
    names: Optional[Iterable[str]] = None,
    params: Optional[Dict[str, Dict[str, Any]]] = None,
    seed: int = DEFAULT_SEED,
) -> List[VerificationReport]:
    """
    Run battery items in registration order

    Args:
        names: Items to run, all when None
        params: Per-item parameter overrides keyed by item name
        seed: Base seed

    Returns:
        Reports in battery order
    """
    selected = registered_identities() if names is None else list(names)
    params = params or {}
    return [verify_identity(name, params.get(name), seed) for name in selected]
