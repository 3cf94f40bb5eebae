"""
Fock-Bargmann wave functions Psi(z) and their derivatives for every state family
"""

import cmath
import math
import sys
from typing import Callable, Dict, Iterable, Optional, Tuple

from scipy.special import gammaln

from ..models.state_spec import (
    CatState,
    CoefficientState,
    CoherentState,
    DisplacedState,
    FockState,
    Parity,
    QCoherentState,
    QutritState,
    StateSpec,
    Truncation,
)
from .exceptions import MagnitudeOverflowError, NonConvergenceError, SingularityError
from .qcalc import q_exponential, q_exponential_derivative

# |Psi| below this is treated as sitting on a zero
SINGULARITY_GUARD = 1e-280
LOG_GUARD = math.log(SINGULARITY_GUARD)
LOG_MAX = math.log(sys.float_info.max)

OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)
OMEGA_POWERS = (1 + 0j, OMEGA, OMEGA.conjugate())

# below this |alpha z| the qutrit sectors are summed from the power series
QUTRIT_SERIES_RADIUS = 2.0
_QUTRIT_SERIES_TERMS = 90


def _finite(value: complex) -> bool:
    return math.isfinite(value.real) and math.isfinite(value.imag)


def _safe_exp(w: complex) -> complex:
    if w.real > LOG_MAX:
        raise MagnitudeOverflowError(f"exp overflows at {w}")
    return cmath.exp(w)


def _hyperbolic(func: Callable[[complex], complex], w: complex) -> complex:
    try:
        value = func(w)
    except OverflowError:
        raise MagnitudeOverflowError(f"{func.__name__} overflows at {w}")
    if not _finite(value):
        raise MagnitudeOverflowError(f"{func.__name__} overflows at {w}")
    return value


def _scaled(value: complex, scale: complex) -> complex:
    result = value * scale
    if not _finite(result):
        raise MagnitudeOverflowError(f"wave function value overflows ({value} * {scale})")
    return result


def _monomial(w: complex, n: int) -> complex:
    """w^n / sqrt(n!) evaluated in log space"""
    if n == 0:
        return 1 + 0j
    if w == 0:
        return 0j
    return _safe_exp(n * cmath.log(w) - 0.5 * gammaln(n + 1))


def exp_series(x: complex, t: Optional[Truncation] = None) -> complex:
    """
    Truncated exponential series sum_n x^n / n!

    Stops once two consecutive terms fall below tol times the partial sum.

    Args:
        x: Argument
        t: Truncation policy

    Returns:
        Partial sum

    Raises:
        NonConvergenceError: If max_terms is reached first
    """
    t = t or Truncation()
    x = complex(x)
    term, total, small = 1 + 0j, 1 + 0j, 0
    for n in range(1, t.max_terms):
        term = term * x / n
        total += term
        if abs(term) < t.tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise NonConvergenceError("exp_series", t.max_terms)


def _qutrit_series(w: complex) -> Tuple[complex, complex, complex]:
    sectors = [0j, 0j, 0j]
    term = 1 + 0j
    for n in range(_QUTRIT_SERIES_TERMS):
        if term == 0:
            break
        sectors[n % 3] += term
        term = term * w / (n + 1)
    return sectors[0], sectors[1], sectors[2]


def _qutrit_scaled(alpha: complex, z: complex) -> Tuple[Tuple[complex, complex, complex], float]:
    """Qutrit sectors times exp(-shift), with the shift that keeps them representable"""
    w = alpha * z
    if abs(w) < QUTRIT_SERIES_RADIUS:
        return _qutrit_series(w), 0.0
    exponents = [w * omega for omega in OMEGA_POWERS]
    shift = max(e.real for e in exponents)
    values = [cmath.exp(e - shift) for e in exponents]
    sectors = tuple(
        sum(OMEGA_POWERS[(-s * k) % 3] * values[k] for k in range(3)) / 3.0
        for s in range(3)
    )
    return sectors, shift


def _unscale(value: complex, shift: float) -> complex:
    if value == 0:
        return 0j
    if math.log(abs(value)) + shift > LOG_MAX:
        raise MagnitudeOverflowError("qutrit component overflows")
    return value * math.exp(shift)


def qutrit_components(alpha: complex, z: complex) -> Tuple[complex, complex, complex]:
    """
    The three sectors Psi_s(z) = (1/3) sum_k omega^(-s k) exp(alpha z omega^k)

    Args:
        alpha: Coherent amplitude
        z: Evaluation point

    Returns:
        (Psi_0, Psi_1, Psi_2)
    """
    sectors, shift = _qutrit_scaled(complex(alpha), complex(z))
    return tuple(_unscale(value, shift) for value in sectors)


def cat_components(alpha: complex, z: complex) -> Tuple[complex, complex]:
    """Even and odd parts of exp(alpha z): (cosh alpha z, sinh alpha z)"""
    w = complex(alpha) * complex(z)
    return _hyperbolic(cmath.cosh, w), _hyperbolic(cmath.sinh, w)


def parity_components(s: StateSpec, z: complex, t: Optional[Truncation] = None) -> Tuple[complex, complex]:
    """
    Even and odd projections (Psi(z) + Psi(-z))/2, (Psi(z) - Psi(-z))/2 of any state

    Args:
        s: State
        z: Evaluation point
        t: Truncation policy

    Returns:
        (even part, odd part)
    """
    plus = eval_state(s, z, t)
    minus = eval_state(s, -complex(z), t)
    return (plus + minus) / 2.0, (plus - minus) / 2.0


def inner_product_coherent(beta: complex, alpha: complex) -> complex:
    """Overlap of two unnormalized coherent states, exp(conj(beta) alpha)"""
    return _safe_exp(complex(beta).conjugate() * complex(alpha))


def coherent_norm(alpha: complex) -> complex:
    """Squared norm exp(|alpha|^2) of the unnormalized coherent state"""
    return _safe_exp(complex(abs(complex(alpha)) ** 2, 0.0))


# Values


def _eval_fock(s: FockState, z: complex, t: Truncation) -> complex:
    return _monomial(z, s.n)


def _eval_coherent(s: CoherentState, z: complex, t: Truncation) -> complex:
    return _safe_exp(s.alpha * z)


def _eval_displaced(s: DisplacedState, z: complex, t: Truncation) -> complex:
    w = z - s.alpha.conjugate()
    if s.n == 0:
        return _safe_exp(s.alpha * z)
    if w == 0:
        return 0j
    return _safe_exp(s.n * cmath.log(w) - 0.5 * gammaln(s.n + 1) + s.alpha * z)


def _eval_cat(s: CatState, z: complex, t: Truncation) -> complex:
    func = cmath.cosh if s.parity == Parity.EVEN else cmath.sinh
    return _hyperbolic(func, s.alpha * z)


def _eval_qutrit(s: QutritState, z: complex, t: Truncation) -> complex:
    sectors, shift = _qutrit_scaled(s.alpha, z)
    return _unscale(sectors[s.sector], shift)


def _eval_qcoherent(s: QCoherentState, z: complex, t: Truncation) -> complex:
    return q_exponential(s.q, s.alpha * z, t)


def _coefficient_terms(s: CoefficientState, z: complex, t: Truncation) -> Iterable[Tuple[int, complex, complex]]:
    # (n, c_n, z^n / sqrt(n!)) for every retained coefficient
    power = 1 + 0j
    for n, c in enumerate(s.c[: t.max_terms]):
        if n > 0:
            power = power * z / math.sqrt(n)
        yield n, c, power


def _eval_coefficients(s: CoefficientState, z: complex, t: Truncation) -> complex:
    total = 0j
    for _, c, power in _coefficient_terms(s, z, t):
        total += c * power
    if not _finite(total):
        raise MagnitudeOverflowError(f"coefficient series overflows at z = {z}")
    return total


_EVALUATORS: Dict[str, Callable] = {
    "fock": _eval_fock,
    "coherent": _eval_coherent,
    "displaced": _eval_displaced,
    "cat": _eval_cat,
    "qutrit": _eval_qutrit,
    "qcoherent": _eval_qcoherent,
    "coefficients": _eval_coefficients,
}


def eval_state(s: StateSpec, z: complex, t: Optional[Truncation] = None) -> complex:
    """
    Evaluate the (unnormalized) wave function Psi(z)

    Args:
        s: State
        z: Evaluation point
        t: Truncation policy for series-based states

    Returns:
        Psi(z), including the state's scale factor

    Raises:
        MagnitudeOverflowError: If the value is not representable
        ConvergenceDomainError: For q-coherent states with q < 1 outside the disk
    """
    t = t or Truncation()
    return _scaled(_EVALUATORS[s.kind](s, complex(z), t), s.scale)


# Derivatives


def _deriv_fock(s: FockState, z: complex, t: Truncation) -> complex:
    if s.n == 0:
        return 0j
    return math.sqrt(s.n) * _monomial(z, s.n - 1)


def _deriv_coherent(s: CoherentState, z: complex, t: Truncation) -> complex:
    return s.alpha * _safe_exp(s.alpha * z)


def _deriv_displaced(s: DisplacedState, z: complex, t: Truncation) -> complex:
    w = z - s.alpha.conjugate()
    polynomial = s.alpha * _monomial(w, s.n)
    if s.n > 0:
        polynomial += math.sqrt(s.n) * _monomial(w, s.n - 1)
    return polynomial * _safe_exp(s.alpha * z)


def _deriv_cat(s: CatState, z: complex, t: Truncation) -> complex:
    func = cmath.sinh if s.parity == Parity.EVEN else cmath.cosh
    return s.alpha * _hyperbolic(func, s.alpha * z)


def _deriv_qutrit(s: QutritState, z: complex, t: Truncation) -> complex:
    sectors, shift = _qutrit_scaled(s.alpha, z)
    return s.alpha * _unscale(sectors[(s.sector + 2) % 3], shift)


def _deriv_qcoherent(s: QCoherentState, z: complex, t: Truncation) -> complex:
    return s.alpha * q_exponential_derivative(s.q, s.alpha * z, t)


def _deriv_coefficients(s: CoefficientState, z: complex, t: Truncation) -> complex:
    total, previous = 0j, 0j
    for n, c, power in _coefficient_terms(s, z, t):
        if n > 0:
            total += c * math.sqrt(n) * previous
        previous = power
    if not _finite(total):
        raise MagnitudeOverflowError(f"coefficient series derivative overflows at z = {z}")
    return total


_DERIVATIVES: Dict[str, Callable] = {
    "fock": _deriv_fock,
    "coherent": _deriv_coherent,
    "displaced": _deriv_displaced,
    "cat": _deriv_cat,
    "qutrit": _deriv_qutrit,
    "qcoherent": _deriv_qcoherent,
    "coefficients": _deriv_coefficients,
}


def eval_state_derivative(s: StateSpec, z: complex, t: Optional[Truncation] = None) -> complex:
    """
    Evaluate Psi'(z), from closed forms where available, else termwise

    Args:
        s: State
        z: Evaluation point
        t: Truncation policy

    Returns:
        Psi'(z), including the state's scale factor
    """
    t = t or Truncation()
    return _scaled(_DERIVATIVES[s.kind](s, complex(z), t), s.scale)


# Logarithmic derivatives (independent of the scale factor)


def _logd_fock(s: FockState, z: complex, t: Truncation) -> complex:
    if s.n == 0:
        return 0j
    if z == 0 or s.n * math.log(abs(z)) - 0.5 * gammaln(s.n + 1) < LOG_GUARD:
        raise SingularityError(z)
    return s.n / z


def _logd_coherent(s: CoherentState, z: complex, t: Truncation) -> complex:
    return s.alpha


def _logd_displaced(s: DisplacedState, z: complex, t: Truncation) -> complex:
    if s.n == 0:
        return s.alpha
    w = z - s.alpha.conjugate()
    if w == 0 or s.n * math.log(abs(w)) - 0.5 * gammaln(s.n + 1) + (s.alpha * z).real < LOG_GUARD:
        raise SingularityError(z)
    return s.n / w + s.alpha


def _logd_cat(s: CatState, z: complex, t: Truncation) -> complex:
    w = s.alpha * z
    if abs(w.real) < 1.0:
        # zeros of cosh/sinh lie on the imaginary axis of w
        func = cmath.cosh if s.parity == Parity.EVEN else cmath.sinh
        if abs(func(w)) < SINGULARITY_GUARD:
            raise SingularityError(z)
    tanh = cmath.tanh(w)
    if s.parity == Parity.EVEN:
        return s.alpha * tanh
    return s.alpha / tanh


def _logd_qutrit(s: QutritState, z: complex, t: Truncation) -> complex:
    sectors, shift = _qutrit_scaled(s.alpha, z)
    value = sectors[s.sector]
    if value == 0 or math.log(abs(value)) + shift < LOG_GUARD:
        raise SingularityError(z)
    return s.alpha * sectors[(s.sector + 2) % 3] / value


def _logd_qcoherent(s: QCoherentState, z: complex, t: Truncation) -> complex:
    value = q_exponential(s.q, s.alpha * z, t)
    if abs(value) < SINGULARITY_GUARD:
        raise SingularityError(z)
    return s.alpha * q_exponential_derivative(s.q, s.alpha * z, t) / value


def _logd_coefficients(s: CoefficientState, z: complex, t: Truncation) -> complex:
    value = _eval_coefficients(s, z, t)
    if abs(value) < SINGULARITY_GUARD:
        raise SingularityError(z)
    return _deriv_coefficients(s, z, t) / value


_LOG_DERIVATIVES: Dict[str, Callable] = {
    "fock": _logd_fock,
    "coherent": _logd_coherent,
    "displaced": _logd_displaced,
    "cat": _logd_cat,
    "qutrit": _logd_qutrit,
    "qcoherent": _logd_qcoherent,
    "coefficients": _logd_coefficients,
}


def log_derivative(s: StateSpec, z: complex, t: Optional[Truncation] = None) -> complex:
    """
    Psi'(z) / Psi(z)

    Uses closed forms (n/z, alpha, alpha tanh, alpha coth, sector ratios) so it
    stays finite where Psi itself overflows. The state's scale factor cancels.

    Args:
        s: State
        z: Evaluation point
        t: Truncation policy

    Returns:
        Logarithmic derivative

    Raises:
        SingularityError: At zeros of Psi
    """
    t = t or Truncation()
    value = _LOG_DERIVATIVES[s.kind](s, complex(z), t)
    if not _finite(value):
        raise SingularityError(complex(z))
    return value
