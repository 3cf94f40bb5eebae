"""
q-calculus special functions: q-numbers, q-factorials and the Jackson
q-exponential in series and product form, for q > 1 and 0 < q < 1
"""

import cmath
import math
import sys
from enum import Enum
from typing import List, Optional, Union

import numpy as np
from pydantic import Field, field_validator
from scipy.special import gammaln

from ..models.common import FockFlowModel
from ..models.state_spec import Truncation
from ..utils.logger import get_logger
from .exceptions import (
    ConvergenceDomainError,
    MagnitudeOverflowError,
    NonConvergenceError,
    PoleProximityError,
    ValidationError,
)

logger = get_logger(__name__)

# |q - 1| below this switches every q-function to its classical limit
CLASSICAL_Q_THRESHOLD = 1e-6
# product forms are undefined this close to q = 1
PRODUCT_Q_THRESHOLD = 1e-12
POLE_GUARD = 1e-12
LOG_MAX = math.log(sys.float_info.max)


class QRegime(str, Enum):
    """Which side of 1 the deformation parameter lies on"""
    GREATER_THAN_ONE = "greater_than_one"
    LESS_THAN_ONE = "less_than_one"


class QParameter(FockFlowModel):
    """Real deformation parameter q > 0, q != 1"""
    q: float = Field(gt=0)

    @field_validator("q")
    @classmethod
    def _not_one(cls, value: float) -> float:
        if value == 1.0 or not math.isfinite(value):
            raise ValueError("q must be finite and differ from 1")
        return value

    @property
    def regime(self) -> QRegime:
        return QRegime.GREATER_THAN_ONE if self.q > 1 else QRegime.LESS_THAN_ONE

    @property
    def is_classical(self) -> bool:
        return abs(self.q - 1.0) < CLASSICAL_Q_THRESHOLD


QLike = Union[QParameter, float]


def as_q(q: QLike) -> QParameter:
    """Coerce a float or QParameter into a validated QParameter"""
    if isinstance(q, QParameter):
        return q
    if not isinstance(q, (int, float)) or isinstance(q, bool) or q <= 0 or q == 1 or not math.isfinite(q):
        raise ValidationError(f"Invalid q = {q!r}: q must be a finite real > 0 and q != 1")
    return QParameter(q=float(q))


def q_number(n: int, q: QLike) -> float:
    """
    Non-symmetric q-number [n]_q = 1 + q + ... + q^(n-1)

    Summed with compensated summation; the classical limit returns n.

    Args:
        n: Non-negative integer
        q: Deformation parameter

    Returns:
        [n]_q
    """
    if n < 0:
        raise ValidationError(f"q-number index must be non-negative, got {n}")
    qp = as_q(q)
    if qp.is_classical:
        return float(n)
    if qp.q > 1 and (n - 1) * math.log(qp.q) > LOG_MAX:
        raise MagnitudeOverflowError(f"[{n}]_q overflows for q = {qp.q}")
    return math.fsum(qp.q ** k for k in range(n))


def _log_q_number(k: int, q: float) -> float:
    # log [k]_q for k >= 1 without cancellation near q = 1
    log_q = math.log(q)
    if q > 1:
        return k * log_q + math.log(-math.expm1(-k * log_q)) - math.log(q - 1.0)
    return math.log(-math.expm1(k * log_q)) - math.log1p(-q)


def q_factorial(n: int, q: QLike) -> float:
    """
    Log of the q-factorial, sum_{k=1}^{n} ln [k]_q ([0]_q! = 1)

    Args:
        n: Non-negative integer
        q: Deformation parameter

    Returns:
        ln([n]_q!)
    """
    if n < 0:
        raise ValidationError(f"q-factorial index must be non-negative, got {n}")
    qp = as_q(q)
    if qp.is_classical:
        return float(gammaln(n + 1))
    return math.fsum(_log_q_number(k, qp.q) for k in range(1, n + 1))


def _check_domain(qp: QParameter, x: complex) -> None:
    if qp.q < 1:
        radius = 1.0 / (1.0 - qp.q)
        if abs(x) >= radius:
            raise ConvergenceDomainError(
                f"e_q(x) for q = {qp.q} is only defined for |x| < 1/(1-q) = {radius:.6g}; got |x| = {abs(x):.6g}"
            )


def _safe_exp(x: complex) -> complex:
    if x.real > LOG_MAX:
        raise MagnitudeOverflowError(f"exp overflow at x = {x}")
    return cmath.exp(x)


def _sum_q_series(terms, t: Truncation, operation: str) -> complex:
    total = 0j
    small = 0
    for count, term in enumerate(terms, start=1):
        total += term
        if not (math.isfinite(total.real) and math.isfinite(total.imag)):
            raise MagnitudeOverflowError(f"{operation} overflows")
        if abs(term) < t.tol * abs(total):
            small += 1
            if small == 2:
                logger.debug(f"{operation}: converged after {count} terms")
                return total
        else:
            small = 0
    raise NonConvergenceError(operation, t.max_terms)


def q_exponential(q: QLike, x: complex, t: Optional[Truncation] = None) -> complex:
    """
    Jackson q-exponential e_q(x) = sum_n x^n / [n]_q!

    Args:
        q: Deformation parameter
        x: Argument
        t: Truncation policy

    Returns:
        e_q(x)

    Raises:
        ConvergenceDomainError: For q < 1 outside |x| < 1/(1-q)
        NonConvergenceError: If terms have not decayed within max_terms
    """
    qp = as_q(q)
    t = t or Truncation()
    x = complex(x)
    if qp.is_classical:
        return _safe_exp(x)
    _check_domain(qp, x)

    def terms():
        term, bracket = 1 + 0j, 0.0
        yield term
        for n in range(1, t.max_terms):
            bracket = 1.0 + qp.q * bracket
            term = term * x / bracket
            yield term

    return _sum_q_series(terms(), t, "q_exponential")


def q_exponential_derivative(q: QLike, x: complex, t: Optional[Truncation] = None) -> complex:
    """
    Termwise derivative d/dx e_q(x) = sum_{n>=1} n x^(n-1) / [n]_q!

    Args:
        q: Deformation parameter
        x: Argument
        t: Truncation policy

    Returns:
        e_q'(x)
    """
    qp = as_q(q)
    t = t or Truncation()
    x = complex(x)
    if qp.is_classical:
        return _safe_exp(x)
    _check_domain(qp, x)

    def terms():
        previous, bracket = 1 + 0j, 0.0
        for n in range(1, t.max_terms + 1):
            bracket = 1.0 + qp.q * bracket
            yield n * previous / bracket
            previous = previous * x / bracket

    return _sum_q_series(terms(), t, "q_exponential_derivative")


def q_exponential_product(q: QLike, x: complex, t: Optional[Truncation] = None) -> complex:
    """
    Infinite product form of e_q(x)

    q > 1: prod_k (1 + x q^-k (1 - 1/q)); 0 < q < 1: prod_k 1 / (1 - q^k (1 - q) x).
    At most max_terms factors are used; the product stops early once a
    factor is within tol of 1.

    Args:
        q: Deformation parameter
        x: Argument
        t: Truncation policy (max_terms is the factor budget)

    Returns:
        Truncated product

    Raises:
        ValidationError: If |q - 1| is below the product threshold
        PoleProximityError: For q < 1 when x sits on a pole 1/((1-q) q^k)
        NonConvergenceError: If no factor comes within tol of 1 inside the budget
    """
    qp = as_q(q)
    t = t or Truncation()
    x = complex(x)
    if abs(qp.q - 1.0) <= PRODUCT_Q_THRESHOLD:
        raise ValidationError(f"product form undefined for |q - 1| <= {PRODUCT_Q_THRESHOLD}")
    if qp.is_classical:
        return _safe_exp(x)

    product = 1 + 0j
    if qp.q > 1:
        c = 1.0 - 1.0 / qp.q
        for k in range(t.max_terms):
            factor = 1.0 + x * c / qp.q ** k
            product *= factor
            if abs(factor - 1.0) < t.tol:
                break
        else:
            raise NonConvergenceError("q_exponential_product", t.max_terms)
    else:
        c = 1.0 - qp.q
        for k in range(t.max_terms):
            denominator = 1.0 - qp.q ** k * c * x
            if abs(denominator) < POLE_GUARD:
                raise PoleProximityError(f"x = {x} is within {POLE_GUARD} of the pole 1/((1-q) q^{k})")
            product /= denominator
            if abs(denominator - 1.0) < t.tol:
                break
        else:
            raise NonConvergenceError("q_exponential_product", t.max_terms)

    logger.debug(f"q_exponential_product: q={qp.q} x={x} used {k + 1} factors")
    if not (math.isfinite(product.real) and math.isfinite(product.imag)):
        raise MagnitudeOverflowError(f"q-exponential product overflows at x = {x}")
    return product


def q_product_factors(q: QLike, x: complex, count: int) -> np.ndarray:
    """
    The first `count` factors of the product form (reciprocal factors for q < 1)

    Args:
        q: Deformation parameter
        x: Argument
        count: Number of factors

    Returns:
        Complex array of factors
    """
    qp = as_q(q)
    k = np.arange(count, dtype=float)
    x = complex(x)
    if qp.q > 1:
        return 1.0 + x * (1.0 - 1.0 / qp.q) / qp.q ** k
    denominators = 1.0 - qp.q ** k * (1.0 - qp.q) * x
    if np.any(np.abs(denominators) < POLE_GUARD):
        raise PoleProximityError(f"x = {x} sits on a pole of the q-exponential product")
    return 1.0 / denominators


def _check_alpha(alpha: complex) -> complex:
    alpha = complex(alpha)
    if alpha == 0:
        raise ValidationError("alpha must be non-zero")
    return alpha


def q_exponential_zeros(q: QLike, alpha: complex, count: int) -> List[complex]:
    """
    Zeros z_k = -q^(k+1) / (alpha (q - 1)) of e_q(alpha z) for q > 1

    These are the exact zeros of the product factors, in geometric progression
    with ratio q.

    Args:
        q: Deformation parameter (> 1)
        alpha: Coherent amplitude
        count: Number of zeros

    Returns:
        Zeros in order of increasing modulus
    """
    qp = as_q(q)
    alpha = _check_alpha(alpha)
    if qp.q < 1:
        raise ValidationError("e_q has zeros only for q > 1; use q_exponential_poles for q < 1")
    return [-(qp.q ** (k + 1)) / (alpha * (qp.q - 1.0)) for k in range(count)]


def q_exponential_poles(q: QLike, alpha: complex, count: int) -> List[complex]:
    """Poles z_k = 1 / (alpha (1 - q) q^k) of e_q(alpha z) for 0 < q < 1"""
    qp = as_q(q)
    alpha = _check_alpha(alpha)
    if qp.q > 1:
        raise ValidationError("e_q has poles only for q < 1; use q_exponential_zeros for q > 1")
    return [1.0 / (alpha * (1.0 - qp.q) * qp.q ** k) for k in range(count)]
