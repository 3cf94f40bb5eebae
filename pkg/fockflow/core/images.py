"""
Method of images: wedge, strip and oblique-strip flows and wave functions,
cat-state lattices, q-geometric image sets and explicit image listings
"""

import cmath
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..models.flow_spec import FlowRep, FlowSpec, MixedRep, VortexRep
from ..models.image_system import (
    GeometricDomain,
    ImageSystem,
    ObliqueStripDomain,
    Singularity,
    SingularityKind,
    StripDomain,
    WedgeDomain,
)
from ..models.state_spec import Parity, StateSpec, Truncation
from ..utils.logger import get_logger
from .exceptions import MagnitudeOverflowError, SingularityError, ValidationError
from .flow import potential
from .qcalc import as_q, q_exponential_poles, q_exponential_zeros
from .states import LOG_MAX, SINGULARITY_GUARD, eval_state, log_derivative

logger = get_logger(__name__)

Func = Callable[[complex], complex]

DEFAULT_Q_GAMMA = 2.0 * math.pi


# Conjugations


def schwarz_conjugate(func: Func) -> Func:
    """g -> conj(g(conj(w))), the reflection of g across the real axis"""
    return lambda w: func(complex(w).conjugate()).conjugate()


def reflect(w: complex, beta: float) -> complex:
    """Reflection across the line through the origin at inclination beta"""
    return cmath.exp(2j * beta) * complex(w).conjugate()


def reflection_conjugate(func: Func, beta: float) -> Func:
    """
    g -> conj(g(exp(2 i beta) conj(w))), reflection across the line at angle beta

    Reduces to the Schwarz conjugate at beta = 0.
    """
    rotation = cmath.exp(2j * beta)
    return lambda w: func(rotation * complex(w).conjugate()).conjugate()


# Extrapolation


def richardson(partials: Sequence[complex]) -> complex:
    """
    Eliminate the 1/M, 1/M^2, ... terms from partial sums at M, 2M, 4M, ...

    Args:
        partials: Partial sums at truncation indices doubling each time

    Returns:
        Extrapolated limit
    """
    table = [complex(p) for p in partials]
    order = 1
    while len(table) > 1:
        factor = 2.0 ** order
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        order += 1
    return table[0]


def _levels(M: int, extrapolate: bool) -> List[int]:
    if M < 1:
        raise ValidationError(f"truncation index M must be >= 1, got {M}")
    return [M, 2 * M, 4 * M] if extrapolate else [M]


def _require_pairing(t: Truncation) -> None:
    if not t.pair_symmetric:
        raise ValidationError("lattice sums and products are only defined with symmetric (n, -n) pairing")


# Singularities


def _image_kind(rep: FlowRep, sign: int) -> Tuple[SingularityKind, float]:
    """Kind and positive strength of a singularity whose prefactor carries `sign`"""
    if isinstance(rep, MixedRep):
        raise ValidationError("mixed representations cannot be listed as point images")
    if isinstance(rep, VortexRep):
        signed = sign * rep.gamma
        kind = SingularityKind.VORTEX if signed > 0 else SingularityKind.ANTI_VORTEX
    else:
        signed = sign * rep.n_strength
        kind = SingularityKind.SOURCE if signed > 0 else SingularityKind.SINK
    if signed == 0:
        raise ValidationError("zero-strength representation has no images")
    return kind, abs(signed)


def singularity_velocity(sing: Singularity, z: complex) -> complex:
    """
    Conjugate velocity induced at z by one listed singularity

    Args:
        sing: Point vortex or source
        z: Evaluation point

    Returns:
        i G / (2 pi (z - z0)) for vortices, N / (2 pi (z - z0)) for sources, signed by kind
    """
    distance = complex(z) - sing.position
    if distance == 0:
        raise SingularityError(complex(z))
    strength = sing.effective_strength / (2.0 * math.pi)
    if sing.kind.is_vortex:
        return 1j * strength / distance
    return strength / distance


def image_system_velocity(system: ImageSystem, z: complex) -> complex:
    """Sum of the singularity velocities of an image listing"""
    return sum((singularity_velocity(sing, z) for sing in system.singularities), 0j)


# Wedge


def _wedge_rotations(n: int) -> List[complex]:
    if n < 1:
        raise ValidationError(f"wedge index n must be >= 1, got {n}")
    return [cmath.exp(2j * math.pi * k / n) for k in range(n)]


def wedge_flow(base: FlowSpec, n: int, z: complex) -> complex:
    """
    Potential of the base flow in the wedge 0 < arg z < pi/n

    F(z) = sum_k f(q^2k z) + sum_k fbar(q^2k z), q = exp(i pi / n), with fbar
    the Schwarz conjugate. Any z is accepted so boundary rays can be sampled.

    Args:
        base: Flow spec of the free-space flow f
        n: Wedge index
        z: Evaluation point

    Returns:
        F(z)
    """
    z = complex(z)

    def f(w: complex) -> complex:
        return potential(base, w)

    f_bar = schwarz_conjugate(f)
    total = 0j
    for rotation in _wedge_rotations(n):
        w = rotation * z
        total += f(w) + f_bar(w)
    return total


def _require_pure(rep: FlowRep) -> None:
    if isinstance(rep, MixedRep):
        raise ValidationError("image wave functions need a pure vortex or source representation")


def wedge_wavefunction(s: StateSpec, rep: FlowRep, n: int, z: complex, t: Optional[Truncation] = None) -> complex:
    """
    Wave function of the wedge flow

    Vortex form prod_k Psi(q^2k z) / Psibar(q^2k z); source form
    prod_k Psi(q^2k z) Psibar(q^2k z).

    Args:
        s: Base state
        rep: Vortex or source representation
        n: Wedge index
        z: Evaluation point
        t: Truncation policy

    Returns:
        Psi_q(z)

    Raises:
        SingularityError: On a vanishing denominator
    """
    _require_pure(rep)
    t = t or Truncation()
    z = complex(z)

    def psi(w: complex) -> complex:
        return eval_state(s, w, t)

    psi_bar = schwarz_conjugate(psi)
    result = 1 + 0j
    for rotation in _wedge_rotations(n):
        w = rotation * z
        if isinstance(rep, VortexRep):
            denominator = psi_bar(w)
            if abs(denominator) < SINGULARITY_GUARD:
                raise SingularityError(z, f"wedge image denominator vanishes at z = {z}")
            result *= psi(w) / denominator
        else:
            result *= psi(w) * psi_bar(w)
    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise MagnitudeOverflowError(f"wedge wave function overflows at z = {z}")
    return result


def wedge_image_system(base_zero: complex, rep: FlowRep, n: int) -> ImageSystem:
    """
    The 2n singularities of the wedge flow of a point singularity

    n rotated copies of the base and n rotated copies of its mirror image,
    the mirrors with opposite circulation (vortex) or equal flux (source).

    Args:
        base_zero: Position of the base singularity
        rep: Vortex or source representation
        n: Wedge index

    Returns:
        Complete (untruncated) image system
    """
    base_zero = complex(base_zero)
    kind, strength = _image_kind(rep, 1)
    mirror_kind, _ = _image_kind(rep, -1 if isinstance(rep, VortexRep) else 1)
    rotations = _wedge_rotations(n)
    singularities = [Singularity.at(r * base_zero, kind, strength) for r in rotations]
    singularities += [Singularity.at(r * base_zero.conjugate(), mirror_kind, strength) for r in rotations]
    return ImageSystem(
        domain=WedgeDomain(n=n),
        truncation_index=0,
        singularities=singularities,
        truncated=False,
    )


# Strips


def closed_form_strip(kind: str, h: float, z: complex) -> complex:
    """
    Closed-form strip wave functions: tanh(pi z / 2h) (vortex) or sinh(pi z / h) (source)

    Args:
        kind: "vortex" or "source"
        h: Strip width
        z: Evaluation point

    Returns:
        Psi(z)
    """
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    z = complex(z)
    if kind == "vortex":
        return cmath.tanh(math.pi * z / (2.0 * h))
    if kind == "source":
        try:
            return cmath.sinh(math.pi * z / h)
        except OverflowError:
            raise MagnitudeOverflowError(f"sinh overflows at z = {z}")
    raise ValidationError(f"unknown closed-form strip kind '{kind}' (expected vortex or source)")


def strip_boundary_points(h: float, beta: float, ts: Sequence[float], side: int = 1, offset: complex = 0j) -> np.ndarray:
    """
    Points t exp(i beta) + side (i h / 2) exp(i beta) + offset on one boundary line

    Args:
        h: Strip width
        beta: Inclination of the centre line
        ts: Line parameters
        side: +1 for the upper line, -1 for the lower one
        offset: Point of the centre line at t = 0

    Returns:
        Complex array of boundary points
    """
    direction = cmath.exp(1j * beta)
    return np.asarray(ts, dtype=float) * direction + side * 0.5j * h * direction + offset


def strip_wavefunction_log(
    s: StateSpec,
    rep: FlowRep,
    h: float,
    z: complex,
    M: int,
    t: Optional[Truncation] = None,
    extrapolate: bool = True,
) -> complex:
    """
    Logarithm of the strip wave function's symmetric partial product

    Factors n and -n are grouped, so the accumulated log is continuous in M.
    The vortex form is extrapolated in M; the source form diverges like a
    power of M and is returned raw.

    Args:
        s: Base state
        rep: Vortex or source representation
        h: Strip width
        z: Evaluation point
        M: Truncation index, n in [-M, M]
        t: Truncation policy
        extrapolate: Apply Richardson extrapolation over M, 2M, 4M (vortex form)

    Returns:
        log of the partial product
    """
    _require_pure(rep)
    t = t or Truncation()
    _require_pairing(t)
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    z = complex(z)
    vortex = isinstance(rep, VortexRep)
    levels = _levels(M, extrapolate and vortex)

    def psi(w: complex) -> complex:
        value = eval_state(s, w, t)
        if abs(value) < SINGULARITY_GUARD:
            raise SingularityError(z, f"strip image factor vanishes at z = {z}")
        return value

    psi_bar = schwarz_conjugate(psi)
    shift = 1j * h

    def group(n: int) -> complex:
        # factors n and -n (n = 0 alone)
        numerator = psi(z + 2 * n * shift)
        image = psi_bar(z + (2 * n - 1) * shift)
        if n > 0:
            numerator *= psi(z - 2 * n * shift)
            image *= psi_bar(z - (2 * n + 1) * shift)
        return numerator / image if vortex else numerator * image

    partials, total = [], cmath.log(group(0))
    for n in range(1, levels[-1] + 1):
        total += cmath.log(group(n))
        if n in levels:
            partials.append(total)
    return richardson(partials) if len(partials) > 1 else partials[0]


def strip_wavefunction(
    s: StateSpec,
    rep: FlowRep,
    h: float,
    z: complex,
    M: int,
    t: Optional[Truncation] = None,
    extrapolate: bool = True,
) -> complex:
    """
    Strip wave function: symmetric partial product over n in [-M, M]

    Vortex form Psi(z + 2nih) / Psibar(z + (2n-1)ih), source form
    Psi(z + 2nih) Psibar(z + (2n-1)ih). For Psi(z) = z the vortex form
    converges to i tanh(pi z / 2h), the closed form times a unimodular constant.

    Raises:
        MagnitudeOverflowError: When the product leaves the float range (source form)
    """
    log_value = strip_wavefunction_log(s, rep, h, z, M, t, extrapolate)
    if log_value.real > LOG_MAX:
        raise MagnitudeOverflowError(
            f"strip product magnitude exp({log_value.real:.4g}) is not representable; compare log-derivatives instead"
        )
    return cmath.exp(log_value)


def strip_log_derivative(
    s: StateSpec,
    rep: FlowRep,
    h: float,
    z: complex,
    M: int,
    t: Optional[Truncation] = None,
    extrapolate: bool = True,
) -> complex:
    """
    d/dz log of the strip wave function, summed family-symmetrically

    Finite for both forms, so it is how source-form products are compared.
    """
    _require_pure(rep)
    t = t or Truncation()
    _require_pairing(t)
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    z = complex(z)
    sign = -1.0 if isinstance(rep, VortexRep) else 1.0
    shift = 1j * h

    def image_term(w: complex) -> complex:
        return log_derivative(s, w.conjugate(), t).conjugate()

    partials, total = [], 0j
    levels = _levels(M, extrapolate)
    for n in range(0, levels[-1] + 1):
        if n == 0:
            total += log_derivative(s, z, t) + sign * image_term(z - shift)
        else:
            total += log_derivative(s, z + 2 * n * shift, t) + log_derivative(s, z - 2 * n * shift, t)
            # second family is centred on its own n = 0 member z - ih
            total += sign * (image_term(z - shift + 2 * n * shift) + image_term(z - shift - 2 * n * shift))
        if n in levels:
            partials.append(total)
    return richardson(partials) if len(partials) > 1 else partials[0]


def _lattice_sum(z: complex, center: complex, step: complex, levels: List[int]) -> List[complex]:
    """Symmetric partial sums of 1/(z - center - m step), |m| <= K for each K in levels"""
    K = levels[-1]
    m = np.arange(-K, K + 1)
    distances = z - (center + m * step)
    if np.any(distances == 0):
        raise SingularityError(z, f"z = {z} coincides with a lattice singularity")
    terms = 1.0 / distances
    return [complex(np.sum(terms[K - level: K + level + 1])) for level in levels]


def oblique_strip_velocity(
    base_zero: complex,
    rep: FlowRep,
    h: float,
    beta: float,
    z: complex,
    M: int,
    extrapolate: bool = True,
) -> complex:
    """
    Conjugate velocity of a point singularity in an oblique strip

    The strip has width h and centre line through the origin at inclination
    beta. Singularities sit at z0 + 2m i h e^{i beta}; images at
    R(z0) + (2m+1) i h e^{i beta} with R the reflection across the centre line
    and the conjugate prefactor. Each family is summed symmetrically about its
    own central member.

    Args:
        base_zero: Base singularity z0
        rep: Flow representation (its prefactor sets the strength)
        h: Strip width
        beta: Inclination
        z: Evaluation point
        M: Truncation index
        extrapolate: Apply Richardson extrapolation over M, 2M, 4M

    Returns:
        Conjugate velocity
    """
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    z, base_zero = complex(z), complex(base_zero)
    levels = _levels(M, extrapolate)
    step = 2j * h * cmath.exp(1j * beta)
    prefactor = rep.prefactor
    direct = _lattice_sum(z, base_zero, step, levels)
    mirrored = _lattice_sum(z, reflect(base_zero, beta) + step / 2.0, step, levels)
    partials = [prefactor * a + prefactor.conjugate() * b for a, b in zip(direct, mirrored)]
    return richardson(partials) if extrapolate else partials[0]


def strip_velocity(base_zero: complex, rep: FlowRep, h: float, z: complex, M: int, extrapolate: bool = True) -> complex:
    """Conjugate velocity of a point singularity in the strip |Im z| < h/2"""
    return oblique_strip_velocity(base_zero, rep, h, 0.0, z, M, extrapolate)


def strip_flow(base: FlowSpec, h: float, z: complex, M: int, extrapolate: bool = True) -> complex:
    """Strip potential, the oblique strip flow at beta = 0"""
    return oblique_strip_flow(base, h, 0.0, z, M, extrapolate)


def oblique_strip_flow(base: FlowSpec, h: float, beta: float, z: complex, M: int, extrapolate: bool = True) -> complex:
    """
    Oblique strip potential sum_n f(z + 2nih e^{i beta}) + ftilde(z + (2n-1)ih e^{i beta})

    ftilde is the reflection conjugate across the centre line; at beta = 0 it
    is the Schwarz conjugate and the sum is the strip flow. Terms n and -n are
    grouped and the same groups at the anchor a = -(ih/2) e^{i beta}, the
    lower boundary point at t = 0, are subtracted, so F(a) = 0 and the
    partial sums converge in M.

    On the lower line Im F = 0. On the upper line Im F is constant: 0 for a
    vortex base, N/2 per zero for a source base (the flux between the walls).

    Args:
        base: Free-space flow f
        h: Strip width
        beta: Inclination in (-pi/2, pi/2]
        z: Evaluation point
        M: Truncation index
        extrapolate: Apply Richardson extrapolation over M, 2M, 4M

    Returns:
        F(z) - F(a)

    Raises:
        SingularityError: If z or the anchor sits on an image singularity
    """
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    if not -math.pi / 2 < beta <= math.pi / 2:
        raise ValidationError(f"inclination must lie in (-pi/2, pi/2], got {beta}")
    z = complex(z)
    levels = _levels(M, extrapolate)

    def f(w: complex) -> complex:
        return potential(base, w)

    f_tilde = reflection_conjugate(f, beta)
    shift = 1j * h * cmath.exp(1j * beta)
    anchor = complex(strip_boundary_points(h, beta, [0.0], side=-1)[0])

    def group(w: complex, n: int) -> complex:
        # terms n and -n of both families (n = 0 alone)
        value = f(w + 2 * n * shift) + f_tilde(w + (2 * n - 1) * shift)
        if n > 0:
            value += f(w - 2 * n * shift) + f_tilde(w - (2 * n + 1) * shift)
        return value

    partials, total = [], group(z, 0) - group(anchor, 0)
    for n in range(1, levels[-1] + 1):
        total += group(z, n) - group(anchor, n)
        if n in levels:
            partials.append(total)
    logger.debug(f"oblique_strip_flow: beta={beta:.4g} levels={levels} z={z}")
    return richardson(partials) if extrapolate else partials[0]


def strip_image_system(base_zero: complex, rep: FlowRep, h: float, M: int, beta: float = 0.0) -> ImageSystem:
    """
    The 2M+1 members of each image family of a (possibly oblique) strip

    Args:
        base_zero: Base singularity
        rep: Vortex or source representation
        h: Strip width
        M: Truncation index
        beta: Inclination (0 for the horizontal strip)

    Returns:
        Truncated image system
    """
    if h <= 0:
        raise ValidationError(f"strip width must be positive, got {h}")
    if M < 0:
        raise ValidationError(f"truncation index must be >= 0, got {M}")
    base_zero = complex(base_zero)
    kind, strength = _image_kind(rep, 1)
    mirror_kind, _ = _image_kind(rep, -1 if isinstance(rep, VortexRep) else 1)
    step = 2j * h * cmath.exp(1j * beta)
    mirror = reflect(base_zero, beta) + step / 2.0
    indices = range(-M, M + 1)
    singularities = [Singularity.at(base_zero + m * step, kind, strength) for m in indices]
    singularities += [Singularity.at(mirror + m * step, mirror_kind, strength) for m in indices]
    domain = StripDomain(h=h) if beta == 0 else ObliqueStripDomain(h=h, beta=beta)
    return ImageSystem(
        domain=domain,
        truncation_index=M,
        singularities=singularities,
        truncated=True,
        lattice_inclination=beta + math.pi / 2.0,
    )


# Cat states


def _normalize_inclination(beta: float) -> float:
    while beta <= -math.pi / 2:
        beta += math.pi
    while beta > math.pi / 2:
        beta -= math.pi
    return beta


def _cat_lattice(alpha: complex, parity: Parity) -> Tuple[complex, complex]:
    """(centre, period) of the zero lattice of cosh/sinh(alpha z)"""
    alpha = complex(alpha)
    if alpha == 0:
        raise ValidationError("cat lattices need alpha != 0")
    period = 1j * math.pi / alpha
    center = period / 2.0 if Parity(parity) == Parity.EVEN else 0j
    return center, period


def cat_image_system(alpha: complex, parity: Parity, rep: FlowRep, M: int) -> ImageSystem:
    """
    Equal-strength singularities at the zeros of sinh (odd) or cosh (even) of alpha z

    z_n = i pi n / alpha (odd) or i pi (n + 1/2) / alpha (even), |n| <= M. The
    attached oblique strip has width pi/|alpha| and inclination -arg alpha;
    the lattice line is inclined at pi/2 - arg alpha.

    Args:
        alpha: Cat amplitude
        parity: Even or odd
        rep: Vortex or source representation
        M: Truncation index

    Returns:
        Truncated image system
    """
    if M < 0:
        raise ValidationError(f"truncation index must be >= 0, got {M}")
    center, period = _cat_lattice(alpha, parity)
    alpha = complex(alpha)
    kind, strength = _image_kind(rep, 1)
    singularities = [Singularity.at(center + n * period, kind, strength) for n in range(-M, M + 1)]
    arg_alpha = cmath.phase(alpha)
    domain = ObliqueStripDomain(
        h=math.pi / abs(alpha),
        beta=_normalize_inclination(-arg_alpha),
        offset=center,
    )
    return ImageSystem(
        domain=domain,
        truncation_index=M,
        singularities=singularities,
        truncated=True,
        lattice_inclination=math.pi / 2.0 - arg_alpha,
    )


def cat_lattice_velocity(
    alpha: complex,
    parity: Parity,
    rep: FlowRep,
    z: complex,
    M: int,
    extrapolate: bool = True,
) -> complex:
    """
    Velocity of the cat-state singularity lattice summed symmetrically

    Converges to prefactor * alpha * coth(alpha z) (odd) or
    prefactor * alpha * tanh(alpha z) (even).
    """
    center, period = _cat_lattice(alpha, parity)
    partials = [rep.prefactor * value for value in _lattice_sum(complex(z), center, period, _levels(M, extrapolate))]
    return richardson(partials) if extrapolate else partials[0]


# q-geometric images


def q_image_system(q: float, alpha: complex, M: int, rep: Optional[FlowRep] = None) -> ImageSystem:
    """
    Image set of the q-coherent state: zeros (q > 1) or poles (q < 1) of e_q(alpha z)

    q > 1 lists singularities at z_k = -q^(k+1) / (alpha (q - 1)); q < 1 lists
    opposite-signed ones at z_k = 1 / (alpha (1 - q) q^k); k = 0..M.

    Args:
        q: Deformation parameter
        alpha: Coherent amplitude
        M: Largest index k
        rep: Flow representation, a unit vortex (Gamma = 2 pi) by default

    Returns:
        Truncated image system with M + 1 entries
    """
    qp = as_q(q)
    if M < 0:
        raise ValidationError(f"truncation index must be >= 0, got {M}")
    rep = rep or VortexRep(gamma=DEFAULT_Q_GAMMA)
    if qp.q > 1:
        positions = q_exponential_zeros(qp, alpha, M + 1)
        kind, strength = _image_kind(rep, 1)
    else:
        positions = q_exponential_poles(qp, alpha, M + 1)
        kind, strength = _image_kind(rep, -1)
    return ImageSystem(
        domain=GeometricDomain(q=qp.q, alpha=complex(alpha)),
        truncation_index=M,
        singularities=[Singularity.at(p, kind, strength) for p in positions],
        truncated=True,
    )


# Displaced states


def displaced_flow_decomposition(n: int, alpha: complex, rep: FlowRep) -> Tuple[Optional[Singularity], complex]:
    """
    Split the displaced-state flow into a point singularity and a uniform stream

    Psi = (z - conj(alpha))^n exp(alpha z) gives a singularity of multiplicity
    n at conj(alpha) on top of the background conjugate velocity prefactor * alpha.

    Args:
        n: Fock index
        alpha: Displacement
        rep: Vortex or source representation

    Returns:
        (singularity or None when n = 0, background conjugate velocity)
    """
    if n < 0:
        raise ValidationError(f"Fock index must be non-negative, got {n}")
    _require_pure(rep)
    alpha = complex(alpha)
    background = rep.prefactor * alpha
    strength_value = rep.gamma if isinstance(rep, VortexRep) else rep.n_strength
    if n == 0 or strength_value == 0:
        return None, background
    kind, strength = _image_kind(rep, 1)
    return Singularity.at(alpha.conjugate(), kind, strength, multiplicity=n), background


__all__ = [
    "cat_image_system",
    "cat_lattice_velocity",
    "closed_form_strip",
    "displaced_flow_decomposition",
    "image_system_velocity",
    "oblique_strip_flow",
    "oblique_strip_velocity",
    "q_image_system",
    "reflect",
    "reflection_conjugate",
    "richardson",
    "schwarz_conjugate",
    "singularity_velocity",
    "strip_boundary_points",
    "strip_flow",
    "strip_image_system",
    "strip_log_derivative",
    "strip_velocity",
    "strip_wavefunction",
    "strip_wavefunction_log",
    "wedge_flow",
    "wedge_image_system",
    "wedge_wavefunction",
]
