"""
Argument-principle zero counting and isolation, flow field sampling and
streamline tracing
"""

import cmath
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..models.field_grid import FieldGrid, FieldGridSpec, RectRegion, Region, Zero
from ..models.flow_spec import CircleContour, Contour, FlowSpec, PolylineContour
from ..models.state_spec import QCoherentState, StateSpec, Truncation
from ..utils.logger import ContextualLogger, get_logger
from .exceptions import (
    ContourSingularityError,
    FockFlowError,
    IllConditionedContourError,
    MaxDepthError,
    MultiplicityCapError,
    SeedSingularityError,
    SingularityError,
)
from .flow import contour_integral, contour_nodes, potential, velocity
from .states import eval_state, eval_state_derivative, log_derivative

logger = get_logger(__name__)

ROUNDING_LIMIT = 0.25
RETRY_FACTOR = 4
RESIDUAL_FACTOR = 1e-10
MASK_FACTOR = 1e-6

# split points of a box, as fractions of its size away from the centre
SPLIT_OFFSETS = ((0.0137, 0.0213), (-0.0311, 0.0173), (0.0419, -0.0277))
# enlargements tried when the bounding box of a region passes through a zero
BOX_ENLARGEMENTS = (1.0, 1.0137, 1.0311)

Box = Tuple[float, float, float, float]


def winding_number(func: Callable[[complex], complex], contour: Contour) -> float:
    """
    Winding of func around 0 along a contour, from the unwrapped phase of its samples

    Equals the number of zeros minus poles of func inside the contour when
    the contour is sampled finely enough that consecutive phases differ by
    less than pi.

    Args:
        func: Function evaluated at the ordered contour nodes
        contour: Closed contour

    Returns:
        Unrounded winding number
    """
    nodes, _ = contour_nodes(contour)
    values = np.empty(len(nodes) + 1, dtype=complex)
    for j, node in enumerate(nodes):
        try:
            values[j] = func(complex(node))
        except SingularityError:
            raise ContourSingularityError(complex(node), f"Contour passes through a zero at z = {complex(node)}")
        if values[j] == 0:
            raise ContourSingularityError(complex(node), f"Contour passes through a zero at z = {complex(node)}")
    values[-1] = values[0]
    increments = np.angle(values[1:] / values[:-1])
    return float(np.sum(increments) / (2.0 * math.pi))


def _winding_integral(s: StateSpec, c: Contour, t: Truncation) -> complex:
    return contour_integral(lambda z: log_derivative(s, z, t), c) / (2j * math.pi)


def count_zeros(s: StateSpec, c: Contour, t: Optional[Truncation] = None) -> int:
    """
    Number of zeros (minus poles) of Psi inside a contour

    (1/2 pi i) times the closed integral of Psi'/Psi, rounded. A rounding
    defect of 0.25 or more triggers one retry with four times the nodes.

    Args:
        s: State
        c: Contour avoiding the zeros of Psi
        t: Truncation policy

    Returns:
        Winding number

    Raises:
        ContourSingularityError: If a quadrature node hits a zero
        IllConditionedContourError: If the integral is not close to an integer
    """
    t = t or Truncation()
    winding = _winding_integral(s, c, t)
    nearest = round(winding.real) if math.isfinite(winding.real) else 0
    defect = abs(winding - nearest)
    if not defect < ROUNDING_LIMIT:
        refined = c.model_copy(update={"samples": c.samples * RETRY_FACTOR})
        winding = _winding_integral(s, refined, t)
        nearest = round(winding.real) if math.isfinite(winding.real) else 0
        defect = abs(winding - nearest)
        if not defect < ROUNDING_LIMIT:
            raise IllConditionedContourError(winding, defect)
    return int(nearest)


def _rectangle(box: Box, samples: int) -> PolylineContour:
    x0, x1, y0, y1 = box
    return PolylineContour(
        points=[complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)],
        samples=samples,
    )


def _enlarge(box: Box, factor: float) -> Box:
    x0, x1, y0, y1 = box
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    hx, hy = factor * (x1 - x0) / 2.0, factor * (y1 - y0) / 2.0
    return cx - hx, cx + hx, cy - hy, cy + hy


class ZeroFinder:
    """
    Isolates the zeros of a wave function in a region

    Boxes are quadrisected at slightly off-centre points until the zeros of
    a box can be reached by a multiplicity-aware Newton iteration from its
    centre, confirmed by a small-circle winding count.
    """

    def __init__(
        self,
        max_depth: int = 12,
        multiplicity_cap: int = 16,
        newton_max_iter: int = 60,
        samples: int = 1024,
    ):
        """
        Initialize the finder

        Args:
            max_depth: Maximum subdivision depth
            multiplicity_cap: Largest accepted multiplicity of a single zero
            newton_max_iter: Newton iterations per isolation attempt
            samples: Quadrature nodes per box contour
        """
        self.max_depth = max_depth
        self.multiplicity_cap = multiplicity_cap
        self.newton_max_iter = newton_max_iter
        self.samples = samples
        self.logger = ContextualLogger(logger, {"component": "zero_search"})

    @classmethod
    def from_config(cls, config) -> "ZeroFinder":
        """Build a finder from a loaded Config"""
        search = config.zero_search_config
        return cls(
            max_depth=search.max_depth,
            multiplicity_cap=search.multiplicity_cap,
            newton_max_iter=search.newton_max_iter,
            samples=config.quadrature_config.samples,
        )

    def find(self, s: StateSpec, region: Region, t: Optional[Truncation] = None) -> List[Zero]:
        """
        Zeros of Psi inside a region with their multiplicities

        Args:
            s: State
            region: Disk or rectangle whose boundary avoids the zeros
            t: Truncation policy

        Returns:
            Zeros sorted by real then imaginary part

        Raises:
            MaxDepthError: If the zeros cannot be isolated
            MultiplicityCapError: If a zero exceeds the multiplicity cap
        """
        t = t or Truncation()
        if isinstance(s, QCoherentState) and s.q < 1:
            # reciprocal product: poles only
            return []

        box, total = self._root_box(s, region.bounding_box(), t)
        self.logger.debug(f"{total} zero(s) in bounding box {box}")
        zeros = self._search(s, box, total, 0, t)
        inside = [zero for zero in zeros if region.contains(zero.position)]
        return sorted(inside, key=lambda zero: (zero.position.real, zero.position.imag))

    def _root_box(self, s: StateSpec, box: Box, t: Truncation) -> Tuple[Box, int]:
        error: Optional[FockFlowError] = None
        for factor in BOX_ENLARGEMENTS:
            candidate = _enlarge(box, factor)
            try:
                return candidate, count_zeros(s, _rectangle(candidate, self.samples), t)
            except (ContourSingularityError, IllConditionedContourError) as e:
                self.logger.debug(f"bounding box {candidate} rejected: {e}")
                error = e
        raise error

    def _search(self, s: StateSpec, box: Box, count: int, depth: int, t: Truncation) -> List[Zero]:
        if count <= 0:
            return []
        zero = self._isolate(s, box, count, t)
        if zero is not None:
            return [zero]
        if depth >= self.max_depth:
            raise MaxDepthError(f"{count} zero(s) in box {box} not isolated within depth {self.max_depth}")

        zeros: List[Zero] = []
        for child, child_count in self._split(s, box, count, t):
            zeros.extend(self._search(s, child, child_count, depth + 1, t))
        return zeros

    def _split(self, s: StateSpec, box: Box, count: int, t: Truncation) -> List[Tuple[Box, int]]:
        x0, x1, y0, y1 = box
        width, height = x1 - x0, y1 - y0
        for ox, oy in SPLIT_OFFSETS:
            xm = (x0 + x1) / 2.0 + ox * width
            ym = (y0 + y1) / 2.0 + oy * height
            children = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            try:
                counts = [count_zeros(s, _rectangle(child, self.samples), t) for child in children]
            except (ContourSingularityError, IllConditionedContourError) as e:
                self.logger.debug(f"split of {box} at ({xm}, {ym}) rejected: {e}")
                continue
            if sum(counts) != count:
                self.logger.debug(f"split of {box} lost zeros: {counts} vs {count}")
                continue
            return [(child, k) for child, k in zip(children, counts) if k != 0]
        raise MaxDepthError(f"no clean subdivision of box {box} holding {count} zero(s)")

    def _newton(self, s: StateSpec, z: complex, k: int, box: Box, t: Truncation) -> Optional[complex]:
        x0, x1, y0, y1 = box
        size = max(x1 - x0, y1 - y0)
        for _ in range(self.newton_max_iter):
            psi = eval_state(s, z, t)
            if psi == 0:
                return z
            dpsi = eval_state_derivative(s, z, t)
            if dpsi == 0:
                return None
            step = k * psi / dpsi
            z -= step
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                return None
            if abs(z - complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)) > size:
                return None
            if abs(step) <= 4e-16 * max(1.0, abs(z)):
                return z
        return z

    def _isolate(self, s: StateSpec, box: Box, count: int, t: Truncation) -> Optional[Zero]:
        """A single zero of multiplicity `count` accounting for the whole box, or None"""
        x0, x1, y0, y1 = box
        center = complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)
        try:
            z = self._newton(s, center, count, box, t)
        except FockFlowError:
            return None
        if z is None or not (x0 < z.real < x1 and y0 < z.imag < y1):
            return None

        edge_distance = min(z.real - x0, x1 - z.real, z.imag - y0, y1 - z.imag)
        radius = min(0.05 * max(x1 - x0, y1 - y0), 0.5 * edge_distance)
        if radius <= 0:
            return None
        try:
            ring = [abs(eval_state(s, z + radius * cmath.exp(2j * math.pi * j / 16), t)) for j in range(16)]
            if abs(eval_state(s, z, t)) > RESIDUAL_FACTOR * max(ring):
                return None
            multiplicity = count_zeros(s, CircleContour(center=z, radius=radius, samples=256), t)
        except FockFlowError:
            return None
        if multiplicity != count:
            return None
        if multiplicity > self.multiplicity_cap:
            raise MultiplicityCapError(
                f"zero at {z} has multiplicity {multiplicity} above the cap {self.multiplicity_cap}"
            )
        return Zero(position=z, multiplicity=multiplicity)


def find_zeros(
    s: StateSpec,
    region: Region,
    t: Optional[Truncation] = None,
    max_depth: int = 12,
    multiplicity_cap: int = 16,
    newton_max_iter: int = 60,
) -> List[Zero]:
    """
    Zeros of Psi in a region by quadrisection and Newton refinement

    Args:
        s: State
        region: Disk or rectangle
        t: Truncation policy
        max_depth: Maximum subdivision depth
        multiplicity_cap: Largest accepted multiplicity
        newton_max_iter: Newton iterations per isolation attempt

    Returns:
        Zeros with multiplicities
    """
    finder = ZeroFinder(max_depth=max_depth, multiplicity_cap=multiplicity_cap, newton_max_iter=newton_max_iter)
    return finder.find(s, region, t)


def sample_field(fs: FlowSpec, grid: FieldGridSpec, finder: Optional[ZeroFinder] = None) -> FieldGrid:
    """
    Sample phi, psi, u and v at every grid node

    Nodes within 1e-6 of a cell of a zero, and nodes where the flow cannot be
    evaluated, are masked. Values are pointwise, so refining the grid leaves
    coincident nodes unchanged.

    Args:
        fs: Flow spec
        grid: Node lattice
        finder: Zero finder used for masking

    Returns:
        Sampled field
    """
    finder = finder or ZeroFinder()
    nodes = grid.nodes()
    guard = MASK_FACTOR * min(grid.dx, grid.dy)

    search_region = RectRegion(
        x_min=grid.x_min - grid.dx / 2.0,
        x_max=grid.x_max + grid.dx / 2.0,
        y_min=grid.y_min - grid.dy / 2.0,
        y_max=grid.y_max + grid.dy / 2.0,
    )
    try:
        zeros = [zero.position for zero in finder.find(fs.state, search_region, fs.trunc)]
    except FockFlowError as e:
        logger.warning(f"zero search over the grid failed, masking by evaluation only: {e}")
        zeros = []

    mask = np.zeros(nodes.shape, dtype=bool)
    for zero in zeros:
        mask |= np.abs(nodes - zero) < guard

    phi = np.full(nodes.shape, np.nan)
    psi = np.full(nodes.shape, np.nan)
    u = np.full(nodes.shape, np.nan)
    v = np.full(nodes.shape, np.nan)
    for index in np.ndindex(nodes.shape):
        if mask[index]:
            continue
        z = complex(nodes[index])
        try:
            f = potential(fs, z)
            conjugate_velocity = velocity(fs, z)
        except FockFlowError:
            mask[index] = True
            continue
        if not all(math.isfinite(x) for x in (f.real, f.imag, conjugate_velocity.real, conjugate_velocity.imag)):
            mask[index] = True
            continue
        phi[index], psi[index] = f.real, f.imag
        u[index], v[index] = conjugate_velocity.real, -conjugate_velocity.imag

    def masked(values: np.ndarray) -> np.ma.MaskedArray:
        return np.ma.masked_array(values, mask=mask.copy())

    logger.debug(f"sampled {nodes.size} nodes, {int(mask.sum())} masked")
    return FieldGrid(grid=grid, phi=masked(phi), psi=masked(psi), u=masked(u), v=masked(v), mask=mask)


def _physical_velocity(fs: FlowSpec, z: complex) -> complex:
    """u + i v, the complex conjugate of the conjugate velocity"""
    return velocity(fs, z).conjugate()


def trace_streamline(
    fs: FlowSpec,
    seed: complex,
    step: float,
    n_steps: int,
    bounds: Optional[Tuple[float, float, float, float]] = None,
) -> List[complex]:
    """
    Integrate dz/dt = u + i v with fixed-step classical Runge-Kutta

    Tracing stops early when a stage evaluation hits a singularity, the
    position overflows, or it leaves `bounds`.

    Args:
        fs: Flow spec
        seed: Starting point
        step: Time step
        n_steps: Maximum number of steps
        bounds: Optional (x_min, x_max, y_min, y_max) box

    Returns:
        Positions, starting with the seed

    Raises:
        SeedSingularityError: If the flow is singular at the seed
    """
    z = complex(seed)
    try:
        _physical_velocity(fs, z)
    except SingularityError:
        raise SeedSingularityError(z, f"Streamline seed {z} sits on a singularity")

    points = [z]
    for _ in range(n_steps):
        try:
            k1 = _physical_velocity(fs, z)
            k2 = _physical_velocity(fs, z + 0.5 * step * k1)
            k3 = _physical_velocity(fs, z + 0.5 * step * k2)
            k4 = _physical_velocity(fs, z + step * k3)
        except FockFlowError as e:
            logger.debug(f"streamline from {seed} stopped at {z}: {e}")
            break
        z = z + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            break
        if bounds is not None:
            x0, x1, y0, y1 = bounds
            if not (x0 <= z.real <= x1 and y0 <= z.imag <= y1):
                break
        points.append(z)
    return points


def seed_points(centers: Sequence[complex], per_center: int, radius: float) -> List[complex]:
    """Seeds evenly spaced on a small circle around each centre"""
    return [
        complex(c) + radius * cmath.exp(2j * math.pi * (j + 0.5) / per_center)
        for c in centers
        for j in range(per_center)
    ]
