"""Circle-at-infinity dynamics of rank-3 hyperbolic reflection systems.

A rank-3 system whose cosine form has signature (2,0,1) acts on the
hyperboloid model of the hyperbolic plane.  A fixed eigenframe takes the
form to diag(+1,+1,-1); the boundary circle is the projectivized null
cone, parametrized by the angle of the ray (cos t, sin t, 1).  Because
the action is linear, boundary maps are exact matrix arithmetic, and the
fixed points of a hyperbolic element are its null eigenvectors.

Everything downstream (limit sets, north-south iteration, contraction
searches, orbit gaps, pair-distance statistics) is built from that one
picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coxeter import CoxeterMatrix, gram, signature
from .words import GroupElement, NumericAmbiguity, ReflectionRep, ball, build_rep

TWO_PI = 2.0 * math.pi

EIG_TOL = 1e-9
CONVERGENCE_TOL = 1e-3
EXCLUSION_DELTA = 1e-2
DEDUP_TOL = 1e-9


class NotHyperbolicPlane(Exception):
    """The system does not realize the hyperbolic plane (wrong rank or
    wrong signature)."""


class DegenerateInput(ValueError):
    pass


def normalize_angle(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    return t + TWO_PI if t < 0 else t


def circle_distance(a: float, b: float) -> float:
    """Angular metric on the circle, at most pi."""
    d = abs(normalize_angle(a) - normalize_angle(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Arc:
    """Circular arc from ``start`` sweeping counterclockwise by ``extent``.

    Arcs are proper: 0 < extent < 2*pi.  The ``closed`` flag records
    whether the endpoints belong to the arc; the search operations fix
    their own open/closed reading regardless (a contraction target is
    always treated as open, the set being moved as closed).
    """

    start: float
    extent: float
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "start", normalize_angle(self.start))
        if not 0.0 < self.extent < TWO_PI:
            raise DegenerateInput(f"arc extent {self.extent} outside (0, 2*pi)")

    @classmethod
    def from_endpoints(cls, start: float, end: float, closed: bool = False) -> "Arc":
        extent = normalize_angle(end - start)
        if extent == 0.0:
            raise DegenerateInput("arc endpoints coincide")
        return cls(start, extent, closed)

    @property
    def end(self) -> float:
        return normalize_angle(self.start + self.extent)

    @property
    def midpoint(self) -> float:
        return normalize_angle(self.start + self.extent / 2.0)

    def contains(self, theta: float) -> bool:
        offset = normalize_angle(theta - self.start)
        if self.closed:
            return offset <= self.extent
        return 0.0 < offset < self.extent

    def complement(self) -> "Arc":
        """The complementary arc (closed iff this one is open)."""
        return Arc(self.end, TWO_PI - self.extent, not self.closed)

    def sample(self, count: int) -> np.ndarray:
        """Evenly spaced angles on the arc, endpoints included."""
        offsets = np.linspace(0.0, self.extent, count)
        return np.mod(self.start + offsets, TWO_PI)


def arc_contains_arc(outer: Arc, inner: Arc) -> bool:
    """Whether the closed ``inner`` arc sits strictly inside the open
    ``outer`` arc."""
    offset = normalize_angle(inner.start - outer.start)
    return 0.0 < offset and offset + inner.extent < outer.extent


@dataclass(frozen=True)
class HyperbolicRealization:
    """Reflection representation plus the frame diagonalizing the form."""

    rep: ReflectionRep
    frame: np.ndarray
    frame_inverse: np.ndarray

    def __post_init__(self):
        self.frame.flags.writeable = False
        self.frame_inverse.flags.writeable = False

    def minkowski(self, matrix: np.ndarray) -> np.ndarray:
        """Conjugate a root-coordinate matrix into the diag(1,1,-1) frame."""
        return self.frame @ matrix @ self.frame_inverse

    @property
    def basepoint(self) -> np.ndarray:
        """The point of the upper hyperboloid sheet above the frame origin."""
        return np.array([0.0, 0.0, 1.0])

    @property
    def basepoint_root(self) -> np.ndarray:
        return self.frame_inverse @ self.basepoint


def realize(matrix: CoxeterMatrix) -> HyperbolicRealization:
    """Hyperbolic-plane realization of a rank-3 indefinite system."""
    if matrix.rank != 3:
        raise NotHyperbolicPlane(f"rank {matrix.rank}, need rank 3")
    form = gram(matrix)
    sig = signature(form)
    if sig != (2, 0, 1):
        raise NotHyperbolicPlane(f"signature {sig}, need (2, 0, 1)")
    values, vectors = np.linalg.eigh(form)
    for j in range(3):
        k = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[k, j] < 0:
            vectors[:, j] = -vectors[:, j]
    frame = np.vstack(
        [
            math.sqrt(values[1]) * vectors[:, 1],
            math.sqrt(values[2]) * vectors[:, 2],
            math.sqrt(-values[0]) * vectors[:, 0],
        ]
    )
    return HyperbolicRealization(
        rep=build_rep(matrix),
        frame=frame,
        frame_inverse=np.linalg.inv(frame),
    )


def boundary_ray(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta), 1.0])


def _null_angle(v: np.ndarray) -> float:
    if v[2] == 0.0:
        raise NumericAmbiguity("null vector with vanishing timelike coordinate")
    if v[2] < 0:
        v = -v
    return normalize_angle(math.atan2(v[1], v[0]))


def _apply_angle(minkowski_matrix: np.ndarray, theta: float) -> float:
    return _null_angle(minkowski_matrix @ boundary_ray(theta))


def boundary_action(
    realization: HyperbolicRealization, g: GroupElement, point: float
) -> float:
    """Image of a boundary angle under a group element."""
    return _apply_angle(realization.minkowski(g.matrix), point)


class IsometryKind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class IsometryClass:
    kind: IsometryKind
    order: int | None = None
    translation_length: float | None = None
    attracting: float | None = None
    repelling: float | None = None


def _eigen_fixed_points(minkowski_matrix: np.ndarray) -> tuple[float, float, float]:
    values, vectors = np.linalg.eig(minkowski_matrix)
    magnitudes = np.abs(values)
    i_max = int(np.argmax(magnitudes))
    i_min = int(np.argmin(magnitudes))
    spectral_radius = float(magnitudes[i_max])
    attracting = _null_angle(np.real(vectors[:, i_max]))
    repelling = _null_angle(np.real(vectors[:, i_min]))
    return spectral_radius, attracting, repelling


def _basepoint_converges(
    minkowski_matrix: np.ndarray,
    attracting: float,
    tol: float = 1e-6,
    max_iterations: int = 2048,
) -> bool:
    """Iterate the basepoint and watch its Klein-disk projection approach
    the attracting boundary point."""
    target = np.array([math.cos(attracting), math.sin(attracting)])
    y = np.array([0.0, 0.0, 1.0])
    for _ in range(max_iterations):
        y = minkowski_matrix @ y
        y = y / y[2]
        if math.hypot(y[0] - target[0], y[1] - target[1]) < tol:
            return True
    return False


def classify_isometry(
    realization: HyperbolicRealization,
    g: GroupElement,
    eig_tol: float = EIG_TOL,
    power_cap: int = 128,
    check_convergence: bool = True,
) -> IsometryClass:
    """Elliptic / parabolic / hyperbolic trichotomy of one element.

    Hyperbolic elements carry ln(spectral radius) as translation length
    and their null eigendirections as fixed boundary points; the orbit of
    the basepoint is iterated as a numeric sanity check on the attracting
    point.  Finite order certifies elliptic; unipotent spectrum with a
    non-identity matrix certifies parabolic; anything else refuses to
    guess.
    """
    mk = realization.minkowski(g.matrix)
    spectral_radius, attracting, repelling = _eigen_fixed_points(mk)
    if spectral_radius > 1.0 + eig_tol:
        if check_convergence and not _basepoint_converges(mk, attracting):
            raise NumericAmbiguity(
                "basepoint orbit failed to converge to the attracting point"
            )
        return IsometryClass(
            IsometryKind.HYPERBOLIC,
            translation_length=math.log(spectral_radius),
            attracting=attracting,
            repelling=repelling,
        )
    power = np.eye(3)
    for k in range(1, power_cap + 1):
        power = power @ mk
        if np.abs(power - np.eye(3)).max() < 1e-7:
            return IsometryClass(IsometryKind.ELLIPTIC, order=k)
    eigenvalues = np.linalg.eigvals(mk)
    if np.abs(eigenvalues - 1.0).max() < 1e-6 and np.abs(mk - np.eye(3)).max() > 1e-7:
        return IsometryClass(IsometryKind.PARABOLIC)
    raise NumericAmbiguity(
        f"spectral radius {spectral_radius} within tolerance of 1 but the "
        f"power test is inconclusive"
    )


def hyperbolic_elements(
    realization: HyperbolicRealization,
    elements,
    eig_tol: float = EIG_TOL,
):
    """(element, spectral radius, attracting, repelling) for each
    hyperbolic element, in the order given."""
    out = []
    for g in elements:
        mk = realization.minkowski(g.matrix)
        spectral_radius, attracting, repelling = _eigen_fixed_points(mk)
        if spectral_radius > 1.0 + eig_tol:
            out.append((g, spectral_radius, attracting, repelling))
    return out


def _dedup_circle(angles, tol: float) -> np.ndarray:
    values = np.sort(np.mod(np.asarray(angles, dtype=float), TWO_PI))
    if values.size == 0:
        return values
    keep = [values[0]]
    previous = values[0]
    for x in values[1:]:
        if x - previous > tol:
            keep.append(x)
        previous = x
    if len(keep) > 1 and keep[0] + TWO_PI - values[-1] <= tol:
        keep.pop()
    return np.array(keep)


def limit_set_sample(
    realization: HyperbolicRealization,
    radius: int,
    elements=None,
    dedup_tol: float = DEDUP_TOL,
) -> np.ndarray:
    """Attracting fixed points of all hyperbolic elements in the ball.

    Pass ``elements`` to reuse an already enumerated ball.
    """
    if elements is None:
        elements = ball(realization.rep, radius)
    angles = [
        attracting
        for _, _, attracting, _ in hyperbolic_elements(realization, elements)
    ]
    return _dedup_circle(angles, dedup_tol)


def max_gap(points) -> float:
    """Largest angular gap between circularly consecutive points; 2*pi
    when fewer than two points."""
    values = np.sort(np.mod(np.asarray(points, dtype=float), TWO_PI))
    if values.size <= 1:
        return TWO_PI
    gaps = np.diff(values)
    wraparound = values[0] + TWO_PI - values[-1]
    return float(max(gaps.max(), wraparound))


@dataclass(frozen=True)
class NorthSouthReport:
    fraction_converged: float
    n_samples: int
    n_excluded: int
    n_converged: int
    n_iterations: int
    tolerance: float
    exclusion: float
    attracting: float
    repelling: float
    translation_length: float


def verify_north_south(
    realization: HyperbolicRealization,
    g: GroupElement,
    n_samples: int = 360,
    n_iterations: int = 200,
    tol: float = CONVERGENCE_TOL,
    exclusion: float = EXCLUSION_DELTA,
) -> NorthSouthReport:
    """Iterate equispaced boundary samples under a hyperbolic element and
    report the fraction attracted to its forward fixed point.

    Samples closer than ``exclusion`` to the repelling fixed point are
    left out; everything else is expected to converge.
    """
    cls = classify_isometry(realization, g)
    if cls.kind is not IsometryKind.HYPERBOLIC:
        raise DegenerateInput(f"element {g.word} is {cls.kind.value}, not hyperbolic")
    mk = realization.minkowski(g.matrix)
    thetas = np.arange(n_samples) * (TWO_PI / n_samples)
    distances = np.abs(np.mod(thetas - cls.repelling, TWO_PI))
    distances = np.minimum(distances, TWO_PI - distances)
    included = thetas[distances >= exclusion]
    rays = np.vstack(
        [np.cos(included), np.sin(included), np.ones_like(included)]
    )
    for _ in range(n_iterations):
        rays = mk @ rays
        rays = rays / rays[2, :]
    finals = np.mod(np.arctan2(rays[1, :], rays[0, :]), TWO_PI)
    errs = np.abs(np.mod(finals - cls.attracting, TWO_PI))
    errs = np.minimum(errs, TWO_PI - errs)
    n_converged = int(np.count_nonzero(errs < tol))
    n_included = included.size
    return NorthSouthReport(
        fraction_converged=(n_converged / n_included) if n_included else 1.0,
        n_samples=n_samples,
        n_excluded=n_samples - n_included,
        n_converged=n_converged,
        n_iterations=n_iterations,
        tolerance=tol,
        exclusion=exclusion,
        attracting=cls.attracting,
        repelling=cls.repelling,
        translation_length=cls.translation_length,
    )


def arc_image(realization: HyperbolicRealization, g: GroupElement, arc: Arc) -> Arc:
    """Image arc under a group element, resolved by where the midpoint lands."""
    return _arc_image(realization.minkowski(g.matrix), arc)


def _arc_image(mk: np.ndarray, arc: Arc) -> Arc:
    a = _apply_angle(mk, arc.start)
    b = _apply_angle(mk, arc.end)
    mid = _apply_angle(mk, arc.midpoint)
    forward = normalize_angle(b - a)
    if normalize_angle(mid - a) <= forward:
        return Arc(a, forward, arc.closed)
    return Arc(b, normalize_angle(a - b), arc.closed)


def find_contraction(
    realization: HyperbolicRealization,
    closed_arc: Arc,
    open_arc: Arc,
    radius: int,
    elements=None,
) -> GroupElement | None:
    """First element in ShortLex order carrying the closed arc strictly
    into the open arc, or None if the ball holds no witness."""
    if elements is None:
        elements = ball(realization.rep, radius)
    for g in elements:
        image = _arc_image(realization.minkowski(g.matrix), closed_arc)
        if arc_contains_arc(open_arc, image):
            return g
    return None


def recheck_contraction(
    realization: HyperbolicRealization,
    g: GroupElement,
    closed_arc: Arc,
    open_arc: Arc,
    n_points: int = 100,
) -> bool:
    """Re-test a contraction witness pointwise on arc samples."""
    mk = realization.minkowski(g.matrix)
    target = Arc(open_arc.start, open_arc.extent, closed=False)
    return all(
        target.contains(_apply_angle(mk, theta))
        for theta in closed_arc.sample(n_points)
    )


def find_dual_pair(
    realization: HyperbolicRealization,
    u: Arc,
    v: Arc,
    radius: int,
    elements=None,
) -> GroupElement | None:
    """First element g with g(circle - U) inside V and g^-1(circle - V)
    inside U, both read with U, V open."""
    if elements is None:
        elements = ball(realization.rep, radius)
    complement_u = Arc(u.end, TWO_PI - u.extent, closed=True)
    complement_v = Arc(v.end, TWO_PI - v.extent, closed=True)
    for g in elements:
        mk = realization.minkowski(g.matrix)
        if not arc_contains_arc(v, _arc_image(mk, complement_u)):
            continue
        mk_inv = realization.minkowski(g.inverse_matrix)
        if arc_contains_arc(u, _arc_image(mk_inv, complement_v)):
            return g
    return None


def boundary_orbit(
    realization: HyperbolicRealization,
    alpha: float,
    radius: int,
    elements=None,
) -> np.ndarray:
    """Orbit of a boundary angle under the ball, in ball order."""
    if elements is None:
        elements = ball(realization.rep, radius)
    ray = boundary_ray(normalize_angle(alpha))
    out = np.empty(len(elements))
    for i, g in enumerate(elements):
        w = realization.minkowski(g.matrix) @ ray
        if w[2] < 0:
            w = -w
        out[i] = math.atan2(w[1], w[0])
    return np.mod(out, TWO_PI)


def verify_minimality(
    realization: HyperbolicRealization,
    alpha: float,
    radius: int,
    elements=None,
) -> float:
    """Largest gap left by the ball orbit of one boundary point."""
    return max_gap(boundary_orbit(realization, alpha, radius, elements))


@dataclass(frozen=True)
class ScrambledStats:
    min_distance: float
    max_distance: float
    n_elements: int


def scrambled_stats(
    realization: HyperbolicRealization,
    alpha: float,
    beta: float,
    radius: int,
    elements=None,
) -> ScrambledStats:
    """Extremes of the pair distance d(g a, g b) over the ball.

    A scrambled action drives the minimum toward zero while the maximum
    stays bounded away from it; over a finite ball both trends are
    monotone in the radius.
    """
    a = normalize_angle(alpha)
    b = normalize_angle(beta)
    if a == b:
        raise DegenerateInput("boundary points coincide")
    if elements is None:
        elements = ball(realization.rep, radius)
    orbit_a = boundary_orbit(realization, a, radius, elements)
    orbit_b = boundary_orbit(realization, b, radius, elements)
    diffs = np.abs(np.mod(orbit_a - orbit_b, TWO_PI))
    diffs = np.minimum(diffs, TWO_PI - diffs)
    return ScrambledStats(
        min_distance=float(diffs.min()),
        max_distance=float(diffs.max()),
        n_elements=len(elements),
    )
