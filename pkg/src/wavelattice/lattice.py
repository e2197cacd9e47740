"""Space-time lattices, admissibility, domain geometry and classification.

A lattice is the pair (dx, dt) together with the horizon T and the spatial
dimension n.  Admissible lattices satisfy the CFL bound dt/dx <= 1/sqrt(n)
and have an integer number of time steps per horizon.  Bounded domains are
boxes, balls, or finite unions of those; lattice points are split into
interior points (all 2n axis neighbours inside the domain) and boundary
points (in the closure, at least one neighbour outside).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousBoundaryError, UnsupportedShapeError

#: relative tolerance for the T/dt integrality test and boundary ties
REL_TOL = 1e-12


@dataclass(frozen=True)
class LatticeSpec:
    """Steps (dx, dt), horizon T and spatial dimension n of one lattice."""

    n: int
    dx: float
    dt: float
    T: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("spatial dimension must be >= 1")
        if self.dx <= 0 or self.dt <= 0 or self.T <= 0:
            raise ValueError("dx, dt and T must be positive")

    @property
    def steps(self) -> int:
        """Number of time steps per horizon, round(T / dt)."""
        return max(1, round(self.T / self.dt))

    def admissible(self) -> bool:
        """True iff T/dt is an integer (rel. tol 1e-12) and dt/dx <= 1/sqrt(n)."""
        integral = abs(self.steps * self.dt - self.T) <= REL_TOL * self.T
        cfl = self.dt / self.dx <= (1.0 + REL_TOL) / math.sqrt(self.n)
        return integral and cfl

    @property
    def number_of_time_levels(self) -> int:
        """Levels covering t in [-T, T]: 2*(T/dt) + 1."""
        return 2 * self.steps + 1

    def time_levels(self) -> range:
        """Integer time indices p with t = p*dt, covering [-T, T]."""
        return range(-self.steps, self.steps + 1)

    def halved(self) -> "LatticeSpec":
        return LatticeSpec(self.n, self.dx / 2.0, self.dt / 2.0, self.T)


def is_admissible(spec: LatticeSpec) -> bool:
    """Total predicate for membership of (dx, dt) in the admissible set."""
    return spec.admissible()


def refine_halving(spec: LatticeSpec, levels: int) -> list[LatticeSpec]:
    """Nested family of `levels` lattices: the input spec, then halvings.

    The input spec must be admissible and levels >= 1.  Halving preserves
    the step ratio and the integrality of T/dt, so every returned spec is
    admissible and its points contain the coarser lattices' points.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if not spec.admissible():
        raise ValueError("refine_halving requires an admissible spec")
    out = [spec]
    for _ in range(levels - 1):
        out.append(out[-1].halved())
    return out


class Domain:
    """Spatial domain: box, ball, full space with a window, or finite union.

    Box and ball membership tests are exact closed-form comparisons.  The
    full-space variant carries a bounded evaluation window used only for
    error measurement and has no boundary.
    """

    def __init__(self, kind, *, bounds=None, center=None, radius=None, parts=None):
        self.kind = kind
        self.bounds = None if bounds is None else [tuple(map(float, b)) for b in bounds]
        self.center = None if center is None else np.asarray(center, dtype=float)
        self.radius = None if radius is None else float(radius)
        self.parts = parts

    @staticmethod
    def box(bounds) -> "Domain":
        """Open box with per-axis (lo, hi) bounds."""
        return Domain("box", bounds=bounds)

    @staticmethod
    def ball(center, radius) -> "Domain":
        """Open ball given center and radius."""
        return Domain("ball", center=center, radius=radius)

    @staticmethod
    def full_space(window) -> "Domain":
        """All of R^n; `window` bounds the region used for error measurement."""
        return Domain("full_space", bounds=window)

    @staticmethod
    def union(*parts) -> "Domain":
        """Finite union of bounded domains (for double-point demonstrations)."""
        if not parts or any(p.kind == "full_space" for p in parts):
            raise ValueError("union requires bounded member domains")
        return Domain("union", parts=list(parts))

    @property
    def n(self) -> int:
        if self.kind == "ball":
            return len(self.center)
        if self.kind == "union":
            return self.parts[0].n
        return len(self.bounds)

    @property
    def bounded(self) -> bool:
        return self.kind != "full_space"

    def contains(self, x) -> bool:
        """Exact membership of a point in the open domain."""
        x = np.asarray(x, dtype=float)
        if self.kind == "box":
            return all(lo < xi < hi for xi, (lo, hi) in zip(x, self.bounds))
        if self.kind == "ball":
            return float(np.dot(x - self.center, x - self.center)) < self.radius**2
        if self.kind == "full_space":
            return True
        return any(p.contains(x) for p in self.parts)

    def boundary_distance(self, x) -> float:
        """Distance from x to the boundary (exact for box/ball).

        For unions this is the minimum over member boundaries, which is an
        upper bound for the true distance; it is only used for tie detection.
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "box":
            # per-axis signed exterior excess: positive outside along an axis
            q = [max(lo - xi, xi - hi) for xi, (lo, hi) in zip(x, self.bounds)]
            if any(v > 0.0 for v in q):
                return math.sqrt(sum(max(v, 0.0) ** 2 for v in q))
            return -max(q)
        if self.kind == "ball":
            return abs(float(np.linalg.norm(x - self.center)) - self.radius)
        if self.kind == "full_space":
            return math.inf
        return min(p.boundary_distance(x) for p in self.parts)

    def bounding_window(self):
        """Per-axis (lo, hi) bounds of a box containing the domain."""
        if self.kind == "box" or self.kind == "full_space":
            return list(self.bounds)
        if self.kind == "ball":
            return [
                (c - self.radius, c + self.radius) for c in self.center
            ]
        windows = [p.bounding_window() for p in self.parts]
        return [
            (min(w[k][0] for w in windows), max(w[k][1] for w in windows))
            for k in range(self.n)
        ]


@dataclass
class LatticeClassification:
    """Interior and boundary lattice multi-indices of a domain.

    Indices k refer to the lattice point x = k*dx.  Interior points lie in
    the domain with all 2n axis neighbours; boundary points lie in the
    closure with at least one neighbour outside.  The sets are disjoint.
    """

    spec: LatticeSpec
    interior: set = field(default_factory=set)
    boundary: set = field(default_factory=set)

    def point(self, index) -> np.ndarray:
        return np.asarray(index, dtype=float) * self.spec.dx

    def interior_points(self) -> np.ndarray:
        idx = sorted(self.interior)
        return np.asarray(idx, dtype=float) * self.spec.dx

    def boundary_points(self) -> np.ndarray:
        idx = sorted(self.boundary)
        return np.asarray(idx, dtype=float) * self.spec.dx


def _index_window(domain: Domain, dx: float, pad: int = 1):
    """Integer index ranges covering the domain's bounding window."""
    ranges = []
    for lo, hi in domain.bounding_window():
        ranges.append(range(math.floor(lo / dx) - pad, math.ceil(hi / dx) + pad + 1))
    return ranges


def _neighbors(index):
    idx = list(index)
    for k in range(len(idx)):
        for s in (-1, 1):
            nb = list(idx)
            nb[k] += s
            yield tuple(nb)


def classify(domain: Domain, spec: LatticeSpec) -> LatticeClassification:
    """Split lattice points into interior and boundary sets.

    Raises AmbiguousBoundaryError when a point is strictly within
    1e-12*dx of the boundary without lying on it exactly; points exactly
    on the boundary classify as closure points.
    """
    dx = spec.dx
    out = LatticeClassification(spec=spec)
    if not domain.bounded:
        # full space: the evaluation window becomes the interior, no boundary
        for index in itertools.product(*_index_window(domain, dx, pad=0)):
            out.interior.add(index)
        return out

    tol = REL_TOL * dx

    def member(index):
        x = np.asarray(index, dtype=float) * dx
        d = domain.boundary_distance(x)
        if 0.0 < d < tol:
            raise AmbiguousBoundaryError(
                f"lattice point {tuple(x)} lies within {tol:g} of the boundary"
            )
        inside = domain.contains(x)
        return inside, inside or d == 0.0

    for index in itertools.product(*_index_window(domain, dx)):
        inside, in_closure = member(index)
        if not in_closure:
            continue
        nb_closure = [member(nb)[1] for nb in _neighbors(index)]
        if inside and all(nb_closure):
            out.interior.add(index)
        elif not all(nb_closure):
            out.boundary.add(index)
    return out


def detect_double_points(domain: Domain, spec: LatticeSpec) -> set:
    """Boundary points where the domain is locally disconnected.

    Boxes and balls are convex and have none.  For union domains each
    boundary lattice point gets a local connectivity test: the indicator
    is sampled on a cube of side dx around the point at resolution dx/8
    and the inside samples are flood-filled with axis adjacency; more
    than one component flags the point.  This is the heuristic stand-in
    for the geometric definition, which has no algorithmic test.
    """
    if domain.kind in ("box", "ball"):
        return set()
    if domain.kind == "full_space":
        raise UnsupportedShapeError("double-point scan needs a bounded domain")

    dx = spec.dx
    n = domain.n
    step = dx / 8.0
    offsets = np.arange(-4, 5)
    suspects = set()
    classification = classify(domain, spec)
    # Scan every closure point that is not interior.  This is wider than
    # classification.boundary: an isolated touch point (two boxes meeting
    # at a corner) has all its neighbors in the closure and so lands in
    # neither set, yet it is exactly the kind of point to flag.
    candidates = set()
    for index in itertools.product(*_index_window(domain, dx)):
        if index in classification.interior:
            continue
        x = np.asarray(index, dtype=float) * dx
        if domain.contains(x) or domain.boundary_distance(x) == 0.0:
            candidates.add(index)
    for index in candidates:
        x0 = np.asarray(index, dtype=float) * dx
        inside = {}
        for off in itertools.product(offsets, repeat=n):
            pt = x0 + np.asarray(off, dtype=float) * step
            if domain.contains(pt):
                inside[off] = True
        if not inside:
            continue
        # flood fill over axis-adjacent sample cells
        remaining = set(inside)
        components = 0
        while remaining:
            components += 1
            stack = [remaining.pop()]
            while stack:
                cell = stack.pop()
                for k in range(n):
                    for s in (-1, 1):
                        nb = list(cell)
                        nb[k] += s
                        nb = tuple(nb)
                        if nb in remaining:
                            remaining.discard(nb)
                            stack.append(nb)
        if components > 1:
            suspects.add(tuple(x0))
    return suspects


@dataclass
class CompatibilityReport:
    """Maxima of the three boundary compatibility defects and the verdict."""

    max_f_mismatch: float
    max_g: float
    max_surface_laplacian: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.max_f_mismatch <= self.tol
            and self.max_g <= self.tol
            and self.max_surface_laplacian <= self.tol
        )


def _boundary_samples(domain: Domain, count: int) -> list[np.ndarray]:
    n = domain.n
    if domain.kind == "box":
        if n == 1:
            lo, hi = domain.bounds[0]
            return [np.array([lo]), np.array([hi])]
        pts = []
        per_face = max(2, math.ceil((count / (2 * n)) ** (1.0 / (n - 1))))
        for k in range(n):
            for side in (0, 1):
                axes = [j for j in range(n) if j != k]
                grids = [
                    np.linspace(domain.bounds[j][0], domain.bounds[j][1], per_face)
                    for j in axes
                ]
                for combo in itertools.product(*grids):
                    p = np.empty(n)
                    p[k] = domain.bounds[k][side]
                    for j, v in zip(axes, combo):
                        p[j] = v
                    pts.append(p)
        return pts
    if domain.kind == "ball":
        if n == 1:
            c, r = domain.center[0], domain.radius
            return [np.array([c - r]), np.array([c + r])]
        if n == 2:
            thetas = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
            return [
                domain.center + domain.radius * np.array([math.cos(t), math.sin(t)])
                for t in thetas
            ]
        # n == 3: Fibonacci sphere
        pts = []
        golden = math.pi * (3.0 - math.sqrt(5.0))
        for i in range(count):
            z = 1.0 - 2.0 * (i + 0.5) / count
            rho = math.sqrt(max(0.0, 1.0 - z * z))
            th = golden * i
            pts.append(
                domain.center
                + domain.radius * np.array([rho * math.cos(th), rho * math.sin(th), z])
            )
        return pts
    raise UnsupportedShapeError("compatibility check needs a box or ball domain")


def _surface_second_differences(domain: Domain, h, x: np.ndarray, step: float):
    """Tangential second differences of h at a boundary point x."""
    n = domain.n
    if n == 1:
        return 0.0
    total = 0.0
    if domain.kind == "box":
        on_face = [
            k
            for k in range(n)
            if min(abs(x[k] - domain.bounds[k][0]), abs(x[k] - domain.bounds[k][1]))
            <= REL_TOL
        ]
        tangents = [j for j in range(n) if j not in on_face]
        for j in tangents:
            lo, hi = domain.bounds[j]
            # keep the sampled triple on the face
            xc = np.array(x)
            xc[j] = min(max(xc[j], lo + step), hi - step)
            e = np.zeros(n)
            e[j] = step
            total += (h(xc + e) - 2.0 * h(xc) + h(xc - e)) / step**2
        return abs(total)
    # ball: walk along great circles through x
    normal = (x - domain.center) / domain.radius
    basis = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        t = e - np.dot(e, normal) * normal
        norm = np.linalg.norm(t)
        if norm > 1e-8:
            t = t / norm
            if all(abs(np.dot(t, b)) < 0.9 for b in basis):
                basis.append(t)
        if len(basis) == n - 1:
            break
    angle = step / domain.radius
    for t in basis:
        plus = domain.center + domain.radius * _rotate_towards(normal, t, angle)
        minus = domain.center + domain.radius * _rotate_towards(normal, t, -angle)
        total += (h(plus) - 2.0 * h(x) + h(minus)) / step**2
    return abs(total)


def _rotate_towards(normal, tangent, angle):
    return math.cos(angle) * normal + math.sin(angle) * tangent


def _as_callable(fn):
    """Treat missing or constant data as the corresponding constant function."""
    if fn is None:
        return lambda x: 0.0
    if callable(fn):
        return fn
    value = float(fn)
    return lambda x: value


def check_compatibility(f, g, h, domain: Domain, tol: float, dx: float = 0.1):
    """Check the boundary compatibility of initial and boundary data.

    Samples the boundary at >= 100 points (all of it in 1-D), reporting
    max |f - h|, max |g| and the largest tangential second difference of
    h at resolution dx/4.  Passes iff all three maxima are <= tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    f, g, h = (_as_callable(fn) for fn in (f, g, h))
    samples = _boundary_samples(domain, 128)
    step = dx / 4.0
    max_fh = 0.0
    max_g = 0.0
    max_lap = 0.0
    for x in samples:
        max_fh = max(max_fh, abs(float(f(x)) - float(h(x))))
        max_g = max(max_g, abs(float(g(x))))
        max_lap = max(max_lap, _surface_second_differences(domain, h, x, step))
    return CompatibilityReport(max_fh, max_g, max_lap, tol)
