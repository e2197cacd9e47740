"""Explicit three-level solver for the discrete wave problems.

The update rearranges the discrete d'Alembertian to
v(x, t +/- dt) = 2 v(x, t) - v(x, t -/+ dt) + dt^2 (Lap_dx v + w), with the
first levels bootstrapped from the centered velocity condition combined
with the scheme equation at t = 0.  Time runs both ways, covering
[-T, T].  Full-space problems are solved on a window padded by the number
of steps, so the finite domain of dependence keeps the window exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import BlowupError
from .lattice import Domain, LatticeSpec, classify
from .spectral import DataFunction, Forcing
from .stencils import (
    GridField,
    field_from_classification,
    laplacian_array,
    lattice_points,
    leapfrog_advance,
    leapfrog_first_level,
)

#: values above this abort the run (deliberately reachable under CFL violation)
BLOWUP_THRESHOLD = 1e12


@dataclass
class DiscreteProblem:
    """One fully discrete wave problem: lattice, domain, data, forcing.

    `f` and `g` may be catalog functions, plain callables, or pre-sampled
    arrays matching the solver window (the splitting pipeline hands over
    gridded data).  The leapfrog core requires unit velocity and zero
    flexibility; variable coefficients are routed through the elliptic
    splitting instead.
    """

    spec: LatticeSpec
    domain: Domain
    f: Union[DataFunction, Callable, np.ndarray, None] = None
    g: Union[DataFunction, Callable, np.ndarray, None] = None
    boundary_value: Union[float, Callable] = 0.0
    forcing: Optional[Forcing] = None
    a: Optional[Callable] = None
    sigma: Optional[Callable] = None
    classification: Optional[object] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.spec.admissible():
            raise ValueError("DiscreteProblem needs an admissible lattice")
        if self.a is not None or self.sigma is not None:
            raise ValueError(
                "variable coefficients are not solvable by the leapfrog core; "
                "use the elliptic splitting pipeline"
            )
        if self.classification is None:
            self.classification = classify(self.domain, self.spec)


def _sample(data, points: np.ndarray, shape) -> np.ndarray:
    if data is None:
        return np.zeros(shape)
    if isinstance(data, np.ndarray):
        if data.shape != shape:
            raise ValueError("gridded data does not match the solver window")
        return np.array(data, dtype=float)
    flat = points.reshape(-1, points.shape[-1])
    if isinstance(data, DataFunction):
        vals = data(flat)
    else:
        vals = np.array([float(data(p)) for p in flat])
    return np.asarray(vals, dtype=float).reshape(shape)


def _allocate(problem: DiscreteProblem, pad: int = 0) -> GridField:
    return field_from_classification(problem.classification, pad=pad)


def _boundary_values(problem: DiscreteProblem, fieldobj: GridField) -> np.ndarray:
    points = lattice_points(fieldobj)
    if callable(problem.boundary_value):
        vals = _sample(problem.boundary_value, points, fieldobj.shape)
    else:
        vals = np.full(fieldobj.shape, float(problem.boundary_value))
    return vals


def _forcing_level(problem: DiscreteProblem, points: np.ndarray, shape,
                   t: float) -> Optional[np.ndarray]:
    if problem.forcing is None:
        return None
    flat = points.reshape(-1, points.shape[-1])
    vals = np.array([float(problem.forcing.func(p, t)) for p in flat])
    return vals.reshape(shape)


def required_padding(spec: LatticeSpec, steps: Optional[int] = None) -> int:
    """Window padding that keeps full-space runs exact for `steps` steps."""
    return (steps if steps is not None else spec.steps) + 2


def bootstrap(problem: DiscreteProblem, pad: Optional[int] = None) -> GridField:
    """Levels t = -dt, 0, +dt satisfying both initial conditions.

    Level 0 samples f; the two neighbours come from combining the centered
    velocity condition with the scheme equation at t = 0, which gives
    v(x, +/-dt) = f +/- dt g + (dt^2/2)(Lap_dx f + w(x, 0)).  Boundary
    points hold the boundary value at all three levels.
    """
    if pad is None:
        pad = required_padding(problem.spec) if not problem.domain.bounded else 0
    fieldobj = _allocate(problem, pad=pad)
    points = lattice_points(fieldobj)
    bvals = _boundary_values(problem, fieldobj)
    dt = problem.spec.dt

    v0 = _sample(problem.f, points, fieldobj.shape)
    gv = _sample(problem.g, points, fieldobj.shape)
    v0[fieldobj.boundary] = bvals[fieldobj.boundary]
    v0[~fieldobj.support] = 0.0

    accel = laplacian_array(v0, problem.spec.dx)
    w0 = _forcing_level(problem, points, fieldobj.shape, 0.0)
    if w0 is not None:
        accel = accel + w0

    for sign, level in ((1.0, 1), (-1.0, -1)):
        v = leapfrog_first_level(v0, sign * gv, accel, dt)
        v[fieldobj.boundary] = bvals[fieldobj.boundary]
        v[~fieldobj.support] = 0.0
        fieldobj.levels[level] = v
    fieldobj.levels[0] = v0
    return fieldobj


def step(problem: DiscreteProblem, fieldobj: GridField, direction: int = 1,
         keep_history: bool = True) -> GridField:
    """Advance one level in the given direction (+1 forward, -1 backward).

    Interior points follow the three-level update; boundary points are
    copied from the boundary value.  Raises BlowupError past the 1e12
    threshold.  With keep_history False only a three-level window stays
    stored.
    """
    stored = sorted(fieldobj.levels)
    level = stored[-1] if direction > 0 else stored[0]
    prev = level - direction
    if prev not in fieldobj.levels:
        raise ValueError("step needs the two most recent levels")

    v = fieldobj.levels[level]
    v_prev = fieldobj.levels[prev]
    t = level * problem.spec.dt
    accel = laplacian_array(v, problem.spec.dx)
    if problem.forcing is not None:
        points = lattice_points(fieldobj)
        accel = accel + _forcing_level(problem, points, fieldobj.shape, t)

    new = leapfrog_advance(v, v_prev, accel, problem.spec.dt)
    bvals = _boundary_values(problem, fieldobj)
    new[fieldobj.boundary] = bvals[fieldobj.boundary]
    new[~fieldobj.support] = 0.0

    max_abs = float(np.max(np.abs(new)))
    if not np.isfinite(max_abs) or max_abs > BLOWUP_THRESHOLD:
        raise BlowupError(
            f"blowup detected at level {level + direction}: max |v| = {max_abs:.3e}",
            level=level + direction,
            max_value=max_abs,
        )

    fieldobj.levels[level + direction] = new
    if not keep_history:
        for old in list(fieldobj.levels):
            if abs(old - (level + direction)) > 2:
                del fieldobj.levels[old]
    return fieldobj


def solve(problem: DiscreteProblem, record: str = "full",
          t_range: Optional[tuple] = None) -> GridField:
    """Run the scheme over t_range (default the full two-sided horizon).

    record="full" stores every level; record="window" keeps a rotating
    three-level window around each end of the run.
    """
    spec = problem.spec
    if t_range is None:
        t_range = (-spec.T, spec.T)
    lo = round(t_range[0] / spec.dt)
    hi = round(t_range[1] / spec.dt)
    if abs(lo * spec.dt - t_range[0]) > 1e-9 or abs(hi * spec.dt - t_range[1]) > 1e-9:
        raise ValueError("t_range endpoints must be lattice times")
    steps_needed = max(hi, -lo, 1)
    pad = required_padding(spec, steps_needed) if not problem.domain.bounded else 0
    fieldobj = bootstrap(problem, pad=pad)
    keep = record == "full"
    protected = {lo, hi, -1, 0, 1}

    def prune(around: int) -> None:
        for old in list(fieldobj.levels):
            if old not in protected and abs(old - around) > 2:
                del fieldobj.levels[old]

    for current in range(2, hi + 1):
        step(problem, fieldobj, direction=1)
        if not keep:
            prune(current)
    if lo <= -2:
        for current in range(-2, lo - 1, -1):
            step(problem, fieldobj, direction=-1)
            if not keep:
                prune(current)
    if not keep:
        for old in list(fieldobj.levels):
            if old < lo or old > hi:
                del fieldobj.levels[old]
    return fieldobj
