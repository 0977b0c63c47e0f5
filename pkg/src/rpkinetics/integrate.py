"""Fixed-step RK4 propagation of the model generators.

The dynamics here are smooth single-exponential decays, so a classical
fourth-order Runge-Kutta scheme with a fixed step is accurate far beyond
the tolerances this package checks, without the surface area of adaptive
control. A step-doubling estimate is available as a diagnostic.

After every step the state is re-Hermitized as (rho + rho†)/2 to scrub
roundoff drift, then checked against the density-matrix invariants;
positivity is checked rather than enforced, since a genuine violation
signals a bug and should surface, not be clipped away.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import densmat
from .errors import DomainError, InvariantViolationError, RPKineticsError
from .models import ModelKind, RateParams, rhs_function
from .spinsys import (
    DensityMatrix,
    InitialState,
    Observables,
    SpinBasis,
    initial_density,
    make_projectors,
    observables,
)

STEP_RATE_GUIDELINE = 0.1


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integration settings.

    ``record_stride`` keeps every Nth step (the initial and final states
    are always kept). ``error_check`` accumulates a step-doubling local
    error estimate along the way.
    """

    step: float
    t_end: float
    record_stride: int = 1
    error_check: bool = False

    def __post_init__(self):
        if not (self.step > 0.0):
            raise DomainError(f"step must be positive, got {self.step!r}")
        if not (self.t_end > 0.0):
            raise DomainError(f"t_end must be positive, got {self.t_end!r}")
        if self.step > self.t_end:
            raise DomainError(f"step {self.step!r} exceeds t_end {self.t_end!r}")
        if self.record_stride < 1:
            raise DomainError(f"record_stride must be >= 1, got {self.record_stride!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    state: DensityMatrix
    obs: Observables


@dataclass(eq=False)
class Trajectory:
    """Time-ordered records of one propagation run."""

    model: ModelKind
    params: RateParams
    basis: SpinBasis
    points: list[TrajectoryPoint] = field(default_factory=list)
    step_error_max: float | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([p.t for p in self.points])

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]


def rk4_step(rhs: Callable[[np.ndarray], np.ndarray], rho: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size h."""
    k1 = rhs(rho)
    k2 = rhs(rho + 0.5 * h * k1)
    k3 = rhs(rho + 0.5 * h * k2)
    k4 = rhs(rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_doubling_error(
    rhs: Callable[[np.ndarray], np.ndarray], rho: np.ndarray, h: float
) -> float:
    """Max entrywise gap between one h step and two h/2 steps; an O(h^5) proxy."""
    one = rk4_step(rhs, rho, h)
    half = rk4_step(rhs, rk4_step(rhs, rho, 0.5 * h), 0.5 * h)
    return float(np.max(np.abs(one - half)))


def _step_plan(step: float, t_end: float) -> tuple[int, float]:
    """Number of full steps plus a trailing partial step (0 if t_end divides)."""
    ratio = t_end / step
    n_round = round(ratio)
    if n_round >= 1 and abs(n_round * step - t_end) <= 1e-9 * max(step, t_end):
        return n_round, 0.0
    n_full = math.floor(ratio)
    return n_full, t_end - n_full * step


def time_grid(cfg: IntegratorConfig) -> list[float]:
    """Record times a propagation with this config will produce."""
    n_full, remainder = _step_plan(cfg.step, cfg.t_end)
    times = [i * cfg.step for i in range(0, n_full + 1, cfg.record_stride)]
    if remainder == 0.0:
        if n_full % cfg.record_stride != 0:
            times.append(n_full * cfg.step)
    else:
        times.append(cfg.t_end)
    return times


def propagate(
    kind: ModelKind,
    state: InitialState,
    params: RateParams,
    basis: SpinBasis,
    cfg: IntegratorConfig,
) -> Trajectory:
    """Integrate the chosen model from the pure initial state.

    Every recorded state is a validated ``DensityMatrix``; a failed
    invariant check raises ``InvariantViolationError`` carrying the time
    at which it occurred.
    """
    if params.k_s * cfg.step > STEP_RATE_GUIDELINE:
        warnings.warn(
            f"step * k_s = {params.k_s * cfg.step:.3g} exceeds {STEP_RATE_GUIDELINE}; "
            "accuracy may degrade",
            stacklevel=2,
        )
    proj = make_projectors(basis)
    rhs = rhs_function(kind, params, proj)

    def checked(t: float, mat: np.ndarray) -> DensityMatrix:
        try:
            return DensityMatrix(mat, basis)
        except RPKineticsError as err:
            raise InvariantViolationError(str(err), t=t) from err

    def point(t: float, dm: DensityMatrix) -> TrajectoryPoint:
        return TrajectoryPoint(t=t, state=dm, obs=observables(dm))

    init = initial_density(state, basis)
    mat = init.mat
    points = [point(0.0, init)]
    n_full, remainder = _step_plan(cfg.step, cfg.t_end)
    max_err = 0.0 if cfg.error_check else None

    for i in range(1, n_full + 1):
        if cfg.error_check:
            max_err = max(max_err, step_doubling_error(rhs, mat, cfg.step))
        mat = densmat.hermitize(rk4_step(rhs, mat, cfg.step))
        t = i * cfg.step
        dm = checked(t, mat)
        if i % cfg.record_stride == 0 or (i == n_full and remainder == 0.0):
            points.append(point(t, dm))
    if remainder > 0.0:
        if cfg.error_check:
            max_err = max(max_err, step_doubling_error(rhs, mat, remainder))
        mat = densmat.hermitize(rk4_step(rhs, mat, remainder))
        points.append(point(cfg.t_end, checked(cfg.t_end, mat)))

    return Trajectory(
        model=kind, params=params, basis=basis, points=points, step_error_max=max_err
    )
