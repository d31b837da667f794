"""Relaxed projections, the three-parameter operator family, and iteration.

The family is

    T = (1 - kappa) Id + kappa * P_B^mu o P_A^lambda,
    P_C^rho = (1 - rho) Id + rho * P_C,

with lambda, mu in (0, 2] and kappa > 0.  ``(1, 1, 1)`` is alternating
projections and ``(2, 2, 1/2)`` is Douglas-Rachford.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cones import PlanarCone, project, reflect

FIX_TOL = 1e-10
KAPPA_MAX = 1e3


@dataclass(frozen=True)
class OperatorParams:
    lam: float
    mu: float
    kappa: float

    def __post_init__(self):
        for name, v in (("lambda", self.lam), ("mu", self.mu), ("kappa", self.kappa)):
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not 0.0 < self.lam <= 2.0:
            raise ValueError(f"lambda must lie in (0, 2], got {self.lam!r}")
        if not 0.0 < self.mu <= 2.0:
            raise ValueError(f"mu must lie in (0, 2], got {self.mu!r}")
        if not 0.0 < self.kappa <= KAPPA_MAX:
            raise ValueError(
                f"kappa must lie in (0, +inf) and is capped at {KAPPA_MAX:g}, got {self.kappa!r}")

    @property
    def is_dr(self) -> bool:
        return (self.lam, self.mu, self.kappa) == (2.0, 2.0, 0.5)

    def astuple(self) -> tuple[float, float, float]:
        return (self.lam, self.mu, self.kappa)


DR = OperatorParams(2.0, 2.0, 0.5)
AP = OperatorParams(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class ConePair:
    """Ordered pair; the operator applies ``a`` first."""

    a: PlanarCone
    b: PlanarCone


def relaxed_projection(c: PlanarCone, rho: float, x) -> np.ndarray:
    if not 0.0 < rho <= 2.0:
        raise ValueError(f"relaxation must lie in (0, 2], got {rho!r}")
    x = np.asarray(x, dtype=float)
    if rho == 1.0:
        return project(c, x)
    if rho == 2.0:
        return reflect(c, x)
    return (1.0 - rho) * x + rho * project(c, x)


def generalized_op(pair: ConePair, params: OperatorParams, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = relaxed_projection(pair.b, params.mu, relaxed_projection(pair.a, params.lam, x))
    if params.kappa == 1.0:
        return y
    return (1.0 - params.kappa) * x + params.kappa * y


def dr_op(pair: ConePair, x) -> np.ndarray:
    """Douglas-Rachford: ``(x + R_B R_A x) / 2``."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (x + reflect(pair.b, reflect(pair.a, x)))


def apply(pair: ConePair, params: OperatorParams, x) -> np.ndarray:
    if params.is_dr:
        return dr_op(pair, x)
    return generalized_op(pair, params, x)


def _norm(v: np.ndarray) -> float:
    # hypot does not underflow for tiny components, unlike sqrt(v @ v)
    return math.hypot(float(v[0]), float(v[1]))


def fixed_residual(pair: ConePair, params: OperatorParams, x) -> float:
    x = np.asarray(x, dtype=float)
    return _norm(apply(pair, params, x) - x)


def is_fixed(pair: ConePair, params: OperatorParams, x, tol: float = FIX_TOL) -> bool:
    """``||T x - x|| <= tol * ||x||``.

    The test is purely relative because every operator here is positively
    homogeneous; ``tol=0`` asks for exact equality.
    """
    x = np.asarray(x, dtype=float)
    return _norm(apply(pair, params, x) - x) <= tol * _norm(x)


class Termination(Enum):
    REACHED_FIX = "reached_fix"
    MAX_ITERS = "max_iters"


@dataclass
class Trajectory:
    points: np.ndarray  # (n, 2)
    step_distances: np.ndarray  # (n - 1,)
    reached_fix_at: int | None
    terminated_reason: Termination
    params: OperatorParams | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.points)


def iterate(pair: ConePair, params: OperatorParams, x0, max_iters: int,
            tol: float = FIX_TOL) -> Trajectory:
    """Apply the operator until the current point is fixed or ``max_iters`` steps ran.

    Each image is computed once and serves both as the fixed-point test for
    the current point and as the next iterate.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    x = np.asarray(x0, dtype=float)
    if x.shape != (2,) or not np.all(np.isfinite(x)):
        raise ValueError(f"start point must be a finite 2-vector, got {x0!r}")
    points = [x]
    steps = []
    reached = None
    for k in range(max_iters + 1):
        tx = apply(pair, params, x)
        step = _norm(tx - x)
        if step <= tol * _norm(x):
            reached = k
            break
        if k == max_iters:
            break
        points.append(tx)
        steps.append(step)
        x = tx
    return Trajectory(
        points=np.array(points),
        step_distances=np.array(steps),
        reached_fix_at=reached,
        terminated_reason=Termination.REACHED_FIX if reached is not None else Termination.MAX_ITERS,
        params=params,
    )
