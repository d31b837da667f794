"""Six cone pairs on which non-DR members of the family never reach a fixed point.

Each example fixes two cones and a start point and covers a region of the
(lambda, mu, kappa) parameter space.  Iterating from the start follows a
closed form whose first coordinate decays geometrically (or oscillates, or
grows) but is never zero, so no iterate is a fixed point.  Together with
the single DR point (2, 2, 1/2) the six regions cover every admissible
parameter triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cones import halfplane, line, ray, sector
from .operators import ConePair, OperatorParams, apply, iterate

REGION_TOL = 1e-12
DEVIATION_TOL = 1e-10


class ExampleCheckError(RuntimeError):
    """An iterate left the closed form or became a fixed point."""


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= REGION_TOL


def _on_curve(p: OperatorParams) -> bool:
    """(1/t, 1/t, t): kappa*lambda = kappa*mu = 1."""
    return _near(p.kappa * p.lam, 1.0) and _near(p.kappa * p.mu, 1.0)


def is_dr_point(p: OperatorParams) -> bool:
    return _near(p.lam, 2.0) and _near(p.mu, 2.0) and _near(p.kappa, 0.5)


def _d0_y(x0: np.ndarray) -> tuple[float, float]:
    return float(x0[0]), float(x0[1])


@dataclass(frozen=True)
class ExampleSpec:
    id: int
    pair: ConePair
    region_text: str
    in_region: Callable[[OperatorParams], bool]
    canonical_params: OperatorParams
    start: np.ndarray = field(repr=False)
    valid_start: Callable[[np.ndarray], bool] = field(repr=False)
    rate: Callable[[OperatorParams], float] | None = field(default=None, repr=False)

    def closed_form(self, params: OperatorParams, n: int, start=None) -> np.ndarray:
        """The n-th iterate predicted analytically."""
        x0 = self.start if start is None else np.asarray(start, dtype=float)
        if self.rate is None:  # alternating projections example
            if n == 0:
                return x0.copy()
            return np.array([(x0[0] + x0[1]) / 2.0 ** n, 0.0])
        d0, y = _d0_y(x0)
        return np.array([self.rate(params) ** n * d0, y])


def _ex1_region(p):
    return p.kappa < 0.5


def _ex2_region(p):
    return p.kappa >= 0.5 and not _near(p.kappa * p.mu, 1.0)


def _ex3_region(p):
    return p.kappa >= 0.5 and not _near(p.kappa * p.lam, 1.0)


def _ex4_region(p):
    return _on_curve(p) and 0.5 + REGION_TOL < p.kappa < 1.0 - REGION_TOL


def _ex5_region(p):
    return _on_curve(p) and p.kappa > 1.0 + REGION_TOL


def _ex6_region(p):
    return _near(p.lam, 1.0) and _near(p.mu, 1.0) and _near(p.kappa, 1.0)


def _positive_quadrant(x):
    return x[0] > 0 and x[1] > 0


def _upper_off_axis(x):
    return x[0] != 0 and x[1] > 0


PI = math.pi

EXAMPLES: dict[int, ExampleSpec] = {
    1: ExampleSpec(
        1, ConePair(sector(0.0, 3 * PI / 4), halfplane(PI / 2)),
        "kappa in (0, 1/2)", _ex1_region, OperatorParams(1.0, 1.0, 0.25),
        np.array([1.0, 1.0]), _positive_quadrant,
        lambda p: 1.0 - p.kappa * p.mu),
    2: ExampleSpec(
        2, ConePair(halfplane(0.0), ray(PI / 2)),
        "kappa >= 1/2 and kappa*mu != 1", _ex2_region, OperatorParams(1.0, 1.5, 1.0),
        np.array([1.0, 1.0]), _upper_off_axis,
        lambda p: 1.0 - p.kappa * p.mu),
    3: ExampleSpec(
        3, ConePair(ray(PI / 2), halfplane(0.0)),
        "kappa >= 1/2 and kappa*lambda != 1", _ex3_region, OperatorParams(1.5, 1.0, 1.0),
        np.array([1.0, 1.0]), _upper_off_axis,
        lambda p: 1.0 - p.kappa * p.lam),
    4: ExampleSpec(
        4, ConePair(halfplane(PI / 2), halfplane(3 * PI / 2)),
        "(1/t, 1/t, t) with 1/2 < t < 1", _ex4_region, OperatorParams(4 / 3, 4 / 3, 0.75),
        np.array([1.0, 1.0]), _positive_quadrant,
        lambda p: 1.0 / p.kappa - 1.0),
    5: ExampleSpec(
        5, ConePair(ray(PI / 2), line(PI / 2)),
        "(1/t, 1/t, t) with t > 1", _ex5_region, OperatorParams(0.5, 0.5, 2.0),
        np.array([1.0, 1.0]), _positive_quadrant,
        lambda p: 1.0 / p.kappa - 1.0),
    6: ExampleSpec(
        6, ConePair(halfplane(PI / 4), halfplane(PI)),
        "(1, 1, 1)", _ex6_region, OperatorParams(1.0, 1.0, 1.0),
        np.array([2.0, 1.0]), lambda x: 0 < x[1] < x[0]),
}


def covering_examples(p: OperatorParams) -> list[int]:
    return [i for i, ex in EXAMPLES.items() if ex.in_region(p)]


@dataclass
class ExampleReport:
    id: int
    params: OperatorParams
    start: np.ndarray
    points: np.ndarray
    max_deviation: float
    fixed_indices: list[int]

    @property
    def ok(self) -> bool:
        return self.max_deviation <= DEVIATION_TOL and not self.fixed_indices

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": {"lambda": self.params.lam, "mu": self.params.mu, "kappa": self.params.kappa},
            "start": [float(v) for v in self.start],
            "n_steps": len(self.points) - 1,
            "max_deviation": self.max_deviation,
            "fixed_indices": self.fixed_indices,
            "ok": self.ok,
            "points": [[float(a), float(b)] for a, b in self.points],
        }


def run_example(example_id: int, n_steps: int, params: OperatorParams | None = None,
                start=None, check: bool = True) -> ExampleReport:
    """Iterate an example and compare every iterate with its closed form.

    Deviations are relative to ``max(1, |closed form|)`` since some members
    of examples 2 and 3 expand geometrically.  Fixedness is tested exactly
    (``T x == x``): the iterates converge, so any positive tolerance would
    eventually be met without the iterate being a fixed point.
    """
    if example_id not in EXAMPLES:
        raise ValueError(f"example id must be in 1..6, got {example_id!r}")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    ex = EXAMPLES[example_id]
    params = ex.canonical_params if params is None else params
    if not ex.in_region(params):
        raise ValueError(
            f"parameters {params.astuple()} are outside example {example_id}'s region: "
            f"{ex.region_text}")
    x0 = ex.start if start is None else np.asarray(start, dtype=float)
    if not ex.valid_start(x0):
        raise ValueError(f"start {x0.tolist()} is not admissible for example {example_id}")
    traj = iterate(ex.pair, params, x0, n_steps, tol=0.0)
    points = traj.points
    dev = 0.0
    for n, x in enumerate(points):
        cf = ex.closed_form(params, n, x0)
        dev = max(dev, float(np.linalg.norm(x - cf)) / max(1.0, float(np.linalg.norm(cf))))
    fixed = [] if traj.reached_fix_at is None else [traj.reached_fix_at]
    if len(points) == n_steps + 1 and not fixed:
        last = points[-1]
        if np.array_equal(apply(ex.pair, params, last), last):
            fixed.append(n_steps)
    report = ExampleReport(example_id, params, x0, points, dev, fixed)
    if check and not report.ok:
        raise ExampleCheckError(
            f"example {example_id} at {params.astuple()}: max deviation {dev:.3e}, "
            f"fixed at iterations {fixed}")
    return report


def _unit_open(rng: np.random.Generator) -> float:
    return 1.0 - rng.random()  # (0, 1]


def sample_region(example_id: int, k: int, rng: np.random.Generator,
                  kappa_max: float = 3.0, margin: float = 1e-6) -> list[OperatorParams]:
    """``k`` parameter triples inside an example's region, away from excluded curves."""
    out: list[OperatorParams] = []
    while len(out) < k:
        if example_id == 1:
            p = OperatorParams(2 * _unit_open(rng), 2 * _unit_open(rng),
                               0.5 * (1.0 - _unit_open(rng)) or 0.25)
        elif example_id in (2, 3):
            p = OperatorParams(2 * _unit_open(rng), 2 * _unit_open(rng),
                               rng.uniform(0.5, kappa_max))
            other = p.mu if example_id == 2 else p.lam
            if abs(p.kappa * other - 1.0) <= margin:
                continue
        elif example_id == 4:
            t = rng.uniform(0.5 + margin, 1.0 - margin)
            p = OperatorParams(1 / t, 1 / t, t)
        elif example_id == 5:
            t = rng.uniform(1.0 + margin, 10.0)
            p = OperatorParams(1 / t, 1 / t, t)
        elif example_id == 6:
            p = OperatorParams(1.0, 1.0, 1.0)
        else:
            raise ValueError(f"example id must be in 1..6, got {example_id!r}")
        if EXAMPLES[example_id].in_region(p):
            out.append(p)
    return out


def coverage_axes() -> tuple[list[float], list[float], list[float]]:
    """The 21-point axes of the parameter coverage grid.

    lambda and mu run over 0.1, 0.2, ..., 2.0 plus 4/3; kappa over multiples
    of 1/8 up to 2, then 2.25 .. 3 and 5/3.  The axes are chosen so that the
    grid hits the curve (1/t, 1/t, t) at several points, DR included.
    """
    lm = sorted([round(0.1 * k, 10) for k in range(1, 21)] + [4 / 3])
    kappa = sorted([k / 8 for k in range(1, 17)] + [2.25, 2.5, 2.75, 3.0, 5 / 3])
    return lm, lm, kappa


def uncovered_grid_points() -> list[tuple[float, float, float]]:
    lam_axis, mu_axis, kappa_axis = coverage_axes()
    missing = []
    for lam in lam_axis:
        for mu in mu_axis:
            for kappa in kappa_axis:
                p = OperatorParams(lam, mu, kappa)
                if is_dr_point(p):
                    continue
                if not covering_examples(p):
                    missing.append(p.astuple())
    return missing
