"""Random cones and cone pairs for property tests and scripts."""

from __future__ import annotations

import math

import numpy as np

from .cones import TAU, PlanarCone, halfplane, line, plane, ray, sector, zero
from .operators import ConePair

_KINDS = ("zero", "ray", "line", "sector", "halfplane", "plane")
_KIND_WEIGHTS = np.array([0.05, 0.15, 0.15, 0.4, 0.15, 0.1])


def _angle(rng: np.random.Generator, grid_prob: float) -> float:
    # Multiples of pi/12 exercise exact coincidences between edges.
    if rng.random() < grid_prob:
        return float(rng.integers(0, 24)) * math.pi / 12
    return float(rng.uniform(0.0, TAU))


def random_cone(rng: np.random.Generator, grid_prob: float = 0.3) -> PlanarCone:
    kind = _KINDS[rng.choice(len(_KINDS), p=_KIND_WEIGHTS)]
    a = _angle(rng, grid_prob)
    if kind == "zero":
        return zero()
    if kind == "plane":
        return plane()
    if kind == "ray":
        return ray(a)
    if kind == "line":
        return line(a)
    if kind == "halfplane":
        return halfplane(a)
    if rng.random() < grid_prob:
        w = float(rng.integers(1, 12)) * math.pi / 12
    else:
        w = float(rng.uniform(0.05, math.pi - 0.05))
    return sector(a, w)


def random_pair(rng: np.random.Generator, grid_prob: float = 0.3) -> ConePair:
    return ConePair(random_cone(rng, grid_prob), random_cone(rng, grid_prob))


def unit_directions(n: int, offset: float = 0.0) -> np.ndarray:
    t = offset + TAU * np.arange(n) / n
    return np.column_stack([np.cos(t), np.sin(t)])
