import math

import numpy as np
import pytest

from conedr.cones import halfplane, line, sector, zero
from conedr.operators import (
    AP,
    DR,
    ConePair,
    OperatorParams,
    Termination,
    apply,
    dr_op,
    generalized_op,
    is_fixed,
    iterate,
    relaxed_projection,
)
from conedr.sampling import random_pair

PI = math.pi


@pytest.mark.parametrize("lam,mu,kappa,word", [
    (0.0, 1.0, 1.0, "lambda"), (2.5, 1.0, 1.0, "lambda"), (1.0, 0.0, 1.0, "mu"),
    (1.0, 1.0, 0.0, "kappa"), (1.0, 1.0, 1e4, "kappa"), (math.nan, 1.0, 1.0, "lambda"),
])
def test_params_validation_echoes_range(lam, mu, kappa, word):
    with pytest.raises(ValueError, match=word):
        OperatorParams(lam, mu, kappa)


def test_dr_and_ap_flags():
    assert DR.is_dr and not AP.is_dr
    assert OperatorParams(2.0, 2.0, 0.5) == DR


def test_relaxed_projection_endpoints():
    c = sector(0.0, 1.0)
    x = np.array([-1.0, 2.0])
    assert np.allclose(relaxed_projection(c, 1.0, x) * 2 - x, relaxed_projection(c, 2.0, x))
    with pytest.raises(ValueError):
        relaxed_projection(c, 2.1, x)


def test_generalized_family_at_dr_point_matches_dr(rng):
    for _ in range(200):
        pair = random_pair(rng)
        x = rng.normal(size=2)
        assert np.allclose(generalized_op(pair, DR, x), dr_op(pair, x), atol=1e-12)


def test_firm_nonexpansiveness_of_dr(rng):
    for _ in range(1000):
        pair = random_pair(rng)
        x, y = rng.normal(size=(2, 2)) * 10 ** rng.uniform(-1, 1)
        tx, ty = dr_op(pair, x), dr_op(pair, y)
        d = tx - ty
        assert d @ d <= d @ (x - y) + 1e-12 * max(1.0, (x - y) @ (x - y))


def test_positive_homogeneity(rng):
    for _ in range(1000):
        pair = random_pair(rng)
        p = OperatorParams(2 * (1 - rng.random()), 2 * (1 - rng.random()), rng.uniform(0.01, 3))
        x = rng.normal(size=2)
        a = 10 ** rng.uniform(-3, 3)
        lhs, rhs = apply(pair, p, a * x), a * apply(pair, p, x)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * a * max(1.0, np.linalg.norm(x))


def test_alternating_projections_example_orbit():
    pair = ConePair(halfplane(PI / 4), halfplane(PI))
    traj = iterate(pair, AP, [2.0, 1.0], 3)
    assert np.allclose(traj.points, [[2, 1], [1.5, 0], [0.75, 0], [0.375, 0]], atol=1e-12)
    assert traj.terminated_reason is Termination.MAX_ITERS
    assert traj.reached_fix_at is None
    assert np.allclose(traj.step_distances, np.linalg.norm(np.diff(traj.points, axis=0), axis=1))


def test_iterate_stops_at_fixed_point():
    pair = ConePair(sector(0.0, 3 * PI / 4), halfplane(PI / 2))
    traj = iterate(pair, DR, [1.0, 1.0], 50)
    assert traj.terminated_reason is Termination.REACHED_FIX
    assert traj.reached_fix_at == len(traj.points) - 1
    assert is_fixed(pair, DR, traj.points[-1])


def test_is_fixed_is_relative():
    pair = ConePair(line(0.0), line(PI / 3))
    # rotation-and-shrink orbit: never fixed at any scale
    for r in (1e-8, 1.0, 1e8):
        assert not is_fixed(pair, DR, [r, 0.0])
    assert is_fixed(ConePair(zero(), zero()), DR, [3.0, 4.0], tol=0.0)


def test_iterate_rejects_bad_input():
    pair = ConePair(zero(), zero())
    with pytest.raises(ValueError):
        iterate(pair, DR, [1.0, math.inf], 3)
    with pytest.raises(ValueError):
        iterate(pair, DR, [1.0, 1.0], 0)
