import math

import numpy as np
import pytest

from conedr.cones import (
    ConeKind,
    cones_close,
    contains,
    halfplane,
    intersect,
    line,
    plane,
    ray,
    sector,
    zero,
)
from conedr.operators import ConePair, dr_op
from conedr.sampling import random_pair, unit_directions
from conedr.structure import (
    KernelLineCase,
    difference,
    fixed_set_dr,
    kernel_dr,
    structure_report,
)

PI = math.pi
U = unit_directions(720, 0.001)


def test_example_one_pair():
    pair = ConePair(sector(0.0, 3 * PI / 4), halfplane(PI / 2))
    assert cones_close(kernel_dr(pair), sector(3 * PI / 2, PI / 2))
    assert cones_close(fixed_set_dr(pair), sector(PI / 2, PI / 4))


@pytest.mark.parametrize("a,b,case", [
    (zero(), line(0.3), KernelLineCase.A_ZERO_B_LINE),
    (line(0.3), zero(), KernelLineCase.B_ZERO_A_LINE),
    (line(0.3), plane(), KernelLineCase.A_PERP_B_PLANE),
    (plane(), line(0.3), KernelLineCase.A_PLANE_B_PERP),
])
def test_kernel_line_cases(a, b, case):
    rep = structure_report(ConePair(a, b))
    assert rep.kernel_is_line and rep.kerline_case is case
    # one step lands in the fixed set
    images = dr_op(ConePair(a, b), U)
    assert np.all(np.linalg.norm(dr_op(ConePair(a, b), images) - images, axis=1) <= 1e-12)


def test_zero_zero_is_identity():
    pair = ConePair(zero(), zero())
    rep = structure_report(pair)
    assert rep.kernel.kind is ConeKind.ZERO
    assert rep.fixed_set.kind is ConeKind.PLANE
    assert np.array_equal(dr_op(pair, U), U)


def test_lines_have_trivial_fix():
    rep = structure_report(ConePair(line(0.0), line(PI / 3)))
    assert rep.fix_trivial and rep.kernel.kind is ConeKind.ZERO
    assert structure_report(ConePair(line(0.0), line(PI / 2))).kernel.kind is ConeKind.PLANE


def test_trivial_fix_equivalence(rng):
    for _ in range(500):
        pair = random_pair(rng)
        rep = structure_report(pair)
        alt = intersect(pair.a, pair.b).kind is ConeKind.ZERO and difference(pair).kind is ConeKind.PLANE
        assert rep.fix_trivial == alt


def test_kernel_and_fix_against_operator(rng):
    for _ in range(100):
        pair = random_pair(rng)
        img = dr_op(pair, U)
        ker = np.linalg.norm(img, axis=1) <= 1e-10
        fix = np.linalg.norm(img - U, axis=1) <= 1e-10
        assert np.array_equal(contains(kernel_dr(pair), U), ker)
        assert np.array_equal(contains(fixed_set_dr(pair), U), fix)


def test_report_serialises():
    d = structure_report(ConePair(ray(0.0), sector(0.0, PI / 4))).to_dict()
    assert set(d) == {"kernel", "fixed_set", "fix_trivial", "kernel_is_line", "kerline_case"}
