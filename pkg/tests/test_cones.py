import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conedr.cones import (
    ANGLE_TOL,
    TAU,
    ArcSet,
    ConeExpressionError,
    ConeKind,
    conic_hull_union,
    cones_close,
    contains,
    edges,
    generators,
    halfplane,
    intersect,
    line,
    make_cone,
    merge_arcs,
    minkowski_sum,
    negate,
    normalize_angle,
    parse_angle,
    plane,
    polar,
    project,
    ray,
    reflect,
    sector,
    to_expression,
    zero,
)
from conedr.sampling import random_cone, unit_directions

PI = math.pi
angles = st.floats(0.0, TAU, allow_nan=False, exclude_max=True)
widths = st.floats(0.01, PI - 0.01)


@st.composite
def cones(draw):
    kind = draw(st.sampled_from(["zero", "plane", "ray", "line", "halfplane", "sector"]))
    a = draw(angles)
    if kind == "zero":
        return zero()
    if kind == "plane":
        return plane()
    if kind == "sector":
        return sector(a, draw(widths))
    return {"ray": ray, "line": line, "halfplane": halfplane}[kind](a)


def _well_separated(c1, c2):
    """Edges of the two cones either coincide or sit well outside the angular tolerance."""
    for e1 in edges(c1):
        for e2 in edges(c2):
            d = abs(((e1 - e2 + PI) % TAU) - PI)
            if 1e-12 < d < 1e-6:
                return False
    return True


def _far_from_edges(t, cs, margin=1e-6):
    return all(min(abs(((t - e + PI) % TAU) - PI) for e in edges(c) or [t + 1]) > margin for c in cs)


# -- construction and grammar ------------------------------------------------

def test_sector_canonicalisation():
    assert sector(0.3, 1e-12).kind is ConeKind.RAY
    assert sector(1.0, PI).kind is ConeKind.HALFPLANE
    assert line(PI + 0.5).angle == pytest.approx(0.5)
    with pytest.raises(ValueError):
        sector(0.0, -0.1)
    with pytest.raises(ValueError):
        sector(0.0, 4.0)


@pytest.mark.parametrize("expr,kind", [
    ("zero", ConeKind.ZERO), ("plane", ConeKind.PLANE), ("ray:0.5pi", ConeKind.RAY),
    ("line:1.25", ConeKind.LINE), ("halfplane:pi", ConeKind.HALFPLANE),
    ("sector:0,0.75pi", ConeKind.SECTOR),
])
def test_make_cone(expr, kind):
    assert make_cone(expr).kind is kind


@pytest.mark.parametrize("expr,token", [
    ("sektor:0,1", "sektor"), ("ray:abc", "abc"), ("sector:0", "0"), ("ray:0.5pie", "0.5pie"),
])
def test_make_cone_errors_name_token(expr, token):
    with pytest.raises(ConeExpressionError) as e:
        make_cone(expr)
    assert e.value.token == token


def test_parse_angle():
    assert parse_angle("pi") == PI
    assert parse_angle("0.5pi") == 0.5 * PI
    assert parse_angle("-1e-1") == -0.1


@given(cones())
def test_expression_round_trip(c):
    assert cones_close(make_cone(to_expression(c)), c, tol=1e-12)


# -- projections -----------------------------------------------------------

def _sampled_projection(c, x, n=20001):
    """Nearest point among projections onto many rays of ``c``."""
    if c.kind is ConeKind.ZERO:
        return np.zeros(2)
    if c.kind is ConeKind.PLANE:
        return x
    best, best_d = np.zeros(2), float(np.linalg.norm(x))
    from conedr.cones import support_arcs
    for s, w in support_arcs(c):
        t = s + w * np.linspace(0.0, 1.0, n if w > 0 else 1)
        u = np.column_stack([np.cos(t), np.sin(t)])
        cand = np.maximum(u @ x, 0.0)[:, None] * u
        d = np.linalg.norm(cand - x, axis=1)
        i = int(np.argmin(d))
        if d[i] < best_d:
            best, best_d = cand[i], d[i]
    return best


@settings(max_examples=300)
@given(cones(), st.floats(0, TAU), st.floats(0.1, 10))
def test_projection_matches_sampled_oracle(c, t, r):
    x = r * np.array([math.cos(t), math.sin(t)])
    # the oracle's ray spacing is pi/20000, so it is accurate to about 1e-4
    assert np.linalg.norm(project(c, x) - _sampled_projection(c, x)) <= 2e-4 * r


def test_moreau_decomposition(rng):
    for _ in range(1000):
        c = random_cone(rng)
        x = rng.normal(size=2) * 10 ** rng.uniform(-2, 2)
        p, q = project(c, x), project(polar(c), x)
        scale = max(1.0, np.linalg.norm(x))
        assert np.linalg.norm(p + q - x) <= 1e-12 * scale
        assert abs(p @ q) <= 1e-12 * scale ** 2


def test_projection_vectorised(rng):
    c = sector(0.4, 1.1)
    xs = rng.normal(size=(50, 2))
    batch = project(c, xs)
    assert np.allclose(batch, np.array([project(c, x) for x in xs]), atol=1e-15, rtol=1e-15)
    assert np.allclose(reflect(c, xs), 2 * batch - xs)


def test_axis_aligned_projection_is_exact():
    assert project(halfplane(PI / 2), np.array([0.1, 2.0])).tolist() == [0.0, 2.0]


# -- cone calculus ---------------------------------------------------------

@given(cones())
def test_polar_involution(c):
    assert cones_close(polar(polar(c)), c, tol=1e-9)


@given(cones())
def test_polar_matches_generator_oracle(c):
    gens = generators(c)
    for u in unit_directions(72, 0.0123):
        oracle = all(u @ g <= 1e-12 for g in gens)
        assert contains(polar(c), u) == oracle


@given(cones(), cones())
def test_intersection_matches_pointwise(c1, c2):
    assume(_well_separated(c1, c2))
    meet = intersect(c1, c2)
    for u in unit_directions(180, 0.0071):
        t = math.atan2(u[1], u[0])
        if _far_from_edges(t, [c1, c2, meet]):
            assert contains(meet, u) == (contains(c1, u) and contains(c2, u))


def _in_conic_hull(gens, y, tol=1e-9):
    for g in gens:
        if abs(g[0] * y[1] - g[1] * y[0]) <= tol and g @ y > 0:
            return True
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            m = np.column_stack([gens[i], gens[j]])
            if abs(np.linalg.det(m)) < 1e-12:
                continue
            coef = np.linalg.solve(m, y)
            if np.all(coef >= -tol):
                return True
    return False


@settings(max_examples=200)
@given(cones(), cones())
def test_hull_matches_generator_oracle(c1, c2):
    assume(_well_separated(c1, c2) and _well_separated(c1, negate(c2)))
    hull = conic_hull_union(c1, c2)
    gens = generators(c1) + generators(c2)
    for u in unit_directions(120, 0.0137):
        t = math.atan2(u[1], u[0])
        if _far_from_edges(t, [c1, c2, hull]):
            assert contains(hull, u) == _in_conic_hull(gens, u)


def test_hull_line_and_perpendicular_ray_is_halfplane():
    h = conic_hull_union(line(0.0), ray(PI / 2))
    assert cones_close(h, halfplane(0.0))
    assert conic_hull_union(ray(0.0), ray(PI)).kind is ConeKind.LINE
    assert conic_hull_union(line(0.0), line(1.0)).kind is ConeKind.PLANE
    assert cones_close(conic_hull_union(ray(0.0), ray(1.0)), sector(0.0, 1.0))
    assert conic_hull_union(zero(), zero()).kind is ConeKind.ZERO


def test_minkowski_sum_and_negate():
    assert cones_close(minkowski_sum(sector(0, PI / 4), sector(PI / 2, PI / 4)), sector(0, 3 * PI / 4))
    assert cones_close(negate(sector(0.0, 1.0)), sector(PI, 1.0))
    assert cones_close(negate(line(0.3)), line(0.3))


# -- arc sets --------------------------------------------------------------

def test_merge_arcs_wraps():
    merged = merge_arcs([(6.0, 0.5), (0.1, 0.5), (0.5, 0.3)])
    assert len(merged) == 1
    s, w = merged[0]
    assert s == pytest.approx(6.0) and w == pytest.approx(0.8 + TAU - 6.0)


def test_arcset_complement_and_union():
    a = ArcSet.of_cone(sector(0.0, 1.0))
    comp = a.complement()
    assert comp.total_length() == pytest.approx(TAU - 1.0)
    assert a.union(comp).is_full
    assert not ArcSet().complement().arcs == ()
    assert ArcSet.full().complement().arcs == ()
    assert a.close_to(ArcSet.from_arcs([(normalize_angle(TAU), 1.0)]))
