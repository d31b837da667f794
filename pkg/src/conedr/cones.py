"""Closed convex cones in the plane.

A cone is stored by its kind and at most two angles.  Every nonempty closed
convex cone in R^2 is one of: the origin, a ray, a line, a sector of opening
strictly between 0 and pi, a closed half-plane, or the whole plane.  The
constructors below canonicalize, so two cones that are equal as sets have the
same representation (up to floating-point noise in the angles).

Point arguments are array-likes of shape ``(2,)`` or ``(..., 2)``; the
projection-type functions are vectorized over leading axes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

TAU = 2.0 * math.pi
ANGLE_TOL = 1e-9

Arc = tuple[float, float]  # (start, width), counter-clockwise, closed


class ConeKind(Enum):
    ZERO = "zero"
    RAY = "ray"
    LINE = "line"
    SECTOR = "sector"
    HALFPLANE = "halfplane"
    PLANE = "plane"


# ---------------------------------------------------------------------------
# angles

def normalize_angle(a: float) -> float:
    """Reduce ``a`` to ``[0, 2*pi)``."""
    r = math.fmod(a, TAU)
    if r < 0.0:
        r += TAU
    if r >= TAU:
        r = 0.0
    return r


def ccw(a: float, b: float) -> float:
    """Counter-clockwise angular offset from ``a`` to ``b`` in ``[0, 2*pi)``."""
    return normalize_angle(b - a)


def angle_dist(a: float, b: float) -> float:
    d = ccw(a, b)
    return min(d, TAU - d)


def angles_close(a: float, b: float, tol: float = ANGLE_TOL) -> bool:
    return angle_dist(a, b) <= tol


def direction(a: float) -> np.ndarray:
    """Unit vector at angle ``a``; components below 1e-15 are snapped to 0."""
    c, s = math.cos(a), math.sin(a)
    if abs(c) < 1e-15:
        c, s = 0.0, math.copysign(1.0, s)
    elif abs(s) < 1e-15:
        c, s = math.copysign(1.0, c), 0.0
    return np.array([c, s])


def arg(x) -> float:
    """Polar angle of a nonzero point, in ``[0, 2*pi)``."""
    x = np.asarray(x, dtype=float)
    return normalize_angle(math.atan2(x[1], x[0]))


def vec2(x: float, y: float) -> np.ndarray:
    v = np.array([x, y], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite point ({x}, {y})")
    return v


# ---------------------------------------------------------------------------
# the cone type

@dataclass(frozen=True)
class PlanarCone:
    """A closed convex cone.  Build with the module-level constructors.

    ``angle`` is the ray/line direction or the counter-clockwise start of a
    sector or half-plane; ``width`` is only meaningful for sectors.
    """

    kind: ConeKind
    angle: float = 0.0
    width: float = 0.0

    def __str__(self) -> str:
        return to_expression(self)


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite angle {v!r}")


def zero() -> PlanarCone:
    return PlanarCone(ConeKind.ZERO)


def plane() -> PlanarCone:
    return PlanarCone(ConeKind.PLANE)


def ray(theta: float) -> PlanarCone:
    _check_finite(theta)
    return PlanarCone(ConeKind.RAY, normalize_angle(theta))


def line(theta: float) -> PlanarCone:
    _check_finite(theta)
    d = math.fmod(normalize_angle(theta), math.pi)
    if math.pi - d <= ANGLE_TOL:
        d = 0.0
    return PlanarCone(ConeKind.LINE, d)


def halfplane(start: float) -> PlanarCone:
    """The closed half-plane swept counter-clockwise from ``start`` through pi."""
    _check_finite(start)
    return PlanarCone(ConeKind.HALFPLANE, normalize_angle(start))


def sector(start: float, width: float) -> PlanarCone:
    """Sector from ``start`` counter-clockwise through ``width`` radians.

    Widths within ``ANGLE_TOL`` of 0 or pi become a ray or a half-plane.
    """
    _check_finite(start, width)
    if width <= 0.0:
        raise ValueError(f"sector width must be positive, got {width!r}")
    if width > math.pi + ANGLE_TOL:
        raise ValueError(f"sector width {width!r} exceeds pi; the set is not convex")
    if width <= ANGLE_TOL:
        return ray(start)
    if abs(width - math.pi) <= ANGLE_TOL:
        return halfplane(start)
    return PlanarCone(ConeKind.SECTOR, normalize_angle(start), float(width))


def cones_close(c1: PlanarCone, c2: PlanarCone, tol: float = ANGLE_TOL) -> bool:
    """Set equality of two canonical cones, angles compared circularly."""
    if c1.kind is not c2.kind:
        return False
    k = c1.kind
    if k in (ConeKind.ZERO, ConeKind.PLANE):
        return True
    if k is ConeKind.LINE:
        d = angle_dist(c1.angle, c2.angle)
        return min(d, abs(math.pi - d)) <= tol
    if k is ConeKind.SECTOR and abs(c1.width - c2.width) > tol:
        return False
    return angles_close(c1.angle, c2.angle, tol)


# ---------------------------------------------------------------------------
# angular supports

def support_arcs(c: PlanarCone) -> list[Arc]:
    """Directions of ``c`` as closed arcs; lines give two degenerate arcs."""
    k = c.kind
    if k is ConeKind.ZERO:
        return []
    if k is ConeKind.PLANE:
        return [(0.0, TAU)]
    if k is ConeKind.RAY:
        return [(c.angle, 0.0)]
    if k is ConeKind.LINE:
        return [(c.angle, 0.0), (normalize_angle(c.angle + math.pi), 0.0)]
    if k is ConeKind.HALFPLANE:
        return [(c.angle, math.pi)]
    return [(c.angle, c.width)]


def edges(c: PlanarCone) -> list[float]:
    """Boundary directions of ``c`` (unit-circle angles)."""
    k = c.kind
    if k in (ConeKind.ZERO, ConeKind.PLANE):
        return []
    if k is ConeKind.RAY:
        return [c.angle]
    if k in (ConeKind.LINE, ConeKind.HALFPLANE):
        return [c.angle, normalize_angle(c.angle + math.pi)]
    return [c.angle, normalize_angle(c.angle + c.width)]


def contains_angle(c: PlanarCone, t: float, tol: float = ANGLE_TOL) -> bool:
    """Whether the ray at angle ``t`` lies in ``c``."""
    if c.kind is ConeKind.PLANE:
        return True
    for s, w in support_arcs(c):
        off = ccw(s, t)
        if off <= w + tol or off >= TAU - tol:
            return True
    return False


def contains(c: PlanarCone, x, tol: float = ANGLE_TOL):
    """Membership of points in ``c``; angular comparisons use ``tol``.

    Returns a bool for a single point, a boolean array otherwise.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(-1, 2)
    at_origin = (pts[:, 0] == 0.0) & (pts[:, 1] == 0.0)
    if c.kind is ConeKind.PLANE:
        out = np.ones(len(pts), dtype=bool)
    else:
        theta = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), TAU)
        out = at_origin.copy()
        for s, w in support_arcs(c):
            off = np.mod(theta - s, TAU)
            out |= (off <= w + tol) | (off >= TAU - tol)
    return bool(out[0]) if single else out.reshape(x.shape[:-1])


# ---------------------------------------------------------------------------
# projection and reflection

def _cross(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    return u[0] * x[..., 1] - u[1] * x[..., 0]


def project(c: PlanarCone, x) -> np.ndarray:
    """Nearest point of ``c``.

    On ``c`` this is the identity, on the polar cone it is zero, elsewhere it
    is the orthogonal projection onto the nearer edge ray.
    """
    x = np.asarray(x, dtype=float)
    k = c.kind
    if k is ConeKind.PLANE:
        return x.copy()
    if k is ConeKind.ZERO:
        return np.zeros_like(x)
    u = direction(c.angle)
    if k is ConeKind.LINE:
        return (x @ u)[..., None] * u
    if k is ConeKind.RAY:
        return np.maximum(x @ u, 0.0)[..., None] * u
    if k is ConeKind.HALFPLANE:
        n = direction(c.angle + math.pi / 2)
        return x - np.minimum(x @ n, 0.0)[..., None] * n
    u2 = direction(c.angle + c.width)
    inside = (_cross(u, x) >= 0.0) & (_cross(u2, x) <= 0.0)
    a1 = np.maximum(x @ u, 0.0)
    a2 = np.maximum(x @ u2, 0.0)
    edge = np.where((a1 >= a2)[..., None], a1[..., None] * u, a2[..., None] * u2)
    return np.where(inside[..., None], x, edge)


def reflect(c: PlanarCone, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 2.0 * project(c, x) - x


# ---------------------------------------------------------------------------
# cone calculus

def polar(c: PlanarCone) -> PlanarCone:
    k = c.kind
    if k is ConeKind.ZERO:
        return plane()
    if k is ConeKind.PLANE:
        return zero()
    if k is ConeKind.LINE:
        return line(c.angle + math.pi / 2)
    if k is ConeKind.RAY:
        return halfplane(c.angle + math.pi / 2)
    if k is ConeKind.HALFPLANE:
        return ray(c.angle + 3 * math.pi / 2)
    return sector(c.angle + c.width + math.pi / 2, math.pi - c.width)


def negate(c: PlanarCone) -> PlanarCone:
    k = c.kind
    if k in (ConeKind.ZERO, ConeKind.PLANE, ConeKind.LINE):
        return c
    if k is ConeKind.RAY:
        return ray(c.angle + math.pi)
    if k is ConeKind.HALFPLANE:
        return halfplane(c.angle + math.pi)
    return sector(c.angle + math.pi, c.width)


def _arc_meet(a: Arc, b: Arc, tol: float) -> list[Arc]:
    (s1, w1), (s2, w2) = a, b
    if w1 >= TAU:
        return [b]
    if w2 >= TAU:
        return [a]
    out = []
    d = ccw(s1, s2)
    if d >= TAU - tol:  # s2 sits just before s1
        d = 0.0
        s2 = s1
    if d <= w1 + tol:
        out.append((s2, max(0.0, min(w2, w1 - d))))
    d = ccw(s2, s1)
    if d >= TAU - tol:
        d = 0.0
    if d <= w2 + tol:
        piece = (s1, max(0.0, min(w1, w2 - d)))
        if not any(angles_close(piece[0], p[0], tol) for p in out):
            out.append(piece)
    return out


def _cone_from_pieces(pieces: list[Arc], tol: float = ANGLE_TOL) -> PlanarCone:
    # pieces of an intersection of two convex supports
    if not pieces:
        return zero()
    if len(pieces) == 1:
        s, w = pieces[0]
        if w >= TAU - tol:
            return plane()
        if w <= tol:
            return ray(s)
        if w >= math.pi - tol:
            return halfplane(s)
        return sector(s, w)
    if len(pieces) == 2:
        (s1, w1), (s2, w2) = pieces
        if w1 <= tol and w2 <= tol and abs(angle_dist(s1, s2) - math.pi) <= tol:
            return line(s1)
    raise RuntimeError(f"intersection pieces {pieces} do not form a convex cone")


def intersect(c1: PlanarCone, c2: PlanarCone, tol: float = ANGLE_TOL) -> PlanarCone:
    if c1.kind is ConeKind.PLANE:
        return c2
    if c2.kind is ConeKind.PLANE:
        return c1
    pieces: list[Arc] = []
    for a in support_arcs(c1):
        for b in support_arcs(c2):
            for p in _arc_meet(a, b, tol):
                if not any(angles_close(p[0], q[0], tol) and abs(p[1] - q[1]) <= tol
                           for q in pieces):
                    pieces.append(p)
    # a degenerate point swallowed by a wider piece is redundant
    pieces = [p for p in pieces
              if not (p[1] <= tol and any(q[1] > tol and ccw(q[0], p[0]) <= q[1] + tol
                                          for q in pieces))]
    return _cone_from_pieces(pieces, tol)


def merge_arcs(arcs: list[Arc], tol: float = ANGLE_TOL) -> list[Arc]:
    """Union of closed arcs as disjoint arcs sorted by start.

    Arcs whose gap is at most ``tol`` are joined.  A full circle comes back as
    ``[(0, 2*pi)]``.
    """
    if not arcs:
        return []
    if any(w >= TAU - tol for _, w in arcs):
        return [(0.0, TAU)]
    items = sorted((normalize_angle(s), w) for s, w in arcs)
    merged: list[list[float]] = []
    for s, w in items:
        if merged and s <= merged[-1][0] + merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], s + w - merged[-1][0])
        else:
            merged.append([s, w])
    # wrap-around: the last arc may reach the first
    while len(merged) > 1:
        last, first = merged[-1], merged[0]
        end = last[0] + last[1]
        if end < TAU + first[0] - tol:
            break
        last[1] = max(end, TAU + first[0] + first[1]) - last[0]
        merged.pop(0)
    if len(merged) == 1 and merged[0][1] >= TAU - tol:
        return [(0.0, TAU)]
    return [(s, min(w, TAU)) for s, w in merged]


def _gaps(merged: list[Arc]) -> list[Arc]:
    """Complementary open arcs of a merged arc list, as (start, width)."""
    out = []
    n = len(merged)
    for i, (s, w) in enumerate(merged):
        ns = merged[(i + 1) % n][0]
        end = s + w
        gap = ns - end if i + 1 < n else ns + TAU - end
        out.append((normalize_angle(end), gap))
    return out


def conic_hull_union(c1: PlanarCone, c2: PlanarCone, tol: float = ANGLE_TOL) -> PlanarCone:
    """Smallest closed convex cone containing ``c1`` and ``c2``.

    Decided from the largest uncovered gap G of the joint angular support:
    G < pi gives the plane; G = pi gives a line when a second gap of length pi
    exists and a half-plane otherwise; G > pi gives the ray or sector that
    covers the complement.
    """
    merged = merge_arcs(support_arcs(c1) + support_arcs(c2), tol)
    if not merged:
        return zero()
    if merged[0][1] >= TAU:
        return plane()
    gaps = sorted(_gaps(merged), key=lambda g: g[1], reverse=True)
    g_start, g_width = gaps[0]
    if g_width < math.pi - tol:
        return plane()
    cover_start = normalize_angle(g_start + g_width)
    cover = TAU - g_width
    if g_width <= math.pi + tol:
        if len(gaps) > 1 and gaps[1][1] >= math.pi - tol:
            return line(cover_start)
        return halfplane(cover_start)
    if cover <= tol:
        return ray(cover_start)
    return sector(cover_start, cover)


def minkowski_sum(c1: PlanarCone, c2: PlanarCone) -> PlanarCone:
    """``c1 + c2``; for convex cones this is the conic hull of the union."""
    return conic_hull_union(c1, c2)


# ---------------------------------------------------------------------------
# cone expressions: zero | plane | ray:a | line:a | halfplane:a | sector:a,w

_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_ANGLE_RE = re.compile(rf"^(?:(?P<num>{_NUMBER})|(?P<mult>{_NUMBER})?pi)$")


class ConeExpressionError(ValueError):
    def __init__(self, message: str, token: str):
        super().__init__(message)
        self.token = token


def parse_angle(token: str) -> float:
    """Decimal radians, or ``<decimal>pi`` meaning that multiple of pi."""
    tok = token.strip()
    m = _ANGLE_RE.match(tok)
    if m is None:
        raise ConeExpressionError(f"bad angle {token!r}", token)
    if m.group("num") is not None:
        value = float(m.group("num"))
    else:
        mult = m.group("mult")
        value = (float(mult) if mult is not None else 1.0) * math.pi
    if not math.isfinite(value):
        raise ConeExpressionError(f"non-finite angle {token!r}", token)
    return value


def make_cone(expr: str) -> PlanarCone:
    """Parse a cone expression such as ``sector:0,0.75pi``."""
    text = expr.strip().lower()
    name, _, rest = text.partition(":")
    if name in ("zero", "plane"):
        if rest:
            raise ConeExpressionError(f"{name!r} takes no arguments", rest)
        return zero() if name == "zero" else plane()
    builders = {"ray": ray, "line": line, "halfplane": halfplane}
    if name in builders:
        if not rest or "," in rest:
            raise ConeExpressionError(f"{name!r} takes exactly one angle", rest or name)
        return builders[name](parse_angle(rest))
    if name == "sector":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ConeExpressionError("sector takes start,width", rest or name)
        start, width = (parse_angle(p) for p in parts)
        try:
            return sector(start, width)
        except ValueError as exc:
            raise ConeExpressionError(str(exc), parts[1]) from None
    raise ConeExpressionError(f"unknown cone kind {name!r}", name)


def to_expression(c: PlanarCone) -> str:
    k = c.kind
    if k in (ConeKind.ZERO, ConeKind.PLANE):
        return k.value
    if k is ConeKind.SECTOR:
        return f"sector:{c.angle!r},{c.width!r}"
    return f"{k.value}:{c.angle!r}"


def generators(c: PlanarCone) -> list[np.ndarray]:
    """Finitely many directions whose conic hull is ``c``."""
    k = c.kind
    if k is ConeKind.ZERO:
        return []
    if k is ConeKind.PLANE:
        return [direction(a) for a in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)]
    if k is ConeKind.HALFPLANE:
        return [direction(c.angle + a) for a in (0.0, math.pi / 2, math.pi)]
    return [direction(a) for a in edges(c)]


# ---------------------------------------------------------------------------
# sets of directions

@dataclass(frozen=True)
class ArcSet:
    """Finite union of closed arcs of the unit circle, merged and sorted."""

    arcs: tuple[Arc, ...] = ()

    @classmethod
    def from_arcs(cls, arcs, tol: float = ANGLE_TOL) -> "ArcSet":
        return cls(tuple(merge_arcs(list(arcs), tol)))

    @classmethod
    def of_cone(cls, c: PlanarCone) -> "ArcSet":
        return cls.from_arcs(support_arcs(c))

    @classmethod
    def full(cls) -> "ArcSet":
        return cls(((0.0, TAU),))

    def __bool__(self) -> bool:
        return bool(self.arcs)

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0][1] >= TAU

    def total_length(self) -> float:
        return sum(w for _, w in self.arcs)

    def contains(self, t: float, tol: float = ANGLE_TOL) -> bool:
        return any(ccw(s, t) <= w + tol or ccw(s, t) >= TAU - tol for s, w in self.arcs)

    def complement(self) -> "ArcSet":
        """Closure of the complement."""
        if not self.arcs:
            return ArcSet.full()
        if self.is_full:
            return ArcSet()
        return ArcSet.from_arcs([g for g in _gaps(list(self.arcs)) if g[1] > 0.0], tol=0.0)

    def union(self, other: "ArcSet") -> "ArcSet":
        return ArcSet.from_arcs(self.arcs + other.arcs)

    def component(self, t: float, tol: float = ANGLE_TOL) -> Arc | None:
        """The arc containing ``t``, if any."""
        for s, w in self.arcs:
            if ccw(s, t) <= w + tol or ccw(s, t) >= TAU - tol:
                return (s, w)
        return None

    def close_to(self, other: "ArcSet", tol: float = ANGLE_TOL) -> bool:
        if len(self.arcs) != len(other.arcs):
            return False
        if self.is_full and other.is_full:
            return True
        return all(any(angles_close(s1, s2, tol) and abs(w1 - w2) <= 2 * tol
                       for s2, w2 in other.arcs)
                   for s1, w1 in self.arcs)
