"""Circle dynamics of the Douglas-Rachford operator and the finite-convergence certificate.

The DR operator of two planar cones is positively homogeneous and piecewise
linear, so it induces a map on ray directions,

    phi(t) = arg T(u_t),   u_t = (cos t, sin t),

defined off the kernel.  On every piece, ``T`` is the identity, a rotation by
some psi scaled by cos psi, the projection onto a line (all directions go to a
single target), or zero.

``certify`` turns this into a verdict: when the fixed set is nontrivial every
start reaches it within ``ceil(2*pi / eps)`` steps, where ``eps`` is the width
of the band around the fixed directions that lands in them in one step.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cones import (
    ANGLE_TOL,
    TAU,
    ArcSet,
    ConeKind,
    PlanarCone,
    angle_dist,
    angles_close,
    ccw,
    direction,
    edges,
    normalize_angle,
    polar,
    project,
    to_expression,
)
from .operators import ConePair
from .structure import ConsistencyError, fixed_set_dr, kernel_dr

_I = np.eye(2)


class PieceKind(Enum):
    IDENTITY = "identity"
    ROTATION = "rotation"
    CONSTANT = "constant"
    TO_ZERO = "to_zero"


@dataclass(frozen=True)
class CirclePiece:
    """One closed arc of directions with its linear action.

    ``angle`` and ``scale`` are set for rotations (``scale = cos(angle)``),
    ``target`` for constant pieces.
    """

    start: float
    width: float
    kind: PieceKind
    angle: float | None = None
    scale: float | None = None
    target: float | None = None

    @property
    def end(self) -> float:
        return normalize_angle(self.start + self.width)

    def covers(self, t: float, tol: float = ANGLE_TOL) -> bool:
        off = ccw(self.start, t)
        return off <= self.width + tol or off >= TAU - tol

    def apply(self, t: float) -> float | None:
        if self.kind is PieceKind.IDENTITY:
            return normalize_angle(t)
        if self.kind is PieceKind.ROTATION:
            return normalize_angle(t + self.angle)
        if self.kind is PieceKind.CONSTANT:
            return self.target
        return None

    def gain(self, t: float) -> float:
        """``||T u_t||`` for the unit vector ``u_t``."""
        if self.kind is PieceKind.IDENTITY:
            return 1.0
        if self.kind is PieceKind.ROTATION:
            return self.scale
        if self.kind is PieceKind.CONSTANT:
            return abs(math.cos(t - self.target))
        return 0.0

    def same_action(self, other: "CirclePiece", tol: float = ANGLE_TOL) -> bool:
        if self.kind is not other.kind:
            return False
        if self.kind is PieceKind.ROTATION:
            return abs(self.angle - other.angle) <= tol
        if self.kind is PieceKind.CONSTANT:
            return angles_close(self.target, other.target, tol)
        return True

    def to_dict(self) -> dict:
        return {
            "arc_start": self.start,
            "arc_width": self.width,
            "kind": self.kind.value,
            "angle": self.angle,
            "scale": self.scale,
            "target": self.target,
        }


@dataclass(frozen=True)
class PiecewiseCircleMap:
    pieces: tuple[CirclePiece, ...]  # sorted by start, covering the circle
    kernel: ArcSet
    domain: ArcSet

    def piece_at(self, t: float) -> CirclePiece:
        t = normalize_angle(t)
        starts = [p.start for p in self.pieces]
        i = bisect.bisect_right(starts, t) - 1  # -1 wraps to the last piece
        for j in (i, i - 1, i + 1):
            p = self.pieces[j % len(self.pieces)]
            if p.covers(t, tol=0.0):
                return p
        for p in self.pieces:
            if p.covers(t):
                return p
        raise ConsistencyError(f"no piece covers angle {t!r}")

    def breakpoints(self) -> list[float]:
        if len(self.pieces) == 1 and self.pieces[0].width >= TAU:
            return []
        return [p.start for p in self.pieces]


# ---------------------------------------------------------------------------
# construction

def _reflection(t: float) -> np.ndarray:
    c, s = math.cos(2 * t), math.sin(2 * t)
    return np.array([[c, s], [s, -c]])


def _reflection_piece(c: PlanarCone, u: np.ndarray) -> np.ndarray:
    """Matrix of R_C on the closed region containing the unit vector ``u``."""
    p = project(c, u)
    if np.linalg.norm(p - u) <= 1e-12:
        return _I
    n = np.linalg.norm(p)
    if n <= 1e-12:
        return -_I
    return _reflection(math.atan2(p[1], p[0]))


def _reflection_matrices(c: PlanarCone) -> list[np.ndarray]:
    return [_I, -_I] + [_reflection(e) for e in edges(c)]


def _region_boundaries(c: PlanarCone) -> list[float]:
    return edges(c) + edges(polar(c))


def _angle_of(v: np.ndarray) -> float:
    return normalize_angle(math.atan2(v[1], v[0]))


def _classify(q: np.ndarray, mid: float, start: float, width: float,
              tol: float = ANGLE_TOL) -> CirclePiece:
    det = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
    if det > 0:
        psi = 0.5 * math.atan2(q[1, 0], q[0, 0])  # in (-pi/2, pi/2]
        if abs(psi) <= tol:
            return CirclePiece(start, width, PieceKind.IDENTITY)
        if math.pi / 2 - abs(psi) <= tol:
            return CirclePiece(start, width, PieceKind.TO_ZERO)
        return CirclePiece(start, width, PieceKind.ROTATION, angle=psi, scale=math.cos(psi))
    alpha = 0.5 * math.atan2(q[0, 1], q[0, 0])
    if math.cos(mid - alpha) < 0:
        alpha += math.pi
    return CirclePiece(start, width, PieceKind.CONSTANT, target=normalize_angle(alpha))


def _dedupe_cyclic(angles: list[float], tol: float) -> list[float]:
    pts = sorted(normalize_angle(a) for a in angles)
    out: list[float] = []
    for a in pts:
        if not out or a - out[-1] > tol:
            out.append(a)
    if len(out) > 1 and out[0] + TAU - out[-1] <= tol:
        out.pop()
    return out


def _candidate_breakpoints(pair: ConePair) -> list[float]:
    a, b = pair.a, pair.b
    cands = list(_region_boundaries(a))
    mats_a = _reflection_matrices(a)
    for m in mats_a:
        for beta in _region_boundaries(b):
            cands.append(_angle_of(m @ direction(beta)))  # pieces are involutions
    for ma in mats_a:
        for mb in _reflection_matrices(b):
            q = mb @ ma
            if q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0] < 0:
                alpha = 0.5 * math.atan2(q[0, 1], q[0, 0])
                cands += [alpha + math.pi / 2, alpha - math.pi / 2]
    for c in (kernel_dr(pair), fixed_set_dr(pair)):
        cands += edges(c)
    return cands


def build_circle_map(pair: ConePair, tol: float = ANGLE_TOL) -> PiecewiseCircleMap:
    """Partition the circle into arcs on which T_DR acts by one linear map.

    Breakpoints are the region boundaries of R_A, the boundaries of R_B pulled
    back through each linear piece of R_A, and the perpendiculars of every
    line that a composite piece projects onto.  Each resulting arc is
    classified from the composite matrix at its midpoint, and neighbours with
    the same action are merged.
    """
    bps = _dedupe_cyclic(_candidate_breakpoints(pair), tol)
    if not bps:
        arcs = [(0.0, TAU)]
    else:
        arcs = [(s, (bps[(i + 1) % len(bps)] - s) % TAU or TAU) for i, s in enumerate(bps)]
    atoms = []
    for s, w in arcs:
        mid = s + w / 2
        u = direction(mid)
        ma = _reflection_piece(pair.a, u)
        mb = _reflection_piece(pair.b, ma @ u)
        atoms.append(_classify(mb @ ma, mid, s, w, tol))
    pieces = _merge_pieces(atoms, tol)
    kernel = ArcSet.of_cone(kernel_dr(pair))
    return PiecewiseCircleMap(tuple(pieces), kernel, kernel.complement())


def _merge_pieces(atoms: list[CirclePiece], tol: float) -> list[CirclePiece]:
    merged: list[CirclePiece] = []
    for p in atoms:
        if merged and merged[-1].same_action(p, tol):
            q = merged[-1]
            merged[-1] = CirclePiece(q.start, q.width + p.width, q.kind, q.angle, q.scale, q.target)
        else:
            merged.append(p)
    if len(merged) > 1 and merged[-1].same_action(merged[0], tol):
        last, first = merged.pop(), merged[0]
        merged[0] = CirclePiece(last.start, last.width + first.width,
                                first.kind, first.angle, first.scale, first.target)
    if len(merged) == 1:
        p = merged[0]
        merged = [CirclePiece(0.0, TAU, p.kind, p.angle, p.scale, p.target)]
    merged.sort(key=lambda p: p.start)
    return merged


# ---------------------------------------------------------------------------
# evaluation and fixed directions

def eval_circle_map(cmap: PiecewiseCircleMap, t: float) -> float | None:
    """Image direction of ``t``; ``None`` when the ray at ``t`` is sent to the origin."""
    if cmap.kernel.contains(t):
        return None
    return cmap.piece_at(t).apply(t)


def fixed_arcs(cmap: PiecewiseCircleMap) -> ArcSet:
    arcs = []
    for p in cmap.pieces:
        if p.kind is PieceKind.IDENTITY:
            arcs.append((p.start, p.width))
        elif p.kind is PieceKind.CONSTANT and p.covers(p.target):
            arcs.append((p.target, 0.0))
    return ArcSet.from_arcs(arcs)


def domain_distance(kernel: ArcSet, t: float, s: float) -> float:
    """Length of the shortest arc from ``t`` to ``s`` that avoids the kernel directions.

    Takes the kernel rather than the (closed) domain so that a single kernel
    direction still blocks paths through it.
    """
    forward = ccw(t, s)
    if kernel.contains(t, 0.0) or kernel.contains(s, 0.0):
        raise ValueError(f"angles {t!r}, {s!r} must lie outside the kernel")
    options = []
    if not any(ccw(t, ks) < forward for ks, _ in kernel.arcs):
        options.append(forward)
    if not any(ccw(s, ks) < TAU - forward for ks, _ in kernel.arcs):
        options.append(TAU - forward)
    if not options:
        raise ValueError(f"angles {t!r} and {s!r} lie in different domain components")
    return min(options)


# ---------------------------------------------------------------------------
# certificate

class Regime(Enum):
    KERNEL_LINE = "KernelLine"
    FIX_NONTRIVIAL = "Dichotomy_FixNontrivial"
    FIX_TRIVIAL = "Dichotomy_FixTrivial"
    KERNEL_PLANE = "KernelPlane"


@dataclass(frozen=True)
class ConvergenceCertificate:
    finite: bool
    bound_n: int | None
    epsilon: float | None
    regime: Regime
    kernel: PlanarCone
    fixed_set: PlanarCone
    fix_arcs: ArcSet
    kernel_arcs: ArcSet
    circle_map: PiecewiseCircleMap = field(repr=False)
    # a fixed direction touches the kernel, so one side has no absorbing band
    fix_abuts_kernel: bool = False

    def to_dict(self) -> dict:
        return {
            "finite": self.finite,
            "bound_n": self.bound_n,
            "epsilon": self.epsilon,
            "regime": self.regime.value,
            "kernel": to_expression(self.kernel),
            "fixed_set": to_expression(self.fixed_set),
            "pieces": [p.to_dict() for p in self.circle_map.pieces],
        }


def _atoms(cmap: PiecewiseCircleMap, fix: ArcSet) -> list[CirclePiece]:
    """Pieces split at isolated fixed directions lying inside them."""
    points = [s for s, w in fix.arcs if w == 0.0]
    out = []
    for p in cmap.pieces:
        cuts = sorted(ccw(p.start, t) for t in points
                      if p.covers(t) and ANGLE_TOL < ccw(p.start, t) < p.width - ANGLE_TOL)
        if p.width >= TAU and cuts:
            # a full-circle piece: restart it at the first cut
            first = normalize_angle(p.start + cuts[0])
            cuts = [c - cuts[0] for c in cuts[1:]]
            p = CirclePiece(first, TAU, p.kind, p.angle, p.scale, p.target)
        offsets = [0.0] + cuts + [p.width]
        for lo, hi in zip(offsets, offsets[1:]):
            out.append(CirclePiece(normalize_angle(p.start + lo), hi - lo,
                                   p.kind, p.angle, p.scale, p.target))
    out.sort(key=lambda q: q.start)
    return out


def _absorbing_band(atoms: list[CirclePiece], fix: ArcSet, kernel: ArcSet,
                    start_idx: int, step: int) -> tuple[float, str]:
    """Walk from a fixed boundary through pieces that land in ``fix`` in one step.

    Returns the walked length and why the walk stopped.
    """
    n = len(atoms)
    length = 0.0
    i = start_idx
    while length < TAU:
        p = atoms[i % n]
        if p.kind is PieceKind.IDENTITY:
            return length, "fix"
        if p.kind is PieceKind.TO_ZERO:
            return length, "kernel"
        if not (p.kind is PieceKind.CONSTANT and fix.contains(p.target)):
            return length, "other"
        length += p.width
        far = p.end if step > 0 else p.start
        if fix.contains(far):
            return length, "fix"
        if kernel.contains(far):
            return length, "kernel"
        i += step
    return length, "fix"


def _nearest_index(values: list[float], t: float) -> int:
    return min(range(len(values)), key=lambda i: angle_dist(values[i], t))


def absorbing_epsilon(cmap: PiecewiseCircleMap, fix: ArcSet) -> tuple[float, bool]:
    """Radius of the band around the fixed directions that is absorbed in one step.

    Returns ``(eps, abuts_kernel)``.  With no boundary (every domain direction
    is fixed) the whole circle is absorbing and ``eps = 2*pi``.
    """
    if fix.is_full or fix.close_to(cmap.domain):
        return TAU, False
    atoms = _atoms(cmap, fix)
    starts = [a.start for a in atoms]
    ends = [a.end for a in atoms]
    lengths = []
    abuts = False
    for s, w in fix.arcs:
        sides = [(_nearest_index(starts, normalize_angle(s + w)), 1),
                 (_nearest_index(ends, s), -1)]
        for idx, step in sides:
            length, why = _absorbing_band(atoms, fix, cmap.kernel, idx, step)
            if length > 0.0:
                lengths.append(length)
            elif why == "kernel":
                abuts = True
            else:
                raise ConsistencyError(
                    f"fixed direction boundary at {s!r} has no absorbing neighbourhood")
    if not lengths:
        return TAU, abuts
    return min(min(lengths), TAU), abuts


def certify(pair: ConePair) -> ConvergenceCertificate:
    """Finite-convergence verdict for DR on ``pair`` with a start-independent bound.

    * kernel a line: every image is fixed, one step suffices;
    * kernel the whole plane: T = 0, one step;
    * nontrivial fixed set: at most ``ceil(2*pi / eps)`` steps;
    * trivial fixed set: only kernel starts converge finitely.
    """
    kernel = kernel_dr(pair)
    fixed = fixed_set_dr(pair)
    cmap = build_circle_map(pair)
    fix = fixed_arcs(cmap)
    common = dict(kernel=kernel, fixed_set=fixed, fix_arcs=fix,
                  kernel_arcs=cmap.kernel, circle_map=cmap)
    if kernel.kind is ConeKind.LINE:
        return ConvergenceCertificate(True, 1, None, Regime.KERNEL_LINE, **common)
    if kernel.kind is ConeKind.PLANE:
        return ConvergenceCertificate(True, 1, None, Regime.KERNEL_PLANE, **common)
    if fixed.kind is ConeKind.ZERO:
        return ConvergenceCertificate(False, None, None, Regime.FIX_TRIVIAL, **common)
    if not fix:
        raise ConsistencyError(
            f"fixed set {to_expression(fixed)} is nontrivial but no direction is fixed by the circle map")
    eps, abuts = absorbing_epsilon(cmap, fix)
    bound = max(1, math.ceil(TAU / eps))
    return ConvergenceCertificate(True, bound, eps, Regime.FIX_NONTRIVIAL,
                                  fix_abuts_kernel=abuts, **common)
