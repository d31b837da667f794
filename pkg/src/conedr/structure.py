"""Kernel and fixed set of the Douglas-Rachford operator for a cone pair.

    Ker T = cone[(-B ∩ A°) ∪ (B° ∩ A)]
    Fix T = A ∩ B + (A - B)°

where ``°`` is the polar cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cones import (
    ConeKind,
    PlanarCone,
    conic_hull_union,
    cones_close,
    intersect,
    minkowski_sum,
    negate,
    polar,
    to_expression,
)
from .operators import ConePair


class ConsistencyError(RuntimeError):
    """An identity that must hold for every cone pair failed; indicates a bug."""


class KernelLineCase(Enum):
    """The four pairs whose DR kernel is a line L."""

    A_ZERO_B_LINE = "A=0,B=L"
    A_PERP_B_PLANE = "A=L_perp,B=R2"
    A_PLANE_B_PERP = "A=R2,B=L_perp"
    B_ZERO_A_LINE = "B=0,A=L"


def kernel_components(pair: ConePair) -> tuple[PlanarCone, PlanarCone]:
    a, b = pair.a, pair.b
    return intersect(negate(b), polar(a)), intersect(polar(b), a)


def kernel_dr(pair: ConePair) -> PlanarCone:
    u, v = kernel_components(pair)
    return conic_hull_union(u, v)


def difference(pair: ConePair) -> PlanarCone:
    """The cone ``A - B``."""
    return minkowski_sum(pair.a, negate(pair.b))


def fixed_set_dr(pair: ConePair) -> PlanarCone:
    return minkowski_sum(intersect(pair.a, pair.b), polar(difference(pair)))


def _perp(c: PlanarCone) -> PlanarCone:
    return polar(c)  # for a line, the polar is its orthogonal complement


def kernel_line_case(pair: ConePair, kernel: PlanarCone) -> KernelLineCase:
    a, b = pair.a, pair.b
    Z, P, L = ConeKind.ZERO, ConeKind.PLANE, ConeKind.LINE
    if a.kind is Z and b.kind is L and cones_close(b, kernel):
        return KernelLineCase.A_ZERO_B_LINE
    if b.kind is Z and a.kind is L and cones_close(a, kernel):
        return KernelLineCase.B_ZERO_A_LINE
    if b.kind is P and a.kind is L and cones_close(a, _perp(kernel)):
        return KernelLineCase.A_PERP_B_PLANE
    if a.kind is P and b.kind is L and cones_close(b, _perp(kernel)):
        return KernelLineCase.A_PLANE_B_PERP
    raise ConsistencyError(
        f"kernel {to_expression(kernel)} is a line but ({to_expression(a)}, "
        f"{to_expression(b)}) matches none of the four line-kernel configurations")


@dataclass(frozen=True)
class StructureReport:
    kernel: PlanarCone
    fixed_set: PlanarCone
    fix_trivial: bool
    kernel_is_line: bool
    kerline_case: KernelLineCase | None

    def to_dict(self) -> dict:
        return {
            "kernel": to_expression(self.kernel),
            "fixed_set": to_expression(self.fixed_set),
            "fix_trivial": self.fix_trivial,
            "kernel_is_line": self.kernel_is_line,
            "kerline_case": self.kerline_case.value if self.kerline_case else None,
        }


def structure_report(pair: ConePair) -> StructureReport:
    kernel = kernel_dr(pair)
    fixed = fixed_set_dr(pair)
    fix_trivial = fixed.kind is ConeKind.ZERO
    # Fix = {0}  <=>  A ∩ B = {0} and A - B = R^2
    by_parts = (intersect(pair.a, pair.b).kind is ConeKind.ZERO
              and difference(pair).kind is ConeKind.PLANE)
    if fix_trivial != by_parts:
        raise ConsistencyError(
            f"fixed set {to_expression(fixed)} disagrees with the intersection/difference test")
    is_line = kernel.kind is ConeKind.LINE
    return StructureReport(
        kernel=kernel,
        fixed_set=fixed,
        fix_trivial=fix_trivial,
        kernel_is_line=is_line,
        kerline_case=kernel_line_case(pair, kernel) if is_line else None,
    )
