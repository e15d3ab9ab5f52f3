"""Decide whether a maximal singular integral is controlled by its operator.

For an odd kernel given by finitely many harmonic layers P_1, P_3, ...,
control of the maximal operator (pointwise by the iterated maximal
function, or in L^2) is equivalent to a checkable algebraic condition:
the lowest-degree layer must divide every other layer exactly, and the
multiplier-weighted sum of the quotients must not vanish anywhere on the
unit sphere.

Divisibility is decided by exact polynomial division.  Non-vanishing is
certified numerically: the quotient sum F has (after factoring out one
shared unit) real rational coefficients, and

    min over the sphere of |F|  >=  min over a grid of |F|  -  L * delta,

where delta is the covering radius of the grid and L is an exact
coefficient-sum bound on the gradient of F over the closed unit ball.
A positive right-hand side certifies non-vanishing; a grid value below
the zero tolerance reports a vanishing point with its witness; otherwise
the grid is deepened, and the check returns INCONCLUSIVE at the depth cap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import SymScalar, riesz_multiplier
from .kernels import KernelSpec
from .polyalg import HarmonicComponent, MultiPoly, divide_exact

ZERO_TOL = 1e-10
DEFAULT_MAX_DEPTH = 14
DEFAULT_POINT_BUDGET = 6_000_000


@dataclass
class CheckReport:
    """Verdict plus the evidence that produced it."""

    dim: int
    verdict: str  # PASS / FAIL(divisibility) / FAIL(vanishing) / INCONCLUSIVE
    divisor: HarmonicComponent
    quotients: list[MultiPoly] = field(default_factory=list)
    divisibility_ok: bool = False
    failed_degree: int | None = None
    unit: SymScalar | None = None
    lipschitz_bound: float = 0.0
    grid_min: float = math.inf
    certified_min: float | None = None
    witness: tuple[float, ...] | None = None
    witness_value: float | None = None
    depth_used: int = 0
    grid_points: int = 0
    certificate_gap: float | None = None

    def format_text(self) -> str:
        lines = [
            f"verdict        : {self.verdict}",
            f"dimension      : {self.dim}",
            f"divisor degree : {self.divisor.degree}",
            f"divisibility   : {'ok' if self.divisibility_ok else f'failed at degree {self.failed_degree}'}",
        ]
        if self.divisibility_ok:
            lines.append(f"gradient bound : {self.lipschitz_bound:.6g}")
            lines.append(f"grid depth     : {self.depth_used} ({self.grid_points} points)")
            lines.append(f"grid min |F|   : {self.grid_min:.6g}")
            if self.certified_min is not None:
                lines.append(f"certified min  : {self.certified_min:.6g}")
            if self.certificate_gap is not None:
                lines.append(f"certificate gap: {self.certificate_gap:.6g}")
            if self.witness is not None:
                pt = ", ".join(f"{x:.12g}" for x in self.witness)
                lines.append(f"witness        : ({pt})")
            if self.witness_value is not None:
                lines.append(f"|F(witness)|   : {self.witness_value:.6g}")
        return "\n".join(lines)

    def format_kv(self) -> str:
        pairs = {
            "verdict": self.verdict,
            "dim": self.dim,
            "divisor_degree": self.divisor.degree,
            "divisibility_ok": int(self.divisibility_ok),
            "grid_depth": self.depth_used,
            "grid_points": self.grid_points,
            "grid_min": repr(self.grid_min),
            "lipschitz_bound": repr(self.lipschitz_bound),
        }
        if self.failed_degree is not None:
            pairs["failed_degree"] = self.failed_degree
        if self.certified_min is not None:
            pairs["certified_min"] = repr(self.certified_min)
        if self.witness is not None:
            pairs["witness"] = ",".join(repr(x) for x in self.witness)
        if self.witness_value is not None:
            pairs["witness_value"] = repr(self.witness_value)
        return "\n".join(f"{k}={v}" for k, v in pairs.items())


def spherical_gradient_bound(f: MultiPoly) -> float:
    """Upper bound for sup |grad F| on the closed unit ball.

    Each partial derivative is bounded on the ball by the sum of the
    absolute values of its coefficients (every monomial is at most 1 there);
    summing the per-partial bounds dominates the Euclidean norm of the
    gradient.  The exact rational bound is nudged up one ulp on conversion.
    """
    total = 0
    for i in range(f.nvars):
        p = f.partial(i)
        total += sum(abs(c) for c in p.terms.values())
    return float(total) * (1.0 + 2.0**-50)


def sphere_grid(dim: int, depth: int) -> tuple[np.ndarray, float]:
    """Nested grids on the unit sphere with a covering-radius bound.

    dim 2: uniform angles, count a multiple of 8 so the axis points and
    diagonals are hit exactly.  dim >= 3: product of polar angle grids
    (including both poles) and one full-circle grid; the map to the sphere
    is 1-Lipschitz in each angle, giving the stated ambient mesh bound.
    """
    if dim == 2:
        m = 8 << depth
        theta = np.arange(m) * (2.0 * math.pi / m)
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return pts, math.pi / m
    k = 4 << depth
    polar = [np.arange(k + 1) * (math.pi / k) for _ in range(dim - 2)]
    azimuth = np.arange(2 * k) * (math.pi / k)
    grids = np.meshgrid(*polar, azimuth, indexing="ij")
    angles = [g.ravel() for g in grids]
    pts = np.empty((angles[0].size, dim))
    sin_prod = np.ones_like(angles[0])
    for i in range(dim - 2):
        pts[:, i] = sin_prod * np.cos(angles[i])
        sin_prod = sin_prod * np.sin(angles[i])
    pts[:, dim - 2] = sin_prod * np.cos(angles[-1])
    pts[:, dim - 1] = sin_prod * np.sin(angles[-1])
    delta = (dim - 1) * math.pi / (2.0 * k)
    return pts, delta


def _grid_size(dim: int, depth: int) -> int:
    if dim == 2:
        return 8 << depth
    k = 4 << depth
    return (k + 1) ** (dim - 2) * 2 * k


def quotient_sum(kernel: KernelSpec) -> tuple[MultiPoly | None, list[MultiPoly], SymScalar, int | None]:
    """Divide every layer by the lowest one and form the weighted sum.

    Returns (F, quotients, unit, failed_degree).  F has rational
    coefficients; the true weighted sum is unit * F, where the unit is the
    shared sqrt(pi)/i factor of the per-degree multiplier constants (all
    odd degrees share one basis, the sign alternation being rational).
    """
    divisor = kernel.components[0]
    quotients: list[MultiPoly] = []
    for comp in kernel.components:
        q = divide_exact(comp.poly, divisor.poly)
        if q is None:
            return None, quotients, SymScalar.one(), comp.degree
        quotients.append(q)
    f = MultiPoly.zero(kernel.dim)
    unit = None
    for comp, q in zip(kernel.components, quotients):
        gamma = riesz_multiplier(comp.degree, kernel.dim)
        if unit is None:
            unit = SymScalar(Fraction(1), gamma.h, gamma.k)
        elif (gamma.h, gamma.k) != (unit.h, unit.k):
            raise AssertionError("multiplier constants do not share a basis")
        f = f + q * gamma.q
    assert unit is not None
    return f, quotients, unit, None


def check_maximal_control(
    kernel: KernelSpec,
    max_depth: int = DEFAULT_MAX_DEPTH,
    zero_tol: float = ZERO_TOL,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> CheckReport:
    """Run the divisibility-plus-nonvanishing check for an odd kernel."""
    if kernel.parity != "odd":
        raise ValueError(f"check requires an odd kernel, got parity {kernel.parity!r}")
    f, quotients, unit, failed = quotient_sum(kernel)
    divisor = kernel.components[0]
    if f is None:
        return CheckReport(
            dim=kernel.dim,
            verdict="FAIL(divisibility)",
            divisor=divisor,
            quotients=quotients,
            divisibility_ok=False,
            failed_degree=failed,
        )
    report = CheckReport(
        dim=kernel.dim,
        verdict="INCONCLUSIVE",
        divisor=divisor,
        quotients=quotients,
        divisibility_ok=True,
        unit=unit,
    )
    lip = spherical_gradient_bound(f)
    report.lipschitz_bound = lip

    if f.is_zero():
        report.verdict = "FAIL(vanishing)"
        report.grid_min = 0.0
        report.witness = tuple([1.0] + [0.0] * (kernel.dim - 1))
        report.witness_value = 0.0
        return report

    ev = f.float_evaluator()
    chunk = 1 << 18
    for depth in range(2, max_depth + 1):
        if _grid_size(kernel.dim, depth) > point_budget and depth > 2:
            break
        pts, delta = sphere_grid(kernel.dim, depth)
        best = math.inf
        best_idx = -1
        # chunked evaluation keeps peak memory flat on deep grids
        for start in range(0, len(pts), chunk):
            vals = np.abs(ev(pts[start : start + chunk]))
            i = int(np.argmin(vals))
            if vals[i] < best:
                best = float(vals[i])
                best_idx = start + i
        report.depth_used = depth
        report.grid_points = len(pts)
        report.grid_min = best
        report.witness = tuple(float(x) for x in pts[best_idx])
        report.witness_value = best
        if best < zero_tol:
            report.verdict = "FAIL(vanishing)"
            return report
        certified = best - lip * delta
        if certified > 0.0:
            report.verdict = "PASS"
            report.certified_min = certified
            return report
        report.certificate_gap = lip * delta - best
    report.verdict = "INCONCLUSIVE"
    return report
