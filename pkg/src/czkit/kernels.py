"""Smooth homogeneous convolution kernels K(x) = W(x)/|x|^(n+d).

A kernel is described by the finite list of harmonic layers of its
numerator: the restriction of the numerator to the unit sphere expands as
a finite sum of homogeneous harmonic polynomials, and that list (plus the
dimension) is the whole specification.  Construction enforces the standing
hypotheses: zero mean on the sphere (checked exactly) and no degree-0
layer.  The Fourier multiplier is evaluated from the exact per-degree
Riesz constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import riesz_multiplier
from .polyalg import (
    HarmonicComponent,
    MultiPoly,
    harmonic_decompose,
    poly_from_text,
    sphere_mean,
)


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    """Dimension, harmonic components, and derived parity of a kernel."""

    dim: int
    components: tuple[HarmonicComponent, ...]
    parity: str

    @staticmethod
    def from_components(dim: int, components: Sequence[HarmonicComponent]) -> "KernelSpec":
        if dim < 2:
            raise KernelError("dimension must be >= 2")
        if not components:
            raise KernelError("kernel must have at least one component")
        comps = tuple(sorted(components, key=lambda c: c.degree))
        degrees = [c.degree for c in comps]
        if len(set(degrees)) != len(degrees):
            raise KernelError("duplicate component degrees")
        if degrees[0] == 0:
            raise KernelError("degree-0 component breaks the cancellation hypothesis")
        for c in comps:
            if c.poly.nvars != dim:
                raise KernelError("component variable count does not match the dimension")
        if all(d % 2 == 1 for d in degrees):
            parity = "odd"
        elif all(d % 2 == 0 for d in degrees):
            parity = "even"
        else:
            parity = "mixed"
        return KernelSpec(dim, comps, parity)

    def degrees(self) -> list[int]:
        return [c.degree for c in self.components]

    def omega(self) -> MultiPoly:
        """Sum of the components; equals the kernel numerator on |x| = 1."""
        out = MultiPoly.zero(self.dim)
        for c in self.components:
            out = out + c.poly
        return out


def kernel_from_polynomial(dim: int, w: MultiPoly) -> KernelSpec:
    """Build a KernelSpec from a homogeneous numerator polynomial W.

    W must be homogeneous with exactly zero mean on the unit sphere; the
    components are its harmonic layers, which reproduce W on |x| = 1.
    A nonzero mean is rejected, reporting the exact offending value.
    """
    if w.nvars != dim:
        raise KernelError("polynomial variable count does not match the dimension")
    if w.is_zero():
        raise KernelError("zero polynomial")
    if not w.is_homogeneous():
        raise KernelError("numerator must be homogeneous")
    mean = sphere_mean(w, dim)
    if mean != 0:
        raise KernelError(f"nonzero sphere mean: {mean}")
    comps = []
    for _, h in harmonic_decompose(w):
        deg = h.homogeneous_degree()
        if deg == 0:
            raise AssertionError("zero-mean polynomial produced a constant layer")
        comps.append(HarmonicComponent(deg, h))
    return KernelSpec.from_components(dim, comps)


def multiplier_eval(kernel: KernelSpec, xi: Sequence[float]) -> complex:
    """Fourier multiplier of the kernel at a point of the unit sphere.

    xi is normalized internally; the per-degree constants are exact and
    converted to floats only here.
    """
    v = np.asarray(xi, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise KernelError("multiplier is undefined at xi = 0")
    v = v / norm
    total = 0j
    for c in kernel.components:
        gamma = riesz_multiplier(c.degree, kernel.dim).to_complex()
        ev = c.poly.float_evaluator()
        total += gamma * complex(ev(v[None, :])[0])
    return total


def parse_kernel_spec(text: str) -> KernelSpec:
    """Kernel file format: a `dim n` line, then the polynomial text format."""
    dim = None
    poly_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("dim"):
            if dim is not None:
                raise KernelError("duplicate dim line")
            dim = int(line.split()[1])
            continue
        poly_lines.append(line)
    if dim is None:
        raise KernelError("missing `dim n` line")
    w = poly_from_text("\n".join(poly_lines), nvars=dim)
    return kernel_from_polynomial(dim, w)


def load_kernel_spec(path: str) -> KernelSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_kernel_spec(fh.read())
