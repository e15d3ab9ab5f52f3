"""Grid-function operator laboratory.

Test functions are piecewise-constant on uniform 1D or 2D grids.  On that
class the truncated Hilbert transform has an exact closed form (the log
antiderivative per cell), and its supremum over all truncation radii is
attained at a cell-edge distance, so the maximal Hilbert transform is
computed exactly, not scanned.  The planar (Beurling-type) truncations use
a midpoint rule with dyadic subdivision of the cells crossing the
truncation circle; target accuracy is about 1e-6 relative on smooth
integrands.  Maximal functions take suprema over grid-aligned intervals or
squares inside an explicit evaluation window, so both sides of any
inequality tested here range over the same cube family.
"""
from __future__ import annotations

import csv as _csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# ---------------------------------------------------------------------------
# Grid functions
# ---------------------------------------------------------------------------


class GridFunction:
    """Piecewise-constant compactly supported function on a uniform grid.

    1D: cell i covers [origin + i*h, origin + (i+1)*h).
    2D: cell (i, j) covers the product of the axis intervals; values[i, j].
    The function is zero outside the stored extent.
    """

    def __init__(self, origin, h: float, values: np.ndarray):
        values = np.asarray(values)
        if values.ndim not in (1, 2):
            raise ValueError("values must be a 1D or 2D array")
        self.dim = values.ndim
        self.h = float(h)
        if self.h <= 0:
            raise ValueError("mesh must be positive")
        if self.dim == 1:
            self.origin = (float(origin),) if np.isscalar(origin) else (float(origin[0]),)
        else:
            self.origin = (float(origin[0]), float(origin[1]))
        self.values = values

    # ------------------------------------------------------------ geometry

    def edges(self, axis: int = 0) -> np.ndarray:
        n = self.values.shape[axis]
        return self.origin[axis] + self.h * np.arange(n + 1)

    def centers(self, axis: int = 0) -> np.ndarray:
        n = self.values.shape[axis]
        return self.origin[axis] + self.h * (np.arange(n) + 0.5)

    def support_box(self) -> tuple[tuple[float, float], ...]:
        return tuple(
            (self.origin[a], self.origin[a] + self.h * self.values.shape[a])
            for a in range(self.dim)
        )

    def integral(self) -> complex | float:
        return self.values.sum() * self.h**self.dim

    def value_at(self, point) -> complex | float:
        if self.dim == 1:
            x = float(point) if np.isscalar(point) else float(point[0])
            i = int(math.floor((x - self.origin[0]) / self.h))
            if 0 <= i < len(self.values):
                return self.values[i]
            return 0.0
        i = int(math.floor((point[0] - self.origin[0]) / self.h))
        j = int(math.floor((point[1] - self.origin[1]) / self.h))
        if 0 <= i < self.values.shape[0] and 0 <= j < self.values.shape[1]:
            return self.values[i, j]
        return 0.0

    # --------------------------------------------------------- constructors

    @staticmethod
    def indicator_1d(a: float, b: float, h: float) -> "GridFunction":
        """Indicator of [a, b) on a grid whose edges include a and b."""
        cells = max(1, int(round((b - a) / h)))
        if abs(a + cells * h - b) > 1e-9 * max(1.0, abs(b - a)):
            raise ValueError("interval length must be a multiple of the mesh")
        return GridFunction(a, h, np.ones(cells))

    @staticmethod
    def sample_1d(fn, lo: float, hi: float, cells: int) -> "GridFunction":
        """Midpoint sampling of a callable on [lo, hi]."""
        h = (hi - lo) / cells
        xs = lo + h * (np.arange(cells) + 0.5)
        return GridFunction(lo, h, np.asarray(fn(xs), dtype=float))

    @staticmethod
    def disk(radius: float, h: float, center=(0.0, 0.0), antialias: int = 16) -> "GridFunction":
        """Indicator of a disk, with per-cell coverage fractions on the rim."""
        half = math.ceil(radius / h) + 1
        n = 2 * half
        origin = (center[0] - half * h, center[1] - half * h)
        xs = origin[0] + h * (np.arange(n) + 0.5)
        ys = origin[1] + h * (np.arange(n) + 0.5)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        d = np.hypot(gx - center[0], gy - center[1])
        vals = np.zeros((n, n))
        rim = np.abs(d - radius) <= h  # cells possibly cut by the circle
        vals[d < radius - h] = 1.0
        if antialias > 1:
            offs = (np.arange(antialias) + 0.5) / antialias - 0.5
            ox, oy = np.meshgrid(offs * h, offs * h, indexing="ij")
            ridx = np.argwhere(rim)
            for i, j in ridx:
                sx = gx[i, j] + ox
                sy = gy[i, j] + oy
                inside = np.hypot(sx - center[0], sy - center[1]) < radius
                vals[i, j] = inside.mean()
        else:
            vals[rim & (d < radius)] = 1.0
        return GridFunction(origin, h, vals)

    @staticmethod
    def box_2d(x0: float, x1: float, y0: float, y1: float, h: float) -> "GridFunction":
        nx = max(1, int(round((x1 - x0) / h)))
        ny = max(1, int(round((y1 - y0) / h)))
        return GridFunction((x0, y0), h, np.ones((nx, ny)))

    @staticmethod
    def from_csv(path: str) -> "GridFunction":
        """Load `x,value` (1D) or `x,y,value` (2D) rows of cell centers."""
        rows = []
        with open(path, newline="") as fh:
            for rec in _csv.reader(fh):
                if not rec or rec[0].lstrip().startswith("#"):
                    continue
                rows.append([float(c) for c in rec])
        if not rows:
            raise ValueError("empty csv")
        width = len(rows[0])
        data = np.asarray(rows)
        if width == 2:
            xs = np.unique(data[:, 0])
            h = float(np.min(np.diff(xs))) if len(xs) > 1 else 1.0
            idx = np.rint((data[:, 0] - xs[0]) / h).astype(int)
            vals = np.zeros(idx.max() + 1)
            vals[idx] = data[:, 1]
            return GridFunction(xs[0] - h / 2, h, vals)
        if width == 3:
            xs = np.unique(data[:, 0])
            ys = np.unique(data[:, 1])
            hx = float(np.min(np.diff(xs))) if len(xs) > 1 else 1.0
            ix = np.rint((data[:, 0] - xs[0]) / hx).astype(int)
            iy = np.rint((data[:, 1] - ys[0]) / hx).astype(int)
            vals = np.zeros((ix.max() + 1, iy.max() + 1))
            vals[ix, iy] = data[:, 2]
            return GridFunction((xs[0] - hx / 2, ys[0] - hx / 2), hx, vals)
        raise ValueError("csv must have 2 or 3 columns")


@dataclass(frozen=True)
class TruncationGrid:
    """Finite increasing list of truncation radii."""

    eps: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.eps, dtype=float)
        if e.ndim != 1 or len(e) == 0 or np.any(e <= 0) or np.any(np.diff(e) <= 0):
            raise ValueError("eps must be a strictly increasing positive 1D array")
        object.__setattr__(self, "eps", e)

    @staticmethod
    def default_for(f: GridFunction, per_decade: int = 64) -> "TruncationGrid":
        box = f.support_box()
        diam = max(hi - lo for lo, hi in box) * (2 ** 0.5 if f.dim == 2 else 1.0)
        lo, hi = f.h / 2, 4.0 * diam
        count = max(2, int(per_decade * math.log10(hi / lo)) + 1)
        return TruncationGrid(np.geomspace(lo, hi, count))


# ---------------------------------------------------------------------------
# Hilbert transform: exact truncations for piecewise-constant functions
# ---------------------------------------------------------------------------


class _HilbertSide:
    """One side's cells, as disjoint distance intervals (near, far) with values.

    The contribution of a cell to the truncated integral at radius eps is
    value * (log far - log max(near, eps)) when eps < far, else zero, with
    an overall minus sign on the left side.
    """

    __slots__ = ("near", "far", "val", "suffix")

    def __init__(self, near: np.ndarray, far: np.ndarray, val: np.ndarray, sign: float):
        order = np.argsort(near)
        self.near = near[order]
        self.far = far[order]
        self.val = sign * val[order]
        with np.errstate(divide="ignore"):
            full = self.val * (np.log(self.far) - np.log(self.near))
        full[self.near == 0] = 0.0  # straddling cell is never fully outside
        self.suffix = np.concatenate([np.cumsum(full[::-1])[::-1], [0.0 * full.sum()]])

    def query(self, eps: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.near, eps, side="left")
        out = self.suffix[idx]
        prev = idx - 1
        mask = (prev >= 0) & (self.far[np.clip(prev, 0, None)] > eps)
        pv = np.clip(prev, 0, None)
        out = out + np.where(mask, self.val[pv] * (np.log(self.far[pv]) - np.log(eps)), 0.0)
        return out


def _hilbert_sides(f: GridFunction, x: float) -> list[_HilbertSide]:
    if f.dim != 1:
        raise ValueError("Hilbert machinery is one-dimensional")
    e = f.edges()
    v = f.values
    nz = v != 0
    dl = e[:-1] - x
    dr = e[1:] - x
    sides = []
    right = nz & (dr > 0)
    if right.any():
        sides.append(
            _HilbertSide(np.maximum(dl[right], 0.0), dr[right], v[right].astype(complex) if np.iscomplexobj(v) else v[right].astype(float), +1.0)
        )
    left = nz & (dl < 0)
    if left.any():
        sides.append(
            _HilbertSide(np.maximum(-dr[left], 0.0), -dl[left], v[left].astype(complex) if np.iscomplexobj(v) else v[left].astype(float), -1.0)
        )
    return sides


def hilbert_truncated_many(f: GridFunction, x: float, eps: np.ndarray) -> np.ndarray:
    """Exact truncated Hilbert transform at every radius in eps.

    Integrates f(y)/(y - x) over {|y - x| > eps}; no quadrature error for
    piecewise-constant f (cells are split exactly at x +- eps).
    """
    eps = np.asarray(eps, dtype=float)
    if np.any(eps <= 0):
        raise ValueError("truncation radii must be positive")
    total = np.zeros(eps.shape, dtype=complex if np.iscomplexobj(f.values) else float)
    for side in _hilbert_sides(f, x):
        total = total + side.query(eps)
    return total


def hilbert_truncated(f: GridFunction, x: float, eps: float) -> float | complex:
    val = hilbert_truncated_many(f, x, np.array([float(eps)]))[0]
    return complex(val) if np.iscomplexobj(val) else float(val)


def hilbert_breakpoints(f: GridFunction, x: float) -> np.ndarray:
    """Positive cell-edge distances from x; the truncation is log-monotone
    between consecutive ones, so its extrema live here."""
    d = np.unique(np.abs(f.edges() - x))
    return d[d > 0]


def hilbert_maximal(
    f: GridFunction | Sequence[GridFunction],
    x: float,
    grid: TruncationGrid | None = None,
) -> float:
    """sup over eps > 0 of |truncated transform| at x, exactly.

    Accepts a single grid function or a list sharing the point x (their
    truncations add).  The supremum over all radii of the piecewise
    log-linear truncation is attained at a cell-edge distance; the radii of
    an optional TruncationGrid are evaluated as well (they never exceed the
    breakpoint maximum, but keep the scan family explicit).
    """
    fs = [f] if isinstance(f, GridFunction) else list(f)
    bps = [hilbert_breakpoints(g, x) for g in fs]
    cand = np.unique(np.concatenate([b for b in bps if len(b)] or [np.array([1.0])]))
    if grid is not None:
        cand = np.unique(np.concatenate([cand, grid.eps]))
    if len(cand) == 0:
        return 0.0
    total = np.zeros(len(cand), dtype=complex)
    for g in fs:
        total = total + hilbert_truncated_many(g, x, cand).astype(complex)
    return float(np.max(np.abs(total)))


def hilbert_transform(f: GridFunction, x: float) -> float:
    """Principal-value transform integral of f(y)/(y - x); exact for
    piecewise-constant f when x is not a cell edge."""
    e = f.edges()
    if np.min(np.abs(e - x)) < 1e-13 * max(1.0, abs(x)):
        raise ValueError("principal value undefined at a cell edge")
    w = np.log(np.abs(e[1:] - x)) - np.log(np.abs(e[:-1] - x))
    return float(np.real(np.sum(f.values * w)))


def hilbert_transform_many(f: GridFunction, xs: np.ndarray) -> np.ndarray:
    """Vectorized principal-value transform at many non-edge points."""
    xs = np.asarray(xs, dtype=float)
    e = f.edges()
    d = np.abs(e[None, :] - xs[:, None])
    if np.min(d) < 1e-13 * max(1.0, float(np.max(np.abs(xs)))):
        raise ValueError("principal value undefined at a cell edge")
    logs = np.log(d)
    return (logs[:, 1:] - logs[:, :-1]) @ np.real(f.values)


# ---------------------------------------------------------------------------
# Maximal functions over grid-aligned cubes
# ---------------------------------------------------------------------------


def _window_1d(
    f: GridFunction, x: float, pad: float, max_cells: int
) -> tuple[np.ndarray, np.ndarray]:
    """Aligned window of edges/values (zero-extended) covering support and x."""
    (lo, hi), = f.support_box()
    wlo, whi = min(lo, x), max(hi, x)
    width = max(whi - wlo, f.h)
    wlo -= pad * width
    whi += pad * width
    i0 = int(math.floor((wlo - f.origin[0]) / f.h))
    i1 = int(math.ceil((whi - f.origin[0]) / f.h))
    if i1 - i0 > max_cells:
        # shrink the padding before giving up on the cap
        need = i1 - i0 - max_cells
        i0 += need // 2
        i1 = i0 + max_cells
        span = (f.origin[0] + i0 * f.h, f.origin[0] + i1 * f.h)
        if span[0] > min(lo, x) or span[1] < max(hi, x):
            raise ValueError("window cap too small for support plus evaluation point")
    n = len(f.values)
    vals = np.zeros(i1 - i0, dtype=float)
    s0, s1 = max(0, -i0), min(i1 - i0, n - i0)
    if s1 > s0:
        vals[s0:s1] = np.abs(f.values[max(i0, 0) : max(i0, 0) + (s1 - s0)])
    edges = f.origin[0] + f.h * np.arange(i0, i1 + 1)
    return edges, vals


def _interval_averages_max(edges: np.ndarray, cellvals: np.ndarray, x: float) -> float:
    csum = np.concatenate([[0.0], np.cumsum(cellvals * np.diff(edges))])
    tol = 1e-12 * max(1.0, abs(x))
    lefts = np.nonzero(edges <= x + tol)[0]
    rights = np.nonzero(edges >= x - tol)[0]
    if len(lefts) == 0 or len(rights) == 0:
        return 0.0
    num = csum[rights][None, :] - csum[lefts][:, None]
    den = edges[rights][None, :] - edges[lefts][:, None]
    ok = den > 0
    return float(np.max(np.where(ok, num / np.where(ok, den, 1.0), -np.inf)))


def hardy_littlewood(
    f: GridFunction, x, pad: float = 1.0, max_cells: int = 8192
) -> float:
    """Maximal average of |f| over grid-aligned cubes containing x.

    The cube family is every interval (square) with edges on the grid
    lattice inside the evaluation window: the support of f and the point x,
    padded by `pad` times their joint extent.
    """
    if f.dim == 1:
        xx = float(x) if np.isscalar(x) else float(x[0])
        edges, vals = _window_1d(f, xx, pad, max_cells)
        return _interval_averages_max(edges, vals, xx)
    return _hl_2d(f, x, pad, max_cells)


def _window_2d(f: GridFunction, x, pad: float, max_cells: int):
    out = []
    for axis in range(2):
        (lo, hi) = f.support_box()[axis]
        wlo, whi = min(lo, x[axis]), max(hi, x[axis])
        width = max(whi - wlo, f.h)
        wlo -= pad * width
        whi += pad * width
        i0 = int(math.floor((wlo - f.origin[axis]) / f.h))
        i1 = int(math.ceil((whi - f.origin[axis]) / f.h))
        if i1 - i0 > max_cells:
            raise ValueError("2D window exceeds the cell cap")
        out.append((i0, i1))
    (ix0, ix1), (iy0, iy1) = out
    vals = np.zeros((ix1 - ix0, iy1 - iy0))
    nx, ny = f.values.shape
    sx0, sx1 = max(0, -ix0), min(ix1 - ix0, nx - ix0)
    sy0, sy1 = max(0, -iy0), min(iy1 - iy0, ny - iy0)
    if sx1 > sx0 and sy1 > sy0:
        vals[sx0:sx1, sy0:sy1] = np.abs(
            f.values[max(ix0, 0) : max(ix0, 0) + (sx1 - sx0), max(iy0, 0) : max(iy0, 0) + (sy1 - sy0)]
        )
    ex = f.origin[0] + f.h * np.arange(ix0, ix1 + 1)
    ey = f.origin[1] + f.h * np.arange(iy0, iy1 + 1)
    return ex, ey, vals


def _hl_2d(f: GridFunction, x, pad: float, max_cells: int) -> float:
    ex, ey, vals = _window_2d(f, x, pad, max_cells)
    nx, ny = vals.shape
    ii = np.zeros((nx + 1, ny + 1))
    ii[1:, 1:] = np.cumsum(np.cumsum(vals, axis=0), axis=1)
    tol = 1e-12
    px = (x[0] - ex[0]) / f.h
    py = (x[1] - ey[0]) / f.h
    best = 0.0
    for s in range(1, max(nx, ny) + 1):
        ix_lo = max(0, int(math.ceil(px - s - tol)))
        ix_hi = min(nx - s, int(math.floor(px + tol)))
        iy_lo = max(0, int(math.ceil(py - s - tol)))
        iy_hi = min(ny - s, int(math.floor(py + tol)))
        if ix_lo > ix_hi or iy_lo > iy_hi:
            continue
        ixs = np.arange(ix_lo, ix_hi + 1)
        iys = np.arange(iy_lo, iy_hi + 1)
        gx, gy = np.meshgrid(ixs, iys, indexing="ij")
        mass = ii[gx + s, gy + s] - ii[gx, gy + s] - ii[gx + s, gy] + ii[gx, gy]
        best = max(best, float(mass.max()) / (s * s))  # cell areas cancel
    return best


def hardy_littlewood_all_centers(
    edges: np.ndarray, cellvals: np.ndarray
) -> np.ndarray:
    """M of a 1D windowed function at every cell center of the window.

    One O(K^2) pass: suffix maxima of the pairwise averages in the right
    endpoint, then prefix maxima in the left endpoint.
    """
    csum = np.concatenate([[0.0], np.cumsum(cellvals * np.diff(edges))])
    k = len(edges)
    num = csum[None, :] - csum[:, None]
    den = edges[None, :] - edges[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        avg = np.where(den > 0, num / np.where(den != 0, den, 1.0), -np.inf)
    sm = np.maximum.accumulate(avg[:, ::-1], axis=1)[:, ::-1]
    rm = np.maximum.accumulate(sm, axis=0)
    idx = np.arange(k - 1)
    return rm[idx, idx + 1]


def m_delta(f: GridFunction, x, delta: float, pad: float = 1.0, max_cells: int = 8192) -> float:
    """M(|f|^delta)^(1/delta) for 0 < delta <= 1."""
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    g = GridFunction(f.origin if f.dim == 2 else f.origin[0], f.h, np.abs(f.values) ** delta)
    return hardy_littlewood(g, x, pad, max_cells) ** (1.0 / delta)


def iterated_m2(f: GridFunction, x, pad: float = 1.0, max_cells: int = 2048) -> float:
    """M(Mf): the inner pass is sampled at the window's cell centers."""
    if f.dim != 1:
        raise ValueError("iterated maximal function implemented for dim 1")
    xx = float(x) if np.isscalar(x) else float(x[0])
    edges, vals = _window_1d(f, xx, pad, max_cells)
    inner = hardy_littlewood_all_centers(edges, vals)
    g = GridFunction(edges[0], f.h, inner)
    return _interval_averages_max(g.edges(), inner, xx)


def m_sharp(f: GridFunction, x, pad: float = 0.0, max_cells: int = 512) -> float:
    """Mean oscillation sup: sup over cubes of average |f - f_Q|.

    The default window is the hull of the support and x (pad = 0), so a
    constant function has zero oscillation at interior points.
    """
    if f.dim != 1:
        return _m_sharp_2d(f, x, pad, max_cells)
    xx = float(x) if np.isscalar(x) else float(x[0])
    edges, _ = _window_1d(f, xx, pad, max_cells)
    # oscillation needs signed values; rebuild without the abs of the window
    vals = np.zeros(len(edges) - 1, dtype=float)
    i0 = int(round((edges[0] - f.origin[0]) / f.h))
    n = len(f.values)
    s0, s1 = max(0, -i0), min(len(vals), n - i0)
    if s1 > s0:
        vals[s0:s1] = np.real(f.values[max(i0, 0) : max(i0, 0) + (s1 - s0)])
    tol = 1e-12 * max(1.0, abs(xx))
    lefts = np.nonzero(edges <= xx + tol)[0]
    rights = np.nonzero(edges >= xx - tol)[0]
    best = 0.0
    csum = np.concatenate([[0.0], np.cumsum(vals)])
    for a in lefts:
        bs = rights[rights > a]
        if len(bs) == 0:
            continue
        means = (csum[bs] - csum[a]) / (bs - a)
        for b, mean in zip(bs, means):
            osc = np.mean(np.abs(vals[a:b] - mean))
            if osc > best:
                best = float(osc)
    return best


def _m_sharp_2d(f: GridFunction, x, pad: float, max_cells: int) -> float:
    ex, ey, _ = _window_2d(f, x, pad, max_cells)
    nx, ny = len(ex) - 1, len(ey) - 1
    vals = np.zeros((nx, ny))
    ix0 = int(round((ex[0] - f.origin[0]) / f.h))
    iy0 = int(round((ey[0] - f.origin[1]) / f.h))
    fx, fy = f.values.shape
    sx0, sx1 = max(0, -ix0), min(nx, fx - ix0)
    sy0, sy1 = max(0, -iy0), min(ny, fy - iy0)
    if sx1 > sx0 and sy1 > sy0:
        vals[sx0:sx1, sy0:sy1] = np.real(
            f.values[max(ix0, 0) : max(ix0, 0) + (sx1 - sx0), max(iy0, 0) : max(iy0, 0) + (sy1 - sy0)]
        )
    px = (x[0] - ex[0]) / f.h
    py = (x[1] - ey[0]) / f.h
    tol = 1e-12
    best = 0.0
    for s in range(1, max(nx, ny) + 1):
        for i in range(max(0, int(math.ceil(px - s - tol))), min(nx - s, int(math.floor(px + tol))) + 1):
            for j in range(max(0, int(math.ceil(py - s - tol))), min(ny - s, int(math.floor(py + tol))) + 1):
                block = vals[i : i + s, j : j + s]
                mean = block.mean()
                best = max(best, float(np.abs(block - mean).mean()))
    return best


# ---------------------------------------------------------------------------
# Orlicz averages and their maximal function
# ---------------------------------------------------------------------------


def phi_llogl(t: np.ndarray) -> np.ndarray:
    """Young function t (1 + log+ t)."""
    t = np.asarray(t, dtype=float)
    return t * (1.0 + np.log(np.maximum(t, 1.0)))


def phi_modular(t: np.ndarray) -> np.ndarray:
    """Young function t log(e + t) (used by the modular experiments)."""
    t = np.asarray(t, dtype=float)
    return t * np.log(np.e + t)


def _luxemburg_many(
    flat_vals: np.ndarray,
    seg_id: np.ndarray,
    seg_weight: np.ndarray,
    n_seg: int,
    iters: int = 60,
) -> np.ndarray:
    """Simultaneous bisection for the Luxemburg averages of many segments.

    flat_vals holds |f| on the cells of every segment (concatenated),
    seg_weight the normalized cell measure h/|Q| per entry.  The average
    for a segment is the infimal lam with sum w * Phi(v/lam) <= 1; Phi is
    the L log L Young function, monotone, so bisection converges globally.
    """
    vmax = np.zeros(n_seg)
    np.maximum.at(vmax, seg_id, flat_vals)
    hi = 4.0 * np.maximum(vmax, 1e-300)  # Phi(v/hi) <= v/hi <= 1/4 pointwise
    lo = np.zeros(n_seg)
    live = vmax > 0
    for _ in range(iters):
        mid = np.where(live, 0.5 * (lo + hi), 0.0)
        midv = np.where(mid > 0, mid, 1.0)
        contrib = seg_weight * phi_llogl(flat_vals / midv[seg_id])
        tot = np.zeros(n_seg)
        np.add.at(tot, seg_id, contrib)
        too_small = tot > 1.0
        lo = np.where(live & too_small, mid, lo)
        hi = np.where(live & ~too_small, mid, hi)
    return np.where(live, hi, 0.0)


def orlicz_llogl_average(f: GridFunction, q) -> float:
    """Luxemburg L log L average of f over a grid-aligned cube q.

    1D: q = (a, b); 2D: q = ((x0, x1), (y0, y1)) with equal side lengths.
    The infimal lambda is found by bisection to relative accuracy ~1e-10.
    """
    if f.dim == 1:
        a, b = float(q[0]), float(q[1])
        if b <= a:
            raise ValueError("empty interval")
        i0 = int(round((a - f.origin[0]) / f.h))
        i1 = int(round((b - f.origin[0]) / f.h))
        if abs(f.origin[0] + i0 * f.h - a) > 1e-9 or abs(f.origin[0] + i1 * f.h - b) > 1e-9:
            raise ValueError("cube must be grid aligned")
        cells = np.zeros(i1 - i0)
        n = len(f.values)
        s0, s1 = max(0, -i0), min(i1 - i0, n - i0)
        if s1 > s0:
            cells[s0:s1] = np.abs(f.values[max(i0, 0) : max(i0, 0) + (s1 - s0)])
    else:
        (x0, x1), (y0, y1) = q
        i0 = int(round((x0 - f.origin[0]) / f.h))
        i1 = int(round((x1 - f.origin[0]) / f.h))
        j0 = int(round((y0 - f.origin[1]) / f.h))
        j1 = int(round((y1 - f.origin[1]) / f.h))
        if (i1 - i0) != (j1 - j0):
            raise ValueError("cube must be square")
        nx, ny = f.values.shape
        block = np.zeros((i1 - i0, j1 - j0))
        sx0, sx1 = max(0, -i0), min(i1 - i0, nx - i0)
        sy0, sy1 = max(0, -j0), min(j1 - j0, ny - j0)
        if sx1 > sx0 and sy1 > sy0:
            block[sx0:sx1, sy0:sy1] = np.abs(
                f.values[max(i0, 0) : max(i0, 0) + (sx1 - sx0), max(j0, 0) : max(j0, 0) + (sy1 - sy0)]
            )
        cells = block.ravel()
    m = len(cells)
    if m == 0:
        return 0.0
    seg = np.zeros(m, dtype=int)
    w = np.full(m, 1.0 / m)
    return float(_luxemburg_many(cells, seg, w, 1)[0])


def m_llogl(f: GridFunction, x, pad: float = 1.0, max_cells: int = 512) -> float:
    """sup over grid-aligned cubes containing x of the L log L average."""
    if f.dim != 1:
        raise ValueError("maximal Orlicz average implemented for dim 1")
    xx = float(x) if np.isscalar(x) else float(x[0])
    edges, vals = _window_1d(f, xx, pad, max_cells)
    tol = 1e-12 * max(1.0, abs(xx))
    lefts = np.nonzero(edges <= xx + tol)[0]
    rights = np.nonzero(edges >= xx - tol)[0]
    segs = [(a, b) for a in lefts for b in rights if b > a]
    if not segs:
        return 0.0
    sizes = np.array([b - a for a, b in segs])
    seg_id = np.repeat(np.arange(len(segs)), sizes)
    flat = np.concatenate([vals[a:b] for a, b in segs])
    weight = np.repeat(1.0 / sizes, sizes)
    return float(np.max(_luxemburg_many(flat, seg_id, weight, len(segs))))


# ---------------------------------------------------------------------------
# Beurling-type planar truncations
# ---------------------------------------------------------------------------


def _kernel_b(w: np.ndarray) -> np.ndarray:
    return 1.0 / (w * w)


def _kernel_b2(w: np.ndarray) -> np.ndarray:
    return -2.0 * np.conj(w) / (w * w * w)


_SUBDIV = 16  # 2^4 per axis: dyadic subdivision depth 4 on boundary cells


def _beurling_sum(f: GridFunction, z: complex, eps: float, kern) -> complex:
    if f.dim != 2:
        raise ValueError("planar truncation needs a 2D grid function")
    cx = f.centers(0)
    cy = f.centers(1)
    gx, gy = np.meshgrid(cx, cy, indexing="ij")
    w = (gx - z.real) + 1j * (gy - z.imag)
    d = np.abs(w)
    half_diag = f.h * math.sqrt(2.0) / 2.0
    area = f.h * f.h
    outer = d >= eps + half_diag
    total = complex(np.sum(f.values[outer] * kern(w[outer])) * area)
    ring = (~outer) & (d > eps - half_diag) & (f.values != 0)
    if np.any(ring):
        offs = (np.arange(_SUBDIV) + 0.5) / _SUBDIV - 0.5
        ox, oy = np.meshgrid(offs * f.h, offs * f.h, indexing="ij")
        sub = (ox + 1j * oy).ravel()
        sub_area = (f.h / _SUBDIV) ** 2
        for i, j in np.argwhere(ring):
            wij = w[i, j] + sub
            keep = np.abs(wij) > eps
            if keep.any():
                total += complex(f.values[i, j] * np.sum(kern(wij[keep])) * sub_area)
    return total


def beurling_truncated(f: GridFunction, z: complex, eps: float) -> complex:
    """Integral of f(w)/(w - z)^2 over {|w - z| > eps} (midpoint rule,
    boundary cells dyadically subdivided)."""
    if eps < f.h / 2:
        raise ValueError("truncation radius below half a mesh")
    return _beurling_sum(f, complex(z), float(eps), _kernel_b)


def beurling_sq_truncated(f: GridFunction, z: complex, eps: float) -> complex:
    """Same truncation for the iterated kernel -2 conj(w-z)/(w-z)^3."""
    if eps < f.h / 2:
        raise ValueError("truncation radius below half a mesh")
    return _beurling_sum(f, complex(z), float(eps), _kernel_b2)


def beurling_maximal(
    f: GridFunction, z: complex, grid: TruncationGrid | None = None, kernel: str = "b"
) -> float:
    """Scan sup over the radii of the truncation grid; a lower bound."""
    if grid is None:
        grid = TruncationGrid.default_for(f)
    kern = {"b": _kernel_b, "b2": _kernel_b2}[kernel]
    z = complex(z)
    best = 0.0
    for eps in grid.eps:
        if eps < f.h / 2:
            continue
        best = max(best, abs(_beurling_sum(f, z, float(eps), kern)))
    return best


def beurling_transform_grid(
    f: GridFunction, origin, h: float, shape: tuple[int, int]
) -> GridFunction:
    """Principal-value transform of f sampled at the centers of a target grid.

    Cells around each target point closer than 4 source meshes are
    subdivided; the exactly-centered source cell drops out of the principal
    value by quarter-turn symmetry of the kernel on a square.
    """
    cx = f.centers(0)
    cy = f.centers(1)
    gx, gy = np.meshgrid(cx, cy, indexing="ij")
    src = (gx + 1j * gy).ravel()
    vals = f.values.ravel()
    nz = vals != 0
    src = src[nz]
    vals = vals[nz]
    area = f.h * f.h
    tx = origin[0] + h * (np.arange(shape[0]) + 0.5)
    ty = origin[1] + h * (np.arange(shape[1]) + 0.5)
    out = np.zeros(shape, dtype=complex)
    offs = (np.arange(8) + 0.5) / 8 - 0.5
    ox, oy = np.meshgrid(offs * f.h, offs * f.h, indexing="ij")
    sub = (ox + 1j * oy).ravel()
    sub_area = (f.h / 8) ** 2
    near_radius = 4.0 * f.h
    for i, x in enumerate(tx):
        w = src - (x + 1j * ty[None, :].T)  # (ny, m)
        d = np.abs(w)
        far = d >= near_radius
        acc = np.where(far, _kernel_b(np.where(far, w, 1.0)) * area, 0.0) @ vals
        out[i, :] = acc
        near_rows, near_cols = np.nonzero(~far)
        for r, c in zip(near_rows, near_cols):
            wc = w[r, c]
            if abs(wc) < f.h * 1e-9:
                continue  # self cell: principal value vanishes by symmetry
            ws = wc + sub
            keep = np.abs(ws) > f.h * 1e-9
            out[i, r] += vals[c] * np.sum(_kernel_b(ws[keep])) * sub_area
    return GridFunction(origin, h, out)
