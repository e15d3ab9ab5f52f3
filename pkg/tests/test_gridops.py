"""Grid operator laboratory: exact 1D truncations, maximal functions,
Orlicz averages, planar truncations."""
import math

import numpy as np
import pytest

from czkit.gridops import (
    GridFunction,
    TruncationGrid,
    beurling_maximal,
    beurling_sq_truncated,
    beurling_transform_grid,
    beurling_truncated,
    hardy_littlewood,
    hilbert_breakpoints,
    hilbert_maximal,
    hilbert_transform,
    hilbert_transform_many,
    hilbert_truncated,
    hilbert_truncated_many,
    iterated_m2,
    m_delta,
    m_llogl,
    m_sharp,
    orlicz_llogl_average,
)


def step01(h=1.0 / 64):
    return GridFunction.indicator_1d(0.0, 1.0, h)


# ------------------------------------------------------------------ hilbert


def test_truncated_value_outside_support():
    assert abs(hilbert_truncated(step01(), 2.0, 0.5) + math.log(2)) < 1e-12


def test_truncated_symmetry_zeros():
    even = GridFunction.indicator_1d(-1.0, 1.0, 1.0 / 64)
    assert abs(hilbert_truncated(even, 0.0, 0.25)) < 1e-12
    assert abs(hilbert_truncated(step01(), 0.5, 0.25)) < 1e-12


def test_truncated_grid_refinement_invariance():
    coarse, fine = step01(1.0 / 32), step01(1.0 / 256)
    for x in (1.9, -0.55, 0.31):
        for eps in (0.05, 0.31, 1.7):
            assert abs(hilbert_truncated(coarse, x, eps) - hilbert_truncated(fine, x, eps)) < 1e-12


def test_maximal_dominates_each_truncation_and_is_exact():
    f = step01()
    x = 2.0
    assert hilbert_maximal(f, x) >= abs(math.log(2)) - 1e-12
    dense = np.geomspace(1e-4, 50.0, 50000)
    brute = np.max(np.abs(hilbert_truncated_many(f, x, dense)))
    assert hilbert_maximal(f, x) >= brute - 1e-12


def test_maximal_monotone_in_radius_grid_refinement():
    f = step01()
    x = 2.3
    coarse = TruncationGrid(np.geomspace(0.01, 8.0, 20))
    fine = TruncationGrid(np.geomspace(0.01, 8.0, 160))
    vc = np.max(np.abs(hilbert_truncated_many(f, x, coarse.eps)))
    vf = np.max(np.abs(hilbert_truncated_many(f, x, fine.eps)))
    assert vc <= vf + 1e-15
    assert vf <= hilbert_maximal(f, x, fine) + 1e-15


def test_maximal_zero_function():
    z = GridFunction(0.0, 1.0, np.zeros(4))
    assert hilbert_maximal(z, 2.5) == 0.0


def test_maximal_multi_piece_additivity():
    h = 1.0 / 64
    left = GridFunction.indicator_1d(-2.0, -1.0, h)
    right = GridFunction.indicator_1d(1.0, 2.0, h)
    both = GridFunction(-2.0, h, np.concatenate([np.ones(64), np.zeros(128), np.ones(64)]))
    x = 0.013
    assert abs(hilbert_maximal([left, right], x) - hilbert_maximal(both, x)) < 1e-12


def test_breakpoints_are_edge_distances():
    f = step01(0.25)
    bp = hilbert_breakpoints(f, 2.0)
    assert np.allclose(bp, [1.0, 1.25, 1.5, 1.75, 2.0])


def test_pv_transform_closed_form():
    f = step01(1.0 / 256)
    for x in (2.3, -0.7, 0.43):
        want = -math.log(abs(x) / abs(x - 1.0))  # kernel 1/(y-x) convention
        assert abs(hilbert_transform(f, x) - want) < 1e-12
    with pytest.raises(ValueError):
        hilbert_transform(f, 0.5)  # a cell edge
    many = hilbert_transform_many(f, np.array([2.3, -0.7]))
    assert abs(many[0] - hilbert_transform(f, 2.3)) < 1e-14


# ------------------------------------------------------------------ maximal


def test_hardy_littlewood_examples():
    f = step01(1.0 / 8)
    assert abs(hardy_littlewood(f, 2.0) - 0.5) < 1e-12
    const = GridFunction(0.0, 0.25, np.full(64, 3.0))
    assert abs(hardy_littlewood(const, 8.0) - 3.0) < 1e-12
    assert m_sharp(const, 8.0) == 0.0


def test_maximal_sublinearity_randomized():
    rng = np.random.default_rng(0)
    h = 1.0 / 8
    delta = 0.5
    for _ in range(5):
        a = GridFunction(0.0, h, rng.uniform(0, 2, 32))
        b = GridFunction(0.0, h, rng.uniform(0, 2, 32))
        s = GridFunction(0.0, h, a.values + b.values)
        for x in (1.1, 3.7, -0.9):
            assert hardy_littlewood(s, x) <= hardy_littlewood(a, x) + hardy_littlewood(b, x) + 1e-9
            assert iterated_m2(s, x) <= iterated_m2(a, x) + iterated_m2(b, x) + 1e-9
            assert m_llogl(s, x) <= m_llogl(a, x) + m_llogl(b, x) + 1e-9
            # the delta-variant is a quasi-norm: constant 2^(1/delta - 1)
            quasi = 2.0 ** (1.0 / delta - 1.0)
            assert m_delta(s, x, delta) <= quasi * (m_delta(a, x, delta) + m_delta(b, x, delta)) + 1e-9


def test_m_delta_plain_subadditivity_fails():
    # disjoint indicators: M_delta(f+g) can exceed M_delta(f) + M_delta(g),
    # so only the quasi-norm inequality is asserted above
    h = 1.0 / 8
    f = GridFunction.indicator_1d(0.0, 1.0, h)
    g = GridFunction.indicator_1d(1.0, 2.0, h)
    s = GridFunction(0.0, h, np.ones(16))
    x = 4.0
    d = 0.5
    assert m_delta(s, x, d) > m_delta(f, x, d) + m_delta(g, x, d)


def test_m_delta_consistency():
    f = step01(1.0 / 8)
    # indicator powers are the indicator again: M_delta = M(f)^(1/delta)
    for d in (0.25, 0.5, 0.75):
        assert abs(m_delta(f, 2.0, d) - hardy_littlewood(f, 2.0) ** (1.0 / d)) < 1e-12
    # Jensen: M_delta <= M for delta < 1 wherever |f| <= 1
    for x in (0.31, 2.0, -1.7):
        assert m_delta(f, x, 0.5) <= hardy_littlewood(f, x) + 1e-12
    with pytest.raises(ValueError):
        m_delta(f, 2.0, 0.0)


def test_hardy_littlewood_2d():
    f = GridFunction.box_2d(0.0, 1.0, 0.0, 1.0, 1.0 / 8)
    v = hardy_littlewood(f, (2.0, 0.5))
    # best square [0,2]x[-0.5,1.5]: mass 1, area 4
    assert abs(v - 0.25) < 1e-12
    const2 = GridFunction((0.0, 0.0), 0.5, np.full((16, 16), 2.0))
    assert abs(hardy_littlewood(const2, (4.2, 4.2)) - 2.0) < 1e-12
    assert m_sharp(const2, (4.2, 4.2)) == 0.0


def test_orlicz_average_examples():
    one = GridFunction.indicator_1d(0.0, 1.0, 1.0 / 4)
    assert abs(orlicz_llogl_average(one, (0.0, 1.0)) - 1.0) < 1e-9
    zero = GridFunction(0.0, 1.0, np.zeros(3))
    assert orlicz_llogl_average(zero, (0.0, 3.0)) == 0.0
    # monotone in the scale factor
    prev = 0.0
    for c in (0.5, 1.0, 2.0, 4.0):
        g = GridFunction(0.0, 1.0 / 4, np.full(4, c))
        cur = orlicz_llogl_average(g, (0.0, 1.0))
        assert cur > prev
        prev = cur
    sq = GridFunction.box_2d(0.0, 1.0, 0.0, 1.0, 1.0 / 4)
    assert abs(orlicz_llogl_average(sq, ((0.0, 1.0), (0.0, 1.0))) - 1.0) < 1e-9


def test_llogl_maximal_vs_iterated_bracket():
    """The Orlicz maximal function and the iterated maximal function stay
    within a fixed multiplicative bracket on random step functions."""
    rng = np.random.default_rng(42)
    ratios = []
    for trial in range(6):
        h = 1.0 / 16 if trial % 2 == 0 else 1.0 / 32
        n = int(round(2.0 / h))
        vals = rng.choice([0.0, 0.5, 1.0, 4.0], size=n, p=[0.3, 0.3, 0.3, 0.1])
        f = GridFunction(-1.0, h, vals)
        for x in (-0.51, 0.013, 0.77, 1.9):
            m2 = iterated_m2(f, x)
            ml = m_llogl(f, x)
            if m2 > 0 and ml > 0:
                ratios.append(ml / m2)
    assert ratios
    assert max(ratios) <= 8.0 and min(ratios) >= 1.0 / 8.0


def test_cotlar_control_stability():
    """sup H*f/(M_delta(Hf) + Mf) is bounded and refinement-stable."""

    def sup_ratio(mesh):
        f = step01(mesh)
        cells = 1024
        gh = 96.0 / cells
        org = -48.0 + 0.37 * gh
        cts = org + gh * (np.arange(cells) + 0.5)
        g = GridFunction(org, gh, hilbert_transform_many(f, cts))
        worst = 0.0
        for x in np.array([-2.31, -0.47, 0.309, 1.613, 5.37]) + 1 / 3333:
            num = hilbert_maximal(f, float(x))
            den = m_delta(g, float(x), 0.5, pad=0.0) + hardy_littlewood(f, float(x))
            worst = max(worst, num / den)
        return worst

    a, b = sup_ratio(1.0 / 64), sup_ratio(1.0 / 128)
    assert a < 5.0
    assert abs(b - a) / a < 0.2


# ----------------------------------------------------------------- beurling


def test_beurling_radial_cancellation():
    disk = GridFunction.disk(1.0, 1.0 / 32)
    assert abs(beurling_truncated(disk, 0j, 0.5)) < 1e-6
    assert abs(beurling_sq_truncated(disk, 0j, 0.5)) < 2e-3  # quadrature only
    assert abs(beurling_truncated(disk, 0j, 1.5)) < 1e-9  # empty intersection
    with pytest.raises(ValueError):
        beurling_truncated(disk, 0j, 1e-6)


def test_beurling_closed_form_outside_disk():
    disk = GridFunction.disk(1.0, 1.0 / 32)
    got = beurling_truncated(disk, 2.0 + 0j, 1.0 / 16)
    assert abs(got - math.pi / 4) < 4e-3  # pi/z^2 at z = 2
    z = 1.5 + 1.2j
    got2 = beurling_truncated(disk, z, 1.0 / 16)
    assert abs(got2 - math.pi / z**2) < 5e-3


def test_beurling_iterated_kernel_closed_form():
    # for the pinned kernel -2 conj(u)/u^3 the disk integral at outside z is
    # -pi (2 conj(z)/z^3 - 3/z^4); verified against exact contour integration
    disk = GridFunction.disk(1.0, 1.0 / 32)
    for z in (2.0 + 0j, 1.5 + 1.2j):
        got = beurling_sq_truncated(disk, z, 1.0 / 16)
        want = -math.pi * (2 * np.conj(z) / z**3 - 3 / z**4)
        assert abs(got - want) < 6e-3 * abs(want) + 1e-4


def test_beurling_transform_grid_matches_closed_form():
    disk = GridFunction.disk(1.0, 1.0 / 16)
    bg = beurling_transform_grid(disk, (-3.0, -3.0), 1.0 / 8, (48, 48))
    zs = bg.centers(0)[:, None] + 1j * bg.centers(1)[None, :]
    mask = np.abs(zs) > 1.3
    err = np.max(np.abs(bg.values[mask] - math.pi / zs[mask] ** 2))
    assert err < 3e-2


def test_beurling_maximal_far_field():
    disk = GridFunction.disk(1.0, 1.0 / 16)
    bm = beurling_maximal(disk, 3.0 + 0j)
    assert bm >= math.pi / 9 * 0.97
    assert beurling_maximal(disk, 3.0 + 0j, kernel="b2") > 0


# -------------------------------------------------------------- grid plumbing


def test_grid_function_basics():
    f = step01(1.0 / 4)
    assert f.dim == 1 and abs(f.integral() - 1.0) < 1e-12
    assert f.value_at(0.1) == 1.0 and f.value_at(1.7) == 0.0
    d = GridFunction.disk(1.0, 1.0 / 16)
    assert abs(d.integral() - math.pi) < 2e-3
    assert d.value_at((0.0, 0.0)) == 1.0 and d.value_at((2.0, 2.0)) == 0.0
    with pytest.raises(ValueError):
        GridFunction(0.0, -1.0, np.ones(3))
    with pytest.raises(ValueError):
        TruncationGrid(np.array([0.5, 0.5]))


def test_csv_roundtrip(tmp_path):
    f = GridFunction(0.0, 0.5, np.array([1.0, -2.0, 3.0]))
    path = tmp_path / "f.csv"
    with open(path, "w") as fh:
        for c, v in zip(f.centers(), f.values):
            fh.write(f"{c},{v}\n")
    g = GridFunction.from_csv(str(path))
    assert np.allclose(g.values, f.values) and abs(g.h - 0.5) < 1e-12
    path2 = tmp_path / "f2.csv"
    with open(path2, "w") as fh:
        fh.write("# comment\n")
        for i in range(3):
            for j in range(3):
                fh.write(f"{0.25 + 0.5 * i},{0.25 + 0.5 * j},{float(i * 3 + j)}\n")
    g2 = GridFunction.from_csv(str(path2))
    assert g2.dim == 2 and g2.values[2, 1] == 7.0
