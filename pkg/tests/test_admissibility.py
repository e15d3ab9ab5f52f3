"""The divisor/non-vanishing decision procedure."""
import random
from fractions import Fraction as F

import pytest

from czkit.admissibility import (
    CheckReport,
    check_maximal_control,
    quotient_sum,
    sphere_grid,
    spherical_gradient_bound,
)
from czkit.kernels import kernel_from_polynomial
from czkit.polyalg import MultiPoly


def harmonic_cubic(n=2):
    return MultiPoly.monomial(n, (3, 0) + (0,) * (n - 2)) - MultiPoly.monomial(
        n, (1, 2) + (0,) * (n - 2), 3
    )


def model_kernel(n, lam: F):
    w = MultiPoly.variable(n, 0) * MultiPoly.radius2(n) + harmonic_cubic(n) * (lam * (n + 1))
    return kernel_from_polynomial(n, w)


def test_degenerate_model_fails_with_axis_witness():
    for n in (2, 3):
        rep = check_maximal_control(model_kernel(n, F(1)))
        assert rep.verdict == "FAIL(vanishing)"
        assert abs(abs(rep.witness[0]) - 1.0) < 1e-12
        assert all(abs(c) < 1e-12 for c in rep.witness[1:])
        assert rep.witness_value < 1e-10


def test_half_strength_model_passes_with_certificate():
    for n in (2, 3):
        rep = check_maximal_control(model_kernel(n, F(1, 2)))
        assert rep.verdict == "PASS"
        assert rep.certified_min > 0
        assert rep.depth_used <= 14


def test_single_layer_kernel_passes_trivially():
    rep = check_maximal_control(kernel_from_polynomial(2, harmonic_cubic()))
    assert rep.verdict == "PASS"
    assert rep.quotients[0] == MultiPoly.constant(2, 1)
    assert abs(rep.certified_min - 2.0 / 3.0) < 1e-12  # |gamma_3| rational part


def test_mirrored_model_vanishes_on_diagonals():
    # the quotient sum 1 + (x1^2 - 3 x2^2) has zeros at x2^2 = 1/2 (n = 2),
    # which the dyadic angle grid hits exactly
    rep = check_maximal_control(model_kernel(2, F(-1)))
    assert rep.verdict == "FAIL(vanishing)"
    assert abs(abs(rep.witness[0]) - 2 ** -0.5) < 1e-12
    assert rep.witness_value < 1e-10


def test_weak_mirrored_model_is_inconclusive():
    # at lam = -1/2 the sum vanishes at x2^2 = 3/4: a genuine zero off the
    # dyadic grid, so no certificate and no grid zero below tolerance, at
    # any depth
    verdicts = set()
    for depth in (6, 12):
        rep = check_maximal_control(model_kernel(2, F(-1, 2)), max_depth=depth)
        verdicts.add(rep.verdict)
        assert rep.certificate_gap is not None
    assert verdicts == {"INCONCLUSIVE"}
    assert "certificate gap" in rep.format_text()


def test_verdicts_stable_under_grid_deepening():
    for lam, expected in ((F(0), "PASS"), (F(1, 2), "PASS"), (F(1), "FAIL(vanishing)"), (F(-1), "FAIL(vanishing)")):
        k = (
            kernel_from_polynomial(2, MultiPoly.variable(2, 0))
            if lam == 0
            else model_kernel(2, lam)
        )
        verdicts = {check_maximal_control(k, max_depth=d).verdict for d in (6, 12)}
        assert verdicts == {expected}


def test_higher_degree_divisor_family():
    # planar family with lowest layer of degree 3: the degree-9 harmonic
    # (real part of z^9) factors through the degree-3 one (real part of z^3)
    # with quotient 4 P3^2 - 3 |x|^6, and the multiplier ratio is -1/3, so
    # weight b = 3 degenerates at the axis while b = 1 is certified
    from czkit.exact import SymScalar, riesz_multiplier

    assert riesz_multiplier(9, 2) / riesz_multiplier(3, 2) == SymScalar(F(-1, 3))
    p3 = harmonic_cubic(2)
    r6 = MultiPoly.radius_power(2, 3)
    p9 = p3 * (p3 * p3 * 4 - r6 * 3)
    from czkit.polyalg import laplacian

    assert laplacian(p9).is_zero()
    for b, expect in ((F(1), "PASS"), (F(3), "FAIL(vanishing)")):
        w = p3 * r6 + p9 * b
        rep = check_maximal_control(kernel_from_polynomial(2, w))
        assert rep.verdict == expect, (b, rep.verdict)
        assert rep.divisor.degree == 3
        assert rep.quotients[1] == (p3 * p3 * 4 - r6 * 3) * b
        if expect == "PASS":
            assert rep.certified_min > 0
        else:
            assert abs(abs(rep.witness[0]) - 1.0) < 1e-9


def test_divisibility_failure_reported():
    other = MultiPoly.monomial(2, (0, 3)) - MultiPoly.monomial(2, (2, 1), 3)
    w = MultiPoly.variable(2, 0) * MultiPoly.radius2(2) + other
    rep = check_maximal_control(kernel_from_polynomial(2, w))
    assert rep.verdict == "FAIL(divisibility)"
    assert rep.failed_degree == 3
    assert not rep.divisibility_ok


def test_quotients_recovered_for_constructed_kernels():
    rng = random.Random(17)
    for _ in range(20):
        lam = F(rng.randrange(-8, 9), rng.randrange(1, 5))
        if lam == 0 or abs(lam) >= 1:
            continue
        k = model_kernel(2, lam)
        f, quotients, unit, failed = quotient_sum(k)
        assert failed is None
        assert quotients[0] == MultiPoly.constant(2, 1)
        want = (
            MultiPoly.monomial(2, (2, 0)) - MultiPoly.monomial(2, (0, 2), 3)
        ) * (lam * 3)
        assert quotients[1] == want


def test_verdict_invariant_under_kernel_scaling():
    base = model_kernel(2, F(1, 2))
    w = (
        MultiPoly.variable(2, 0) * MultiPoly.radius2(2)
        + harmonic_cubic(2) * F(3, 2)
    ) * F(-7, 5)
    scaled = kernel_from_polynomial(2, w)
    assert check_maximal_control(base).verdict == check_maximal_control(scaled).verdict == "PASS"


def test_even_kernel_rejected():
    even = kernel_from_polynomial(2, MultiPoly.monomial(2, (2, 0)) - MultiPoly.monomial(2, (0, 2)))
    with pytest.raises(ValueError):
        check_maximal_control(even)


def test_gradient_bound_examples():
    assert spherical_gradient_bound(MultiPoly.constant(2, 5)) == 0.0
    assert abs(spherical_gradient_bound(MultiPoly.variable(2, 0)) - 1.0) < 1e-12
    f = MultiPoly.monomial(2, (2, 0)) - MultiPoly.monomial(2, (0, 2), 3)
    assert abs(spherical_gradient_bound(f) - 8.0) < 1e-9


def test_sphere_grid_mesh_and_axis_points():
    pts, delta = sphere_grid(2, 4)
    assert len(pts) == 8 << 4
    assert delta <= 2.0**-4
    import numpy as np

    assert np.min(np.abs(pts - np.array([1.0, 0.0])).sum(axis=1)) < 1e-15
    pts3, delta3 = sphere_grid(3, 3)
    assert delta3 <= 2.0**-3 * 3.2
    assert np.min(np.abs(pts3 - np.array([1.0, 0.0, 0.0])).sum(axis=1)) < 1e-15


def test_report_rendering():
    rep = check_maximal_control(model_kernel(2, F(1, 2)))
    text = rep.format_text()
    assert "PASS" in text and "certified" in text
    kv = rep.format_kv()
    assert "verdict=PASS" in kv
    assert isinstance(rep, CheckReport)
