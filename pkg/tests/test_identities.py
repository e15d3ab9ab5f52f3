"""Exact identity verifiers: fundamental solution, matching coefficients,
series constants, stabilization, summation identities, radial operators."""
import math
import random
from fractions import Fraction as F

import pytest

from czkit.exact import SymScalar, fundamental_normalization, gamma_half_integer
from czkit.identities import (
    BesselArg,
    FormalCoefficientVector,
    RadialExpr,
    RadialPowerArg,
    bessel_ratio_coeff_scaled,
    bessel_ratio_float,
    bessel_zero_scaled,
    falling_factorial_sum_a,
    falling_factorial_sum_b,
    fundamental_coeff_product_form,
    fundamental_coeffs,
    fundamental_solution,
    matching_coeff_closed,
    matching_coeffs_taylor,
    power_series_closed_scaled,
    power_series_coeffs_scaled,
    radial_diffop_expand,
    radial_laplacian_check,
    run_identity_suite,
    series_kernel_constant,
    series_kernel_constant_from_matching,
    series_leading_constant_scaled,
    verify_coeff_decay,
    verify_matching_coeffs,
    verify_radial_sum_identity,
    verify_series_constants,
    verify_series_stabilization,
    verify_triple_binomial,
)
from czkit.polyalg import MultiPoly, apply_diffop, sup_norm_on_sphere


def test_fundamental_coeff_examples():
    assert fundamental_coeffs(2, 1) == (F(1), F(0))
    assert fundamental_coeffs(5, 1) == (F(-1, 2), F(0))
    alpha, beta = fundamental_coeffs(3, 1)
    assert alpha is None and beta == F(1, 2)


def test_fundamental_coeffs_match_product_form():
    for n in (2, 4, 6):
        for order in range(1, 6):
            assert fundamental_coeffs(n, order)[0] == fundamental_coeff_product_form(n, order)
    for n in (5, 7, 9):
        for order in range(1, (n - 1) // 2):
            assert fundamental_coeffs(n, order)[0] == fundamental_coeff_product_form(n, order)


def test_radial_laplacian_closed_under_the_rules():
    e = RadialExpr({(F(3), 0): SymScalar(F(1)), (F(1), 1): SymScalar(F(2))})
    lap = e.radial_laplacian(3)
    # r^3 -> 3*4 r; r log r -> 1*2 r^-1 log r + (2+1) r^-1
    assert lap == RadialExpr(
        {(F(1), 0): SymScalar(F(12)), (F(-1), 1): SymScalar(F(4)), (F(-1), 0): SymScalar(F(6))}
    )


def test_radial_laplacian_check_over_ranges():
    for n in range(2, 6):
        for order in range(1, 7):
            assert radial_laplacian_check(n, order)


def test_matching_coeff_worked_value():
    # n=2, N=1, L=2: oracle from E(t) = c t^(1/2): E''(1)/2! = -c/8
    c = fundamental_normalization(2)
    assert matching_coeff_closed(2, 1, 2) == c * F(-1, 8)
    assert matching_coeffs_taylor(2, 1)[2] == c * F(-1, 8)


def test_matching_coeffs_all_ranges():
    for n in range(2, 6):
        for order in range(1, 7):
            assert verify_matching_coeffs(n, order)


def test_matching_coeffs_log_regime_free_coefficient_cancels():
    # in the log regime the free power coefficient must not affect L >= N+1
    a = matching_coeffs_taylor(3, 2, 0)
    b = matching_coeffs_taylor(3, 2, F(355, 113))
    assert a == b


def test_falling_factorial_sums():
    assert falling_factorial_sum_a(F(1, 2), 1, 2)
    for order in (1, 2, 3):
        for L in range(0, 2 * order + 1):
            assert falling_factorial_sum_a(F(1, 2), order, L)
            assert falling_factorial_sum_a(F(3, 2), order, L)
    # single-term boundary L = 2N
    assert falling_factorial_sum_a(F(5, 2), 3, 6)
    assert falling_factorial_sum_b(1, 2, 4)
    assert falling_factorial_sum_b(2, 2, 3)
    with pytest.raises(ValueError):
        falling_factorial_sum_b(1, 2, 1)  # factorial regime violated


def test_triple_binomial_examples():
    assert verify_triple_binomial(1, 1, 2, 3)  # both sides 6
    assert verify_triple_binomial(0, 0, F(7, 2), F(-4, 7))
    # half-integer upper indices of the kind used by the radial sums
    assert verify_triple_binomial(0, 3, F(9, 2), F(5, 2))
    assert verify_triple_binomial(2, 1, F(-3, 2), F(11, 2))
    with pytest.raises(ValueError):
        verify_triple_binomial(-1, 0, 1, 1)


def test_series_constants_and_cross_route():
    for n in range(2, 6):
        for order in range(1, 7):
            assert verify_series_constants(n, order)
    c = series_kernel_constant(2, 2, 3, 0, 0)
    assert c == series_kernel_constant_from_matching(2, 2, 3, 0, 0)


def test_leading_constant_value():
    # n=2, j=0: scaled constant 1/Gamma(2) = 1; unscaled 1/2
    assert series_leading_constant_scaled(2, 0) == SymScalar(F(1))


def test_bessel_series_scaled_values():
    # value at zero: scaled coefficient i=0 equals 2^q * 1/(2^q Gamma(q+1))
    for twice_q in range(1, 13):
        q = F(twice_q, 2)
        want = SymScalar(F(1)) / gamma_half_integer(q + 1)
        assert bessel_ratio_coeff_scaled(q, 0) == want
    # zero-value helper at an integer offset above n/2
    for n in (2, 3):
        for k in range(0, 4):
            got = bessel_zero_scaled(F(n, 2) + k, n)
            assert got == SymScalar(F(1, 2**k)) / gamma_half_integer(F(n, 2) + k + 1)
    with pytest.raises(ValueError):
        bessel_zero_scaled(F(1, 2), 2)


def test_bessel_float_bridge():
    for r in (0.1, 1.0, 5.0):
        got = bessel_ratio_float(F(1, 2), r, terms=30)
        want = math.sqrt(2.0 / math.pi) * math.sin(r) / r
        assert abs(got - want) < 1e-12


def test_power_series_stabilization():
    for n in (2, 3):
        for p in range(5):
            assert verify_series_stabilization(n, p)


def test_power_series_leading_value_matches_constant():
    # p = 0 must reduce to the leading series constant on the first layer
    for n in (2, 3, 4):
        vec = power_series_coeffs_scaled(n, 3, 0)
        assert vec.component(0) == series_leading_constant_scaled(n, 0)
        assert vec == power_series_closed_scaled(n, 0)


def test_coefficient_vector_linearity():
    rng = random.Random(8)
    vec = power_series_coeffs_scaled(2, 3, 2)
    for _ in range(20):
        a = [complex(rng.uniform(-2, 2)) for _ in range(3)]
        b = [complex(rng.uniform(-2, 2)) for _ in range(3)]
        lhs = vec.contract([ai + bi for ai, bi in zip(a, b)])
        rhs = vec.contract(a) + vec.contract(b)
        assert abs(lhs - rhs) < 1e-12


def test_formal_vector_equality_and_add():
    v1 = FormalCoefficientVector({0: SymScalar(F(1))})
    v2 = FormalCoefficientVector({0: SymScalar(F(-1))})
    assert (v1 + v2) == FormalCoefficientVector({})
    assert v1 != v2


def test_coeff_decay_bounds():
    cubic = MultiPoly.monomial(2, (3, 0)) - MultiPoly.monomial(2, (1, 2), 3)
    norm3 = sup_norm_on_sphere(cubic)
    res = verify_coeff_decay(2, 2, [0.0, norm3], p_max=6)
    assert res["ok"]
    res2 = verify_coeff_decay(2, 2, [1.0, 3 * norm3], p_max=6)
    assert res2["ok"]
    # zero kernel: vacuous bounds
    res3 = verify_coeff_decay(2, 2, [0.0, 0.0], p_max=4)
    assert res3["ok"]


def test_radial_sum_identity_full_range():
    for n in (2, 3, 4, 5):
        for order in (1, 3, 4):
            for p in range(order):
                for i in range(p + 1):
                    for j in range(p - i + 1):
                        assert verify_radial_sum_identity(n, order, p, j, i)


def test_radial_diffop_expansion_cross_oracle():
    n = 3
    x1 = MultiPoly.variable(n, 0)
    r2k = MultiPoly.radius_power
    # single-variable operator on r^2: one term, matches direct application
    assert radial_diffop_expand(x1, RadialPowerArg(1)) == apply_diffop(x1, r2k(n, 1))
    # |x|^2 operator picks up the Laplacian term
    op = MultiPoly.radius2(n)
    assert radial_diffop_expand(op, RadialPowerArg(1)) == apply_diffop(op, r2k(n, 1))
    assert radial_diffop_expand(op, RadialPowerArg(3)) == apply_diffop(op, r2k(n, 3))
    # harmonic operator: single term reproducing the closed form
    h = MultiPoly.monomial(n, (3, 0, 0)) - MultiPoly.monomial(n, (1, 2, 0), 3)
    for k in range(0, 6):
        assert radial_diffop_expand(h, RadialPowerArg(k)) == apply_diffop(h, r2k(n, k))
    # Bessel-family argument: index shifts with alternating sign
    out = radial_diffop_expand(x1, BesselArg(F(3, 2)))
    assert len(out) == 1
    coef, poly, q = out[0]
    assert coef == F(-1) and poly == x1 and q == F(5, 2)
    with pytest.raises(ValueError):
        radial_diffop_expand(x1, "not a radial argument")


def test_fundamental_solution_shape():
    e = fundamental_solution(3, 1)
    # exponent 2N+1-n = 0 with a log term only (free coefficient defaults 0)
    assert set(e.terms) == {(F(0), 1)}
    with pytest.raises(ValueError):
        fundamental_solution(2, 1, alpha_override=1)


def test_suite_driver_all_green():
    results = run_identity_suite(n_max=3, N_max=3, triple_count=50)
    assert results and all(r.ok for r in results)


def test_suite_ranges_are_configuration():
    # the caps are knobs, not code: one cell beyond the default range
    results = run_identity_suite(n_max=6, N_max=7, triple_count=10)
    beyond = [r for r in results if "n=6" in r.params and "N=7" in r.params]
    assert beyond and all(r.ok for r in beyond)


def test_radial_diffop_requires_homogeneous_operator():
    mixed = MultiPoly.variable(2, 0) + MultiPoly.monomial(2, (2, 0))
    with pytest.raises(ValueError):
        radial_diffop_expand(mixed, RadialPowerArg(2))
