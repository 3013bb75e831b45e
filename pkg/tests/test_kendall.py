import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from kendallwalk import (
    RngStream,
    SymmetricPareto,
    SymmetricTwoPoint,
    SymmetricUniform,
    TabulatedSymmetric,
    TwoPointParetoMixture,
)
from kendallwalk import kendall as kd
from kendallwalk.williamson import psi

reals = st.floats(-20, 20, allow_nan=False)
alphas = st.floats(0.1, 4.0)


def test_convolve_point_examples():
    law = kd.convolve_point(1, 1, 0.6)
    assert (law.scale, law.pareto_weight) == (1, 1)
    law = kd.convolve_point(5, 0, 0.6)
    assert (law.scale, law.pareto_weight) == (5, 0)
    law = kd.convolve_point(1, 2, 1)
    assert (law.scale, law.pareto_weight) == (2, 0.5)
    assert kd.convolve_point(0, 0, 1).degenerate


def test_self_convolution_of_unit_atoms_is_pareto():
    law = kd.convolve_point(1, -1, 0.7)
    t = np.linspace(-6, 6, 301)
    np.testing.assert_allclose(law.cdf(t), SymmetricPareto(1.4).cdf(t), atol=1e-15)


def _pareto_transform(alpha, s):
    """E Psi(s Theta) for Theta ~ Pareto(2 alpha), by quadrature."""
    if s == 0:
        return 1.0
    hi = 1 / abs(s)
    if hi <= 1:
        return 0.0
    val, _ = integrate.quad(lambda y: 2 * alpha * y ** (-2 * alpha - 1) * (1 - (abs(s) * y) ** alpha), 1, hi, epsabs=1e-14, epsrel=1e-13)
    return val


@settings(max_examples=120, deadline=None)
@given(x=reals, y=reals, t=reals, alpha=alphas)
def test_homomorphism(x, y, t, alpha):
    law = kd.convolve_point(x, y, alpha)
    assert law.nu_hat(t) == pytest.approx(psi(alpha, x * t) * psi(alpha, y * t), abs=1e-12)


@pytest.mark.parametrize("x, y, t, alpha", [(1, 2, 0.3, 1.0), (0.5, -1.5, 0.4, 0.6), (3, 0.2, 0.1, 2.5)])
def test_homomorphism_against_mixture_quadrature(x, y, t, alpha):
    law = kd.convolve_point(x, y, alpha)
    M, w = law.scale, law.pareto_weight
    direct = (1 - w) * psi(alpha, M * t) + w * _pareto_transform(alpha, M * t)
    assert direct == pytest.approx(psi(alpha, x * t) * psi(alpha, y * t), abs=1e-10)


def test_kernel_cdf_h_examples():
    assert kd.kernel_cdf_h(1, 2, 3, 1) == pytest.approx(7 / 18)
    assert kd.kernel_cdf_h(1, 2, 2, 1) == 0
    assert kd.kernel_cdf_h(0, 1, 2, 1) == 0.5
    assert kd.kernel_cdf_h(0, 0, 2, 1) == 0
    with pytest.raises(ValueError):
        kd.kernel_cdf_h(1, 1, 0, 1)


@settings(max_examples=100, deadline=None)
@given(x=reals, y=reals, t=st.floats(0.01, 30), a=st.floats(0.01, 100), alpha=alphas)
def test_kernel_scaling_equivariance(x, y, t, a, alpha):
    assert kd.kernel_cdf_h(a * x, a * y, a * t, alpha) == pytest.approx(kd.kernel_cdf_h(x, y, t, alpha), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-5, 5), y=st.floats(-5, 5), t=st.floats(0.05, 10), alpha=alphas)
def test_kernel_matches_point_law(x, y, t, alpha):
    law = kd.convolve_point(x, y, alpha)
    assert kd.kernel_cdf_h(x, y, t, alpha) == pytest.approx(law.open_interval_mass(t), abs=1e-12)


def test_transition_cdf_examples():
    d = SymmetricTwoPoint(1.0)
    assert kd.transition_cdf(0, d, 2, 1) == pytest.approx(0.5)
    assert kd.transition_cdf(1, d, 2, 1) == pytest.approx(0.375)
    assert kd.transition_cdf(2, d, 2, 1) == 0
    assert kd.transition_cdf(-3, d, 2, 1) == 0


def test_transition_cdf_monte_carlo():
    from kendallwalk.walk import step_kernel

    rng = RngStream(21).generator()
    n = 400_000
    x = step_kernel(np.ones(n), SymmetricTwoPoint(1.0), 1.0, rng)
    p = np.mean((x > 0) & (x < 2))
    assert abs(p - 0.375) < 3 * math.sqrt(0.375 * 0.625 / n)


@pytest.mark.parametrize("x, t, alpha", [(0.3, 0.5, 1.0), (-0.8, 2.0, 0.5), (0.0, 0.7, 2.0)])
def test_transition_cdf_quadrature(x, t, alpha):
    pts = sorted({v for v in (-abs(x), 0.0, abs(x), -t, t) if -1 < v < 1})
    val, _ = integrate.quad(lambda y: 0.5 * kd.kernel_cdf_h(x, y, t, alpha), -1, 1, points=pts, epsabs=1e-13, limit=200)
    assert kd.transition_cdf(x, SymmetricUniform(), t, alpha) == pytest.approx(val, abs=1e-10)


def test_power_cdf_examples():
    d = SymmetricTwoPoint(1.0)
    t = np.linspace(-3, 3, 13)
    np.testing.assert_array_equal(kd.power_cdf(kd.ConvolutionPowerLaw(d, 1, 1.0), t), d.cdf(t))
    assert kd.power_cdf(kd.ConvolutionPowerLaw(d, 2, 1.0), 2.0) == pytest.approx(0.875, abs=1e-15)


def _two_point_density(n, alpha, t):
    return alpha * n * (n - 1) / 2 * t ** (-2 * alpha - 1) * (1 - t**-alpha) ** (n - 2)


@pytest.mark.parametrize("n, alpha, t", [(3, 1.0, 2.0), (5, 0.7, 1.5), (8, 2.0, 3.3)])
def test_power_cdf_against_density_quadrature(n, alpha, t):
    tail, _ = integrate.quad(lambda s: _two_point_density(n, alpha, s), t, math.inf, epsabs=1e-14)
    got = kd.power_cdf(kd.ConvolutionPowerLaw(SymmetricTwoPoint(1.0), n, alpha), t)
    assert got == pytest.approx(1 - tail, abs=1e-10)


def test_two_point_density_normalization():
    half, _ = integrate.quad(lambda s: _two_point_density(5, 0.7, s), 1, math.inf, epsabs=1e-13)
    assert 2 * half == pytest.approx(1.0, abs=1e-10)


def _uniform_square_cdf(alpha, t):
    """F_2(t) for the uniform base by integrating the point-pair laws over [0, 1]^2."""
    f = lambda a, b: float(kd.convolve_point(a, b, alpha).cdf(t))
    cuts = [0.0, 1.0] if t >= 1 else [0.0, t, 1.0]
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        for lo2, hi2 in zip(cuts, cuts[1:]):
            val, _ = integrate.dblquad(f, lo, hi, lo2, hi2, epsabs=1e-11, epsrel=1e-11)
            total += val
    return total


@pytest.mark.parametrize("alpha, t", [(1.0, 0.5), (0.6, 1.7), (2.0, 0.9)])
def test_uniform_square_against_double_integral(alpha, t):
    law = kd.ConvolutionPowerLaw(SymmetricUniform(), 2, alpha)
    assert kd.power_cdf(law, t) == pytest.approx(_uniform_square_cdf(alpha, t), abs=1e-8)
    assert kd.example_cdf("uniform", 2, alpha, t) == pytest.approx(_uniform_square_cdf(alpha, t), abs=1e-8)


@pytest.mark.parametrize("family, p", [("uniform", None), ("two-point", None), ("mixture", 0.5), ("mixture", 0.2), ("pareto", None)])
@pytest.mark.parametrize("alpha", [0.3, 0.8, 1.0])
@pytest.mark.parametrize("n", [2, 3, 7])
def test_example_closed_forms_match_generic(family, p, alpha, n):
    base = {
        "uniform": SymmetricUniform(),
        "two-point": SymmetricTwoPoint(1.0),
        "mixture": TwoPointParetoMixture(p) if p else None,
        "pareto": SymmetricPareto(2 * alpha),
    }[family]
    t = np.linspace(-9, 9, 181)
    got = kd.example_cdf(family, n, alpha, t, p=p)
    np.testing.assert_allclose(got, kd.power_cdf(kd.ConvolutionPowerLaw(base, n, alpha), t), atol=1e-12)


def test_pareto_example_is_doubled_two_point():
    t = np.linspace(-5, 5, 101)
    for n in (1, 2, 6):
        np.testing.assert_allclose(kd.example_cdf("pareto", n, 0.7, t), kd.example_cdf("two-point", 2 * n, 0.7, t), atol=1e-15)
    t = t[np.abs(np.abs(t) - 1) > 1e-9]
    np.testing.assert_allclose(kd.example_cdf("pareto", 1, 0.7, t), SymmetricPareto(1.4).cdf(t), atol=1e-14)


def test_mixture_with_p_one_is_two_point():
    t = np.linspace(-6, 6, 121)
    for n in (2, 4):
        np.testing.assert_allclose(kd.example_cdf("mixture", n, 0.5, t, p=1.0), kd.example_cdf("two-point", n, 0.5, t), atol=1e-9)


@pytest.mark.parametrize(
    "args",
    [("pareto", 2, 1.5, None), ("mixture", 2, 0.5, 0.5), ("mixture", 2, 0.5, 1.5), ("mixture", 2, 0.5, None), ("nope", 2, 1.0, None), ("uniform", 0, 1.0, None)],
)
def test_example_cdf_ranges(args):
    family, n, alpha, p = args
    with pytest.raises(ValueError):
        kd.example_cdf(family, n, alpha, 1.0, p=p)


@pytest.mark.parametrize(
    "base",
    [SymmetricTwoPoint(1.0), SymmetricUniform(), TwoPointParetoMixture(0.3), SymmetricPareto(0.9), TabulatedSymmetric([0.5, 1.5], [0.7, 1.0])],
    ids=repr,
)
@pytest.mark.parametrize("n", [2, 5, 10])
def test_power_cdf_is_a_symmetric_cdf(base, n):
    law = kd.ConvolutionPowerLaw(base, n, 0.9)
    # tabulated transforms are evaluated by quadrature, so use a coarser grid there
    t = np.linspace(0.01, 20, 500 if base.closed_form else 60)
    f = law.cdf(t)
    assert np.all(np.diff(f) >= -1e-9)
    np.testing.assert_allclose(law.cdf(-t) + f, 1.0, atol=1e-12)
    assert np.all((f >= 0.5 - 1e-12) & (f <= 1 + 1e-12))


def test_stable_limit_examples():
    assert kd.stable_limit_cdf(1.0, 1.0) == pytest.approx(0.5 * (2 + math.e) / math.e)
    # 1 - F(t) = x^2 / 4 + O(x^3) with x = t^-alpha
    assert 1 - kd.stable_limit_cdf(1e4, 1.0) == pytest.approx(2.5e-9, rel=1e-3)
    assert kd.stable_limit_cdf(1e5, 1.0) >= 1 - 1e-9
    assert kd.stable_limit_cdf(0.0, 1.0) == 0.5
    assert kd.stable_limit_cdf(-1.0, 1.0) == pytest.approx(1 - 0.5 * (2 + math.e) / math.e)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [100, 1000, 10_000])
def test_rescaled_powers_converge(alpha, n):
    t = np.linspace(0, 3, 301)
    err = np.max(np.abs(kd.rescaled_power_transform(n, alpha, t) - np.exp(-(t**alpha))))
    assert err <= 2 / n
