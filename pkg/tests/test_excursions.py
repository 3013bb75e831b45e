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
    TwoPointParetoMixture,
)
from kendallwalk import excursions as ex
from kendallwalk import walk as wk

TWO = ex.ExcursionLaw(SymmetricTwoPoint(1.0), 1.0)
LAWS = [
    TWO,
    ex.ExcursionLaw(SymmetricTwoPoint(1.0), 0.4),
    ex.ExcursionLaw(SymmetricUniform(), 1.0),
    ex.ExcursionLaw(SymmetricUniform(), 2.2),
    ex.ExcursionLaw(SymmetricPareto(1.0), 0.5),
    ex.ExcursionLaw(TwoPointParetoMixture(0.5), 0.3),
]


def test_rejects_atom_at_zero():
    with pytest.raises(ValueError):
        ex.ExcursionLaw(SymmetricTwoPoint(0.0), 1.0)


def test_phi_examples():
    t = np.array([0.5, 1.5, 3.0])
    law = LAWS[2]
    np.testing.assert_allclose(ex.phi_n(law, 1, t), law.dist.cdf(t) - 0.5)
    for n in (1, 2, 5):
        assert ex.phi_n(TWO, n, 1e6) == pytest.approx(2.0**-n, abs=1e-6)
    assert ex.phi_n(TWO, 2, 2.0) == pytest.approx(0.1875)


def test_phi_two_monte_carlo():
    n = 400_000
    b = wk.simulate_batch(wk.WalkConfig(SymmetricTwoPoint(1.0), 1.0, 2, n, master_seed=31))
    x = b.trajectories
    p = np.mean((x[:, 0] <= 0) & (x[:, 1] > 0) & (x[:, 1] < 2))
    assert abs(p - 0.1875) < 3 * math.sqrt(0.1875 * 0.8125 / n)


@pytest.mark.parametrize("n", [41, 60, 200])
def test_phi_log_space_matches_direct(n):
    law = LAWS[2]
    t = np.array([0.8, 2.0, 50.0])
    f, g = law.F(t) - 0.5, law.G(t)
    direct = np.array([math.ldexp(gi ** (n - 1) * (2 * n * fi - (n - 1) * gi), -n) for fi, gi in zip(f, g)])
    np.testing.assert_allclose(ex.phi_n(law, n, t), direct, rtol=1e-12, atol=0)


def test_phi_invalid():
    with pytest.raises(ValueError):
        ex.phi_n(TWO, 0, 1.0)
    with pytest.raises(ValueError):
        ex.phi_n(TWO, 2, 0.0)


def test_tau_law():
    assert ex.tau_pgf(1.0) == 1.0
    assert ex.tau_pmf(3) == 0.125
    series = sum(k * 2.0**-k for k in range(1, 80))
    assert ex.tau_pgf_derivative(1.0) == pytest.approx(series, rel=1e-15)
    assert series == pytest.approx(2.0)
    for s in (-0.1, 2.0, 3.0):
        with pytest.raises(ValueError):
            ex.tau_pgf(s)


def test_overshoot_examples():
    assert ex.overshoot_cdf(TWO, np.array([0.2, 0.9])) == pytest.approx([0.0, 0.0])
    assert ex.overshoot_cdf(TWO, 2.0) == pytest.approx(7 / 9)
    assert ex.overshoot_cdf(TWO, 1e6) >= 1 - 1e-6
    # P(X_tau < 1) = 0 but P(X_tau <= 1) > 0 at the atom
    assert ex.overshoot_cdf(TWO, 1.0) == 0
    assert ex.overshoot_cdf(TWO, 1.0, strict=False) > 0


@pytest.mark.parametrize("law", LAWS, ids=lambda l: f"{l.dist!r}-{l.alpha}")
def test_series_and_closed_form_agree(law):
    t = np.geomspace(0.05, 200, 120)
    t = t[[not any(abs(x - a) < 1e-12 for a in law.dist.atoms) for x in t]]
    partial = ex.phi_partial_sum(law, t, terms=60)
    closed = ex.overshoot_cdf(law, t)
    # remainder is at most 2^-60; what is left is rounding
    np.testing.assert_allclose(partial, closed, atol=2.0**-55 + 8 * np.finfo(float).eps)
    assert np.all(np.diff(closed) >= -1e-15)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: f"{l.dist!r}-{l.alpha}")
def test_survival_function(law):
    t = np.geomspace(0.05, 1e8, 200)
    np.testing.assert_allclose(ex.overshoot_sf(law, t), 1 - ex.overshoot_cdf(law, t, strict=False), atol=1e-12)


def test_geometric_kendall_examples():
    t = np.array([0.5, 2.0, 7.0])
    law = LAWS[2]
    np.testing.assert_allclose(ex.geometric_kendall_transform(ex.GeometricKendall(0.0, law), t), law.G(t))
    assert ex.geometric_kendall_transform(ex.GeometricKendall(1.0, TWO), 2.0) == pytest.approx(1 / 3)
    assert ex.geometric_kendall_transform(ex.GeometricKendall(0.6, TWO), 1e12) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ex.GeometricKendall(1.5, TWO)


def test_geometric_kendall_monte_carlo():
    z = ex.GeometricKendall(1.0, TWO)
    n = 200_000
    draws = ex.sample_geometric_kendall(z, n, RngStream(32).generator())
    vals = np.clip(1 - np.abs(draws / 2.0), 0, None)
    se = vals.std(ddof=1) / math.sqrt(n)
    assert abs(vals.mean() - 1 / 3) < 3 * se


def test_wiener_hopf_examples():
    assert ex.wiener_hopf_H(TWO, 1.0, 0.5) == pytest.approx(1 / 3)
    assert ex.wiener_hopf_H(TWO, 0.0, 0.5) == 0.0
    for s in (0.25, 0.5, 1.0):
        assert ex.wiener_hopf_H(TWO, s, 0.0) == pytest.approx(float(ex.tau_pgf(s)))
        assert ex.wiener_hopf_H(TWO, s, 1e-9) == pytest.approx(float(ex.tau_pgf(s)), abs=1e-8)


@settings(max_examples=80, deadline=None)
@given(s=st.floats(0.0, 1.0), u=st.floats(1e-3, 50.0), i=st.integers(0, len(LAWS) - 1))
def test_factorization(s, u, i):
    law = LAWS[i]
    lhs = ex.wiener_hopf_H(law, s, u)
    rhs = ex.tau_pgf(s) * ex.geometric_kendall_transform(ex.GeometricKendall(s, law), 1 / u)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert ex.wiener_hopf_H(law, s, -u) == lhs


def test_wiener_hopf_monte_carlo_small():
    n = 100_000
    b = wk.simulate_batch(wk.WalkConfig(SymmetricUniform(), 1.0, 60, n, master_seed=33), store=False)
    law = LAWS[2]
    for s, u in [(0.5, 0.25), (1.0, 0.9)]:
        mean, se = ex.wiener_hopf_estimate(b.tau, b.overshoot, s, u, 1.0)
        assert abs(mean - ex.wiener_hopf_H(law, s, u)) < 3 * se


def test_moment_identity_examples():
    assert ex.overshoot_alpha_moment(TWO) == 2.0
    assert ex.overshoot_alpha_moment(LAWS[2]) == 1.0
    assert ex.overshoot_alpha_moment(ex.ExcursionLaw(SymmetricPareto(1.6), 0.8)) == pytest.approx(4.0)
    assert ex.overshoot_alpha_moment(ex.ExcursionLaw(SymmetricPareto(1.0), 1.0)) == math.inf


@pytest.mark.parametrize(
    "law",
    [TWO, LAWS[1], LAWS[2], LAWS[3], ex.ExcursionLaw(SymmetricPareto(1.6), 0.8), LAWS[5]],
    ids=lambda l: f"{l.dist!r}-{l.alpha}",
)
def test_moment_identity_by_quadrature(law):
    closed = ex.overshoot_alpha_moment(law)
    assert ex.overshoot_alpha_moment_quadrature(law) == pytest.approx(closed, rel=1e-6)


def test_moment_from_hand_derived_survival():
    # uniform base, alpha = 1: F = (1 + t)/2 and G = t/2 on (0, 1); F = 1 and G = 1 - 1/(2t) beyond
    def sf(t):
        if t < 1:
            g = t / 2
            return 1 - (2 * t - g * g) / (2 - g) ** 2
        g = 1 - 1 / (2 * t)
        return 1 - (2 - g * g) / (2 - g) ** 2

    head, _ = integrate.quad(sf, 0, 1, epsabs=1e-13)
    tail, _ = integrate.quad(sf, 1, math.inf, epsabs=1e-13)
    assert head + tail == pytest.approx(1.0, rel=1e-9)
    t = np.array([0.3, 0.99, 1.5, 40.0])
    np.testing.assert_allclose(ex.overshoot_sf(LAWS[2], t), [sf(x) for x in t], rtol=1e-12)
