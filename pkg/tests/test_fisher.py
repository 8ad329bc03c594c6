import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from eur.fisher import (
    collision_length,
    correlations,
    diffuse,
    diffusion_entropy_rate_check,
    entropy,
    entropy_and_ensemble_length,
    epsilon_sweep,
    fisher_covariance,
    fisher_covariance_state,
    fisher_length,
    fisher_length_mixed,
    fisher_length_state,
    isoperimetric_gap,
    phase_fisher_length,
)
from eur.grid import (
    Box,
    Gaussian,
    Grid1D,
    Grid2D,
    GridDensity,
    GridDistribution,
    HarmonicEigenstate,
    NumberMixture,
    NumberState,
    Product,
    build_state,
)

G = Grid1D.centered(20, 2048)


def gauss_density(g, mu, s):
    return GridDistribution.from_samples(g, np.exp(-((g.points - mu) ** 2) / (2 * s * s)))


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.5])
def test_gaussian_fisher_length_equals_width(sigma):
    r = fisher_length(gauss_density(G, 0.3, sigma))
    assert r.delta == pytest.approx(sigma, rel=1e-10)
    assert r.fisher_info == pytest.approx(sigma**-2, rel=1e-10)
    assert not r.divergent


def test_state_route_matches_density_route():
    s = build_state(Gaussian(0.2, 0.7, 1.1, 0.3), G)
    a = fisher_length_state(s)
    b = fisher_length(s.density())
    assert a.delta == pytest.approx(0.7, rel=1e-10)
    assert b.delta == pytest.approx(a.delta, rel=1e-10)


def test_harmonic_n1_fisher_length():
    # (ln p)' = 2/x - 2x, so the information is <4/x^2 - 8 + 4x^2> = 8 - 8 + 6
    r = fisher_length_state(build_state(HarmonicEigenstate(1), Grid1D.centered(12, 1024)))
    assert r.fisher_info == pytest.approx(6.0, rel=1e-8)


def test_box_fisher_length_is_divergent():
    s = build_state(Box(-1, 1), Grid1D.centered(4, 256))
    r = fisher_length_state(s)
    assert r.divergent
    assert r.epsilon_used < 1e-12
    assert r.sweep[-1] > 1.1 * r.sweep[0]


def test_sweep_stable_for_smooth_density():
    d = gauss_density(G, 0.0, 1.0)
    div, vals = epsilon_sweep(d.p, G.dx)
    assert not div
    assert len(vals) == 5
    assert_allclose(vals, 1.0, rtol=1e-3)


def test_phase_fisher_length_of_two_level_superposition():
    r = phase_fisher_length(NumberState.from_terms({0: 1, 1: 1}), 128)
    assert r.delta == pytest.approx(1.0, rel=1e-10)
    assert not r.divergent


def test_phase_fisher_length_of_number_state_is_infinite():
    r = phase_fisher_length(NumberState.fock(4), 64)
    assert r.delta == math.inf
    assert r.fisher_info == 0.0


def test_phase_fisher_length_of_mixture():
    # p = (1 + w cos phi) / 2 pi, information by quadrature
    w = 0.5
    mix = NumberMixture((w, 1 - w), (NumberState.from_terms({0: 1, 1: 1}), NumberState.fock(0)))
    phi = np.linspace(-np.pi, np.pi, 200001)
    p = (1 + w * np.cos(phi)) / (2 * np.pi)
    dp = -w * np.sin(phi) / (2 * np.pi)
    expected = np.trapezoid(dp * dp / p, phi)
    assert phase_fisher_length(mix, 128).fisher_info == pytest.approx(expected, rel=1e-8)


def test_mixed_route_agrees_with_pure_state():
    g = Grid1D.centered(10, 256)
    s = build_state(Gaussian(0.4, 0.9, 0.7, 0.2), g)
    a = fisher_length_mixed(GridDensity.from_state(s))
    assert a.delta == pytest.approx(fisher_length_state(s).delta, rel=1e-9)


def test_mixed_route_for_harmonic_mixture():
    g = Grid1D.centered(12, 256)
    states = [build_state(HarmonicEigenstate(k), g) for k in (0, 1)]
    r = GridDensity.mixture([0.5, 0.5], states)
    direct = fisher_length(GridDistribution.from_samples(g, np.diag(r.rho).real))
    assert fisher_length_mixed(r).delta == pytest.approx(direct.delta, rel=1e-9)


def _correlated_gaussian(g2, cov):
    x1, x2 = np.meshgrid(g2.ax1.points, g2.ax2.points, indexing="ij")
    inv = np.linalg.inv(cov)
    q = inv[0, 0] * x1**2 + 2 * inv[0, 1] * x1 * x2 + inv[1, 1] * x2**2
    return GridDistribution.from_samples(g2, np.exp(-0.5 * q))


def test_fisher_covariance_of_gaussian_is_covariance():
    g = Grid1D.centered(12, 256)
    cov = np.array([[1.2, 0.5], [0.5, 0.8]])
    fc = fisher_covariance(_correlated_gaussian(Grid2D(g, g), cov))
    assert_allclose(fc.matrix, cov, rtol=1e-9)
    assert not fc.divergent


def test_fisher_covariance_state_route():
    g = Grid1D.centered(10, 128)
    s = build_state(Product(Gaussian(0, 0.8, 0.3), Gaussian(0.5, 1.1, -0.2, 0.1)), Grid2D(g, g))
    fc = fisher_covariance_state(s)
    assert_allclose(fc.matrix, np.diag([0.64, 1.21]), atol=1e-9)
    assert_allclose(fisher_covariance(s.density()).matrix, fc.matrix, atol=1e-9)


def test_gaussian_correlation_coefficients_coincide():
    g = Grid1D.centered(12, 256)
    cov = np.array([[1.0, -0.6], [-0.6, 1.5]])
    c = correlations(_correlated_gaussian(Grid2D(g, g), cov))
    r = -0.6 / math.sqrt(1.5)
    assert c.r_pearson == pytest.approx(r, rel=1e-9)
    assert c.r_fisher == pytest.approx(r, rel=1e-9)


def test_collision_length():
    assert collision_length([0.75, 0.25]) == pytest.approx(8 / 5)
    assert collision_length(np.full(7, 1 / 7)) == pytest.approx(7)
    assert collision_length([1.0, 0.0]) == 1.0
    with pytest.raises(ValueError):
        collision_length([0.6, 0.6])


@pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
def test_gaussian_entropy(s):
    d = gauss_density(Grid1D.centered(25, 4096), 0.0, s)
    ent, ens = entropy_and_ensemble_length(d)
    assert ent == pytest.approx(0.5 * math.log(2 * math.pi * math.e * s * s), rel=1e-10)
    assert ens == pytest.approx(math.sqrt(2 * math.pi * math.e) * s, rel=1e-10)
    assert isoperimetric_gap(d) == pytest.approx(0.0, abs=1e-9)


def test_uniform_entropy():
    g = Grid1D.span(0, 2.0, 400)
    assert entropy(GridDistribution.from_samples(g, np.ones(400))) == pytest.approx(math.log(2.0), rel=1e-12)


def test_isoperimetric_gap_positive_for_bimodal():
    d = GridDistribution.from_samples(G, np.exp(-((G.points - 3) ** 2) / 2) + np.exp(-((G.points + 3) ** 2) / 2))
    assert isoperimetric_gap(d) > 0.1


def test_diffusion_of_gaussian_matches_closed_form():
    g = Grid1D.centered(20, 800)
    gamma, sigma = 0.5, 1.0
    dt = 0.9 * g.dx**2 / (2 * gamma)
    rep = diffusion_entropy_rate_check(gauss_density(g, 0.0, sigma), gamma, dt, 4000)
    assert rep.max_mismatch < 0.01
    assert_allclose(rep.fisher_rate, gamma / (sigma**2 + 2 * gamma * rep.times), rtol=0.01)
    assert not rep.divergent.any()


def test_diffusion_with_drift():
    g = Grid1D.centered(20, 800)
    dt = 0.9 * g.dx**2
    rep = diffusion_entropy_rate_check(gauss_density(g, -2.0, 1.0), 0.5, dt, 3000, drift=0.5)
    assert rep.max_mismatch < 0.02


def test_diffusion_rejects_unstable_step():
    g = Grid1D.centered(10, 200)
    d = gauss_density(g, 0, 1)
    with pytest.raises(ValueError):
        diffuse(d, 1.0, g.dx**2, 10)


def test_diffusion_conserves_mass():
    g = Grid1D.centered(15, 300)
    out = diffuse(gauss_density(g, 0, 1), 0.5, 0.5 * g.dx**2, 200)
    assert out.p.sum() * g.dx == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(shift=st.floats(-3, 3), scale=st.floats(0.5, 2.0))
def test_fisher_length_translates_and_scales(shift, scale):
    g = Grid1D.centered(20, 2048)
    x = g.points
    base = np.exp(-((x**2) / 2)) * (1 + 0.5 * np.sin(x) ** 2)
    moved = np.exp(-(((x - shift) / scale) ** 2) / 2) * (1 + 0.5 * np.sin((x - shift) / scale) ** 2)
    d0 = fisher_length(GridDistribution.from_samples(g, base)).delta
    d1 = fisher_length(GridDistribution.from_samples(g, moved)).delta
    assert d1 == pytest.approx(scale * d0, rel=1e-7)
