import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from eur.decomp import classical_momentum_field
from eur.ensembles import make_rng, smooth_state
from eur.grid import Gaussian, Grid1D, GridDensity, HarmonicEigenstate, build_state
from eur.wigner import (
    marginal_errors,
    marginals,
    momentum_leakage,
    wigner_classical_momentum,
    wigner_covariance,
    wigner_function,
    wigner_momentum_grid,
    wigner_purity,
)

G = Grid1D.centered(12, 512)


def gaussian_wigner(x, p, mu, sigma, p0, hbar=1.0):
    return np.exp(-((x - mu) ** 2) / (2 * sigma**2) - 2 * sigma**2 * (p - p0) ** 2 / hbar**2) / (math.pi * hbar)


def test_momentum_grid_spacing():
    q = wigner_momentum_grid(G, 1.0)
    assert q.dx == pytest.approx(math.pi / (G.n * G.dx))
    assert_allclose(q.points, -q.points[::-1], atol=1e-12)


@pytest.mark.parametrize("hbar", [1.0, 0.5])
def test_gaussian_wigner_closed_form(hbar):
    mu, sigma, p0 = 0.4, 0.9, 1.2
    w = wigner_function(build_state(Gaussian(mu, sigma, p0), G, hbar=hbar))
    x, p = np.meshgrid(w.x_grid.points, w.p_grid.points, indexing="ij")
    assert_allclose(w.values, gaussian_wigner(x, p, mu, sigma, p0, hbar), atol=1e-10)


def test_boost_moves_peak_to_positive_momentum():
    w = wigner_function(build_state(Gaussian(0, 1, 2.0), G))
    _, j = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert abs(w.p_grid.points[j] - 2.0) <= w.p_grid.dx


def test_first_excited_state_is_negative_at_origin():
    w = wigner_function(build_state(HarmonicEigenstate(1), G))
    x, p = np.meshgrid(w.x_grid.points, w.p_grid.points, indexing="ij")
    r2 = x**2 + p**2
    assert_allclose(w.values, (2 * r2 - 1) * np.exp(-r2) / math.pi, atol=1e-10)
    assert w.values.min() < -0.3
    assert w.total() == pytest.approx(1.0, abs=1e-10)


def test_marginals_reproduce_densities():
    s = build_state(Gaussian(-0.5, 0.8, 0.7, 0.3), G)
    w = wigner_function(s)
    ex, ep = marginal_errors(w, s)
    assert ex < 1e-10
    assert ep < 1e-10
    mx, _ = marginals(w)
    assert mx.sum() * G.dx == pytest.approx(1.0, abs=1e-10)


def test_purity():
    s = build_state(Gaussian(0, 1, 0.5), G)
    assert wigner_purity(wigner_function(s)) == pytest.approx(1.0, abs=1e-10)
    t = build_state(Gaussian(1.5, 1, -0.5), G)
    r = GridDensity.mixture([0.3, 0.7], [s, t])
    assert wigner_purity(wigner_function(r)) == pytest.approx(r.purity(), abs=1e-10)


def test_density_route_matches_pure_route():
    g = Grid1D.centered(10, 128)
    s = build_state(Gaussian(0.2, 0.9, 0.6, -0.2), g)
    a = wigner_function(s)
    b = wigner_function(GridDensity.from_state(s))
    assert_allclose(b.values, a.values, atol=1e-12)


def test_mixture_marginals():
    g = Grid1D.centered(10, 128)
    r = GridDensity.mixture([0.5, 0.5], [build_state(Gaussian(-1, 0.8, 1), g), build_state(Gaussian(1, 0.8, -1), g)])
    ex, ep = marginal_errors(wigner_function(r), r)
    assert ex < 1e-10 and ep < 1e-10


def test_leakage_of_smooth_state_is_negligible():
    assert momentum_leakage(build_state(Gaussian(0, 1, 1.0), G)) < 1e-15


def test_quasiclassical_field_matches_classical_momentum():
    g = Grid1D.centered(20, 1024)
    rng = make_rng(3)
    for _ in range(5):
        s = build_state(smooth_state(rng), g)
        a = classical_momentum_field(s)
        b = wigner_classical_momentum(wigner_function(s))
        core = np.abs(s.amplitudes) ** 2 > 1e-6 * (np.abs(s.amplitudes) ** 2).max()
        assert_allclose(b.values[core], a.values[core], atol=1e-8)


def test_covariance_of_gaussian_wigner():
    sigma = 0.8
    rep = wigner_covariance(wigner_function(build_state(Gaussian(0, sigma), G)))
    assert not rep.sign_change
    assert rep.stable
    assert_allclose(rep.matrix, np.diag([sigma**2, 1 / (4 * sigma**2)]), rtol=1e-3, atol=1e-6)


def test_covariance_flags_negative_regions():
    rep = wigner_covariance(wigner_function(build_state(HarmonicEigenstate(1), G)))
    assert rep.sign_change
    assert rep.min_value < 0
