import numpy as np
import pytest
from numpy.testing import assert_allclose

from eur.decomp import (
    ClassicalField,
    classical_momentum_field,
    classical_momentum_field_mixed,
    classical_position_field,
    estimator_error,
    momentum_covariances,
    momentum_decomposition_stats,
    number_classical_field,
    number_decomposition_stats,
    p_rho_diagonal,
    position_decomposition_stats,
    spectral_tail_fraction,
    vector_classical_momentum,
)
from eur.grid import (
    Box,
    Gaussian,
    Grid1D,
    Grid2D,
    GridDensity,
    HarmonicEigenstate,
    NumberMixture,
    NumberState,
    Product,
    Superposition,
    build_state,
)

G = Grid1D.centered(15, 1024)


def test_boosted_gaussian_field_is_constant():
    f = classical_momentum_field(build_state(Gaussian(0.5, 1.0, 1.3, 0), G))
    assert_allclose(f.on_support(), 1.3, atol=1e-8)


def test_chirped_gaussian_field_is_linear():
    s = build_state(Gaussian(0.0, 1.0, 0.0, 0.35), G)
    f = classical_momentum_field(s)
    core = np.abs(s.amplitudes) ** 2 > 1e-8
    assert_allclose(f.values[core], 0.7 * G.points[core], atol=1e-9)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_real_eigenstate_field_vanishes_exactly(n):
    f = classical_momentum_field(build_state(HarmonicEigenstate(n), G))
    assert np.all(f.on_support() == 0.0)


def test_field_is_nan_off_support():
    s = build_state(Gaussian(0, 0.5, 1.0), G)
    f = classical_momentum_field(s)
    assert np.all(np.isnan(f.values[~f.support]))
    assert (~f.support).any()


def test_mixed_field_matches_pure_route():
    s = build_state(Gaussian(0.3, 1.1, 0.8, -0.2), G)
    a = classical_momentum_field(s)
    b = classical_momentum_field_mixed(GridDensity.from_state(s))
    core = np.abs(s.amplitudes) ** 2 > 1e-10
    assert_allclose(b.values[core], a.values[core], atol=1e-8)


def test_mixture_of_opposite_boosts():
    g = Grid1D.centered(12, 256)
    left, right = Gaussian(-1.0, 1.0, 2.0), Gaussian(1.0, 1.0, -2.0)
    r = GridDensity.mixture([0.5, 0.5], [build_state(left, g), build_state(right, g)])
    f = classical_momentum_field_mixed(r)
    x = g.points
    rl, rr = np.abs(left.amplitude(x)) ** 2, np.abs(right.amplitude(x)) ** 2
    expected = 2.0 * (rl - rr) / (rl + rr)
    core = rl + rr > 1e-8
    assert_allclose(f.values[core], expected[core], atol=1e-8)
    # equal densities at x = 0
    assert abs(np.interp(0.0, x, np.nan_to_num(f.values))) < 1e-6


def test_real_mixture_field_vanishes():
    g = Grid1D.centered(12, 256)
    r = GridDensity.mixture([0.3, 0.7], [build_state(HarmonicEigenstate(k), g) for k in (0, 2)])
    assert_allclose(classical_momentum_field_mixed(r).on_support(), 0.0, atol=1e-12)


def test_p_rho_diagonal_real_part_is_current():
    s = build_state(Gaussian(0.0, 1.0, 0.9, 0.1), G)
    d = p_rho_diagonal(GridDensity.from_state(s))
    f = classical_momentum_field(s)
    rho = np.abs(s.amplitudes) ** 2
    sup = f.support
    assert_allclose(d.real[sup], f.values[sup] * rho[sup], atol=1e-10)


@pytest.mark.parametrize("sigma", [0.6, 1.0, 1.7])
def test_stats_unboosted_gaussian(sigma):
    st = momentum_decomposition_stats(build_state(Gaussian(0, sigma), G))
    assert st.var_cl == pytest.approx(0.0, abs=1e-14)
    assert st.var_nc == pytest.approx(1 / (4 * sigma**2), rel=1e-10)
    assert not st.divergent


def test_stats_boosted_gaussian():
    st = momentum_decomposition_stats(build_state(Gaussian(0, 0.8, 1.5), G))
    assert st.mean_obs == pytest.approx(1.5, abs=1e-10)
    assert st.mean_cl == pytest.approx(1.5, abs=1e-10)
    assert st.var_nc == pytest.approx(1 / (4 * 0.64), rel=1e-10)


def test_stats_harmonic_n1():
    st = momentum_decomposition_stats(build_state(HarmonicEigenstate(1), G))
    assert st.var_obs == pytest.approx(1.5, rel=1e-10)
    assert st.var_nc == pytest.approx(1.5, rel=1e-10)
    assert st.var_cl == 0.0


def test_box_flags_momentum_tail():
    s = build_state(Box(-1, 1), Grid1D.centered(4, 256))
    assert momentum_decomposition_stats(s).divergent


def test_tail_fraction():
    q = np.linspace(-10, 10, 101)
    narrow = np.exp(-q**2)
    assert spectral_tail_fraction(q, narrow) < 1e-20
    assert spectral_tail_fraction(q, np.ones_like(q)) > 0.1


def test_estimator_error_cases():
    s = build_state(Gaussian(0.2, 0.9, 0.7, 0.25), G)
    st = momentum_decomposition_stats(s)
    f = classical_momentum_field(s)
    assert estimator_error(s, f) == pytest.approx(st.min_error, rel=1e-10)
    assert st.min_error == pytest.approx(st.var_nc, rel=1e-8)
    shifted = ClassicalField(f.grid, f.values + 0.4, f.support)
    assert estimator_error(s, shifted) == pytest.approx(st.min_error + 0.16, rel=1e-8)
    second = st.var_obs + st.mean_obs**2
    assert estimator_error(s, np.zeros(G.n)) == pytest.approx(second, rel=1e-10)


def test_position_field_of_displaced_gaussian():
    s = build_state(Gaussian(1.7, 0.8), G)
    f = classical_position_field(s)
    assert_allclose(f.on_support(), 1.7, atol=1e-8)


def test_position_field_of_real_even_state():
    f = classical_position_field(build_state(HarmonicEigenstate(2), G))
    core = np.abs(f.grid.points) < 4
    assert_allclose(f.values[core], 0.0, atol=1e-10)
    assert_allclose(f.on_support(), 0.0, atol=1e-7)


def test_position_field_of_chirped_gaussian_is_linear():
    # a chirp gives a quadratic phase in momentum space, hence a linear X_cl(p)
    s = build_state(Gaussian(0.0, 1.0, 0.0, 0.3), G)
    f = classical_position_field(s)
    m = f.support & (np.abs(f.grid.points) < 3)
    p, x = f.grid.points[m], f.values[m]
    slope, icpt = np.polyfit(p, x, 1)
    assert_allclose(x, slope * p + icpt, atol=1e-8)
    # Var X_cl = slope^2 Var P, with Var P = 1/4 + 4 alpha^2 at sigma = 1
    st = position_decomposition_stats(s)
    assert st.var_cl == pytest.approx(slope**2 * (0.25 + 4 * 0.09), rel=1e-8)


def test_position_stats_additivity():
    st = position_decomposition_stats(build_state(Gaussian(0.4, 1.2, -0.5, 0.2), G))
    assert st.var_obs == pytest.approx(st.var_cl + st.var_nc, rel=1e-12)
    assert st.mean_obs == pytest.approx(st.mean_cl, abs=1e-8)


def test_product_state_vector_field():
    # wide box: the sigma = 1.1 factor is clipped at the edge of [-10, 10]
    g = Grid1D.centered(14, 128)
    s = build_state(Product(Gaussian(0, 1, 0.8), Gaussian(0.5, 1.1, -1.2)), Grid2D(g, g))
    f1, f2 = vector_classical_momentum(s)
    core = np.abs(s.amplitudes) ** 2 > 1e-8
    assert_allclose(f1.values[core], 0.8, atol=1e-8)
    assert_allclose(f2.values[core], -1.2, atol=1e-8)


def test_entangled_field_depends_on_other_particle():
    g = Grid1D.centered(10, 128)
    sup = Superposition(((1.0, Product(Gaussian(-1.5, 1, 1.0), Gaussian(-1.5, 1))),
                         (1.0, Product(Gaussian(1.5, 1, -1.0), Gaussian(1.5, 1)))))
    s = build_state(sup, Grid2D(g, g))
    f1, _ = vector_classical_momentum(s)
    i = g.index_of(g.points[64])
    row_a = f1.values[i, g.index_of(g.points[40])]
    row_b = f1.values[i, g.index_of(g.points[88])]
    assert abs(row_a - row_b) > 0.5


def test_momentum_covariance_additivity_product():
    g = Grid1D.centered(10, 128)
    s = build_state(Product(Gaussian(0, 1, 0.5, 0.2), Gaussian(0.3, 0.8, -0.4, -0.1)), Grid2D(g, g))
    c = momentum_covariances(s)
    assert_allclose(c["cov_cl"] + c["cov_nc_direct"], c["cov_p"], atol=1e-10)
    assert_allclose(c["cov_nc"], np.diag([0.25, 0.25 / 0.64]), atol=1e-10)


def test_number_field_of_fock_state():
    ns = NumberState.fock(3)
    f = number_classical_field(ns, 64)
    assert_allclose(f.on_support(), 3.0, atol=1e-12)
    assert number_decomposition_stats(ns, 64).var_nc == pytest.approx(0.0, abs=1e-14)


def test_number_field_zero_plus_one():
    ns = NumberState.from_terms({0: 1, 1: 1})
    f = number_classical_field(ns, 256)
    assert_allclose(f.on_support(), 0.5, atol=1e-10)
    st = number_decomposition_stats(ns, 256)
    assert st.var_nc == pytest.approx(0.25, abs=1e-12)


def test_number_stats_zero_plus_two():
    st = number_decomposition_stats(NumberState.from_terms({0: 1, 2: 1}), 256)
    assert st.var_obs == pytest.approx(1.0, abs=1e-12)
    assert st.var_cl + st.var_nc == pytest.approx(1.0, abs=1e-10)


def test_number_mixture_stats():
    mix = NumberMixture((0.5, 0.5), (NumberState.fock(1), NumberState.fock(3)))
    st = number_decomposition_stats(mix, 64)
    assert st.mean_obs == pytest.approx(2.0)
    assert st.var_obs == pytest.approx(1.0)
    assert st.var_cl + st.var_nc == pytest.approx(st.var_obs, abs=1e-10)
