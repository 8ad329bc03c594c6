import math

import numpy as np
import pytest

from eur.checks import STATUSES, RelationCheck
from eur.ensembles import make_rng, rank2_mixture, reference_entangled_pair, smooth_state
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
from eur.relations import (
    AIRY_ZERO_QUOTED,
    CustomPotential,
    HarmonicPotential,
    LinearPotential,
    correlation_relation_check,
    covariance_product_check,
    energy_checks,
    energy_decomposition,
    entropic_bound_estimates,
    entropic_estimates,
    exact_ur_conjugate,
    exact_ur_phase_number,
    exact_ur_position,
    matrix_ur_check,
    mixed_terms,
    mixed_ur_check,
)

G = Grid1D.centered(20, 4096)


# ------------------------------------------------------------------ records


def test_equality_record():
    c = RelationCheck.equality("x", 1.0 + 1e-8, 1.0, 1e-6, "tag")
    assert c.passed and not c.failed
    assert c.ratio == pytest.approx(1.0 + 1e-8)
    assert c.absolute_gap == pytest.approx(1e-8)
    assert RelationCheck.equality("x", 1.1, 1.0, 1e-6, "tag").failed


def test_absolute_equality_against_zero():
    assert RelationCheck.equality("z", 1e-9, 0.0, 1e-8, "tag").passed
    assert math.isnan(RelationCheck.equality("z", 1e-9, 0.0, 1e-8, "tag").ratio)


def test_inequality_record():
    assert RelationCheck.inequality("i", 0.5, 0.5, 0.0, "tag").passed
    assert RelationCheck.inequality("i", 0.5 - 1e-10, 0.5, 1e-9, "tag").passed
    assert RelationCheck.inequality("i", 0.4, 0.5, 1e-9, "tag").failed
    assert RelationCheck.inequality("i", math.nan, 0.5, 1e-9, "tag").failed


def test_nonfinite_equality_fails():
    assert RelationCheck.equality("x", math.inf, 1.0, 1e-6, "tag").failed


def test_status_vocabulary():
    assert STATUSES == ("pass", "fail", "divergent", "indeterminate")
    assert RelationCheck.divergent("d", 0.5, "tag").status == "divergent"
    assert RelationCheck.indeterminate("n", 0.5, "tag").status == "indeterminate"
    with pytest.raises(ValueError):
        RelationCheck("x", 1, 1, "equality", 0.1, "ok", "tag")


def test_scaled_tolerance():
    c = RelationCheck.equality("x", 1.001, 1.0, 1e-3 * 0.5, "tag")
    assert c.failed
    assert c.scaled(4).passed
    d = RelationCheck.divergent("d", 1.0, "tag")
    assert d.scaled(10) is d


# ------------------------------------------------------------------ position-momentum


@pytest.mark.parametrize(
    "desc",
    [Gaussian(0, 1), Gaussian(0.5, 0.7, 1.3), Gaussian(-1, 1.2, 0.4, 0.3), HarmonicEigenstate(2)],
)
def test_exact_relation_holds(desc):
    exact, heis = exact_ur_position(build_state(desc, G))
    assert exact.passed, exact
    assert exact.reference == "exact-ur:position"
    assert exact.lhs == pytest.approx(0.5, rel=1e-8)
    assert heis.passed


def test_exact_relation_random_superpositions():
    rng = make_rng(101)
    for _ in range(20):
        exact, _ = exact_ur_position(build_state(smooth_state(rng), G))
        assert exact.passed, exact


def test_exact_relation_scales_with_hbar():
    s = build_state(Gaussian(0.1, 0.9, 0.5, 0.2), G, hbar=0.3)
    exact, heis = exact_ur_position(s)
    assert exact.rhs == pytest.approx(0.15)
    assert exact.passed
    assert heis.passed


def test_chirp_leaves_gaussian_product_unchanged_but_heisenberg_strict():
    exact, heis = exact_ur_position(build_state(Gaussian(0, 1, 0, 0.4), G))
    assert exact.passed
    assert heis.lhs > heis.rhs * 1.2


def test_box_is_divergent():
    exact, heis = exact_ur_position(build_state(Box(-1, 1), Grid1D.centered(4, 256)))
    assert exact.status == "divergent"
    assert heis.status == "divergent"


def test_conjugate_relation():
    exact, heis = exact_ur_conjugate(build_state(Gaussian(0.3, 0.8, 1.0, 0.25), G))
    assert exact.passed, exact
    assert exact.reference == "exact-ur:conjugate"
    assert heis.passed


# ------------------------------------------------------------------ mixed


def test_mixed_relation_for_pure_state_is_tight():
    s = build_state(Gaussian(0.2, 0.9, 0.6, 0.1), Grid1D.centered(10, 256))
    ur, ident, bound = mixed_ur_check(GridDensity.from_state(s))
    assert ur.passed and ident.passed and bound.passed
    assert ur.lhs == pytest.approx(0.5, rel=1e-8)
    assert bound.lhs == pytest.approx(bound.rhs, rel=1e-8)


def test_mixed_relation_random_mixtures():
    g = Grid1D.centered(15, 256)
    rng = make_rng(17)
    for _ in range(4):
        r = rank2_mixture(rng, g)
        ur, ident, bound = mixed_ur_check(r)
        assert ur.passed and ident.passed and bound.passed


def test_mixture_is_strict():
    g = Grid1D.centered(12, 256)
    r = GridDensity.mixture([0.5, 0.5], [build_state(Gaussian(-1, 1, 2.0), g), build_state(Gaussian(1, 1, -2.0), g)])
    t = mixed_terms(r)
    assert t.delta * t.spread_nc > 0.5 + 1e-3
    assert t.second_p > t.identity_rhs


# ------------------------------------------------------------------ two particles


def _g2(half=10, n=128):
    g = Grid1D.centered(half, n)
    return Grid2D(g, g)


def test_matrix_relation_product_state():
    s = build_state(Product(Gaussian(0, 0.8, 0.5, 0.2), Gaussian(0.5, 1.0, -0.3)), _g2(14))
    checks = matrix_ur_check(s, tol=1e-8)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert {c.reference for c in checks} >= {"matrix-ur:exact", "matrix-ur:heisenberg", "cramer-rao:matrix", "matrix-ur:additivity"}


def test_matrix_relation_entangled_non_gaussian():
    s = build_state(reference_entangled_pair(), _g2(10, 256))
    checks = matrix_ur_check(s, tol=1e-8)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_correlation_relation():
    s = build_state(reference_entangled_pair(), _g2(10, 256))
    (c,) = correlation_relation_check(s, tol=1e-8)
    assert c.passed, c


def test_covariance_product_for_product_gaussian():
    s = build_state(Product(Gaussian(0, 0.8, 0.5), Gaussian(0.5, 1.0, -0.3)), _g2(12, 128))
    assert all(c.passed for c in covariance_product_check(s, tol=1e-8))


def test_covariance_product_fails_for_chirp():
    s = build_state(Product(Gaussian(0, 0.8, 0, 0.3), Gaussian(0.5, 1.0)), _g2(12, 128))
    checks = covariance_product_check(s)
    assert checks[0].failed
    assert checks[0].lhs > 1


def test_entangled_field_breaks_covariance_product():
    sup = Superposition(((1.0, Product(Gaussian(-1.5, 0.7), Gaussian(1.5, 0.7))),
                         (1.0, Product(Gaussian(1.5, 0.7), Gaussian(-1.5, 0.7)))))
    checks = covariance_product_check(build_state(sup, _g2(10, 128)))
    assert any(c.failed for c in checks)


# ------------------------------------------------------------------ phase-number


def test_phase_number_two_level():
    c = exact_ur_phase_number(NumberState.from_terms({0: 1, 1: 1}), n_phi=128)
    assert c.passed, c
    assert c.lhs == pytest.approx(0.5, rel=1e-10)


def test_phase_number_number_state_indeterminate():
    assert exact_ur_phase_number(NumberState.fock(3), n_phi=64).status == "indeterminate"


def test_phase_number_random_states():
    rng = make_rng(4)
    for _ in range(10):
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        c = c / np.linalg.norm(c)
        check = exact_ur_phase_number(NumberState(c), n_phi=128)
        assert check.passed, check


def test_phase_number_mixture_is_inequality():
    mix = NumberMixture((0.5, 0.5), (NumberState.from_terms({0: 1, 1: 1}), NumberState.from_terms({1: 1, 2: 1j})))
    c = exact_ur_phase_number(mix, n_phi=128)
    assert c.kind == "inequality"
    assert c.passed


def test_rotor_mode_uses_hbar():
    ns = NumberState(np.array([1, 1j, 0.5]) / math.sqrt(2.25), -1, mode="rotor", hbar=0.5)
    c = exact_ur_phase_number(ns, n_phi=64)
    assert c.rhs == pytest.approx(0.25)
    assert c.passed, c
    assert c.reference == "exact-ur:angle"


# ------------------------------------------------------------------ energy


def test_harmonic_ground_state_saturates_bound():
    s = build_state(HarmonicEigenstate(0), Grid1D.centered(12, 512))
    checks = energy_checks(s, HarmonicPotential())
    assert all(c.passed for c in checks)
    e = energy_decomposition(s, HarmonicPotential())
    assert e.total == pytest.approx(0.5, rel=1e-10)
    assert e.classical_kinetic == 0.0


def test_harmonic_excited_state_energy():
    e = energy_decomposition(build_state(HarmonicEigenstate(3), Grid1D.centered(12, 512)), HarmonicPotential())
    assert e.total == pytest.approx(3.5, rel=1e-10)
    assert e.parts_sum == pytest.approx(3.5, rel=1e-8)


def test_coherent_state_energy_split():
    # displaced, boosted ground state of a unit oscillator
    s = build_state(Gaussian(0.5, math.sqrt(0.5), 1.0), Grid1D.centered(12, 512))
    e = energy_decomposition(s, HarmonicPotential())
    assert e.total == pytest.approx(0.5 + 0.5 + 0.125, rel=1e-10)
    assert e.classical_kinetic == pytest.approx(0.5, rel=1e-10)
    assert e.nonclassical_kinetic == pytest.approx(0.25, rel=1e-10)
    assert all(c.passed for c in energy_checks(s, HarmonicPotential()))


def test_linear_and_custom_potentials():
    s = build_state(Gaussian(2.0, 0.6, 0.3), Grid1D.centered(10, 256))
    lin = energy_decomposition(s, LinearPotential(g=2.0), mass=1.5)
    assert lin.potential == pytest.approx(1.5 * 2.0 * 2.0, rel=1e-10)
    cus = energy_decomposition(s, CustomPotential(lambda x: 3.0 * x), mass=1.5)
    assert cus.potential == pytest.approx(6.0, rel=1e-10)


def test_entropic_estimates():
    est = entropic_estimates()
    assert est.harmonic_minimum == pytest.approx(0.5, rel=1e-6)
    assert est.bouncing_coefficient == pytest.approx(1.5 * (math.pi / (2 * math.e)) ** (1 / 3), rel=1e-6)
    assert est.airy_zero == pytest.approx(AIRY_ZERO_QUOTED, abs=1e-5)
    checks = entropic_bound_estimates()
    assert len(checks) == 5
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
