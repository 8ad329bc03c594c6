"""Exact uncertainty relations, their inequality companions and energy bounds as checks.

Each function returns :class:`~eur.checks.RelationCheck` records (a tuple when a
relation comes with companion checks). Divergent Fisher lengths or unresolved
second moments yield ``divergent`` records instead of a ratio; 0 * infinity
limits yield ``indeterminate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import ai_zeros

from .checks import RelationCheck
from .decomp import (
    _dual_state,
    classical_momentum_field,
    classical_momentum_field_mixed,
    momentum_covariances,
    momentum_decomposition_stats,
    number_decomposition_stats,
    p_rho_diagonal,
    position_decomposition_stats,
)
from .fisher import (
    correlation_coefficient,
    fisher_covariance_state,
    fisher_length,
    fisher_length_state,
    phase_fisher_length,
)
from .grid import (
    SUPPORT_FLOOR,
    Grid1D,
    GridDensity,
    GridDistribution,
    GridState,
    NumberMixture,
    NumberState,
    momentum_representation,
    moments,
)

BOUNCING_BOUND_QUOTED = 1.249
BOUNCING_EXACT_QUOTED = 1.856
AIRY_ZERO_QUOTED = 2.33811


def _heisenberg(name, spread_x, spread_p, hbar, divergent, ref="heisenberg"):
    if divergent:
        return RelationCheck.divergent(name, hbar / 2, ref, kind="inequality", note="second moment not converged")
    return RelationCheck.inequality(name, spread_x * spread_p, hbar / 2, 1e-9 * hbar, ref)


def exact_ur_position(s: GridState, tol: float = 1e-6, floor: float = SUPPORT_FLOOR):
    """delta_X * Delta P_nc = hbar/2, plus Delta X * Delta P >= hbar/2.

    Returns ``(exact, heisenberg)``.
    """
    fl = fisher_length_state(s, floor)
    st = momentum_decomposition_stats(s, floor)
    _, var_x = moments(s.density())
    hb = s.hbar
    heis = _heisenberg("heisenberg position-momentum", math.sqrt(var_x), math.sqrt(max(st.var_obs, 0)), hb, st.divergent)
    if fl.divergent or st.divergent:
        note = "Fisher length divergent" if fl.divergent else "momentum second moment not converged"
        lhs = fl.delta * st.spread_nc
        return RelationCheck.divergent("exact position-momentum", hb / 2, "exact-ur:position", lhs=lhs, note=note), heis
    exact = RelationCheck.equality("exact position-momentum", fl.delta * st.spread_nc, hb / 2, tol, "exact-ur:position")
    return exact, heis


def exact_ur_conjugate(s: GridState, tol: float = 1e-6, floor: float = SUPPORT_FLOOR):
    """Delta X_nc * delta_P = hbar/2, plus the Heisenberg check. Returns ``(exact, heisenberg)``."""
    dual = _dual_state(s)
    fl = fisher_length_state(dual, floor)
    st = position_decomposition_stats(s, floor)
    _, var_p = moments(dual.density())
    hb = s.hbar
    heis = _heisenberg("heisenberg momentum-position", math.sqrt(max(st.var_obs, 0)), math.sqrt(var_p), hb, st.divergent)
    if fl.divergent or st.divergent:
        note = "momentum Fisher length divergent" if fl.divergent else "position second moment not converged"
        lhs = fl.delta * st.spread_nc
        return RelationCheck.divergent("exact momentum-position", hb / 2, "exact-ur:conjugate", lhs=lhs, note=note), heis
    exact = RelationCheck.equality("exact momentum-position", fl.delta * st.spread_nc, hb / 2, tol, "exact-ur:conjugate")
    return exact, heis


@dataclass(frozen=True)
class MixedTerms:
    """Both sides of the density-operator identity and the quantities behind them."""

    delta: float
    second_cl: float
    identity_lhs: float
    identity_rhs: float
    second_p: float
    spread_nc: float
    divergent: bool


def mixed_terms(r: GridDensity, floor: float = SUPPORT_FLOOR) -> MixedTerms:
    """hbar^2/(4 delta^2) + <P_cl^2> (left) and integral |<x|P rho|x>|^2 / <x|rho|x> dx (right).

    The left side takes delta from the diagonal distribution and P_cl from the
    real part of <x|P rho|x>; the right side uses the full complex diagonal.
    """
    hb = r.hbar
    fl = fisher_length(r.density(), floor=floor)
    field = classical_momentum_field_mixed(r, floor)
    p = np.diag(r.rho).real
    sup = field.support
    w = p * r.grid.dx
    second_cl = float(np.sum(w[sup] * field.values[sup] ** 2))
    prho = p_rho_diagonal(r)
    rhs = float(np.sum(np.abs(prho[sup]) ** 2 / p[sup]) * r.grid.dx)
    st = momentum_decomposition_stats(r, floor)
    lhs = hb * hb * fl.fisher_info / 4.0 + second_cl
    return MixedTerms(fl.delta, second_cl, lhs, rhs, st.var_obs + st.mean_obs**2, st.spread_nc, fl.divergent or st.divergent)


def mixed_ur_check(r: GridDensity, tol: float = 1e-6, floor: float = SUPPORT_FLOOR):
    """delta_X * Delta P_nc >= hbar/2 for a density operator with its two supporting facts.

    Returns ``(uncertainty, identity, bound)``: the inequality, the identity
    hbar^2/(4 delta^2) + <P_cl^2> = integral |<x|P rho|x>|^2/<x|rho|x>, and
    that integral <= <P^2>.
    """
    t = mixed_terms(r, floor)
    hb = r.hbar
    if t.divergent:
        div = RelationCheck.divergent("mixed position-momentum", hb / 2, "mixed-ur:position", kind="inequality")
        ident = RelationCheck.divergent("mixed identity", t.identity_rhs, "mixed-ur:identity")
        bound = RelationCheck.divergent("mixed bound", t.identity_rhs, "mixed-ur:bound", kind="inequality")
        return div, ident, bound
    ur = RelationCheck.inequality("mixed position-momentum", t.delta * t.spread_nc, hb / 2, 1e-9 * hb, "mixed-ur:position")
    ident = RelationCheck.equality("mixed identity", t.identity_lhs, t.identity_rhs, tol, "mixed-ur:identity")
    bound = RelationCheck.inequality("mixed bound", t.second_p, t.identity_rhs, tol * t.second_p, "mixed-ur:bound")
    return ur, ident, bound


def matrix_terms(s2: GridState, floor: float = SUPPORT_FLOOR) -> dict[str, np.ndarray]:
    """Covariance matrices entering the two-particle relations."""
    fc = fisher_covariance_state(s2, floor)
    covs = momentum_covariances(s2, floor)
    _, cov_x = moments(s2.density())
    covs.update(fcov=fc.matrix, cov_x=cov_x, fisher_divergent=np.array(fc.divergent))
    return covs


def matrix_ur_check(s2: GridState, tol: float = 1e-3, floor: float = SUPPORT_FLOOR,
                     additivity_tol: float = 1e-6) -> tuple[RelationCheck, ...]:
    """FCov(X) Cov(P_nc) = (hbar/2)^2 I with its symmetry, Heisenberg, Cramer-Rao and additivity companions.

    ``additivity_tol`` is relative to the largest entry of Cov(P); truncating the
    grid edge makes the applied-operator route differ from the spectral one.
    """
    t = matrix_terms(s2, floor)
    hb2 = (s2.hbar / 2) ** 2
    names = ("11", "22", "12")
    idx = ((0, 0), (1, 1), (0, 1))
    if bool(t["fisher_divergent"]):
        return tuple(RelationCheck.divergent(f"matrix exact {n}", hb2 * (i == j), "matrix-ur:exact") for n, (i, j) in zip(names, idx))
    m = t["fcov"] @ t["cov_nc"]
    checks = [
        RelationCheck.equality("matrix exact symmetry", m[0, 1], m[1, 0], tol * hb2, "matrix-ur:exact", relative=False)
    ]
    ms = 0.5 * (m + m.T)
    for n, (i, j) in zip(names, idx):
        if i == j:
            checks.append(RelationCheck.equality(f"matrix exact {n}", ms[i, j], hb2, tol, "matrix-ur:exact"))
        else:
            checks.append(RelationCheck.equality(f"matrix exact {n}", ms[i, j], 0.0, tol * hb2, "matrix-ur:exact", relative=False))
    heis = t["cov_x"] - hb2 * np.linalg.inv(t["cov_p"])
    checks.append(RelationCheck.inequality("matrix heisenberg", np.linalg.eigvalsh(heis).min(), 0.0, tol * np.abs(t["cov_x"]).max(), "matrix-ur:heisenberg"))
    cr = t["cov_x"] - t["fcov"]
    checks.append(RelationCheck.inequality("matrix cramer-rao", np.linalg.eigvalsh(cr).min(), 0.0, tol * np.abs(t["cov_x"]).max(), "cramer-rao:matrix"))
    scale = np.abs(t["cov_p"]).max()
    summed = t["cov_cl"] + t["cov_nc_direct"]
    for n, (i, j) in zip(names, idx):
        checks.append(RelationCheck.equality(f"momentum covariance additivity {n}", summed[i, j], t["cov_p"][i, j], additivity_tol * scale, "matrix-ur:additivity", relative=False))
    return tuple(checks)


def covariance_product_check(s2: GridState, tol: float = 1e-3) -> tuple[RelationCheck, ...]:
    """Cov(X) Cov(P) = (hbar/2)^2 I entrywise, in units of (hbar/2)^2 (holds for Gaussian EPR-type states)."""
    _, cov_x = moments(s2.density())
    m = momentum_representation(s2)
    _, cov_p = moments(m.density())
    hb2 = (s2.hbar / 2) ** 2
    prod = cov_x @ cov_p / hb2
    return tuple(
        RelationCheck.equality(f"covariance product {i + 1}{j + 1}", prod[i, j], float(i == j), tol, "matrix-ur:gaussian", relative=False)
        for i in range(2)
        for j in range(2)
    )


def correlation_relation_check(s2: GridState, tol: float = 1e-3, gaussian_variant: bool = False, floor: float = SUPPORT_FLOOR):
    """r_P(P_nc,1, P_nc,2) + r_F(X_1, X_2) = 0; optionally also r_P(X) + r_P(P) = 0 for Gaussian states."""
    t = matrix_terms(s2, floor)
    r_nc = correlation_coefficient(t["cov_nc"])
    r_f = correlation_coefficient(t["fcov"])
    checks = [RelationCheck.equality("correlation sum", r_nc + r_f, 0.0, tol, "correlation-relation", relative=False,
                                     note=f"r_P(P_nc)={r_nc:.12g} r_F(X)={r_f:.12g}")]
    if gaussian_variant:
        r_x = correlation_coefficient(t["cov_x"])
        r_p = correlation_coefficient(t["cov_p"])
        checks.append(RelationCheck.equality("pearson correlation sum", r_x + r_p, 0.0, tol, "correlation-relation:gaussian",
                                             relative=False, note=f"r_P(X)={r_x:.12g} r_P(P)={r_p:.12g}"))
    return tuple(checks)


def exact_ur_phase_number(ns: NumberState | NumberMixture, mode: str | None = None, n_phi: int = 256,
                          tol: float = 1e-8, floor: float = SUPPORT_FLOOR) -> RelationCheck:
    """delta_Phi * Delta N_nc = 1/2 (photon) or delta_Phi * Delta J_nc = hbar/2 (rotor).

    Mixtures are checked as inequalities. A uniform phase density with no
    nonclassical number spread (a single number state) is indeterminate.
    """
    mode = mode or ns.mode
    scale = ns.hbar if mode == "rotor" else 1.0
    name = "exact angle-angular momentum" if mode == "rotor" else "exact phase-number"
    ref = "exact-ur:angle" if mode == "rotor" else "exact-ur:phase"
    fl = phase_fisher_length(ns, n_phi, floor)
    st = number_decomposition_stats(ns, n_phi, floor)
    spread = scale * st.spread_nc
    rhs = scale / 2
    if fl.fisher_info == 0.0 and st.var_nc < 1e-12:
        return RelationCheck.indeterminate(name, rhs, ref, note="uniform phase density and no nonclassical spread (0 * inf)")
    if fl.divergent:
        return RelationCheck.divergent(name, rhs, ref, lhs=fl.delta * spread)
    if isinstance(ns, NumberMixture):
        return RelationCheck.inequality(name, fl.delta * spread, rhs, 1e-12, ref)
    return RelationCheck.equality(name, fl.delta * spread, rhs, tol, ref)


# ------------------------------------------------------------------ energy


@dataclass(frozen=True)
class HarmonicPotential:
    omega: float = 1.0
    center: float = 0.0

    def values(self, x, mass):
        return 0.5 * mass * self.omega**2 * (x - self.center) ** 2


@dataclass(frozen=True)
class LinearPotential:
    """V = m g x (uniform field)."""

    g: float = 1.0

    def values(self, x, mass):
        return mass * self.g * x


@dataclass(frozen=True)
class CustomPotential:
    func: Callable[[np.ndarray], np.ndarray]

    def values(self, x, mass):
        return np.asarray(self.func(x), dtype=float)


@dataclass(frozen=True)
class EnergyReport:
    """E = hbar^2/(8 m delta^2) + <P_cl^2>/(2m) + <V>, with E evaluated independently as <P^2>/2m + <V>."""

    total: float
    nonclassical_kinetic: float
    classical_kinetic: float
    potential: float
    divergent: bool = False

    @property
    def parts_sum(self) -> float:
        return self.nonclassical_kinetic + self.classical_kinetic + self.potential


def energy_decomposition(s: GridState, potential, mass: float = 1.0, floor: float = SUPPORT_FLOOR) -> EnergyReport:
    if s.grid.ndim != 1:
        raise ValueError("energy_decomposition needs a 1D state")
    hb = s.hbar
    fl = fisher_length_state(s, floor)
    st = momentum_decomposition_stats(s, floor)
    field = classical_momentum_field(s, floor)
    w = np.abs(s.amplitudes) ** 2 * s.grid.dx
    sup = field.support
    second_cl = float(np.sum(w[sup] * field.values[sup] ** 2))
    pot = float(np.sum(w * potential.values(s.grid.points, mass)))
    second_p = st.var_obs + st.mean_obs**2
    nc = hb * hb * fl.fisher_info / (8.0 * mass)
    return EnergyReport(second_p / (2 * mass) + pot, nc, second_cl / (2 * mass), pot, fl.divergent or st.divergent)


def energy_checks(s: GridState, potential, mass: float = 1.0, tol: float = 1e-6) -> tuple[RelationCheck, ...]:
    """Energy decomposition equality and the lower bound E >= hbar^2/(8 m delta^2) + <V>."""
    e = energy_decomposition(s, potential, mass)
    if e.divergent:
        return (
            RelationCheck.divergent("energy decomposition", e.parts_sum, "energy:decomposition", note="nonclassical kinetic energy divergent"),
            RelationCheck.divergent("energy lower bound", e.nonclassical_kinetic + e.potential, "energy:bound", kind="inequality"),
        )
    checks = [
        RelationCheck.equality("energy decomposition", e.total, e.parts_sum, tol, "energy:decomposition"),
        RelationCheck.inequality("energy lower bound", e.total, e.nonclassical_kinetic + e.potential, tol * abs(e.total), "energy:bound"),
    ]
    if s.is_real():
        checks.append(RelationCheck.equality("energy bound saturation", e.total, e.nonclassical_kinetic + e.potential, tol, "energy:bound"))
    return tuple(checks)


# ------------------------------------------------------------------ entropic estimates


@dataclass(frozen=True)
class EntropicEstimates:
    """Minimized entropic lower bounds (energies in units of hbar*omega and (m g^2 hbar^2)^(1/3))."""

    harmonic_minimum: float
    harmonic_width: float
    bouncing_coefficient: float
    bouncing_length: float
    exact_coefficient: float
    airy_zero: float


def _entropy_and_moment(p: np.ndarray, x: np.ndarray, dx: float, power: int) -> tuple[float, float]:
    d = GridDistribution.from_samples(Grid1D(x[0], dx, x.size), p)
    pos = d.p > 0
    s = float(-np.sum(d.p[pos] * np.log(d.p[pos])) * dx)
    return s, float(np.sum(d.p * x**power) * dx)


def _entropic_energy(s_ent: float, potential_energy: float, hbar: float, mass: float) -> float:
    # hbar^2/(8 m delta^2) with delta replaced by its isoperimetric bound (2 pi e)^(-1/2) e^S
    return math.pi * math.e * hbar**2 * math.exp(-2.0 * s_ent) / (4.0 * mass) + potential_energy


def entropic_estimates(hbar: float = 1.0, mass: float = 1.0, omega: float = 1.0, g: float = 1.0, n: int = 20001) -> EntropicEstimates:
    """Minimize the entropic energy bound over the maximum-entropy densities at fixed <x^2> and fixed <x>.

    Entropies and moments are grid quadratures; the minimizations are numerical.
    """
    u = np.linspace(-14.0, 14.0, n)
    du = u[1] - u[0]

    def harmonic(log_s):
        s = math.exp(log_s)
        x = s * u
        ent, x2 = _entropy_and_moment(np.exp(-0.5 * u * u), x, s * du, 2)
        return _entropic_energy(ent, 0.5 * mass * omega**2 * x2, hbar, mass)

    ell = math.sqrt(hbar / (mass * omega))
    h = minimize_scalar(harmonic, bounds=(math.log(ell) - 5, math.log(ell) + 5), method="bounded", options={"xatol": 1e-10})

    v = (np.arange(n) + 0.5) * (60.0 / n)

    def bouncing(log_lam):
        lam = math.exp(log_lam)
        ent, xm = _entropy_and_moment(np.exp(-v), lam * v, lam * (60.0 / n), 1)
        return _entropic_energy(ent, mass * g * xm, hbar, mass)

    scale = (mass * g * g * hbar * hbar) ** (1.0 / 3.0)
    lam0 = (hbar * hbar / (mass * mass * g)) ** (1.0 / 3.0)
    b = minimize_scalar(bouncing, bounds=(math.log(lam0) - 5, math.log(lam0) + 5), method="bounded", options={"xatol": 1e-10})
    a0 = float(-ai_zeros(1)[0][0])
    return EntropicEstimates(
        harmonic_minimum=float(h.fun) / (hbar * omega),
        harmonic_width=math.exp(h.x),
        bouncing_coefficient=float(b.fun) / scale,
        bouncing_length=math.exp(b.x),
        exact_coefficient=0.5 ** (1.0 / 3.0) * a0,
        airy_zero=a0,
    )


def entropic_bound_estimates(hbar: float = 1.0, mass: float = 1.0, omega: float = 1.0, g: float = 1.0,
                             tol_harmonic: float = 1e-6, tol_coefficient: float = 5e-4) -> tuple[RelationCheck, ...]:
    """Harmonic estimate E0 >= hbar omega/2 and the bouncing-ball bound against the Airy ground state.

    Returns ``(harmonic, bouncing bound, exact coefficient, airy zero, bound below exact)``.
    """
    est = entropic_estimates(hbar, mass, omega, g)
    return (
        RelationCheck.equality("harmonic entropic estimate", est.harmonic_minimum, 0.5, tol_harmonic, "entropic-bound:harmonic"),
        RelationCheck.equality("bouncing entropic coefficient", est.bouncing_coefficient, BOUNCING_BOUND_QUOTED, tol_coefficient,
                               "entropic-bound:bouncing", relative=False,
                               note=f"closed form {1.5 * (math.pi / (2 * math.e)) ** (1 / 3):.12g}"),
        RelationCheck.equality("bouncing exact coefficient", est.exact_coefficient, BOUNCING_EXACT_QUOTED, tol_coefficient,
                               "entropic-bound:bouncing-exact", relative=False),
        RelationCheck.equality("first airy zero", est.airy_zero, AIRY_ZERO_QUOTED, 1e-5, "entropic-bound:bouncing-exact", relative=False),
        RelationCheck.inequality("bouncing bound below exact", est.exact_coefficient, est.bouncing_coefficient, 0.0, "entropic-bound:bouncing"),
    )
