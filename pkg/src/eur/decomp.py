"""Classical/nonclassical decompositions of momentum, position, number and vector momentum.

The classical component of an observable is its best estimate from a measurement
of the conjugate observable. For momentum on a pure state this is
``P_cl(x) = hbar * Im(psi'/psi)``; for a density operator it is
``Re<x|P rho|x> / <x|rho|x>``. Derivatives are spectral (see :mod:`eur.grid`),
and all quadratures are restricted to the support ``p > floor * max(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    SUPPORT_FLOOR,
    Grid,
    GridDensity,
    GridState,
    NumberMixture,
    NumberState,
    _check_phase_resolution,
    momentum_representation,
    phase_amplitude,
    phase_grid,
    spectral_derivative,
)

# momentum weight allowed in the outer tenth of the spectrum before <P^2> counts as unresolved
TAIL_BAND = 0.1
TAIL_LIMIT = 1e-4


@dataclass(frozen=True, eq=False)
class ClassicalField:
    """Classical component sampled on a position, momentum or phase grid.

    ``values`` is NaN off ``support``.
    """

    grid: Grid
    values: np.ndarray
    support: np.ndarray

    def on_support(self) -> np.ndarray:
        return self.values[self.support]


@dataclass(frozen=True)
class DecompStats:
    """Moments of an observable, its classical component and the nonclassical remainder."""

    mean_obs: float
    mean_cl: float
    var_obs: float
    var_cl: float
    var_nc: float
    min_error: float
    divergent: bool = False

    @property
    def spread_nc(self) -> float:
        return float(np.sqrt(max(self.var_nc, 0.0)))


def spectral_tail_fraction(q: np.ndarray, density: np.ndarray) -> float:
    """Share of the second moment carried by the outer ``TAIL_BAND`` of a symmetric grid.

    A resolved state has essentially none; a state whose second moment diverges
    spreads it evenly, so a sizable share signals non-convergence.
    """
    w = q * q * density
    total = w.sum()
    if total <= 0:
        return 0.0
    edge = np.abs(q) > (1.0 - TAIL_BAND) * np.abs(q).max()
    return float(w[edge].sum() / total)


def _support(p: np.ndarray, floor: float) -> np.ndarray:
    return p > floor * p.max()


def _masked(values: np.ndarray, support: np.ndarray) -> np.ndarray:
    out = np.full(values.shape, np.nan)
    out[support] = values[support]
    return out


def _current_and_density(psi: np.ndarray, dx: float, axis: int):
    """Return (Im(conj(psi) psi'), |psi|^2) with derivatives of real and imaginary parts taken separately."""
    re, im = psi.real, psi.imag
    p = re * re + im * im
    if not np.any(im):
        return np.zeros_like(re), p
    j = re * spectral_derivative(im, dx, axis) - im * spectral_derivative(re, dx, axis)
    return j, p


def _field_from(psi: np.ndarray, grid, hbar: float, floor: float, axis: int = 0) -> ClassicalField:
    dx = grid.axes[axis].dx
    j, p = _current_and_density(psi, dx, axis)
    sup = _support(p, floor)
    vals = np.zeros_like(p)
    vals[sup] = hbar * j[sup] / p[sup]
    return ClassicalField(grid, _masked(vals, sup), sup)


def classical_momentum_field(s: GridState, floor: float = SUPPORT_FLOOR) -> ClassicalField:
    """P_cl(x) = hbar * d/dx arg psi(x), evaluated as hbar * Im(psi'/psi).

    Real wavefunctions give exactly zero.
    """
    if s.grid.ndim != 1:
        raise ValueError("use vector_classical_momentum for 2D states")
    return _field_from(s.amplitudes, s.grid, s.hbar, floor)


def _density_column_derivative(r: GridDensity) -> np.ndarray:
    """d/dx rho(x, x') along the first index, real and imaginary parts separately."""
    rho = r.rho
    d = spectral_derivative(rho.real, r.grid.dx, axis=0)
    if np.any(rho.imag):
        d = d + 1j * spectral_derivative(rho.imag, r.grid.dx, axis=0)
    return d


def p_rho_diagonal(r: GridDensity) -> np.ndarray:
    """<x|P rho|x> = -i hbar d/dx rho(x, x') at x' = x."""
    return -1j * r.hbar * np.diag(_density_column_derivative(r))


def classical_momentum_field_mixed(r: GridDensity, floor: float = SUPPORT_FLOOR) -> ClassicalField:
    """P_cl(x) = Re<x|P rho|x> / <x|rho|x> for a density operator."""
    prho = p_rho_diagonal(r)
    p = np.diag(r.rho).real
    sup = _support(p, floor)
    vals = np.zeros_like(p)
    vals[sup] = prho.real[sup] / p[sup]
    return ClassicalField(r.grid, _masked(vals, sup), sup)


def _weighted_moments(field: ClassicalField, weights: np.ndarray) -> tuple[float, float]:
    sup = field.support
    f = field.values[sup]
    w = weights[sup]
    return float(np.sum(w * f)), float(np.sum(w * f * f))


def _assemble(mean_obs, second_obs, mean_cl, second_cl, divergent=False) -> DecompStats:
    var_obs = second_obs - mean_obs**2
    var_cl = second_cl - mean_cl**2
    return DecompStats(
        mean_obs=float(mean_obs),
        mean_cl=float(mean_cl),
        var_obs=float(var_obs),
        var_cl=float(var_cl),
        var_nc=float(var_obs - var_cl),
        min_error=float(second_obs - second_cl),
        divergent=bool(divergent),
    )


def _momentum_moments(state) -> tuple[float, float, float]:
    """(<P>, <P^2>, tail fraction) from the momentum density."""
    if isinstance(state, GridDensity):
        pg, d = state.momentum_density()
        q = pg.points
        w = d * pg.dx
    else:
        m = momentum_representation(state)
        q = m.grid.points
        w = np.abs(m.amplitudes) ** 2 * m.grid.dx
    tail = spectral_tail_fraction(q, w)
    return float(np.sum(q * w)), float(np.sum(q * q * w)), tail


def momentum_decomposition_stats(state: GridState | GridDensity, floor: float = SUPPORT_FLOOR) -> DecompStats:
    """Moments of P, P_cl and P_nc = P - P_cl.

    <P> and <P^2> come from the momentum density; P_cl moments are quadratures
    over the position density. ``divergent`` is set when the outer tenth of the
    momentum grid carries more than ``TAIL_LIMIT`` of <P^2>.
    """
    if isinstance(state, GridDensity):
        field = classical_momentum_field_mixed(state, floor)
        weights = np.diag(state.rho).real * state.grid.dx
    else:
        field = classical_momentum_field(state, floor)
        weights = np.abs(state.amplitudes) ** 2 * state.grid.dx
    mean, second, tail = _momentum_moments(state)
    mean_cl, second_cl = _weighted_moments(field, weights)
    return _assemble(mean, second, mean_cl, second_cl, tail > TAIL_LIMIT)


def estimator_error(state: GridState | GridDensity, estimate, floor: float = SUPPORT_FLOOR) -> float:
    """Mean squared error <(P - f(X))^2> of a momentum estimate f built from a position measurement.

    Evaluated as <P^2> + <f^2> - 2<f P_cl>, the form that shows the error is
    minimal at f = P_cl. ``estimate`` is a :class:`ClassicalField` or an array of
    values on the position grid.
    """
    if isinstance(state, GridDensity):
        field = classical_momentum_field_mixed(state, floor)
        weights = np.diag(state.rho).real * state.grid.dx
    else:
        field = classical_momentum_field(state, floor)
        weights = np.abs(state.amplitudes) ** 2 * state.grid.dx
    f = estimate.values if isinstance(estimate, ClassicalField) else np.asarray(estimate, dtype=float)
    sup = field.support
    _, second, _ = _momentum_moments(state)
    fs, pc, w = f[sup], field.values[sup], weights[sup]
    if np.any(~np.isfinite(fs)):
        raise ValueError("estimate is undefined on part of the support")
    return float(second + np.sum(w * fs * fs) - 2.0 * np.sum(w * fs * pc))


def _dual_state(s: GridState) -> GridState:
    # conj(psi~(p)) has phase -arg psi~, so its "momentum" field is X_cl(p)
    m = momentum_representation(s)
    return GridState(m.grid, np.conj(m.amplitudes), s.hbar)


def classical_position_field(s: GridState, floor: float = SUPPORT_FLOOR) -> ClassicalField:
    """X_cl(p) = -hbar * d/dp arg psi~(p) on the momentum grid."""
    if s.grid.ndim != 1:
        raise ValueError("classical_position_field needs a 1D state")
    return classical_momentum_field(_dual_state(s), floor)


def position_decomposition_stats(s: GridState, floor: float = SUPPORT_FLOOR) -> DecompStats:
    """Moments of X, X_cl and X_nc; X_cl moments are quadratures over the momentum density."""
    dual = _dual_state(s)
    field = classical_momentum_field(dual, floor)
    mean_cl, second_cl = _weighted_moments(field, np.abs(dual.amplitudes) ** 2 * dual.grid.dx)
    x = s.grid.points
    w = np.abs(s.amplitudes) ** 2 * s.grid.dx
    mean = float(np.sum(x * w))
    tail = spectral_tail_fraction(x - 0.5 * (x[0] + x[-1]), w)
    return _assemble(mean, float(np.sum(x * x * w)), mean_cl, second_cl, tail > TAIL_LIMIT)


def vector_classical_momentum(s2: GridState, floor: float = SUPPORT_FLOOR) -> tuple[ClassicalField, ClassicalField]:
    """Components of P_cl = hbar * grad arg psi for a two-particle state."""
    if s2.grid.ndim != 2:
        raise ValueError("vector_classical_momentum needs a 2D state")
    return tuple(_field_from(s2.amplitudes, s2.grid, s2.hbar, floor, axis) for axis in (0, 1))


def classical_vorticity(s2: GridState, floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Discrete curl d1 P_cl,2 - d2 P_cl,1 on the support (NaN elsewhere).

    Uses d_j P_cl,k = hbar Im(psi_jk/psi - psi_j psi_k/psi^2) with the mixed
    derivative taken in both orders, so the result measures how far the two
    discrete gradients fail to commute.
    """
    psi = s2.amplitudes
    d1, d2 = s2.grid.ax1.dx, s2.grid.ax2.dx
    p1 = spectral_derivative(psi, d1, axis=0)
    p2 = spectral_derivative(psi, d2, axis=1)
    p12 = spectral_derivative(p2, d1, axis=0)
    p21 = spectral_derivative(p1, d2, axis=1)
    dens = np.abs(psi) ** 2
    sup = _support(dens, floor)
    out = np.full(psi.shape, np.nan)
    ps = psi[sup]
    g12 = np.imag(p12[sup] / ps - p1[sup] * p2[sup] / ps**2)
    g21 = np.imag(p21[sup] / ps - p2[sup] * p1[sup] / ps**2)
    out[sup] = s2.hbar * (g12 - g21)
    return out


# ------------------------------------------------------------------ number and phase


def _number_field_parts(ns: NumberState | NumberMixture, phi: np.ndarray):
    """Return (Re<phi|N rho|phi>, <phi|rho|phi>) as arrays over phi."""
    comps = zip(ns.weights, ns.states) if isinstance(ns, NumberMixture) else [(1.0, ns)]
    num = np.zeros(phi.shape)
    den = np.zeros(phi.shape)
    for w, s in comps:
        f = phase_amplitude(s, phi)
        fp = phase_amplitude(s, phi, derivative=True)
        # <phi|N|psi> = i f'(phi)
        num += w * np.real(1j * fp * np.conj(f))
        den += w * np.abs(f) ** 2
    return num, den


def number_classical_field(ns: NumberState | NumberMixture, n_phi: int = 256, floor: float = SUPPORT_FLOOR) -> ClassicalField:
    """N_cl(phi) = Re<phi|N rho|phi> / <phi|rho|phi> on a periodic phase grid."""
    _check_phase_resolution(ns.n_min, ns.n_max, n_phi)
    g = phase_grid(n_phi)
    num, den = _number_field_parts(ns, g.points)
    sup = _support(den, floor)
    vals = np.zeros_like(den)
    vals[sup] = num[sup] / den[sup]
    return ClassicalField(g, _masked(vals, sup), sup)


def _number_moments(ns: NumberState | NumberMixture) -> tuple[float, float]:
    comps = zip(ns.weights, ns.states) if isinstance(ns, NumberMixture) else [(1.0, ns)]
    m1 = m2 = 0.0
    for w, s in comps:
        pn = s.number_probabilities()
        m1 += w * float(np.sum(s.numbers * pn))
        m2 += w * float(np.sum(s.numbers**2 * pn))
    return m1, m2


def number_decomposition_stats(ns: NumberState | NumberMixture, n_phi: int = 256, floor: float = SUPPORT_FLOOR) -> DecompStats:
    """Moments of N, N_cl and N_nc in units of N (multiply by hbar for a rotor)."""
    field = number_classical_field(ns, n_phi, floor)
    _, den = _number_field_parts(ns, field.grid.points)
    weights = den * field.grid.dx
    mean_cl, second_cl = _weighted_moments(field, weights)
    mean, second = _number_moments(ns)
    return _assemble(mean, second, mean_cl, second_cl)


def momentum_covariances(s2: GridState, floor: float = SUPPORT_FLOOR) -> dict[str, np.ndarray]:
    """Cov(P), Cov(P_cl), Cov(P) - Cov(P_cl) and the directly evaluated Cov(P_nc) of a 2D state.

    The direct form is Re<(P_j - P_cl,j) psi | (P_k - P_cl,k) psi> with the
    nonclassical operator applied to the wavefunction.
    """
    if s2.grid.ndim != 2:
        raise ValueError("momentum_covariances needs a 2D state")
    hb = s2.hbar
    psi = s2.amplitudes
    m = momentum_representation(s2)
    q1, q2 = m.grid.mesh()
    wq = np.abs(m.amplitudes) ** 2 * m.grid.cell
    qs = (q1, q2)
    mean_p = np.array([np.sum(q * wq) for q in qs])
    cov_p = np.array([[np.sum(a * b * wq) for b in qs] for a in qs]) - np.outer(mean_p, mean_p)

    fields = vector_classical_momentum(s2, floor)
    sup = fields[0].support
    w = np.abs(psi) ** 2 * s2.grid.cell
    fv = [np.where(sup, f.values, 0.0) for f in fields]
    mean_cl = np.array([np.sum(w * f) for f in fv])
    cov_cl = np.array([[np.sum(w * a * b) for b in fv] for a in fv]) - np.outer(mean_cl, mean_cl)

    applied = []
    for axis, f in enumerate(fv):
        dpsi = spectral_derivative(psi, s2.grid.axes[axis].dx, axis=axis)
        applied.append(np.where(sup, -1j * hb * dpsi - f * psi, 0.0))
    second_nc = np.array([[np.real(np.sum(np.conj(a) * b)) * s2.grid.cell for b in applied] for a in applied])
    mean_nc = mean_p - mean_cl
    cov_nc_direct = 0.5 * (second_nc + second_nc.T) - np.outer(mean_nc, mean_nc)
    return {
        "cov_p": cov_p,
        "cov_cl": cov_cl,
        "cov_nc": cov_p - cov_cl,
        "cov_nc_direct": cov_nc_direct,
        "mean_p": mean_p,
        "mean_cl": mean_cl,
    }


__all__ = [
    "ClassicalField",
    "DecompStats",
    "classical_momentum_field",
    "classical_momentum_field_mixed",
    "classical_position_field",
    "classical_vorticity",
    "estimator_error",
    "momentum_covariances",
    "momentum_decomposition_stats",
    "number_classical_field",
    "number_decomposition_stats",
    "p_rho_diagonal",
    "position_decomposition_stats",
    "spectral_tail_fraction",
    "vector_classical_momentum",
]
