"""Wigner functions on grids, their marginals, the quasiclassical momentum field and an exploratory covariance.

Convention::

    W(x, p) = (2 pi hbar)^-1 integral dxi exp(-i p xi / hbar) <x + xi/2| rho |x - xi/2>

so a state boosted by p0 has W centred at +p0. On an ``n``-point grid the lag
``xi`` takes the values ``2 k dx`` for ``k = -n/2 .. n/2 - 1`` (lags reaching past
the grid are zero), and one FFT per row yields W on a cell-centered momentum grid
of ``n`` points with spacing ``dp/2``, where ``dp`` is the conjugate spacing of the
position grid. That momentum window is half the conjugate grid's, so states must
be band-limited to it; :func:`momentum_leakage` reports how much is not.

Rows far out in a tail see the lag product cut off by the grid edge at a level
of roughly exp(-(edge distance)^2 / 2 sigma^2) relative to the row, so the box
should extend several widths past the points where the field is compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .decomp import ClassicalField
from .grid import SUPPORT_FLOOR, Grid1D, GridDensity, GridState, dft, spectral_derivative


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """W sampled on ``x_grid`` x ``p_grid`` (values[i, j] = W(x_i, p_j))."""

    x_grid: Grid1D
    p_grid: Grid1D
    values: np.ndarray
    hbar: float

    @property
    def cell(self) -> float:
        return self.x_grid.dx * self.p_grid.dx

    def total(self) -> float:
        return float(self.values.sum() * self.cell)


def wigner_momentum_grid(x_grid: Grid1D, hbar: float) -> Grid1D:
    """Momentum grid of the Wigner function: n cells of width pi hbar / (n dx), centred on zero."""
    n = x_grid.n
    dq = np.pi * hbar / (n * x_grid.dx)
    return Grid1D(-0.5 * (n - 1) * dq, dq, n)


def _from_correlation(c: np.ndarray, x_grid: Grid1D, hbar: float) -> WignerGrid:
    n = x_grid.n
    qg = wigner_momentum_grid(x_grid, hbar)
    lag = Grid1D(-n * x_grid.dx, 2.0 * x_grid.dx, n)
    # dft supplies the (2 pi hbar)^-1/2 and d(xi) factors; the second (2 pi hbar)^-1/2 completes the prefactor
    w = dft(c, lag, qg, hbar, axis=1) / np.sqrt(2.0 * np.pi * hbar)
    return WignerGrid(x_grid, qg, np.ascontiguousarray(w.real), hbar)


def wigner_function(state: GridState | GridDensity) -> WignerGrid:
    """Wigner function of a 1D pure state or density operator."""
    if isinstance(state, GridDensity):
        c = kernels.wigner_correlation_density(np.ascontiguousarray(state.rho))
    else:
        if state.grid.ndim != 1:
            raise ValueError("wigner_function needs a 1D state")
        c = kernels.wigner_correlation_pure(np.ascontiguousarray(state.amplitudes))
    return _from_correlation(c, state.grid, state.hbar)


def marginals(w: WignerGrid) -> tuple[np.ndarray, np.ndarray]:
    """(integral W dp on the x grid, integral W dx on the p grid)."""
    return w.values.sum(axis=1) * w.p_grid.dx, w.values.sum(axis=0) * w.x_grid.dx


def momentum_density_on(state: GridState | GridDensity, p_grid: Grid1D) -> np.ndarray:
    """Momentum density evaluated directly on an arbitrary zero-padded conjugate grid."""
    if isinstance(state, GridDensity):
        m = dft(state.rho, state.grid, p_grid, state.hbar, axis=0)
        # <p|rho|p> = sum_x' M[p, x'] exp(i p x'/hbar) dx' / sqrt(2 pi hbar)
        phase = np.exp(1j * np.outer(p_grid.points, state.grid.points) / state.hbar)
        return np.real(np.sum(m * phase, axis=1)) * state.grid.dx / np.sqrt(2.0 * np.pi * state.hbar)
    phi = dft(state.amplitudes, state.grid, p_grid, state.hbar)
    return np.abs(phi) ** 2


def marginal_errors(w: WignerGrid, state: GridState | GridDensity) -> tuple[float, float]:
    """Largest absolute deviation of the two marginals from the directly computed densities."""
    mx, mp = marginals(w)
    if isinstance(state, GridDensity):
        px = np.diag(state.rho).real
    else:
        px = np.abs(state.amplitudes) ** 2
    pp = momentum_density_on(state, w.p_grid)
    return float(np.abs(mx - px).max()), float(np.abs(mp - pp).max())


def momentum_leakage(state: GridState) -> float:
    """Probability carried by momenta outside the Wigner momentum window."""
    from .grid import momentum_representation

    m = momentum_representation(state)
    limit = 0.5 * np.abs(m.grid.points).max()
    d = np.abs(m.amplitudes) ** 2 * m.grid.dx
    return float(d[np.abs(m.grid.points) > limit].sum())


def wigner_classical_momentum(w: WignerGrid, floor: float = SUPPORT_FLOOR) -> ClassicalField:
    """P_cl(x) = integral p W(x, p) dp / integral W(x, p) dp, masked where the denominator is below floor."""
    den = w.values.sum(axis=1) * w.p_grid.dx
    num = (w.values * w.p_grid.points[None, :]).sum(axis=1) * w.p_grid.dx
    sup = den > floor * den.max()
    vals = np.full(den.shape, np.nan)
    vals[sup] = num[sup] / den[sup]
    return ClassicalField(w.x_grid, vals, sup)


def wigner_purity(w: WignerGrid) -> float:
    """(2 pi hbar) integral W^2 dx dp, equal to tr(rho^2)."""
    return float(2.0 * np.pi * w.hbar * np.sum(w.values**2) * w.cell)


@dataclass(frozen=True, eq=False)
class WignerCovarianceReport:
    """Inverse of integral W^-1 grad W grad W^T over |W| > eps * max W, for a sweep of eps.

    ``matrix`` is the value at the smallest eps; ``stable`` says whether the sweep
    changed any entry by less than ``drift_limit`` relative to the largest entry.
    ``sign_change`` flags negative regions of W, where the integrand is unbounded.
    """

    matrix: np.ndarray
    epsilons: tuple[float, ...]
    sweep: tuple[np.ndarray, ...]
    drift: float
    stable: bool
    sign_change: bool
    min_value: float


def wigner_covariance(w: WignerGrid, epsilons=(1e-4, 1e-5, 1e-6, 1e-7, 1e-8), drift_limit: float = 0.1,
                      negativity: float = 1e-8) -> WignerCovarianceReport:
    """Exploratory phase-space covariance built from the Wigner function; no pass/fail claim."""
    vals = w.values
    gx = spectral_derivative(vals, w.x_grid.dx, axis=0)
    gp = spectral_derivative(vals, w.p_grid.dx, axis=1)
    top = np.abs(vals).max()
    sweep = []
    for eps in epsilons:
        mask = np.abs(vals) > eps * top
        inv = 1.0 / vals[mask]
        a, b = gx[mask], gp[mask]
        info = np.array([[np.sum(a * a * inv), np.sum(a * b * inv)], [np.sum(b * a * inv), np.sum(b * b * inv)]]) * w.cell
        try:
            sweep.append(np.linalg.inv(info))
        except np.linalg.LinAlgError:
            sweep.append(np.full((2, 2), np.nan))
    ref = sweep[0]
    scale = np.nanmax(np.abs(ref)) if np.any(np.isfinite(ref)) else np.nan
    drift = float(max(np.nanmax(np.abs(m - ref)) for m in sweep) / scale) if np.isfinite(scale) else float("inf")
    min_value = float(vals.min())
    return WignerCovarianceReport(
        matrix=sweep[-1],
        epsilons=tuple(epsilons),
        sweep=tuple(sweep),
        drift=drift,
        stable=bool(np.isfinite(drift) and drift < drift_limit),
        sign_change=bool(min_value < -negativity * top),
        min_value=min_value,
    )
