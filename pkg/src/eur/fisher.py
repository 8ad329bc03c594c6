"""Fisher lengths, Fisher covariance matrices, entropies, collision lengths and the de Bruijn check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import (
    SUPPORT_FLOOR,
    GridDensity,
    GridDistribution,
    GridState,
    NumberMixture,
    NumberState,
    _check_phase_resolution,
    moments,
    periodic_derivative,
    phase_amplitude,
    phase_grid,
    spectral_derivative,
)

SWEEP_HALVINGS = 4
SWEEP_DRIFT = 0.10


class InstabilityError(RuntimeError):
    """Explicit time stepping produced a negative density."""


@dataclass(frozen=True)
class FisherResult:
    """Fisher length ``delta`` and translation Fisher information ``fisher_info = delta**-2``.

    ``sweep`` holds the regularized information at support floors
    ``epsilon_used * 2**k``, k = halvings..0 (coarsest last).
    """

    delta: float
    fisher_info: float
    divergent: bool
    epsilon_used: float
    sweep: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class FisherCovariance:
    """Inverse of the translation Fisher information matrix."""

    matrix: np.ndarray
    information: np.ndarray
    inverse_conditioning: float
    divergent: bool = False


@dataclass(frozen=True)
class CorrelationPair:
    r_pearson: float
    r_fisher: float


def _floored_sweep_info(p: np.ndarray, dx: float, eps: float, periodic: bool) -> float:
    """Information of max(p, eps*max p) with central differences; a grid-level regularization."""
    pe = np.maximum(p, eps * p.max())
    if periodic:
        left, right = np.roll(pe, 1), np.roll(pe, -1)
    else:
        pad = np.concatenate(([eps * p.max()], pe, [eps * p.max()]))
        left, right = pad[:-2], pad[2:]
    dp = (right - left) / (2.0 * dx)
    return float(np.sum(dp * dp / pe) * dx)


def epsilon_sweep(p: np.ndarray, dx: float, periodic: bool = False, floor: float = SUPPORT_FLOOR,
                  halvings: int = SWEEP_HALVINGS) -> tuple[bool, tuple[float, ...]]:
    """Track the regularized information while the floor is halved ``halvings`` times.

    Returns (divergent, values) where values run from the coarsest floor to the
    finest. A relative drift above ``SWEEP_DRIFT`` means the information is
    dominated by near-zero cells, as happens for discontinuous densities.
    """
    vals = tuple(_floored_sweep_info(p, dx, floor * 0.5**k, periodic) for k in range(halvings + 1))
    base = vals[0]
    if base <= 0:
        return False, vals
    return abs(vals[-1] - base) / base > SWEEP_DRIFT, vals


def _result(info: float, sweep_div: bool, sweep: tuple[float, ...], floor: float, halvings=SWEEP_HALVINGS) -> FisherResult:
    if sweep_div:
        f = sweep[-1]
        return FisherResult(1.0 / math.sqrt(f), f, True, floor * 0.5**halvings, sweep)
    if not info > 0:
        return FisherResult(math.inf, 0.0, True, floor, sweep)
    return FisherResult(1.0 / math.sqrt(info), info, False, floor, sweep)


def fisher_length(d: GridDistribution, periodic: bool | None = None, floor: float = SUPPORT_FLOOR) -> FisherResult:
    """delta = [integral p (ln p)'^2 dx]^(-1/2) for a 1D distribution.

    The value uses a spectral derivative of p on the support ``p > floor*max p``.
    Divergence is diagnosed with :func:`epsilon_sweep`; a divergent result reports
    the finest-floor information, which grows without bound as the grid is refined.
    A density with zero information (uniform on a circle) gives ``delta = inf``.
    """
    if d.grid.ndim != 1:
        raise ValueError("fisher_length needs a 1D distribution; use fisher_covariance in 2D")
    periodic = d.periodic if periodic is None else periodic
    p, dx = d.p, d.grid.dx
    dp = periodic_derivative(p, dx) if periodic else spectral_derivative(p, dx)
    sup = p > floor * p.max()
    info = float(np.sum(dp[sup] ** 2 / p[sup]) * dx)
    div, sweep = epsilon_sweep(p, dx, periodic, floor)
    if periodic and info < 1e-14 * (1.0 / dx) ** 2:
        info = 0.0
    return _result(info, div, sweep, floor)


def fisher_length_state(s: GridState, floor: float = SUPPORT_FLOOR) -> FisherResult:
    """Fisher length of |psi|^2 with d ln p = 2 Re(psi'/psi) from the wavefunction derivative."""
    if s.grid.ndim != 1:
        raise ValueError("fisher_length_state needs a 1D state")
    psi, dx = s.amplitudes, s.grid.dx
    re, im = psi.real, psi.imag
    p = re * re + im * im
    dp = 2.0 * (re * spectral_derivative(re, dx) + im * spectral_derivative(im, dx))
    sup = p > floor * p.max()
    info = float(np.sum(dp[sup] ** 2 / p[sup]) * dx)
    div, sweep = epsilon_sweep(p, dx, False, floor)
    return _result(info, div, sweep, floor)


def fisher_length_mixed(r: GridDensity, floor: float = SUPPORT_FLOOR) -> FisherResult:
    """Fisher length from the commutator: delta^-2 = -hbar^-2 integral <x|[P,rho]|x>^2 / <x|rho|x> dx.

    <x|[P, rho]|x> = 2i Im<x|P rho|x>, so the integrand is 4 Im(<x|P rho|x>)^2 / hbar^2 rho(x,x).
    """
    from .decomp import p_rho_diagonal

    prho = p_rho_diagonal(r)
    p = np.diag(r.rho).real
    sup = p > floor * p.max()
    comm = 2.0 * prho.imag
    info = float(np.sum(comm[sup] ** 2 / p[sup]) * r.grid.dx) / r.hbar**2
    div, sweep = epsilon_sweep(np.clip(p, 0.0, None), r.grid.dx, False, floor)
    return _result(info, div, sweep, floor)


def phase_fisher_length(ns: NumberState | NumberMixture, n_phi: int = 256, floor: float = SUPPORT_FLOOR) -> FisherResult:
    """Fisher length of the canonical phase density using p' computed from the number coefficients.

    p(phi) = sum_k w_k |f_k|^2 and p' = sum_k 2 w_k Re(f_k' conj f_k) are exact at every sample.
    """
    _check_phase_resolution(ns.n_min, ns.n_max, n_phi)
    g = phase_grid(n_phi)
    comps = zip(ns.weights, ns.states) if isinstance(ns, NumberMixture) else [(1.0, ns)]
    p = np.zeros(n_phi)
    dp = np.zeros(n_phi)
    for w, s in comps:
        f = phase_amplitude(s, g.points)
        fp = phase_amplitude(s, g.points, derivative=True)
        p += w * np.abs(f) ** 2
        dp += w * 2.0 * np.real(fp * np.conj(f))
    sup = p > floor * p.max()
    info = float(np.sum(dp[sup] ** 2 / p[sup]) * g.dx)
    if info < 1e-14:
        info = 0.0
    div, sweep = epsilon_sweep(p, g.dx, True, floor)
    return _result(info, div, sweep, floor)


# ------------------------------------------------------------------ matrices


def _info_matrix(grads: list[np.ndarray], p: np.ndarray, cell: float, floor: float) -> np.ndarray:
    sup = p > floor * p.max()
    ps = p[sup]
    return np.array([[np.sum(a[sup] * b[sup] / ps) * cell for b in grads] for a in grads])


def _fisher_covariance(info: np.ndarray, divergent: bool) -> FisherCovariance:
    info = 0.5 * (info + info.T)
    evals = np.linalg.eigvalsh(info)
    cond = evals.min() / evals.max() if evals.max() > 0 else 0.0
    if not cond > 1e-12:
        raise np.linalg.LinAlgError(f"Fisher information matrix is singular (inverse conditioning {cond:.3e})")
    cov = np.linalg.inv(info)
    return FisherCovariance(0.5 * (cov + cov.T), info, float(cond), divergent)


def _marginal_sweeps(p: np.ndarray, g, floor: float) -> bool:
    div = False
    for axis in (0, 1):
        m = p.sum(axis=1 - axis) * g.axes[1 - axis].dx
        div |= epsilon_sweep(m, g.axes[axis].dx, False, floor)[0]
    return div


def fisher_covariance(d: GridDistribution, floor: float = SUPPORT_FLOOR) -> FisherCovariance:
    """FCov = (integral p grad ln p grad ln p^T)^-1 for a 2D distribution, using spectral gradients."""
    if d.grid.ndim != 2:
        raise ValueError("fisher_covariance needs a 2D distribution")
    p = d.p
    grads = [spectral_derivative(p, g.dx, axis=a) for a, g in enumerate(d.grid.axes)]
    return _fisher_covariance(_info_matrix(grads, p, d.grid.cell, floor), _marginal_sweeps(p, d.grid, floor))


def fisher_covariance_state(s2: GridState, floor: float = SUPPORT_FLOOR) -> FisherCovariance:
    """FCov of |psi|^2 with grad p = 2 Re(conj(psi) grad psi) from the wavefunction."""
    if s2.grid.ndim != 2:
        raise ValueError("fisher_covariance_state needs a 2D state")
    re, im = s2.amplitudes.real, s2.amplitudes.imag
    p = re * re + im * im
    grads = []
    for a, g in enumerate(s2.grid.axes):
        grads.append(2.0 * (re * spectral_derivative(re, g.dx, axis=a) + im * spectral_derivative(im, g.dx, axis=a)))
    return _fisher_covariance(_info_matrix(grads, p, s2.grid.cell, floor), _marginal_sweeps(p, s2.grid, floor))


def correlation_coefficient(cov: np.ndarray) -> float:
    """Off-diagonal element of a 2x2 covariance-like matrix normalized by its diagonal."""
    cov = np.asarray(cov, dtype=float)
    if cov[0, 0] <= 0 or cov[1, 1] <= 0:
        raise ValueError("degenerate marginal variance")
    return float(np.clip(cov[0, 1] / math.sqrt(cov[0, 0] * cov[1, 1]), -1.0, 1.0))


def correlations(d: GridDistribution, floor: float = SUPPORT_FLOOR) -> CorrelationPair:
    """Pearson coefficient from Cov(X) and Fisher coefficient from FCov(X)."""
    _, cov = moments(d)
    return CorrelationPair(correlation_coefficient(cov), correlation_coefficient(fisher_covariance(d, floor).matrix))


# ------------------------------------------------------------------ entropies


def collision_length(p) -> float:
    """L = 1 / sum p_j^2 for a finite probability vector."""
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("not a probability vector")
    return float(1.0 / np.sum(p * p))


def entropy(d: GridDistribution) -> float:
    """Differential entropy -integral p ln p (with 0 ln 0 = 0), in nats."""
    p = d.p
    pos = p > 0
    return float(-np.sum(p[pos] * np.log(p[pos])) * d.grid.cell)


def entropy_and_ensemble_length(d: GridDistribution) -> tuple[float, float]:
    s = entropy(d)
    return s, math.exp(s)


def isoperimetric_gap(d: GridDistribution, floor: float = SUPPORT_FLOOR) -> float:
    """(2 pi e)^(-1/2) exp(S) - delta, nonnegative for every density and zero for Gaussians."""
    _, ens = entropy_and_ensemble_length(d)
    return ens / math.sqrt(2.0 * math.pi * math.e) - fisher_length(d, floor=floor).delta


# ------------------------------------------------------------------ de Bruijn


@dataclass(frozen=True, eq=False)
class DiffusionReport:
    """Entropy production of p_t = gamma p'' + drift p' against gamma / delta^2 at checkpoints."""

    times: np.ndarray
    entropy_rate: np.ndarray
    fisher_rate: np.ndarray
    mismatch: np.ndarray
    divergent: np.ndarray

    @property
    def max_mismatch(self) -> float:
        return float(np.max(self.mismatch)) if self.mismatch.size else 0.0


def diffuse(d: GridDistribution, gamma: float, dt: float, steps: int, drift: float = 0.0) -> GridDistribution:
    """Advance the density by ``steps`` explicit Euler steps (zero outside a non-periodic grid)."""
    dx = d.grid.dx
    if dt > dx * dx / (2.0 * gamma) * (1 + 1e-12):
        raise ValueError(f"dt={dt} violates the stability limit dx^2/(2 gamma)={dx * dx / (2 * gamma)}")
    p = kernels.heat_steps(np.ascontiguousarray(d.p), gamma * dt / dx**2, drift * dt / (2 * dx), int(steps), d.periodic)
    if p.min() < -1e-14 * p.max():
        raise InstabilityError("explicit heat step produced a negative density")
    return GridDistribution.from_samples(d.grid, np.clip(p, 0.0, None), d.periodic)


def diffusion_entropy_rate_check(d: GridDistribution, gamma: float, dt: float, steps: int,
                                 checkpoints: int = 10, drift: float = 0.0, window: int = 10) -> DiffusionReport:
    """Compare dS/dt with gamma / delta^2 along an explicit heat-equation run.

    Entropy is recorded every ``window`` steps; at ``checkpoints`` evenly spaced
    interior records dS/dt is the centered difference of its neighbours.
    """
    if d.grid.ndim != 1:
        raise ValueError("diffusion check needs a 1D distribution")
    chunks = steps // window
    if chunks < 2 or checkpoints < 1:
        raise ValueError("run too short for the requested window")
    h = window * dt
    picks = set(np.linspace(1, chunks - 1, min(checkpoints, chunks - 1)).round().astype(int).tolist())
    cur = d
    ent = [entropy(cur)]
    info = {}
    for k in range(1, chunks + 1):
        cur = diffuse(cur, gamma, dt, window, drift)
        ent.append(entropy(cur))
        if k in picks:
            info[k] = fisher_length(cur)
    times, ds, fr, mm, dv = [], [], [], [], []
    for k in sorted(info):
        rate = (ent[k + 1] - ent[k - 1]) / (2.0 * h)
        pred = gamma * info[k].fisher_info
        gap = abs(rate - pred)
        times.append(k * h)
        ds.append(rate)
        fr.append(pred)
        mm.append(gap / abs(pred) if abs(pred) > 1e-12 else gap)
        dv.append(info[k].divergent)
    return DiffusionReport(np.array(times), np.array(ds), np.array(fr), np.array(mm), np.array(dv, dtype=bool))
