"""Uniform grids, wavefunctions, density operators and distributions.

Grids are cell-centered: sample ``k`` sits at ``x0 + k*dx`` and represents the
cell ``[x0 + (k - 1/2) dx, x0 + (k + 1/2) dx]``. Integrals use the rectangle rule.

Fourier convention::

    psi_tilde(p) = (2 pi hbar)^(-1/2) * integral psi(x) exp(-i p x / hbar) dx

discretized on the conjugate grid ``p_j = (j - (n - 1)/2) * dp`` with
``dp = 2 pi hbar / (n dx)``. The momentum grid is symmetric about zero and never
contains the Nyquist frequency, so the discrete transform is unitary and the index
mapping is fixed (``j = 0`` is the most negative momentum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import eval_hermite, gammaln

HBAR = 1.0
SUPPORT_FLOOR = 1e-12
NORM_TOL = 1e-10


class TruncationError(ValueError):
    """The grid does not hold the bulk of the requested state."""


class ConditioningError(ValueError):
    """A measurement outcome has (numerically) zero probability."""


class AliasingError(ValueError):
    """A phase grid is too coarse to represent a number state exactly."""


# --------------------------------------------------------------------------- grids


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid of ``n`` samples starting at ``x0`` with spacing ``dx``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"grid spacing must be positive, got {self.dx}")
        if int(self.n) != self.n or self.n < 8:
            raise ValueError(f"grid needs at least 8 samples, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @classmethod
    def span(cls, a: float, b: float, n: int) -> "Grid1D":
        """Split ``[a, b]`` into ``n`` cells and sample their centres."""
        if not b > a:
            raise ValueError("need b > a")
        dx = (b - a) / n
        return cls(a + 0.5 * dx, dx, n)

    @classmethod
    def centered(cls, half_width: float, n: int) -> "Grid1D":
        return cls.span(-half_width, half_width, n)

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def lo(self) -> float:
        """Left edge of the first cell."""
        return self.x0 - 0.5 * self.dx

    @property
    def hi(self) -> float:
        """Right edge of the last cell."""
        return self.x0 + (self.n - 0.5) * self.dx

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)

    @property
    def axes(self) -> tuple["Grid1D"]:
        return (self,)

    @property
    def ndim(self) -> int:
        return 1

    @property
    def cell(self) -> float:
        """Volume element of one sample."""
        return self.dx

    def conjugate(self, hbar: float = HBAR) -> "Grid1D":
        """Momentum grid paired with this grid by the discrete Fourier transform."""
        dp = 2.0 * np.pi * hbar / (self.n * self.dx)
        return Grid1D(-0.5 * (self.n - 1) * dp, dp, self.n)

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same interval, ``factor`` times as many cells."""
        return Grid1D.span(self.lo, self.hi, self.n * factor)

    def index_of(self, x: float, atol: float = 1e-9) -> int | None:
        """Index of the sample at ``x``, or None if ``x`` is not a sample point."""
        k = (x - self.x0) / self.dx
        kr = round(k)
        if abs(k - kr) <= atol and 0 <= kr < self.n:
            return int(kr)
        return None


@dataclass(frozen=True)
class Grid2D:
    """Product of two 1D grids; axis 0 belongs to particle 1, axis 1 to particle 2."""

    ax1: Grid1D
    ax2: Grid1D

    @classmethod
    def square(cls, g: Grid1D) -> "Grid2D":
        return cls(g, g)

    @property
    def axes(self) -> tuple[Grid1D, Grid1D]:
        return (self.ax1, self.ax2)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ax1.n, self.ax2.n)

    @property
    def ndim(self) -> int:
        return 2

    @property
    def cell(self) -> float:
        return self.ax1.dx * self.ax2.dx

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.ax1.points, self.ax2.points, indexing="ij")

    def conjugate(self, hbar: float = HBAR) -> "Grid2D":
        return Grid2D(self.ax1.conjugate(hbar), self.ax2.conjugate(hbar))


Grid = Grid1D | Grid2D


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


# ------------------------------------------------------------------ spectral tools


def _shape_for(axis: int, ndim: int, n: int) -> list[int]:
    sh = [1] * ndim
    sh[axis] = n
    return sh


def dft(values: np.ndarray, grid: Grid1D, target: Grid1D, hbar: float = HBAR, axis: int = 0) -> np.ndarray:
    """Evaluate the continuous Fourier integral on ``target`` by a rectangle-rule sum.

    ``target.dx * grid.dx * M`` must equal ``2 pi hbar`` for an integer ``M >= grid.n``;
    the input is zero-padded to ``M`` samples so a single FFT does the work.
    """
    m_float = 2.0 * np.pi * hbar / (grid.dx * target.dx)
    m = int(round(m_float))
    if abs(m - m_float) > 1e-6 * m_float or m < grid.n or target.n > m:
        raise ValueError("target grid is not a zero-padded conjugate of the source grid")
    values = np.asarray(values, dtype=complex)
    ndim = values.ndim
    k = np.arange(grid.n).reshape(_shape_for(axis, ndim, grid.n))
    j = target.points.reshape(_shape_for(axis, ndim, target.n))
    mod = values * np.exp(-1j * target.x0 * k * grid.dx / hbar)
    spec = np.fft.fft(mod, n=m, axis=axis)
    spec = np.take(spec, np.arange(target.n), axis=axis)
    return spec * np.exp(-1j * j * grid.x0 / hbar) * grid.dx / np.sqrt(2.0 * np.pi * hbar)


def idft(values: np.ndarray, pgrid: Grid1D, xgrid: Grid1D, hbar: float = HBAR, axis: int = 0) -> np.ndarray:
    """Inverse of :func:`dft` for an exactly conjugate pair of grids."""
    n = xgrid.n
    if pgrid.n != n or abs(pgrid.dx * xgrid.dx * n - 2.0 * np.pi * hbar) > 1e-9 * 2.0 * np.pi * hbar:
        raise ValueError("grids are not conjugate")
    values = np.asarray(values, dtype=complex)
    ndim = values.ndim
    k = np.arange(n).reshape(_shape_for(axis, ndim, n))
    p = pgrid.points.reshape(_shape_for(axis, ndim, n))
    spec = values * np.exp(1j * p * xgrid.x0 / hbar)
    out = np.fft.ifft(spec, axis=axis) * n
    return out * np.exp(1j * pgrid.x0 * k * xgrid.dx / hbar) * pgrid.dx / np.sqrt(2.0 * np.pi * hbar)


def _wavenumbers(n: int, dx: float) -> np.ndarray:
    dk = 2.0 * np.pi / (n * dx)
    return (np.arange(n) - 0.5 * (n - 1)) * dk


def spectral_derivative(values: np.ndarray, dx: float, axis: int = 0, order: int = 1) -> np.ndarray:
    """Derivative of the trigonometric interpolant through cell-centered samples.

    Uses the half-shifted wavenumbers of the momentum grid, so every mode is
    resolved and no Nyquist term needs special handling. Real input gives real
    output (the roundoff imaginary part is discarded).
    """
    values = np.asarray(values)
    real_input = not np.iscomplexobj(values)
    n = values.shape[axis]
    kap = _wavenumbers(n, dx)
    k = np.arange(n).reshape(_shape_for(axis, values.ndim, n))
    kk = kap.reshape(_shape_for(axis, values.ndim, n))
    shift = np.exp(-1j * kap[0] * k * dx)
    spec = np.fft.fft(values * shift, axis=axis) * (1j * kk) ** order
    out = np.fft.ifft(spec, axis=axis) * np.conj(shift)
    return out.real if real_input else out


def periodic_derivative(values: np.ndarray, dx: float, axis: int = 0) -> np.ndarray:
    """First derivative of a real periodic sample sequence; the Nyquist mode is dropped."""
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    kap = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    if n % 2 == 0:
        kap[n // 2] = 0.0
    kk = kap.reshape(_shape_for(axis, values.ndim, n))
    return np.fft.ifft(np.fft.fft(values, axis=axis) * 1j * kk, axis=axis).real


def complex_derivative(psi: np.ndarray, dx: float, axis: int = 0, order: int = 1) -> np.ndarray:
    """Spectral derivative of real and imaginary parts taken separately.

    A real input has an exactly real derivative, which keeps classical fields of
    real wavefunctions at exactly zero.
    """
    psi = np.asarray(psi)
    re = spectral_derivative(psi.real, dx, axis, order)
    if not np.iscomplexobj(psi) or not np.any(psi.imag):
        return re + 0j
    return re + 1j * spectral_derivative(psi.imag, dx, axis, order)


# ------------------------------------------------------------------ state types


@dataclass(frozen=True, eq=False)
class GridDistribution:
    """Probability density sampled on a grid (optionally periodic)."""

    grid: Grid
    p: np.ndarray
    periodic: bool = False

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != self.grid.shape:
            raise ValueError(f"density shape {p.shape} does not match grid {self.grid.shape}")
        if np.any(~np.isfinite(p)):
            raise ValueError("density has non-finite entries")
        if p.min() < 0:
            raise ValueError("density has negative entries")
        total = p.sum() * self.grid.cell
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"density integrates to {total!r}, not 1")
        object.__setattr__(self, "p", _readonly(p))

    @classmethod
    def from_samples(cls, grid: Grid, values, periodic: bool = False) -> "GridDistribution":
        """Normalize nonnegative samples into a distribution."""
        v = np.asarray(values, dtype=float)
        if v.min() < 0:
            raise ValueError("density has negative entries")
        total = v.sum() * grid.cell
        if not total > 0:
            raise ValueError("density has zero mass")
        return cls(grid, v / total, periodic)

    def support(self, floor: float = SUPPORT_FLOOR) -> np.ndarray:
        return self.p > floor * self.p.max()

    def marginal(self, axis: int) -> "GridDistribution":
        """Marginal density of coordinate ``axis`` of a 2D distribution."""
        if self.grid.ndim != 2:
            raise ValueError("marginals need a 2D distribution")
        other = 1 - axis
        m = self.p.sum(axis=other) * self.grid.axes[other].dx
        return GridDistribution.from_samples(self.grid.axes[axis], m)


@dataclass(frozen=True, eq=False)
class GridState:
    """Normalized wavefunction sampled on a 1D or 2D grid."""

    grid: Grid
    amplitudes: np.ndarray
    hbar: float = HBAR

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != self.grid.shape:
            raise ValueError(f"amplitude shape {a.shape} does not match grid {self.grid.shape}")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if np.any(~np.isfinite(a)):
            raise ValueError("amplitudes have non-finite entries")
        norm = np.sum(np.abs(a) ** 2) * self.grid.cell
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm is {norm!r}; use GridState.from_samples to normalize")
        object.__setattr__(self, "amplitudes", _readonly(a))

    @classmethod
    def from_samples(cls, grid: Grid, values, hbar: float = HBAR) -> "GridState":
        v = np.asarray(values, dtype=complex)
        norm = np.sqrt(np.sum(np.abs(v) ** 2) * grid.cell)
        if not norm > 0:
            raise ValueError("state has zero norm")
        return cls(grid, v / norm, hbar)

    def density(self) -> GridDistribution:
        return GridDistribution.from_samples(self.grid, np.abs(self.amplitudes) ** 2)

    def is_real(self) -> bool:
        return not np.any(self.amplitudes.imag)


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Position-representation density operator ``rho[i, j] = <x_i|rho|x_j>`` on a 1D grid."""

    grid: Grid1D
    rho: np.ndarray
    hbar: float = HBAR

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        n = self.grid.n
        if r.shape != (n, n):
            raise ValueError(f"density matrix shape {r.shape} does not match grid size {n}")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        scale = np.abs(r).max()
        if np.abs(r - r.conj().T).max() > 1e-12 * scale:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(r).real * self.grid.dx
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace is {tr!r}, not 1")
        r = 0.5 * (r + r.conj().T)
        evals = np.linalg.eigvalsh(r * self.grid.dx)
        if evals.min() < -1e-10:
            raise ValueError(f"density matrix has eigenvalue {evals.min():.3e} < 0")
        object.__setattr__(self, "rho", _readonly(r))

    @classmethod
    def from_state(cls, s: GridState) -> "GridDensity":
        if s.grid.ndim != 1:
            raise ValueError("density operators are supported on 1D grids only")
        psi = s.amplitudes
        return cls(s.grid, np.outer(psi, psi.conj()), s.hbar)

    @classmethod
    def mixture(cls, weights: Sequence[float], states: Sequence[GridState]) -> "GridDensity":
        """Incoherent mixture sum_k w_k |psi_k><psi_k| (weights are normalized)."""
        w = np.asarray(weights, dtype=float)
        if len(w) != len(states) or len(w) == 0 or w.min() < 0 or not w.sum() > 0:
            raise ValueError("need one nonnegative weight per state")
        w = w / w.sum()
        grid, hbar = states[0].grid, states[0].hbar
        rho = np.zeros((grid.n, grid.n), dtype=complex)
        for wk, s in zip(w, states):
            if s.grid != grid or s.hbar != hbar:
                raise ValueError("mixture components must share grid and hbar")
            rho += wk * np.outer(s.amplitudes, s.amplitudes.conj())
        return cls(grid, rho, hbar)

    def density(self) -> GridDistribution:
        return GridDistribution.from_samples(self.grid, np.clip(np.diag(self.rho).real, 0.0, None))

    def purity(self) -> float:
        """tr(rho^2) in the continuum normalization."""
        return float(np.sum(np.abs(self.rho) ** 2).real * self.grid.dx**2)

    def momentum_density(self) -> tuple[Grid1D, np.ndarray]:
        """Diagonal <p|rho|p> on the conjugate grid."""
        pg = self.grid.conjugate(self.hbar)
        m = dft(self.rho, self.grid, pg, self.hbar, axis=0)
        d = np.conj(np.diag(dft(np.conj(m), self.grid, pg, self.hbar, axis=1)))
        return pg, np.clip(d.real, 0.0, None)


@dataclass(frozen=True, eq=False)
class NumberState:
    """Pure state sum_n c_n |n> over consecutive integers n_min..n_max.

    ``mode`` is ``"photon"`` (n >= 0) or ``"rotor"`` (any integers, angular
    momentum ``hbar * n``).
    """

    coefficients: np.ndarray
    n_min: int = 0
    hbar: float = HBAR
    mode: str = "photon"

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("need at least one coefficient")
        if self.mode not in ("photon", "rotor"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "photon" and self.n_min < 0:
            raise ValueError("photon-number states need n_min >= 0")
        if abs(np.sum(np.abs(c) ** 2) - 1.0) > 1e-12:
            raise ValueError("coefficients are not normalized")
        object.__setattr__(self, "coefficients", _readonly(c))
        object.__setattr__(self, "n_min", int(self.n_min))

    @classmethod
    def from_terms(cls, terms: dict[int, complex], hbar: float = HBAR, mode: str = "photon") -> "NumberState":
        """Build from ``{n: c_n}``, normalizing the coefficients."""
        lo, hi = min(terms), max(terms)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for n, v in terms.items():
            c[n - lo] = v
        return cls(c / np.linalg.norm(c), lo, hbar, mode)

    @classmethod
    def fock(cls, n: int, hbar: float = HBAR, mode: str = "photon") -> "NumberState":
        return cls(np.array([1.0 + 0j]), n, hbar, mode)

    @property
    def n_max(self) -> int:
        return self.n_min + self.coefficients.size - 1

    @property
    def numbers(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def number_probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2


@dataclass(frozen=True, eq=False)
class NumberMixture:
    """Incoherent mixture of number-basis pure states."""

    weights: tuple[float, ...]
    states: tuple[NumberState, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.states) or len(w) == 0 or w.min() < 0:
            raise ValueError("need one nonnegative weight per state")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")
        modes = {s.mode for s in self.states}
        hbars = {s.hbar for s in self.states}
        if len(modes) != 1 or len(hbars) != 1:
            raise ValueError("mixture components must share mode and hbar")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def mode(self) -> str:
        return self.states[0].mode

    @property
    def hbar(self) -> float:
        return self.states[0].hbar

    @property
    def n_min(self) -> int:
        return min(s.n_min for s in self.states)

    @property
    def n_max(self) -> int:
        return max(s.n_max for s in self.states)


# --------------------------------------------------------------- state descriptors


@dataclass(frozen=True)
class Gaussian:
    """Boosted, chirped Gaussian: |psi|^2 ~ N(mu, sigma^2), phase p0 x + chirp (x - mu)^2 over hbar."""

    mu: float = 0.0
    sigma: float = 1.0
    p0: float = 0.0
    chirp: float = 0.0

    ndim = 1

    def amplitude(self, x, hbar=HBAR):
        s = self.sigma
        env = (2.0 * np.pi * s * s) ** -0.25 * np.exp(-((x - self.mu) ** 2) / (4.0 * s * s))
        return env * np.exp(1j * (self.p0 * x + self.chirp * (x - self.mu) ** 2) / hbar)

    def extent(self, sigmas, hbar=HBAR):
        return ((self.mu - sigmas * self.sigma, self.mu + sigmas * self.sigma),)


@dataclass(frozen=True)
class HarmonicEigenstate:
    """Energy eigenstate ``n`` of the oscillator with mass and frequency, optionally displaced and boosted."""

    n: int = 0
    mass: float = 1.0
    omega: float = 1.0
    center: float = 0.0
    p0: float = 0.0

    ndim = 1

    def length(self, hbar=HBAR):
        return math.sqrt(hbar / (self.mass * self.omega))

    def amplitude(self, x, hbar=HBAR):
        ell = self.length(hbar)
        xi = (x - self.center) / ell
        log_norm = -0.5 * (self.n * math.log(2.0) + gammaln(self.n + 1)) - 0.25 * math.log(np.pi) - 0.5 * math.log(ell)
        psi = np.exp(log_norm - 0.5 * xi * xi) * eval_hermite(self.n, xi)
        return psi * np.exp(1j * self.p0 * x / hbar) if self.p0 else psi.astype(complex)

    def extent(self, sigmas, hbar=HBAR):
        # turning point plus the ground-state density width (ell / sqrt 2) times sigmas
        ell = self.length(hbar)
        r = (math.sqrt(2 * self.n + 1) + sigmas / math.sqrt(2.0)) * ell
        return ((self.center - r, self.center + r),)


@dataclass(frozen=True)
class Box:
    """Uniform amplitude on [a, b], zero elsewhere."""

    a: float = 0.0
    b: float = 1.0

    ndim = 1

    def amplitude(self, x, hbar=HBAR):
        inside = (x >= self.a) & (x <= self.b)
        return np.where(inside, 1.0 / math.sqrt(self.b - self.a), 0.0).astype(complex)

    def extent(self, sigmas, hbar=HBAR):
        return ((self.a, self.b),)


@dataclass(frozen=True)
class EPR:
    """Two-particle Gaussian: relative position ~ a (width sigma), total position ~ 0 (width tau), total momentum p0."""

    sigma: float = 0.1
    tau: float = 10.0
    a: float = 1.0
    p0: float = 2.0

    ndim = 2

    def amplitude(self, x1, x2, hbar=HBAR):
        u = x1 - x2 - self.a
        v = x1 + x2
        env = np.exp(-u * u / (4.0 * self.sigma**2) - v * v / (4.0 * self.tau**2))
        return env * np.exp(1j * self.p0 * v / (2.0 * hbar))

    def extent(self, sigmas, hbar=HBAR):
        s = 0.5 * math.hypot(self.sigma, self.tau)
        c = 0.5 * self.a
        return ((c - sigmas * s, c + sigmas * s), (-c - sigmas * s, -c + sigmas * s))


@dataclass(frozen=True)
class Product:
    """Product state first(x1) * second(x2) of two 1D descriptors."""

    first: object
    second: object

    ndim = 2

    def amplitude(self, x1, x2, hbar=HBAR):
        return self.first.amplitude(x1, hbar) * self.second.amplitude(x2, hbar)

    def extent(self, sigmas, hbar=HBAR):
        return self.first.extent(sigmas, hbar) + self.second.extent(sigmas, hbar)


@dataclass(frozen=True)
class Superposition:
    """Linear combination of descriptors of equal dimension (normalized after sampling)."""

    terms: tuple[tuple[complex, object], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty superposition")
        dims = {d.ndim for _, d in self.terms}
        if len(dims) != 1:
            raise ValueError("superposed descriptors must share dimension")

    @property
    def ndim(self):
        return self.terms[0][1].ndim

    def amplitude(self, *coords, hbar=HBAR):
        return sum(c * d.amplitude(*coords, hbar=hbar) for c, d in self.terms)

    def extent(self, sigmas, hbar=HBAR):
        boxes = [d.extent(sigmas, hbar) for _, d in self.terms]
        return tuple((min(b[i][0] for b in boxes), max(b[i][1] for b in boxes)) for i in range(self.ndim))


@dataclass(frozen=True)
class Samples:
    """Explicit amplitude samples (normalized by ``build_state``)."""

    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def ndim(self):
        return np.ndim(self.values)

    def amplitude(self, *coords, hbar=HBAR):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != np.broadcast(*coords).shape:
            raise ValueError("sample list does not match grid")
        return v

    def extent(self, sigmas, hbar=HBAR):
        return None


def build_state(desc, grid: Grid, hbar: float = HBAR, sigmas: float = 6.0) -> GridState:
    """Sample a state descriptor on ``grid`` and normalize it.

    Raises :class:`TruncationError` when the grid does not contain the
    descriptor's extent (``sigmas`` widths of its density on each side).
    """
    if desc.ndim != grid.ndim:
        raise ValueError(f"{type(desc).__name__} is {desc.ndim}D but the grid is {grid.ndim}D")
    ext = desc.extent(sigmas, hbar)
    if ext is not None:
        for (a, b), g in zip(ext, grid.axes):
            if a < g.lo - 1e-12 or b > g.hi + 1e-12:
                raise TruncationError(
                    f"{type(desc).__name__} needs [{a:.4g}, {b:.4g}] but the grid covers [{g.lo:.4g}, {g.hi:.4g}]"
                )
    if grid.ndim == 1:
        values = desc.amplitude(grid.points, hbar=hbar)
    else:
        x1, x2 = grid.mesh()
        values = desc.amplitude(x1, x2, hbar=hbar)
    return GridState.from_samples(grid, values, hbar)


# ----------------------------------------------------------------- transforms


def momentum_representation(s: GridState) -> GridState:
    """Momentum-space wavefunction on the conjugate grid (all axes transformed)."""
    pg = s.grid.conjugate(s.hbar)
    phi = s.amplitudes
    for axis, (g, q) in enumerate(zip(s.grid.axes, pg.axes)):
        phi = dft(phi, g, q, s.hbar, axis=axis)
    return GridState.from_samples(pg, phi, s.hbar)


def position_representation(m: GridState, grid: Grid) -> GridState:
    """Inverse of :func:`momentum_representation`; ``grid`` must be conjugate to ``m.grid``."""
    psi = m.amplitudes
    for axis, (q, g) in enumerate(zip(m.grid.axes, grid.axes)):
        psi = idft(psi, q, g, m.hbar, axis=axis)
    return GridState.from_samples(grid, psi, m.hbar)


def momentum_density(s: GridState) -> GridDistribution:
    return momentum_representation(s).density()


def moments(d: GridDistribution):
    """Mean and variance of a 1D distribution; mean vector and covariance matrix in 2D."""
    w = d.p * d.grid.cell
    if d.grid.ndim == 1:
        x = d.grid.points
        mean = float(np.sum(w * x))
        var = float(np.sum(w * (x - mean) ** 2))
        return mean, max(var, 0.0)
    coords = d.grid.mesh()
    mean = np.array([np.sum(w * c) for c in coords])
    dev = [c - m for c, m in zip(coords, mean)]
    cov = np.array([[np.sum(w * a * b) for b in dev] for a in dev])
    return mean, cov


def phase_grid(n_phi: int) -> Grid1D:
    """Cell-centered grid on [0, 2 pi)."""
    return Grid1D.span(0.0, 2.0 * np.pi, n_phi)


def _check_phase_resolution(n_min: int, n_max: int, n_phi: int):
    need = 2 * (n_max - n_min) + 2
    if n_phi < need:
        raise AliasingError(f"n_phi={n_phi} aliases a number state spanning {n_min}..{n_max}; need >= {need}")


def phase_amplitude(ns: NumberState, phi: np.ndarray, derivative: bool = False) -> np.ndarray:
    """f(phi) = (2 pi)^(-1/2) sum_n c_n exp(-i n phi), or its phi-derivative."""
    n = ns.numbers
    e = np.exp(-1j * np.outer(phi, n))
    coef = ns.coefficients * (-1j * n if derivative else 1.0)
    return e @ coef / np.sqrt(2.0 * np.pi)


def phase_distribution(ns: NumberState | NumberMixture, n_phi: int = 256) -> GridDistribution:
    """Canonical phase density p(phi) = |sum_n c_n exp(-i n phi)|^2 / 2 pi on a periodic grid."""
    _check_phase_resolution(ns.n_min, ns.n_max, n_phi)
    g = phase_grid(n_phi)
    if isinstance(ns, NumberMixture):
        p = sum(w * np.abs(phase_amplitude(s, g.points)) ** 2 for w, s in zip(ns.weights, ns.states))
    else:
        p = np.abs(phase_amplitude(ns, g.points)) ** 2
    return GridDistribution.from_samples(g, p, periodic=True)


# ----------------------------------------------------------------- conditioning


def _conditional(s2: GridState, row: np.ndarray, other: Grid1D, peak: float, what: str) -> GridState:
    # peak: largest value of the measured marginal density, sets the zero-probability scale
    prob = np.sum(np.abs(row) ** 2) * other.dx
    if not prob > 1e-12 * peak:
        raise ConditioningError(f"outcome {what} has probability density {prob:.3e}")
    return GridState(other, row / np.sqrt(prob), s2.hbar)


def _check_particle(s2: GridState, particle: int) -> int:
    if s2.grid.ndim != 2:
        raise ValueError("conditioning needs a two-particle state")
    if particle not in (1, 2):
        raise ValueError("particle must be 1 or 2")
    return particle - 1


def condition_on_position(s2: GridState, particle: int, x_value: float) -> GridState:
    """State of the other particle after measuring position ``x_value`` on ``particle`` (1 or 2).

    On a sample point the row is sliced directly; between samples the amplitude is
    evaluated from the trigonometric interpolant.
    """
    axis = _check_particle(s2, particle)
    g = s2.grid.axes[axis]
    other = s2.grid.axes[1 - axis]
    k = g.index_of(x_value)
    if k is not None:
        row = np.take(s2.amplitudes, k, axis=axis)
    else:
        pg = g.conjugate(s2.hbar)
        phi = dft(s2.amplitudes, g, pg, s2.hbar, axis=axis)
        kern = np.exp(1j * pg.points * x_value / s2.hbar) * pg.dx / np.sqrt(2.0 * np.pi * s2.hbar)
        row = np.tensordot(phi, kern, axes=([axis], [0]))
    dens = np.sum(np.abs(s2.amplitudes) ** 2, axis=1 - axis) * other.dx
    return _conditional(s2, row, other, float(dens.max()), f"x{particle}={x_value}")


def condition_on_momentum(s2: GridState, particle: int, p_value: float) -> GridState:
    """State of the other particle after measuring momentum ``p_value`` on ``particle`` (1 or 2).

    Only the measured particle is transformed; any momentum value is allowed.
    """
    axis = _check_particle(s2, particle)
    g = s2.grid.axes[axis]
    other = s2.grid.axes[1 - axis]
    hb = s2.hbar
    kern = np.exp(-1j * p_value * g.points / hb) * g.dx / np.sqrt(2.0 * np.pi * hb)
    row = np.tensordot(s2.amplitudes, kern, axes=([axis], [0]))
    pg = g.conjugate(hb)
    mixed = dft(s2.amplitudes, g, pg, hb, axis=axis)
    dens = np.sum(np.abs(mixed) ** 2, axis=1 - axis) * other.dx
    return _conditional(s2, row, other, float(dens.max()), f"p{particle}={p_value}")
