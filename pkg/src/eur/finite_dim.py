"""Classical/nonclassical decomposition of Hermitian observables in finite dimensions and complementary bases."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import RelationCheck
from .fisher import collision_length

SUPPORT_FLOOR_FINITE = 1e-14


class UnsupportedError(ValueError):
    """Input outside the implemented cases (degenerate spectra, non-prime dimensions)."""


def _readonly(a):
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteState:
    """Density matrix of a d-level system."""

    rho: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("density matrix must be square")
        if np.abs(r - r.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(r).real - 1.0) > 1e-12:
            raise ValueError("density matrix does not have unit trace")
        r = 0.5 * (r + r.conj().T)
        if np.linalg.eigvalsh(r).min() < -1e-12:
            raise ValueError("density matrix is not positive")
        object.__setattr__(self, "rho", _readonly(r))

    @classmethod
    def from_vector(cls, psi) -> "FiniteState":
        v = np.asarray(psi, dtype=complex)
        # dividing by <v|v> once avoids the rounding of 1/sqrt in each amplitude
        return cls(np.outer(v, v.conj()) / np.vdot(v, v).real)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.purity() - 1.0) < tol

    def expect(self, op: np.ndarray) -> float:
        return float(np.real(np.trace(self.rho @ op)))


@dataclass(frozen=True, eq=False)
class FiniteObservable:
    """Hermitian matrix with its eigendecomposition (ascending eigenvalues, eigenvectors as columns)."""

    matrix: np.ndarray
    eigenvalues: np.ndarray = None
    eigenvectors: np.ndarray = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("observable must be square")
        scale = max(np.abs(m).max(), 1.0)
        if np.abs(m - m.conj().T).max() > 1e-12 * scale:
            raise ValueError("observable is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        vals, vecs = np.linalg.eigh(m)
        if np.abs(vecs @ np.diag(vals) @ vecs.conj().T - m).max() > 1e-12 * scale:
            raise ValueError("eigendecomposition does not reconstruct the matrix")
        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "eigenvalues", np.array(vals))
        object.__setattr__(self, "eigenvectors", _readonly(vecs))

    @classmethod
    def from_basis(cls, basis: np.ndarray, values=None) -> "FiniteObservable":
        """Observable diagonal in the columns of ``basis`` with eigenvalues ``values`` (default 0..d-1)."""
        basis = np.asarray(basis, dtype=complex)
        d = basis.shape[0]
        vals = np.arange(d, dtype=float) if values is None else np.asarray(values, dtype=float)
        return cls(basis @ np.diag(vals) @ basis.conj().T)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_degenerate(self, tol: float = 1e-9) -> bool:
        gaps = np.diff(self.eigenvalues)
        scale = max(np.abs(self.eigenvalues).max(), 1.0)
        return bool(np.any(gaps < tol * scale))


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class FiniteDecomposition:
    """B^A_cl = sum_a b_a |a><a| with b_a = Re<a|B rho|a> / <a|rho|a>, and the moments of B, B_cl, B_nc.

    ``values`` is NaN for eigenvectors outside the support of rho.
    """

    classical: np.ndarray
    values: np.ndarray
    support: np.ndarray
    mean_obs: float
    mean_cl: float
    var_obs: float
    var_cl: float
    var_nc: float
    notes: tuple[str, ...] = ()


def _check_pair(a: FiniteObservable, b: FiniteObservable, rho: FiniteState):
    if not (a.dim == b.dim == rho.dim):
        raise ValueError("observables and state must share dimension")
    if a.is_degenerate():
        raise UnsupportedError("reference observable has a degenerate spectrum")


def classical_component(a: FiniteObservable, b: FiniteObservable, rho: FiniteState,
                        floor: float = SUPPORT_FLOOR_FINITE) -> FiniteDecomposition:
    """Best estimate of B from a measurement of A, with the variance split VarB = VarB_cl + VarB_nc.

    VarB_nc is evaluated directly as the variance of the operator B - B^A_cl.
    Eigenvectors with <a|rho|a> below ``floor`` are excluded (0^2/0 = 0).
    """
    _check_pair(a, b, rho)
    vecs = a.eigenvectors
    r = rho.rho
    weights = np.real(np.einsum("ia,ij,ja->a", vecs.conj(), r, vecs))
    b_rho = np.einsum("ia,ij,ja->a", vecs.conj(), b.matrix @ r, vecs)
    sup = weights > floor
    vals = np.full(a.dim, np.nan)
    vals[sup] = b_rho.real[sup] / weights[sup]
    coeffs = np.where(sup, vals, 0.0)
    bcl = vecs @ np.diag(coeffs) @ vecs.conj().T
    notes = tuple(f"eigenvalue {a.eigenvalues[k]:.6g} has zero weight; excluded" for k in np.flatnonzero(~sup))
    mean_b = rho.expect(b.matrix)
    var_b = rho.expect(b.matrix @ b.matrix) - mean_b**2
    mean_cl = float(np.sum(weights[sup] * coeffs[sup]))
    var_cl = float(np.sum(weights[sup] * coeffs[sup] ** 2)) - mean_cl**2
    bnc = b.matrix - bcl
    # centre before squaring: <B_nc^2> - <B_nc>^2 cancels badly when B_nc nearly annihilates the state
    c = bnc - rho.expect(bnc) * np.eye(a.dim)
    var_nc = float(np.real(np.trace(c @ r @ c.conj().T)))
    return FiniteDecomposition(bcl, vals, sup, mean_b, mean_cl, var_b, var_cl, var_nc, notes)


def commutator_information(a: FiniteObservable, b: FiniteObservable, rho: FiniteState, hbar: float = 1.0,
                           floor: float = SUPPORT_FLOOR_FINITE) -> float:
    """delta_BA^-2 = sum_a <a|(i/hbar)[B, rho]|a>^2 / <a|rho|a> over the support."""
    _check_pair(a, b, rho)
    vecs = a.eigenvectors
    r = rho.rho
    comm = 1j / hbar * (b.matrix @ r - r @ b.matrix)
    diag = np.einsum("ia,ij,ja->a", vecs.conj(), comm, vecs)
    weights = np.real(np.einsum("ia,ij,ja->a", vecs.conj(), r, vecs))
    sup = weights > floor
    return float(np.sum(diag.real[sup] ** 2 / weights[sup]))


def generalized_ur(a: FiniteObservable, b: FiniteObservable, rho: FiniteState, hbar: float = 1.0,
                   tol: float = 1e-8, indeterminate_tol: float = 1e-12) -> RelationCheck:
    """delta_BA * Delta B^A_nc = hbar/2 for pure states and >= hbar/2 for mixtures.

    Near the indeterminate limit the product is sensitive to rounding in rho
    itself: a mixedness of order 1e-16 shifts it by about 1e-16 / delta_BA^-2.
    """
    info = commutator_information(a, b, rho, hbar)
    dec = classical_component(a, b, rho)
    spread = math.sqrt(max(dec.var_nc, 0.0))
    rhs = hbar / 2
    name = "generalized exact relation"
    if info < indeterminate_tol and dec.var_nc < indeterminate_tol:
        return RelationCheck.indeterminate(name, rhs, "generalized-ur", note="commutator diagonal vanishes and B_nc has no spread (0 * inf)")
    delta = math.inf if info <= 0 else 1.0 / math.sqrt(info)
    lhs = delta * spread
    if rho.is_pure():
        return RelationCheck.equality(name, lhs, rhs, tol, "generalized-ur")
    return RelationCheck.inequality(name, lhs, rhs, tol * hbar, "generalized-ur")


# ------------------------------------------------------------------ complementary bases


def _is_prime(d: int) -> bool:
    return d >= 2 and all(d % k for k in range(2, math.isqrt(d) + 1))


@dataclass(frozen=True, eq=False)
class MubSet:
    """d + 1 pairwise mutually unbiased orthonormal bases (vectors as columns)."""

    dim: int
    bases: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.dim
        if len(self.bases) != d + 1:
            raise ValueError(f"need {d + 1} bases, got {len(self.bases)}")
        for u in self.bases:
            if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-12:
                raise ValueError("basis is not orthonormal")
        worst = max_unbiasedness_error(self.bases)
        if worst > 1e-12:
            raise ValueError(f"bases are not mutually unbiased (error {worst:.3e})")
        object.__setattr__(self, "bases", tuple(_readonly(u) for u in self.bases))

    def observables(self) -> tuple[FiniteObservable, ...]:
        return tuple(FiniteObservable.from_basis(u) for u in self.bases)


def max_unbiasedness_error(bases) -> float:
    d = bases[0].shape[0]
    worst = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            ov = np.abs(bases[i].conj().T @ bases[j]) ** 2
            worst = max(worst, float(np.abs(ov - 1.0 / d).max()))
    return worst


def mub_bases(d: int) -> MubSet:
    """Complete set of mutually unbiased bases for prime d.

    d = 2 gives the eigenbases of the Pauli matrices z, x, y. For odd prime d the
    bases are the computational basis and the vectors
    ``d^-1/2 sum_k omega^(a k^2 + b k) |k>`` for a = 0..d-1 (b labels the vector).
    """
    if not _is_prime(d):
        raise UnsupportedError(f"complete MUB construction implemented for prime d only, got {d}")
    if d == 2:
        s = 1.0 / math.sqrt(2.0)
        bases = (
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        )
        return MubSet(2, bases)
    k = np.arange(d)
    omega = np.exp(2j * np.pi / d)
    bases = [np.eye(d, dtype=complex)]
    for a in range(d):
        cols = [omega ** ((a * k * k + b * k) % d) / math.sqrt(d) for b in range(d)]
        bases.append(np.array(cols).T)
    return MubSet(d, tuple(bases))


def collision_lengths(rho: FiniteState, m: MubSet) -> np.ndarray:
    """Collision length of the outcome distribution of each basis."""
    if rho.dim != m.dim:
        raise ValueError("state and bases have different dimensions")
    out = []
    for u in m.bases:
        p = np.real(np.einsum("ia,ij,ja->a", u.conj(), rho.rho, u))
        out.append(collision_length(np.clip(p, 0.0, None) / np.clip(p, 0.0, None).sum()))
    return np.array(out)


def ivanovic_check(rho: FiniteState, m: MubSet, tol: float = 1e-12) -> tuple[RelationCheck, RelationCheck]:
    """sum_i 1/L_i = 1 + tr(rho^2), and the sum is at most 2. Returns ``(equality, bound)``."""
    lengths = collision_lengths(rho, m)
    total = float(np.sum(1.0 / lengths))
    eq = RelationCheck.equality("collision length sum", total, 1.0 + rho.purity(), tol, "complementarity:collision", relative=False)
    bound = RelationCheck.inequality("collision length bound", 2.0, total, tol, "complementarity:collision")
    return eq, bound


# ------------------------------------------------------------------ random inputs


def random_pure_state(d: int, rng: np.random.Generator) -> FiniteState:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return FiniteState.from_vector(v)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> FiniteState:
    """Ginibre-distributed density matrix of the given rank (full rank by default)."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    r = g @ g.conj().T
    return FiniteState(r / np.trace(r).real)


def random_observable(d: int, rng: np.random.Generator) -> FiniteObservable:
    """Hermitian matrix from the Gaussian unitary ensemble (nondegenerate with probability one)."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return FiniteObservable(0.5 * (g + g.conj().T))
