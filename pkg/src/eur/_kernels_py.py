"""Numpy implementations of the compiled kernels, used when the extension is unavailable."""

import numpy as np


def _gather_indices(n):
    i = np.arange(n)[:, None]
    k = np.arange(n)[None, :] - n // 2
    a = i + k
    b = i - k
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    return np.where(valid, a, 0), np.where(valid, b, 0), valid


def wigner_correlation_pure(psi):
    """Return C[i, m] = psi[i + k] * conj(psi[i - k]) with k = m - n // 2, zero outside the grid."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    a, b, valid = _gather_indices(psi.shape[0])
    return np.where(valid, psi[a] * np.conj(psi[b]), 0.0)


def wigner_correlation_density(rho):
    """Return C[i, m] = rho[i + k, i - k] with k = m - n // 2, zero outside the grid."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    a, b, valid = _gather_indices(rho.shape[0])
    return np.where(valid, rho[a, b], 0.0)


def heat_steps(p0, diffusion, drift, nsteps, periodic):
    """Advance p by nsteps explicit Euler steps of p_t = c*lap(p) + d*grad(p) in grid units."""
    p = np.array(p0, dtype=np.float64, copy=True)
    padded = np.zeros(p.shape[0] + 2)
    for _ in range(nsteps):
        padded[1:-1] = p
        if periodic:
            padded[0] = p[-1]
            padded[-1] = p[0]
        left = padded[:-2]
        right = padded[2:]
        p = p + diffusion * (right - 2.0 * p + left) + drift * (right - left)
    return p
