"""Compiled inner loops: Wigner correlation gathers and explicit heat-equation stepping."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def wigner_correlation_pure(const double complex[::1] psi):
    """Return C[i, m] = psi[i + k] * conj(psi[i - k]) with k = m - n // 2, zero outside the grid."""
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t i, m, k, a, b
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] c = out
    cdef double complex u, v
    for i in range(n):
        for m in range(n):
            k = m - half
            a = i + k
            b = i - k
            if a < 0 or a >= n or b < 0 or b >= n:
                continue
            u = psi[a]
            v = psi[b]
            c[i, m] = u * v.conjugate()
    return out


def wigner_correlation_density(const double complex[:, ::1] rho):
    """Return C[i, m] = rho[i + k, i - k] with k = m - n // 2, zero outside the grid."""
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t i, m, k, a, b
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] c = out
    for i in range(n):
        for m in range(n):
            k = m - half
            a = i + k
            b = i - k
            if a < 0 or a >= n or b < 0 or b >= n:
                continue
            c[i, m] = rho[a, b]
    return out


def heat_steps(const double[::1] p0, double diffusion, double drift, Py_ssize_t nsteps, bint periodic):
    """Advance p by nsteps explicit Euler steps of p_t = c*lap(p) + d*grad(p) in grid units.

    ``diffusion`` is gamma*dt/dx**2 and ``drift`` is sigma*dt/(2*dx). Outside a
    non-periodic grid the density is zero.
    """
    cdef Py_ssize_t n = p0.shape[0]
    cdef Py_ssize_t s, i
    a = np.array(p0, dtype=np.float64, copy=True)
    b = np.empty(n, dtype=np.float64)
    cdef double[::1] cur = a
    cdef double[::1] nxt = b
    cdef double[::1] tmp
    cdef double left, right
    for s in range(nsteps):
        for i in range(n):
            if i > 0:
                left = cur[i - 1]
            elif periodic:
                left = cur[n - 1]
            else:
                left = 0.0
            if i < n - 1:
                right = cur[i + 1]
            elif periodic:
                right = cur[0]
            else:
                right = 0.0
            nxt[i] = cur[i] + diffusion * (right - 2.0 * cur[i] + left) + drift * (right - left)
        tmp = cur
        cur = nxt
        nxt = tmp
    return np.asarray(cur).copy()
