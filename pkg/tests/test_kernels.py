import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from eur import _kernels_py, kernels

compiled = pytest.importorskip("eur._kernels", reason="compiled extension not built")


def _psi(n, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.mark.parametrize("n", [8, 9, 64, 257])
def test_correlation_pure_backends_agree(n):
    psi = _psi(n, n)
    assert_allclose(compiled.wigner_correlation_pure(psi), _kernels_py.wigner_correlation_pure(psi), rtol=1e-15, atol=1e-14)


@pytest.mark.parametrize("n", [8, 33, 128])
def test_correlation_density_backends_agree(n):
    psi = _psi(n, n + 1)
    rho = np.outer(psi, psi.conj())
    assert_allclose(compiled.wigner_correlation_density(rho), _kernels_py.wigner_correlation_density(rho), rtol=1e-15, atol=1e-14)


def test_correlation_layout():
    psi = np.arange(1, 9, dtype=complex)
    c = _kernels_py.wigner_correlation_pure(psi)
    # row i, column m holds psi[i + k] conj(psi[i - k]) with k = m - 4
    assert c[4, 4] == 25
    assert c[4, 5] == 6 * 4
    assert c[0, 5] == 0
    assert c[2, 2] == 1 * 5


@pytest.mark.parametrize("periodic", [False, True])
@pytest.mark.parametrize("drift", [0.0, 0.1])
def test_heat_steps_backends_agree(periodic, drift):
    x = np.linspace(-5, 5, 200)
    p = np.exp(-(x**2))
    a = compiled.heat_steps(p, 0.4, drift, 300, periodic)
    b = _kernels_py.heat_steps(p, 0.4, drift, 300, periodic)
    assert_allclose(a, b, rtol=1e-13, atol=1e-16)


def test_heat_steps_does_not_modify_input():
    p = np.exp(-np.linspace(-3, 3, 50) ** 2)
    before = p.copy()
    kernels.heat_steps(p, 0.3, 0.0, 10, False)
    assert np.array_equal(p, before)


def test_periodic_heat_conserves_sum():
    p = np.random.default_rng(0).uniform(size=64)
    out = compiled.heat_steps(p, 0.25, 0.05, 500, True)
    assert out.sum() == pytest.approx(p.sum(), rel=1e-13)


def test_backend_flag_reflects_selection():
    assert kernels.BACKEND == ("python" if os.environ.get("EUR_PURE_PYTHON") else "cython")
    code = "import eur.kernels as k; print(k.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"EUR_PURE_PYTHON": "1", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
