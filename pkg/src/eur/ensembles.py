"""Seeded random state families used by the scenarios and the property tests.

All draws come from ``numpy.random.default_rng(seed)`` (the PCG64 bit generator),
so a seed fixes every state.
"""

from __future__ import annotations

import numpy as np

from .grid import EPR, Gaussian, GridDensity, Product, Superposition, build_state


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def chirped_gaussian(rng: np.random.Generator, mu=(-2.0, 2.0), sigma=(0.5, 2.0), p0=(-3.0, 3.0),
                     chirp=(-0.5, 0.5)) -> Gaussian:
    """Gaussian with centre, width, boost and chirp drawn uniformly from the given ranges."""
    return Gaussian(
        mu=float(rng.uniform(*mu)),
        sigma=float(rng.uniform(*sigma)),
        p0=float(rng.uniform(*p0)),
        chirp=float(rng.uniform(*chirp)),
    )


def gaussian_superposition(rng: np.random.Generator, terms: int = 3, mu=(-3.0, 3.0), sigma=(0.5, 1.5),
                           p0=(-3.0, 3.0), chirp=(-0.3, 0.3)) -> Superposition:
    """Superposition of chirped Gaussians with random complex weights."""
    out = []
    for _ in range(terms):
        c = rng.uniform(0.3, 1.0) * np.exp(2j * np.pi * rng.uniform())
        out.append((complex(c), chirped_gaussian(rng, mu, sigma, p0, chirp)))
    return Superposition(tuple(out))


def smooth_state(rng: np.random.Generator, **ranges):
    """Either a single chirped Gaussian or a superposition of two or three, with equal odds."""
    if rng.uniform() < 0.5:
        return chirped_gaussian(rng, **ranges)
    return gaussian_superposition(rng, terms=int(rng.integers(2, 4)), **ranges)


def rank2_mixture(rng: np.random.Generator, grid, hbar: float = 1.0, **ranges) -> GridDensity:
    """Mixture of two random smooth pure states with weight w in [0.2, 0.8]."""
    w = float(rng.uniform(0.2, 0.8))
    states = [build_state(smooth_state(rng, **ranges), grid, hbar) for _ in range(2)]
    return GridDensity.mixture([w, 1.0 - w], states)


def entangled_pair(rng: np.random.Generator, sep=(1.0, 2.0), sigma=(0.6, 1.0), p0=(-1.0, 1.0),
                   chirp=(-0.2, 0.2)) -> Superposition:
    """Superposition of two product states with the particles on opposite sides (non-Gaussian, entangled)."""
    d = float(rng.uniform(*sep))

    def g(centre):
        return chirped_gaussian(rng, (centre, centre), sigma, p0, chirp)

    c = complex(rng.uniform(0.5, 1.0) * np.exp(2j * np.pi * rng.uniform()))
    return Superposition(((1.0, Product(g(-d), g(d))), (c, Product(g(d), g(-d)))))


def reference_entangled_pair() -> Superposition:
    """Fixed non-Gaussian entangled state used by the EPR scenario."""
    return Superposition((
        (1.0, Product(Gaussian(-1.5, 0.8, 0.5, 0.1), Gaussian(1.5, 0.7, -0.3))),
        (0.8j, Product(Gaussian(1.5, 0.9, 0.0, -0.2), Gaussian(-1.5, 0.8, 0.4))),
    ))


def epr(sigma: float = 0.1, tau: float = 10.0, a: float = 1.0, p0: float = 2.0) -> EPR:
    return EPR(sigma, tau, a, p0)
