"""Named end-to-end scenarios producing verification reports."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ensembles
from .checks import RelationCheck
from .decomp import (
    classical_momentum_field,
    classical_momentum_field_mixed,
    number_classical_field,
    vector_classical_momentum,
)
from .finite_dim import (
    PAULI_X,
    PAULI_Z,
    FiniteObservable,
    FiniteState,
    classical_component,
    commutator_information,
    generalized_ur,
    ivanovic_check,
    mub_bases,
    random_density,
    random_observable,
    random_pure_state,
)
from .fisher import diffusion_entropy_rate_check, fisher_length_state
from .grid import (
    Box,
    Grid1D,
    Grid2D,
    GridDensity,
    GridDistribution,
    HarmonicEigenstate,
    NumberMixture,
    NumberState,
    build_state,
    condition_on_momentum,
    condition_on_position,
    moments,
    momentum_density,
    phase_distribution,
)
from .relations import (
    HarmonicPotential,
    correlation_relation_check,
    covariance_product_check,
    energy_checks,
    entropic_bound_estimates,
    exact_ur_conjugate,
    exact_ur_phase_number,
    exact_ur_position,
    matrix_ur_check,
    mixed_ur_check,
)
from .report import FieldExport, Report
from .wigner import marginal_errors, wigner_classical_momentum, wigner_function, wigner_purity


class ScenarioError(ValueError):
    """Unknown scenario or invalid parameters."""


@dataclass(frozen=True)
class ScenarioSpec:
    """What to run: scenario name, parameter overrides, grid size, hbar, seed and tolerance scale."""

    name: str
    params: dict = field(default_factory=dict)
    grid_n: int | None = None
    hbar: float = 1.0
    seed: int | None = None
    tol_scale: float = 1.0


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    defaults: dict
    grid_n: int | None
    seed: int | None
    run: Callable


@dataclass
class _Context:
    params: dict
    n: int | None
    hbar: float
    seed: int | None
    checks: list = field(default_factory=list)
    fields: list = field(default_factory=list)

    def add(self, *checks: RelationCheck, suffix: str = ""):
        for c in checks:
            if suffix:
                c = RelationCheck(f"{c.name} {suffix}", c.lhs, c.rhs, c.kind, c.tolerance, c.status, c.reference, c.relative, c.note)
            self.checks.append(c)

    def rng(self) -> np.random.Generator:
        return ensembles.make_rng(self.seed)


def _field_1d(name, f) -> FieldExport:
    return FieldExport(name, np.asarray(f.grid.points), np.asarray(f.values))


def _deviation_check(name, values, target, tol, ref) -> RelationCheck:
    """Largest deviation of an array from a constant, as an absolute equality."""
    dev = np.asarray(values) - target
    k = int(np.argmax(np.abs(dev)))
    return RelationCheck.equality(name, float(np.asarray(values)[k]), target, tol, ref, relative=False)


# --------------------------------------------------------------------------- scenarios


def _gaussian_family(ctx: _Context):
    p = ctx.params
    g = Grid1D.centered(p["half_width"], ctx.n)
    rng = ctx.rng()
    for i in range(int(p["draws"])):
        s = build_state(ensembles.chirped_gaussian(rng), g, ctx.hbar)
        ctx.add(*exact_ur_position(s, tol=1e-4), suffix=f"[{i}]")
        ctx.add(*exact_ur_conjugate(s, tol=1e-4), suffix=f"[{i}]")
        if i == 0:
            ctx.fields.append(_field_1d("p_cl", classical_momentum_field(s)))


def _harmonic(ctx: _Context):
    p = ctx.params
    m, w, hb = p["mass"], p["omega"], ctx.hbar
    g = Grid1D.centered(p["half_width"], ctx.n)
    ell = math.sqrt(hb / (m * w))
    for k in range(int(p["n_max"]) + 1):
        s = build_state(HarmonicEigenstate(k, m, w), g, hb)
        fl = fisher_length_state(s)
        _, var_p = moments(momentum_density(s))
        ctx.add(RelationCheck.equality(f"real wavefunction identity [n={k}]", fl.delta * math.sqrt(var_p), hb / 2, 1e-4, "exact-ur:real"))
        ctx.add(*energy_checks(s, HarmonicPotential(w), m), suffix=f"[n={k}]")
        if k == 1:
            ctx.add(RelationCheck.equality("fisher length [n=1]", fl.delta, ell / math.sqrt(6.0), 1e-4, "exact-ur:real"))
            ctx.add(RelationCheck.equality("momentum spread [n=1]", math.sqrt(var_p), math.sqrt(1.5) * hb / ell, 1e-4, "exact-ur:real"))
            ctx.fields.append(FieldExport("density_n1", g.points, np.abs(s.amplitudes) ** 2))
    boosted = build_state(HarmonicEigenstate(0, m, w, p["center"], p["p0"]), g, hb)
    ctx.add(*energy_checks(boosted, HarmonicPotential(w, p["center"]), m), suffix="[boosted]")
    ctx.add(entropic_bound_estimates(hb, m, w)[0])


def _bouncing_ball(ctx: _Context):
    p = ctx.params
    ctx.add(*entropic_bound_estimates(ctx.hbar, p["mass"], 1.0, p["g"])[1:])


def _epr(ctx: _Context):
    p = ctx.params
    sig, tau, a, p0 = p["sigma"], p["tau"], p["a"], p["p0"]
    desc = ensembles.epr(sig, tau, a, p0)
    hb = ctx.hbar
    g = Grid1D.centered(p["half_width"], ctx.n)
    s = build_state(desc, Grid2D(g, g), hb, sigmas=p["sigmas"])
    ctx.add(*covariance_product_check(s))
    ctx.add(*correlation_relation_check(s, gaussian_variant=True))
    ctx.add(*matrix_ur_check(s))

    # the narrow relative coordinate needs a finer grid than the covariance checks for pointwise fields
    gf = Grid1D.centered(p["collapse_half_width"], int(p["field_n"]))
    f1, f2 = vector_classical_momentum(build_state(desc, Grid2D(gf, gf), hb))
    ctx.add(_deviation_check("classical momentum particle 1", f1.values[f1.support], p0 / 2, 1e-6, "epr:classical-momentum"))
    ctx.add(_deviation_check("classical momentum particle 2", f2.values[f2.support], p0 / 2, 1e-6, "epr:classical-momentum"))

    # collapse under a momentum measurement on particle 2
    gc = Grid1D.centered(p["collapse_half_width"], int(p["collapse_n"]))
    sc = build_state(desc, Grid2D(gc, gc), hb)
    for q in (0.0, 1.0, 2.0):
        c = condition_on_momentum(sc, 2, q)
        f = classical_momentum_field(c)
        target = (sig**2 * q + tau**2 * (p0 - q)) / (sig**2 + tau**2)
        ctx.add(_deviation_check(f"collapse classical momentum [p2={q:g}]", f.values[f.support], target, 1e-3, "epr:collapse"))
        if q == 1.0:
            ctx.fields.append(_field_1d("p_cl_after_p2_1", f))

    # position measurement on particle 2 leaves particle 1 at p0/2; odd n puts x2 = 0 on a sample
    half = p["half_width"]
    odd = ctx.n if ctx.n % 2 else ctx.n - 1
    gx = Grid2D(Grid1D.centered(half, 4 * ctx.n), Grid1D.centered(half, odd))
    c = condition_on_position(build_state(desc, gx, hb, sigmas=p["sigmas"]), 2, 0.0)
    f = classical_momentum_field(c)
    ctx.add(_deviation_check("collapse classical momentum [x2=0]", f.values[f.support], p0 / 2, 1e-6, "epr:collapse"))

    # non-Gaussian entangled state
    gn = Grid1D.centered(10.0, 256)
    sn = build_state(ensembles.reference_entangled_pair(), Grid2D(gn, gn), hb)
    ctx.add(*matrix_ur_check(sn), suffix="[non-gaussian]")
    ctx.add(*correlation_relation_check(sn), suffix="[non-gaussian]")


def _fock(ctx: _Context):
    p = ctx.params
    hb, nphi = ctx.hbar, ctx.n
    k = int(p["n"])
    s01 = NumberState.from_terms({0: 1, 1: 1})
    ctx.add(exact_ur_phase_number(s01, n_phi=nphi), suffix="[0+1]")
    ctx.add(exact_ur_phase_number(NumberState.from_terms({0: 1, 2: 1}), n_phi=nphi), suffix="[0+2]")
    ctx.add(exact_ur_phase_number(NumberState.from_terms({0: 1, 1: 0.5j, 3: -0.7}), n_phi=nphi), suffix="[0+1+3]")
    ctx.add(exact_ur_phase_number(NumberState.fock(k), n_phi=nphi), suffix=f"[{k}]")
    mix = NumberMixture((0.6, 0.4), (s01, NumberState.from_terms({1: 1, 2: 1j})))
    ctx.add(exact_ur_phase_number(mix, n_phi=nphi), suffix="[mixture]")
    rotor = NumberState.from_terms({-1: 1, 0: 0.5, 2: 1j}, hbar=hb, mode="rotor")
    ctx.add(exact_ur_phase_number(rotor, n_phi=nphi), suffix="[rotor]")
    ctx.fields.append(_field_1d("n_cl", number_classical_field(s01, nphi)))
    d = phase_distribution(s01, nphi)
    ctx.fields.append(FieldExport("phase_density", d.grid.points, d.p))


def _mub(ctx: _Context):
    p = ctx.params
    d = int(p["d"])
    hb = ctx.hbar
    m = mub_bases(d)
    zero = np.zeros(d, dtype=complex)
    zero[0] = 1.0
    ctx.add(*ivanovic_check(FiniteState.from_vector(zero), m), suffix="[ground]")
    ctx.add(*ivanovic_check(FiniteState(np.eye(d) / d), m), suffix="[maximally mixed]")
    rng = ctx.rng()
    for i in range(int(p["states"])):
        rho = random_pure_state(d, rng) if i % 2 == 0 else random_density(d, rng)
        ctx.add(*ivanovic_check(rho, m), suffix=f"[{i}]")
    # qubit example: A = z, B = x, psi = (|0> + i|1>)/sqrt 2
    a, b = FiniteObservable(PAULI_Z), FiniteObservable(PAULI_X)
    psi = FiniteState.from_vector([1.0, 1.0j])
    info = commutator_information(a, b, psi, hb)
    dec = classical_component(a, b, psi)
    ctx.add(RelationCheck.equality("qubit commutator length", 1.0 / math.sqrt(info), hb / 2, 1e-12, "generalized-ur"))
    ctx.add(RelationCheck.equality("qubit nonclassical spread", math.sqrt(dec.var_nc), 1.0, 1e-12, "generalized-ur"))
    ctx.add(generalized_ur(a, b, psi, hb), suffix="[qubit]")
    ctx.add(generalized_ur(a, b, FiniteState.from_vector([math.cos(0.3), math.sin(0.3)]), hb), suffix="[real qubit]")
    for i in range(int(p["pairs"])):
        ra, rb = random_observable(d, rng), random_observable(d, rng)
        rho = random_pure_state(d, rng) if i % 2 == 0 else random_density(d, rng)
        ctx.add(generalized_ur(ra, rb, rho, hb, tol=1e-8), suffix=f"[{i}]")
        dec = classical_component(ra, rb, rho)
        scale = max(abs(dec.var_obs), 1.0)
        ctx.add(RelationCheck.equality(f"finite variance additivity [{i}]", dec.var_cl + dec.var_nc, dec.var_obs, 1e-10 * scale,
                                       "generalized-ur:additivity", relative=False))


def _diffusion(ctx: _Context):
    p = ctx.params
    g = Grid1D.centered(p["half_width"], ctx.n)
    gamma = p["gamma"]
    dt = p["cfl"] * g.dx**2 / (2.0 * gamma)
    steps = int(p["steps"])
    x = g.points
    s0 = p["sigma"]
    gauss = GridDistribution.from_samples(g, np.exp(-x * x / (2 * s0 * s0)))
    sep = p["separation"]
    bimodal = GridDistribution.from_samples(g, np.exp(-((x - sep) ** 2) / (2 * s0 * s0)) + 0.6 * np.exp(-((x + sep) ** 2) / (2 * s0 * s0)))
    for label, d, tol in (("gaussian", gauss, 0.01), ("bimodal", bimodal, 0.02)):
        rep = diffusion_entropy_rate_check(d, gamma, dt, steps, drift=p["drift"])
        for t, rate, pred, div in zip(rep.times, rep.entropy_rate, rep.fisher_rate, rep.divergent):
            name = f"entropy production {label} [t={t:.4g}]"
            if div:
                ctx.add(RelationCheck.divergent(name, pred, "de-bruijn", lhs=rate))
            else:
                ctx.add(RelationCheck.equality(name, rate, pred, tol, "de-bruijn"))
        if label == "gaussian" and p["drift"] == 0:
            # closed form: delta^2 = sigma^2 + 2 gamma t for a spreading Gaussian
            for t, rate in zip(rep.times, rep.entropy_rate):
                ctx.add(RelationCheck.equality(f"gaussian entropy rate closed form [t={t:.4g}]", rate, gamma / (s0 * s0 + 2 * gamma * t),
                                               tol, "de-bruijn"))


def _wigner_equivalence(ctx: _Context):
    p = ctx.params
    g = Grid1D.centered(p["half_width"], ctx.n)
    rng = ctx.rng()
    ranges = dict(mu=(-1.5, 1.5), sigma=(0.5, 1.2), p0=(-3.0, 3.0), chirp=(-0.3, 0.3))
    for i in range(int(p["states"])):
        s = build_state(ensembles.smooth_state(rng, **ranges), g, ctx.hbar)
        w = wigner_function(s)
        a, b = wigner_classical_momentum(w), classical_momentum_field(s)
        joint = a.support & b.support
        dev = float(np.abs(a.values[joint] - b.values[joint]).max())
        ex, ep = marginal_errors(w, s)
        tag = f"[{i}]"
        ctx.add(RelationCheck.equality(f"wigner classical momentum deviation {tag}", dev, 0.0, 1e-6, "wigner:equivalence", relative=False))
        ctx.add(RelationCheck.equality(f"wigner position marginal {tag}", ex, 0.0, 1e-6, "wigner:marginals", relative=False))
        ctx.add(RelationCheck.equality(f"wigner momentum marginal {tag}", ep, 0.0, 1e-6, "wigner:marginals", relative=False))
        ctx.add(RelationCheck.equality(f"wigner purity {tag}", wigner_purity(w), 1.0, 1e-6, "wigner:purity"))
        if i == 0:
            step = max(1, g.n // 128)
            ctx.fields.append(FieldExport("wigner", w.x_grid.points[::step], w.values[::step, ::step], w.p_grid.points[::step]))
            ctx.fields.append(_field_1d("p_cl_wigner", a))


def _mixed(ctx: _Context):
    p = ctx.params
    g = Grid1D.centered(p["half_width"], ctx.n)
    rng = ctx.rng()
    for i in range(int(p["mixtures"])):
        r = ensembles.rank2_mixture(rng, g, ctx.hbar)
        ctx.add(*mixed_ur_check(r), suffix=f"[{i}]")
        if i == 0:
            ctx.fields.append(_field_1d("p_cl_mixed", classical_momentum_field_mixed(r)))
    for i in range(int(p["pure"])):
        s = build_state(ensembles.smooth_state(rng), g, ctx.hbar)
        ur, ident, bound = mixed_ur_check(GridDensity.from_state(s))
        sat = RelationCheck.equality("pure saturation", ur.lhs, ur.rhs, 1e-4, "mixed-ur:position")
        ctx.add(sat, ident, bound, suffix=f"[pure {i}]")


def _box(ctx: _Context):
    p = ctx.params
    g = Grid1D.centered(p["half_width"], ctx.n)
    desc = Box(p["a"], p["b"])
    s = build_state(desc, g, ctx.hbar)
    ctx.add(*exact_ur_position(s))
    fl = fisher_length_state(s)
    if fl.divergent:
        ctx.add(RelationCheck.divergent("box fisher length", 0.0, "divergence", kind="inequality", lhs=fl.delta,
                                        note="epsilon sweep did not settle"))
    else:
        # a finite Fisher length for a box edge means the detector missed it
        ctx.add(RelationCheck.inequality("box fisher length", 0.0, 1.0, 0.0, "divergence", note="divergence not detected"))
    spreads = []
    for k in range(int(p["refinements"]) + 1):
        gk = Grid1D.centered(p["half_width"], ctx.n * 2**k)
        _, var_p = moments(momentum_density(build_state(desc, gk, ctx.hbar)))
        spreads.append(math.sqrt(var_p))
    for k in range(1, len(spreads)):
        ctx.add(RelationCheck.inequality(f"momentum spread grows under refinement [{k}]", spreads[k], spreads[k - 1] * (1 + 1e-3), 0.0,
                                         "divergence", note=f"n={ctx.n * 2**k}"))


REGISTRY: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario("gaussian-family", "exact position-momentum relation for seeded chirped boosted Gaussians",
                 {"draws": 20, "half_width": 20.0}, 4096, 7, _gaussian_family),
        Scenario("harmonic", "oscillator eigenstates: real-wavefunction identity, energy split, entropic estimate",
                 {"n_max": 5, "mass": 1.0, "omega": 1.0, "half_width": 12.0, "center": 0.5, "p0": 1.0}, 1024, None, _harmonic),
        Scenario("bouncing-ball", "entropic lower bound for a particle in a uniform field against the Airy ground state",
                 {"g": 1.0, "mass": 1.0}, None, None, _bouncing_ball),
        Scenario("epr", "two-particle EPR state: covariance and correlation relations, collapse under measurement",
                 {"sigma": 0.1, "tau": 10.0, "a": 1.0, "p0": 2.0, "half_width": 8 * math.pi, "sigmas": 4.5,
                  "collapse_n": 1024, "collapse_half_width": 16 * math.pi, "field_n": 2048}, 512, None, _epr),
        Scenario("fock", "phase-number and angle-angular momentum relations for number-basis states",
                 {"n": 3}, 256, None, _fock),
        Scenario("mub", "collision-length relation over complementary bases and the generalized relation",
                 {"d": 2, "states": 20, "pairs": 20}, None, 11, _mub),
        Scenario("diffusion", "entropy production under heat flow against the Fisher length",
                 {"gamma": 0.5, "sigma": 1.0, "separation": 3.0, "half_width": 20.0, "steps": 4000, "cfl": 0.9, "drift": 0.0},
                 800, None, _diffusion),
        Scenario("wigner-equivalence", "Wigner marginals, purity and quasiclassical momentum field",
                 {"states": 50, "half_width": 20.0}, 1024, 3, _wigner_equivalence),
        Scenario("mixed", "density-operator relation and its identity for random rank-2 mixtures",
                 {"mixtures": 10, "pure": 3, "half_width": 20.0}, 512, 5, _mixed),
        Scenario("box", "divergence detection for a uniform box state",
                 {"a": -1.0, "b": 1.0, "half_width": 4.0, "refinements": 3}, 256, None, _box),
    )
}


def resolve(spec: ScenarioSpec) -> tuple[Scenario, dict, int | None, int | None]:
    """Validate a spec against the registry and fill in defaults."""
    if spec.name not in REGISTRY:
        raise ScenarioError(f"unknown scenario {spec.name!r}; choose from {', '.join(sorted(REGISTRY))}")
    sc = REGISTRY[spec.name]
    params = dict(sc.defaults)
    for k, v in spec.params.items():
        if k not in params:
            raise ScenarioError(f"scenario {sc.name} has no parameter {k!r}; known: {', '.join(sorted(params))}")
        try:
            v = float(v)
        except (TypeError, ValueError):
            raise ScenarioError(f"parameter {k} must be a number, got {v!r}") from None
        if not math.isfinite(v):
            raise ScenarioError(f"parameter {k} must be finite")
        params[k] = int(v) if isinstance(sc.defaults[k], int) and v == int(v) else v
    n = sc.grid_n
    if n is not None:
        if spec.grid_n is not None:
            n = int(spec.grid_n)
        elif os.environ.get("EUR_DEFAULT_GRID_N"):
            n = int(os.environ["EUR_DEFAULT_GRID_N"])
    if n is not None and n < 8:
        raise ScenarioError(f"grid size must be at least 8, got {n}")
    seed = sc.seed if spec.seed is None else int(spec.seed)
    if not spec.hbar > 0:
        raise ScenarioError("hbar must be positive")
    return sc, params, n, seed


def run_scenario(spec: ScenarioSpec) -> Report:
    """Run one scenario; the report is deterministic for a fixed spec."""
    sc, params, n, seed = resolve(spec)
    ctx = _Context(params, n, float(spec.hbar), seed)
    start = time.perf_counter()
    sc.run(ctx)
    shown = dict(params)
    if n is not None:
        shown["grid_n"] = n
    if seed is not None:
        shown["seed"] = seed
    shown["hbar"] = float(spec.hbar)
    report = Report(sc.name, shown, ctx.checks, ctx.fields, time.perf_counter() - start)
    return report.scaled(spec.tol_scale) if spec.tol_scale != 1.0 else report
