"""Experiment implementations behind the CLI subcommands.

Each experiment takes a validated configuration, runs deterministic
checks, and returns an :class:`ExperimentReport` plus CSV tables.
Smooth fixtures are periodic harmonics over a fixed physical box, so
spacing series refine the same continuum fields and convergence orders
are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import (
    ComplexLatticeField,
    anchor_dependence_report,
    covariant_derivative,
    first_order_covariant,
    transported_integral,
)
from .config import MATTER_KINDS, ExperimentConfig
from .errors import ConfigError, OutOfLatticeError
from .gauge import (
    RealGaugeField,
    generate_field,
    is_integrable,
    line_integral_transport,
    link_factor,
    loop_transport,
    path_transport,
    plaquette_curl,
    straight_line_path,
)
from .hilbert import (
    ScaledHilbertStructure,
    random_unitary,
    scaled_add,
    scaled_inner,
    scaled_scalar_mul,
    three_step_transport,
    vector_correspondence,
)
from .lattice import LatticePath, LatticeSpec, Step, enumerate_plaquettes, neighbor
from .numbers import (
    BaseElement,
    ScaledStructure,
    StructureValue,
    axiom_suite,
    element_of,
)
from .reports import (
    ExperimentReport,
    Table,
    check_at_least,
    check_exact,
    check_flag,
    check_max,
    check_slope,
    fit_log_slope,
)
from .theory import (
    EXPONENTIAL,
    FIRST_ORDER,
    PAULI,
    EPSILON,
    AbelianConfig,
    GaugeTransformation,
    MultipletField,
    SU2Config,
    covariance_residual_abelian,
    covariance_residual_su2,
    field_strength,
    gauge_transform_abelian,
    gauge_transform_su2,
    lagrangian_density,
    su2_cov_derivative,
    su2_link_grid,
    su2_rotation,
)

EXPERIMENT_ORDER = (
    "axioms", "transport", "integrability", "derivative-convergence",
    "hilbert", "gauge-abelian", "gauge-su2", "action",
)


def _seed_int(seed: int, tag: int) -> int:
    return int(np.random.SeedSequence([seed, tag]).generate_state(1)[0])


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, tag])


# -- smooth periodic fixtures -------------------------------------------------


@dataclass(frozen=True)
class Harmonic:
    """Real periodic wave a*sin(k.x + phase) over a fixed box."""

    amplitude: float
    wavenumbers: tuple[float, ...]
    phase: float

    def __call__(self, pos):
        arg = self.phase
        for k, p in zip(self.wavenumbers, pos):
            arg = arg + k * p
        return self.amplitude * np.sin(arg)

    def gradient(self, axis: int):
        k = self.wavenumbers

        def component(pos):
            arg = self.phase
            for kk, p in zip(k, pos):
                arg = arg + kk * p
            return self.amplitude * k[axis] * np.cos(arg)

        return component


@dataclass(frozen=True)
class ComplexWave:
    """Complex plane wave a*exp(i(k.x + phase)) over a fixed box."""

    amplitude: complex
    wavenumbers: tuple[float, ...]
    phase: float

    def __call__(self, pos):
        arg = self.phase
        for k, p in zip(self.wavenumbers, pos):
            arg = arg + k * p
        return self.amplitude * np.exp(1j * arg)


def _draw_harmonic(rng, box, amplitude) -> Harmonic:
    m = rng.integers(1, 3, size=len(box))
    sgn = rng.choice([-1.0, 1.0], size=len(box))
    k = tuple(2.0 * np.pi * mm * ss / L for mm, ss, L in zip(m, sgn, box))
    return Harmonic(amplitude, k, float(rng.uniform(0.0, 2.0 * np.pi)))


def _draw_wave(rng, box, amplitude) -> ComplexWave:
    m = rng.integers(1, 3, size=len(box))
    sgn = rng.choice([-1.0, 1.0], size=len(box))
    k = tuple(2.0 * np.pi * mm * ss / L for mm, ss, L in zip(m, sgn, box))
    return ComplexWave(amplitude, k, float(rng.uniform(0.0, 2.0 * np.pi)))


@dataclass(frozen=True)
class GaussianBump:
    """amp * exp(-|x - center|^2 / (2 sigma^2)); decays to ~0 at the box edge."""

    amplitude: float
    center: tuple[float, ...]
    sigma: float

    def __call__(self, pos):
        q = 0.0
        for c, p in zip(self.center, pos):
            q = q + (p - c) ** 2
        return self.amplitude * np.exp(-q / (2.0 * self.sigma**2))


@dataclass(frozen=True)
class Coordinate:
    """The coordinate function along one axis (not box-periodic)."""

    axis: int

    def __call__(self, pos):
        return pos[self.axis]


@dataclass(frozen=True)
class ConstantValue:
    value: complex

    def __call__(self, pos):
        return self.value * np.ones_like(pos[0])


def matter_fixture(kind: str, box: tuple[float, ...], seed: int, **params):
    """The matter-field fixture named by the configuration."""
    if kind == "plane-wave":
        return _draw_wave(_rng(seed, 31), box, params.get("amplitude", 1.0))
    if kind == "constant":
        return ConstantValue(complex(params.get("re", 1.2), params.get("im", -0.4)))
    if kind == "gaussian-bump":
        width = params.get("width_fraction", 0.125)
        return GaussianBump(params.get("amplitude", 1.0),
                            tuple(0.5 * L for L in box), width * min(box))
    if kind == "coordinate":
        return Coordinate(params.get("axis", 0))
    raise ConfigError(f"unknown matter fixture {kind!r}; expected {MATTER_KINDS}")


@dataclass(frozen=True)
class SmoothFixtures:
    """Continuum field family shared by every spacing in a series."""

    box: tuple[float, ...]
    psi: tuple[ComplexWave, ...]      # one wave per multiplet component
    phase: Harmonic                   # gauge-transformation angle
    theta: tuple[Harmonic, ...]       # SU(2) transformation parameters
    a: tuple[Harmonic, ...]           # per axis
    gamma: tuple[Harmonic, ...]       # per axis
    omega: tuple[tuple[Harmonic, ...], ...]  # [axis][j]


def make_fixtures(box: tuple[float, ...], seed: int, components: int = 1,
                  field_amplitude: float = 0.7) -> SmoothFixtures:
    rng = np.random.default_rng([seed, 777])
    dims = len(box)
    return SmoothFixtures(
        box=box,
        psi=tuple(_draw_wave(rng, box, 1.0) for _ in range(components)),
        phase=_draw_harmonic(rng, box, 0.6),
        theta=tuple(_draw_harmonic(rng, box, 0.5) for _ in range(3)),
        a=tuple(_draw_harmonic(rng, box, field_amplitude) for _ in range(dims)),
        gamma=tuple(_draw_harmonic(rng, box, field_amplitude) for _ in range(dims)),
        omega=tuple(tuple(_draw_harmonic(rng, box, 0.5) for _ in range(3))
                    for _ in range(dims)),
    )


def _positions(spec: LatticeSpec) -> list[np.ndarray]:
    idx = np.indices(spec.extent, dtype=float)
    return [idx[i] * spec.spacing for i in range(spec.dims)]


def sample_scalar(fn, spec: LatticeSpec) -> np.ndarray:
    return np.asarray(fn(_positions(spec)))


def sample_gauge(fns, spec: LatticeSpec) -> RealGaugeField:
    pos = _positions(spec)
    vals = np.stack([np.broadcast_to(fn(pos), spec.extent) for fn in fns], axis=-1)
    return RealGaugeField(vals, spec)


def sample_multiplet(waves, spec: LatticeSpec) -> MultipletField:
    pos = _positions(spec)
    vals = np.stack([np.broadcast_to(w(pos), spec.extent) for w in waves], axis=-1)
    return MultipletField(vals, spec)


def sample_omega(omega_fns, spec: LatticeSpec) -> np.ndarray:
    pos = _positions(spec)
    out = np.empty(spec.extent + (spec.dims, 3))
    for mu, per_axis in enumerate(omega_fns):
        for j, fn in enumerate(per_axis):
            out[..., mu, j] = np.broadcast_to(fn(pos), spec.extent)
    return out


def _box_of(spec: LatticeSpec) -> tuple[float, ...]:
    return tuple(n * spec.spacing for n in spec.extent)


def build_field(cfg: ExperimentConfig, spec: LatticeSpec | None = None) -> RealGaugeField:
    """The gauge field named by the configuration, on the given lattice."""
    spec = spec or cfg.lattice
    kind = cfg.field_kind
    params = dict(cfg.field_params)
    if kind == "seeded-random":
        params.setdefault("seed", _seed_int(cfg.seed, 1))
    if kind == "gradient-of-f":
        amplitude = params.pop("amplitude", 0.5)
        harmonic = _draw_harmonic(_rng(cfg.seed, 2), _box_of(spec), amplitude)
        params["f"] = sample_scalar(harmonic, spec)
    return generate_field(spec, kind, **params)


def _abelian_config(cfg: ExperimentConfig, spec: LatticeSpec,
                    fixtures: SmoothFixtures) -> AbelianConfig:
    c = cfg.couplings
    return AbelianConfig(
        a=sample_gauge(fixtures.a, spec),
        gamma=sample_gauge(fixtures.gamma, spec),
        g_r=c.g_r, g_i=c.g_i, mass=c.mass, a_mass=c.a_mass,
    )


def _su2_config(cfg: ExperimentConfig, spec: LatticeSpec,
                fixtures: SmoothFixtures) -> SU2Config:
    return SU2Config(
        abelian=_abelian_config(cfg, spec, fixtures),
        omega=sample_omega(fixtures.omega, spec),
        g=cfg.couplings.g,
    )


# -- experiments --------------------------------------------------------------


def run_axioms(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("axioms")
    rows = []
    tol = cfg.tol("axioms")
    for i, r in enumerate(cfg.scale_grid):
        suite = axiom_suite(ScaledStructure(r), cfg.samples,
                            seed=_seed_int(cfg.seed, 10 + i), tol=tol)
        for name in sorted(suite.residuals):
            value = suite.residuals[name]
            rows.append([r, name, value, tol, int(value <= tol)])
        report.add(check_max(f"axioms[r={r:g}]", suite.max_residual, tol))
    return report, {"residuals": (["scale", "axiom", "max_residual",
                                   "tolerance", "pass"], rows)}


def run_transport(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("transport")
    spec = cfg.lattice
    field = generate_field(spec, "seeded-random", seed=_seed_int(cfg.seed, 20),
                           amplitude=0.8)

    # round trip over every link must give exactly 1
    worst_round = 0.0
    worst_exponent = 0.0
    for site in spec.sites():
        for mu in range(spec.dims):
            fwd = Step(mu, +1)
            try:
                there = neighbor(site, fwd, spec)
            except OutOfLatticeError:
                continue
            t = path_transport(field, LatticePath(site, (fwd, fwd.reversed())))
            worst_round = max(worst_round, abs(t.value - 1.0))
            e_sum = (link_factor(field, site, fwd).exponent
                     + link_factor(field, there, fwd.reversed()).exponent)
            worst_exponent = max(worst_exponent, abs(e_sum))
    report.add(check_exact("reverse-link-round-trip", worst_round))
    report.add(check_exact("reverse-link-exponent-cancellation", worst_exponent))

    # dual transport forms on random paths
    rng = _rng(cfg.seed, 21)
    n_paths = max(1000, cfg.samples)
    worst_dual = 0.0
    for _ in range(n_paths):
        site = tuple(int(rng.integers(0, n)) for n in spec.extent)
        steps = []
        current = site
        for _ in range(int(rng.integers(1, 13))):
            for _attempt in range(100):
                step = Step(int(rng.integers(0, spec.dims)),
                            +1 if rng.random() < 0.5 else -1)
                try:
                    current = neighbor(current, step, spec)
                except OutOfLatticeError:
                    continue
                steps.append(step)
                break
        t = path_transport(field, LatticePath(site, tuple(steps)))
        worst_dual = max(worst_dual, abs(t.value - t.link_product)
                         / max(t.value, t.link_product))
    report.add(check_max("dual-form-agreement", worst_dual, cfg.tol("dual_form")))

    # plaquette loop = exp(spacing^2 * curl)
    worst_loop = 0.0
    for q in enumerate_plaquettes(spec):
        loop = loop_transport(field, q)
        predicted = float(np.exp(spec.spacing**2 * plaquette_curl(field, q)))
        worst_loop = max(worst_loop, abs(loop - predicted) / max(loop, predicted))
    report.add(check_max("loop-curl-identity", worst_loop, cfg.tol("loop_identity")))

    # link factor approaches 1 + A*spacing at second order
    a_samples = _rng(cfg.seed, 22).uniform(-1.0, 1.0, 64)
    residuals = []
    for d in cfg.delta_series:
        residuals.append(float(np.max(np.abs(
            np.exp(a_samples * d) - 1.0 - a_samples * d))))
    fit = fit_log_slope("link-first-order", cfg.delta_series, residuals)
    report.fits.append(fit)
    report.add(check_slope("link-first-order-order", fit.slope,
                           cfg.tol("link_order_slope")))

    # Simpson quadrature of a gradient field converges at fourth order;
    # distinct harmonic orders keep the potential varying along the
    # diagonal path
    box = _box_of(spec)
    k = tuple(2.0 * np.pi * (m + 1) / L for m, L in enumerate(box))
    f_cont = Harmonic(0.9, k, float(_rng(cfg.seed, 23).uniform(0, 2 * np.pi)))
    grad = [f_cont.gradient(mu) for mu in range(spec.dims)]

    def a_cont(point):
        pos = list(point)
        return np.array([g(pos) for g in grad])

    start = (0,) * spec.dims
    end = tuple(n - 1 for n in spec.extent)
    path = straight_line_path(start, end, spec)
    path.check_endpoints(spec)
    exact = float(np.exp(f_cont(list(spec.position(end)))
                         - f_cont(list(spec.position(start)))))
    n_series = (4, 8, 16, 32)
    quad_err = []
    quad_rows = []
    for n in n_series:
        approx = line_integral_transport(a_cont, path, n_quad=n)
        err = abs(approx - exact) / abs(exact)
        quad_err.append(max(err, 1e-16))
        quad_rows.append([n, approx, exact, err])
    fit = fit_log_slope("quadrature", [1.0 / n for n in n_series], quad_err)
    report.fits.append(fit)
    report.add(check_slope("quadrature-order", fit.slope, cfg.tol("quadrature_slope")))

    tables = {"quadrature": (["n_quad", "approx", "exact", "rel_error"], quad_rows)}
    return report, tables


def run_integrability(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("integrability")
    field = build_field(cfg)
    result = is_integrable(field, cfg.tol("integrability"))
    matched = result.integrable == (not cfg.expect_nonintegrable)
    report.add(check_flag("integrability-matches-expectation", matched))
    if cfg.expect_nonintegrable:
        report.add(check_at_least("nonintegrable-deviation",
                                  result.worst_deviation,
                                  cfg.tol("nonintegrable_min")))
    worst = result.worst_plaquette
    rows = [[cfg.field_kind, int(result.integrable),
             "" if worst is None else str(worst.corner),
             "" if worst is None else str(worst.axes),
             result.worst_deviation, result.tolerance]]
    return report, {"worst_plaquette": (
        ["field_kind", "integrable", "corner", "axes", "deviation",
         "tolerance"], rows)}


def run_derivative_convergence(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    """Covariant-vs-first-order convergence for the configured fixture.

    Residuals are taken over interior sites (the slab wrapping around
    the differenced axis is dropped) so that fixtures that are not
    box-periodic, like the coordinate function, stay meaningful.
    """
    report = ExperimentReport("derivative-convergence")
    box = (cfg.box_length, cfg.box_length)
    fixtures = make_fixtures(box, _seed_int(cfg.seed, 30))
    phi_fn = matter_fixture(cfg.matter_kind, box, _seed_int(cfg.seed, 31),
                            **cfg.matter_params)
    residuals = []
    ratio_rows = []
    worst_ratio = 0.0
    bound = 0.0
    for d, extent in cfg.convergence_extents():
        spec = LatticeSpec(extent, d)
        phi = ComplexLatticeField(
            np.broadcast_to(sample_scalar(phi_fn, spec), spec.extent), spec)
        a = sample_gauge(fixtures.a, spec)
        worst = 0.0
        for mu in range(spec.dims):
            cov = covariant_derivative(phi, a, mu)
            fo = first_order_covariant(phi, a, mu)
            keep = [slice(None)] * spec.dims
            keep[mu] = slice(0, extent[mu] - 1)
            keep = tuple(keep)
            worst = max(worst, float(np.max(np.abs(cov - fo)[keep])))
            # exact split: cov - fo = A*(phi_fwd - phi) + (e^{Ad}-1-Ad)*phi_fwd/d
            a_mu = a.values[..., mu]
            phi_fwd = np.roll(phi.values, -1, axis=mu)
            lead = a_mu * (phi_fwd - phi.values) + 0.5 * a_mu**2 * d * phi_fwd
            ratio = float(np.max(np.abs(cov - fo - lead)[keep])) / d**2
            worst_ratio = max(worst_ratio, ratio)
        residuals.append(worst)
        max_a = float(np.max(np.abs(a.values)))
        max_phi = float(np.max(np.abs(phi.values)))
        bound = max(bound, max_a**3 * max_phi * np.exp(max_a * d) / 6.0 * 1.5)
        ratio_rows.append([d, worst, worst_ratio])
    fit = fit_log_slope("covariant-vs-first-order", cfg.delta_series, residuals)
    report.fits.append(fit)
    report.add(check_slope("covariant-vs-first-order-slope", fit.slope,
                           cfg.tol("derivative_slope")))
    report.add(check_max("second-order-remainder", worst_ratio, bound))
    return report, {"residuals": (
        ["spacing", "max_difference", "remainder_over_spacing_sq"], ratio_rows)}


def run_hilbert(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("hilbert")
    n = cfg.hilbert_dimension
    rng = _rng(cfg.seed, 40)
    tol = cfg.tol("hilbert")

    def draw_vector():
        return rng.normal(size=n) + 1j * rng.normal(size=n)

    worst_inner = 0.0
    worst_norm = 0.0
    worst_axioms = 0.0
    worst_stage = 0.0
    for k in range(cfg.hilbert_samples):
        r = float(10.0 ** rng.uniform(-3, 3))
        v = random_unitary(n, _seed_int(cfg.seed, 4000 + k))
        s = ScaledHilbertStructure(r, v)
        psi = draw_vector()
        phi = draw_vector()
        u = vector_correspondence(psi, s)
        w = vector_correspondence(phi, s)
        plain = complex(np.vdot(psi, phi))
        got = scaled_inner(u, w, s).value
        worst_inner = max(worst_inner,
                          abs(got - plain) / max(abs(got), abs(plain), 1.0))

        unit = psi / np.linalg.norm(psi)
        u1 = vector_correspondence(unit, s)
        norm_el = element_of(scaled_inner(u1, u1, s))
        worst_norm = max(worst_norm, abs(norm_el.canonical - r) / r)

        # inner-product axioms inside the structure (values compared)
        alpha = StructureValue(complex(rng.normal(), rng.normal()), r)
        lin = scaled_inner(u, scaled_add(w, u, s), s).value
        split = scaled_inner(u, w, s).value + scaled_inner(u, u, s).value
        worst_axioms = max(worst_axioms,
                           abs(lin - split) / max(abs(lin), abs(split), 1.0))
        scal = scaled_inner(u, scaled_scalar_mul(alpha, w, s), s).value
        ref = alpha.value * scaled_inner(u, w, s).value
        worst_axioms = max(worst_axioms,
                           abs(scal - ref) / max(abs(scal), abs(ref), 1.0))
        sym = scaled_inner(w, u, s).value.conjugate()
        worst_axioms = max(worst_axioms,
                           abs(sym - got) / max(abs(sym), abs(got), 1.0))
        pos = scaled_inner(u, u, s).value
        if abs(pos.imag) > tol * abs(pos) or pos.real <= 0:
            worst_axioms = max(worst_axioms, 1.0)

        stages = three_step_transport(psi, s)
        worst_stage = max(worst_stage, float(np.max(np.abs(
            stages.transported - vector_correspondence(psi, s)))))
        target_norm = scaled_inner(stages.transported, stages.transported, s).value
        source_norm = complex(np.vdot(psi, psi))
        worst_stage = max(worst_stage,
                          abs(target_norm - source_norm) / abs(source_norm))

    report.add(check_max("inner-product-invariant", worst_inner, tol))
    report.add(check_max("norm-preservation", worst_norm, tol))
    report.add(check_max("hilbert-axioms", worst_axioms, tol))
    report.add(check_max("three-step-consistency", worst_stage, tol))

    # n=1 reduction against the scalar structure
    rng1 = _rng(cfg.seed, 41)
    worst_red = 0.0
    structure = ScaledStructure(7.5)
    s1 = ScaledHilbertStructure(7.5, np.eye(1))
    for _ in range(100):
        z = complex(rng1.normal(), rng1.normal())
        w = complex(rng1.normal(), rng1.normal())
        corr = vector_correspondence([z], s1)[0]
        ref = element_of(StructureValue(z, 7.5)).canonical
        worst_red = max(worst_red, abs(corr - ref) / max(abs(ref), 1.0))
        inner = element_of(scaled_inner([z], [w], s1)).canonical
        ref_inner = structure.mul(structure.conj(BaseElement(z)),
                                  BaseElement(w)).canonical
        worst_red = max(worst_red, abs(inner - ref_inner) / max(abs(inner), 1.0))
    report.add(check_max("n1-reduction", worst_red, tol))
    return report, {}


def _require_periodic(cfg: ExperimentConfig, experiment: str) -> None:
    if cfg.lattice.boundary != "periodic":
        raise ConfigError(f"the {experiment} experiment needs a periodic lattice")


def run_gauge_abelian(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("gauge-abelian")
    _require_periodic(cfg, "gauge-abelian")
    spec = cfg.lattice
    fixtures = make_fixtures(_box_of(spec), _seed_int(cfg.seed, 50))
    theory_cfg = _abelian_config(cfg, spec, fixtures)
    psi = sample_multiplet(fixtures.psi, spec)
    transform = GaugeTransformation(sample_scalar(fixtures.phase, spec))

    psi_t, cfg_t = gauge_transform_abelian(psi, theory_cfg, transform)
    report.add(check_exact("a-field-invariance", float(np.max(np.abs(
        cfg_t.a.values - theory_cfg.a.values)))))
    report.add(check_flag("a-field-same-object", cfg_t.a is theory_cfg.a))

    report.add(check_max(
        "exponential-covariance",
        covariance_residual_abelian(psi, theory_cfg, transform, EXPONENTIAL),
        cfg.tol("exp_covariance")))

    # first-order covariance shrinks linearly with spacing
    box = (cfg.box_length, cfg.box_length)
    conv = make_fixtures(box, _seed_int(cfg.seed, 51))
    residuals = []
    for d, extent in cfg.convergence_extents():
        sp = LatticeSpec(extent, d)
        residuals.append(covariance_residual_abelian(
            sample_multiplet(conv.psi, sp),
            _abelian_config(cfg, sp, conv),
            GaugeTransformation(sample_scalar(conv.phase, sp)),
            FIRST_ORDER))
    fit = fit_log_slope("first-order-covariance", cfg.delta_series, residuals)
    report.fits.append(fit)
    report.add(check_slope("first-order-covariance-slope", fit.slope,
                           cfg.tol("covariance_slope")))

    # field strength: antisymmetry exact, gauge invariance to rounding
    worst_anti = 0.0
    worst_inv = 0.0
    for mu in range(spec.dims):
        for nu in range(mu + 1, spec.dims):
            g1 = field_strength(theory_cfg.gamma, mu, nu).values
            g2 = field_strength(theory_cfg.gamma, nu, mu).values
            worst_anti = max(worst_anti, float(np.max(np.abs(g1 + g2))))
            g1p = field_strength(cfg_t.gamma, mu, nu).values
            worst_inv = max(worst_inv, float(np.max(np.abs(g1p - g1))))
    report.add(check_exact("field-strength-antisymmetry", worst_anti))
    report.add(check_max("field-strength-invariance", worst_inv,
                         cfg.tol("field_strength")))

    # the mass term of A is bitwise unchanged by gauge transformations
    density = lagrangian_density(psi, theory_cfg, "klein-gordon")
    density_t = lagrangian_density(psi_t, cfg_t, "klein-gordon")
    report.add(check_exact("a-mass-term-invariance", float(np.max(np.abs(
        density_t.a_mass - density.a_mass)))))

    rows = []
    for i, site in enumerate(spec.sites()):
        if i >= 4096:
            break
        rows.append([str(site), density.kinetic[site], density.mass[site],
                     density.a_mass[site].real, density.yang_mills[site].real,
                     density.total[site]])
    tables = {"density_terms": (
        ["site", "kinetic", "mass", "a_mass", "yang_mills", "total"], rows)}
    return report, tables


def run_gauge_su2(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("gauge-su2")
    _require_periodic(cfg, "gauge-su2")
    spec = cfg.lattice
    fixtures = make_fixtures(_box_of(spec), _seed_int(cfg.seed, 60), components=2)
    su2cfg = _su2_config(cfg, spec, fixtures)
    psi = sample_multiplet(fixtures.psi, spec)

    # Pauli commutators match the structure constants bitwise
    worst_pauli = 0.0
    for j in range(3):
        for k in range(3):
            lhs = (PAULI[j] @ PAULI[k] - PAULI[k] @ PAULI[j]) / 4.0
            rhs = 1j * np.einsum("l,lab->ab", EPSILON[j, k], PAULI) / 2.0
            worst_pauli = max(worst_pauli, float(np.max(np.abs(lhs - rhs))))
    report.add(check_exact("pauli-commutation", worst_pauli))

    worst_unit = 0.0
    worst_det = 0.0
    for mu in range(spec.dims):
        link = su2_link_grid(su2cfg, mu)
        prod = np.einsum("...ba,...bc->...ac", link.conj(), link)
        worst_unit = max(worst_unit, float(np.max(np.abs(prod - np.eye(2)))))
        su2_part = su2_rotation(cfg.couplings.g * spec.spacing
                                * su2cfg.omega[..., mu, :])
        det = (su2_part[..., 0, 0] * su2_part[..., 1, 1]
               - su2_part[..., 0, 1] * su2_part[..., 1, 0])
        worst_det = max(worst_det, float(np.max(np.abs(det - 1.0))))
    report.add(check_max("link-unitarity", worst_unit, cfg.tol("su2_unitarity")))
    report.add(check_max("su2-factor-determinant", worst_det,
                         cfg.tol("su2_unitarity")))

    # closed form against a 12-term series exponential
    rng = _rng(cfg.seed, 61)
    worst_series = 0.0
    for _ in range(32):
        vec = rng.uniform(-0.5, 0.5, 3)
        closed = su2_rotation(vec)
        gen = -1j * np.einsum("j,jab->ab", vec, PAULI)
        series = np.eye(2, dtype=complex)
        term = np.eye(2, dtype=complex)
        for k in range(1, 13):
            term = term @ gen / k
            series = series + term
        worst_series = max(worst_series, float(np.max(np.abs(closed - series))))
    report.add(check_max("closed-form-vs-series", worst_series,
                         cfg.tol("su2_series")))

    # exponential and first-order derivatives agree to first order
    box = (cfg.box_length, cfg.box_length)
    conv = make_fixtures(box, _seed_int(cfg.seed, 62), components=2)
    mode_res = []
    cov_res = []
    diag_rows = []
    identity_series = []
    for d, extent in cfg.convergence_extents():
        sp = LatticeSpec(extent, d)
        scfg = _su2_config(cfg, sp, conv)
        spsi = sample_multiplet(conv.psi, sp)
        worst_mode = 0.0
        for mu in range(sp.dims):
            de = su2_cov_derivative(spsi, scfg, mu, EXPONENTIAL)
            df = su2_cov_derivative(spsi, scfg, mu, FIRST_ORDER)
            worst_mode = max(worst_mode, float(np.max(np.abs(de - df))))
        mode_res.append(worst_mode)
        transform = GaugeTransformation(
            sample_scalar(conv.phase, sp),
            np.stack([np.broadcast_to(t(_positions(sp)), sp.extent)
                      for t in conv.theta], axis=-1))
        cov_res.append(covariance_residual_su2(spsi, scfg, transform, FIRST_ORDER))
        _, _, diags = gauge_transform_su2(spsi, scfg, transform)
        identity_series.append(diags.max_identity_component)
        diag_rows.append([d, diags.max_identity_component,
                          diags.max_imaginary_residue,
                          diags.max_gamma_discrepancy])
    fit_mode = fit_log_slope("mode-agreement", cfg.delta_series, mode_res)
    fit_cov = fit_log_slope("first-order-covariance", cfg.delta_series, cov_res)
    fit_id = fit_log_slope("identity-component", cfg.delta_series, identity_series)
    report.fits.extend([fit_mode, fit_cov, fit_id])
    report.add(check_slope("mode-agreement-slope", fit_mode.slope,
                           cfg.tol("covariance_slope")))
    report.add(check_slope("first-order-covariance-slope", fit_cov.slope,
                           cfg.tol("covariance_slope")))
    report.add(check_slope("identity-component-order", fit_id.slope,
                           cfg.tol("su2_identity_slope")))

    # a global rotation acts adjointly and preserves |Omega| per site
    theta0 = np.empty(spec.extent + (3,))
    theta0[...] = (0.4, -0.7, 0.2)
    global_t = GaugeTransformation(np.zeros(spec.extent), theta0)
    _, cfg_rot, _ = gauge_transform_su2(psi, su2cfg, global_t)
    norm_before = np.linalg.norm(su2cfg.omega, axis=-1)
    norm_after = np.linalg.norm(cfg_rot.omega, axis=-1)
    report.add(check_max("global-rotation-norm",
                         float(np.max(np.abs(norm_after - norm_before))),
                         cfg.tol("global_rotation_norm")))

    tables = {"diagnostics": (
        ["spacing", "identity_component", "imaginary_residue",
         "gamma_discrepancy"], diag_rows)}
    return report, tables


def run_action(cfg: ExperimentConfig) -> tuple[ExperimentReport, dict[str, Table]]:
    report = ExperimentReport("action")
    _require_periodic(cfg, "action")
    spec = cfg.lattice
    box = _box_of(spec)
    # the transport field must be integrable: build it from a potential
    potential = sample_scalar(_draw_harmonic(_rng(cfg.seed, 70), box, 0.6), spec)
    a = generate_field(spec, "gradient-of-f", f=potential)
    fixtures = make_fixtures(box, _seed_int(cfg.seed, 71))
    c = cfg.couplings
    theory_cfg = AbelianConfig(a=a, gamma=sample_gauge(fixtures.gamma, spec),
                               g_r=c.g_r, g_i=c.g_i, mass=c.mass, a_mass=c.a_mass)
    psi = sample_multiplet(fixtures.psi, spec)
    density = lagrangian_density(psi, theory_cfg, "klein-gordon")
    phi = ComplexLatticeField(density.total, spec)

    check = is_integrable(a, cfg.tol("integrability"))
    report.add(check_flag("transport-field-integrable", check.integrable))

    # spread anchors along the main diagonal
    n_anchors = min(cfg.anchors, min(spec.extent))
    anchors = []
    for i in range(n_anchors):
        frac = i / max(n_anchors - 1, 1)
        anchors.append(tuple(int(round(frac * (n - 1))) for n in spec.extent))
    anchors = list(dict.fromkeys(anchors))

    result = anchor_dependence_report(phi, a, anchors)
    report.add(check_max("anchor-covariance", result.max_deviation,
                         cfg.tol("anchor_covariance")))

    base = transported_integral(phi, a, anchors[0], "require-integrable")
    other = transported_integral(phi, a, anchors[0], "reversed-staircase")
    report.add(check_max("path-rule-agreement",
                         abs(base - other) / max(abs(base), abs(other)),
                         cfg.tol("anchor_covariance")))

    anchor_rows = [[str(s), transported_integral(phi, a, s)] for s in anchors]
    pair_rows = [[str(p.anchor_a), str(p.anchor_b), p.transport_ab,
                  p.integral_a, p.integral_b, p.deviation]
                 for p in result.pairs]
    tables = {
        "anchors": (["anchor", "integral"], anchor_rows),
        "anchor_pairs": (["anchor_a", "anchor_b", "transport",
                          "integral_a", "integral_b", "deviation"], pair_rows),
    }
    return report, tables


EXPERIMENTS = {
    "axioms": run_axioms,
    "transport": run_transport,
    "integrability": run_integrability,
    "derivative-convergence": run_derivative_convergence,
    "hilbert": run_hilbert,
    "gauge-abelian": run_gauge_abelian,
    "gauge-su2": run_gauge_su2,
    "action": run_action,
}
