"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line (visible with `pytest -s`) and
enforces both the stated tolerance and the stated runtime budget.
"""

import cmath
import itertools
import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from reference_qed import ref_qed_dirac_density, ref_qed_kg_density

from scaledgauge.calculus import (
    ComplexLatticeField,
    anchor_dependence_report,
    covariant_derivative,
    first_order_covariant,
    plain_derivative,
)
from scaledgauge.cli import main
from scaledgauge.experiments import (
    make_fixtures,
    sample_gauge,
    sample_multiplet,
    sample_omega,
    sample_scalar,
)
from scaledgauge.gauge import (
    generate_field,
    link_factor,
    loop_transport,
    path_transport,
    plaquette_curl,
)
from scaledgauge.hilbert import (
    ScaledHilbertStructure,
    random_unitary,
    scaled_inner,
    vector_correspondence,
)
from scaledgauge.lattice import (
    LatticePath,
    LatticeSpec,
    Step,
    enumerate_plaquettes,
    neighbor,
)
from scaledgauge.numbers import (
    BaseElement,
    ScaledStructure,
    StructureValue,
    axiom_suite,
    element_of,
    eval_analytic,
    exp_in_structure,
    sample_values,
)
from scaledgauge.theory import (
    EPSILON,
    EXPONENTIAL,
    FIRST_ORDER,
    PAULI,
    AbelianConfig,
    GaugeTransformation,
    MultipletField,
    SU2Config,
    covariance_residual_abelian,
    covariance_residual_su2,
    gauge_transform_abelian,
    gauge_transform_su2,
    lagrangian_density,
    su2_link_grid,
    su2_rotation,
)

R_GRID = (1e-3, 1e-1, 1.0, 10.0, 1e3)
DELTAS = (0.1, 0.05, 0.025, 0.0125)


@contextmanager
def criterion(number, budget_s, description):
    started = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"criterion {number:02d} FAIL: {description}")
        raise
    elapsed = time.perf_counter() - started
    print(f"criterion {number:02d} PASS ({elapsed:.2f}s): {description}")
    assert elapsed < budget_s, f"criterion {number} exceeded {budget_s}s budget"


def test_criterion_01_axiom_suite():
    with criterion(1, 5.0, "field axioms hold to 1e-9 across the scale grid"):
        for i, r in enumerate(R_GRID):
            report = axiom_suite(ScaledStructure(r), n_samples=1000,
                                 seed=100 + i, tol=1e-9)
            assert report.passed, (r, report.failing(), report.max_residual)


def test_criterion_02_collapse_to_plain_setup():
    with criterion(2, 5.0, "r=1 and A=0 collapse to the plain setup"):
        # scaled operations are bitwise plain at r = 1
        s = ScaledStructure(1.0)
        rng = np.random.default_rng(200)
        for zu, zv in zip(sample_values(rng, 200), sample_values(rng, 200)):
            zu, zv = complex(zu), complex(zv)
            u, v = BaseElement(zu), BaseElement(zv)
            assert s.add(u, v).canonical == zu + zv
            assert s.sub(u, v).canonical == zu - zv
            assert s.mul(u, v).canonical == zu * zv
            assert s.div(u, v).canonical == zu / zv
            assert s.conj(u).canonical == zu.conjugate()
            assert s.value_of(u).value == zu
            assert element_of(StructureValue(complex(zu), 1.0)).canonical == zu

        # covariant derivative with A = 0 is bitwise the plain derivative
        spec = LatticeSpec((6, 6), 0.25)
        phi = ComplexLatticeField(
            rng.normal(size=spec.extent) + 1j * rng.normal(size=spec.extent), spec)
        zero = generate_field(spec, "zero")
        for mu in range(2):
            assert np.array_equal(covariant_derivative(phi, zero, mu),
                                  plain_derivative(phi, mu))
            assert np.array_equal(first_order_covariant(phi, zero, mu),
                                  plain_derivative(phi, mu))

        # densities with A = 0 match the independent standard reference
        fx = make_fixtures((1.5, 1.5), 201)
        gamma = sample_gauge(fx.gamma, spec)
        cfg = AbelianConfig(zero, gamma, g_r=0.8, g_i=1.1, mass=0.5, a_mass=0.3)
        psi = sample_multiplet(fx.psi, spec)
        density = lagrangian_density(psi, cfg, "klein-gordon")
        kin, mass, ym = ref_qed_kg_density(psi.values, gamma.values, 1.1, 0.5, 0.25)
        for got, want in ((density.kinetic, kin), (density.mass, mass),
                          (density.yang_mills, ym)):
            scale = max(1.0, float(np.max(np.abs(want))))
            assert np.max(np.abs(got - want)) <= 1e-15 * scale
        assert np.all(density.a_mass == 0.0)

        spinor = MultipletField(rng.normal(size=spec.extent + (4,))
                                + 1j * rng.normal(size=spec.extent + (4,)), spec)
        dirac = lagrangian_density(spinor, cfg, "dirac")
        kin, mass, ym = ref_qed_dirac_density(spinor.values, gamma.values,
                                              1.1, 0.5, 0.25)
        for got, want in ((dirac.kinetic, kin), (dirac.mass, mass),
                          (dirac.yang_mills, ym)):
            scale = max(1.0, float(np.max(np.abs(want))))
            assert np.max(np.abs(got - want)) <= 1e-15 * scale


def test_criterion_03_analytic_scaling():
    with criterion(3, 2.0, "analytic functions scale by r to 1e-9"):
        rng = np.random.default_rng(300)
        for k in range(100):
            r = float(rng.choice(R_GRID))
            s = ScaledStructure(r)
            degree = int(rng.integers(0, 9))
            coeffs = [complex(a, b) for a, b in
                      zip(rng.normal(size=degree + 1), rng.normal(size=degree + 1))]
            zv = complex(rng.normal(), rng.normal())
            out = eval_analytic(coeffs, StructureValue(zv, r), s)
            plain = 0j
            for c in reversed(coeffs):
                plain = plain * zv + c
            hint = sum(abs(c) * abs(zv) ** j for j, c in enumerate(coeffs))
            assert abs(element_of(out).canonical - r * plain) \
                <= 1e-9 * r * max(abs(plain), hint)
            # exponential through the structure's own series
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            got = element_of(exp_in_structure(StructureValue(a, r), s)).canonical
            want = r * cmath.exp(a)
            assert abs(got - want) <= 1e-9 * abs(want)


def test_criterion_04_link_loop_exactness():
    with criterion(4, 10.0, "links invert exactly; loops equal exp(d^2 curl) "
                            "to 1e-12 on an 8^4 random field"):
        spec = LatticeSpec((8, 8, 8, 8), 0.3)
        field = generate_field(spec, "seeded-random", seed=400, amplitude=0.9)
        for site in spec.sites():
            for mu in range(4):
                step = Step(mu, +1)
                t = path_transport(field, LatticePath(site, (step, step.reversed())))
                assert t.value == 1.0
        for q in enumerate_plaquettes(spec):
            loop = loop_transport(field, q)
            want = float(np.exp(spec.spacing**2 * plaquette_curl(field, q)))
            assert abs(loop - want) <= 1e-12 * max(loop, want)


def test_criterion_05_path_independence_iff_zero_curl():
    with criterion(5, 5.0, "staircase transport spread: <=1e-12 for gradients, "
                           ">1e-3 for the vortex"):
        spec = LatticeSpec((4, 4), 0.5, boundary="clamped")
        start, end = (0, 0), (3, 3)
        steps_sets = list(set(itertools.permutations(
            [Step(0, +1)] * 3 + [Step(1, +1)] * 3)))
        assert len(steps_sets) == 20

        grad = generate_field(
            spec, "gradient-of-f",
            f=lambda site: np.sin(1.0 * site[0]) + 0.2 * site[0] * site[1])
        values = [path_transport(grad, LatticePath(start, steps)).value
                  for steps in steps_sets]
        assert (max(values) - min(values)) / max(values) <= 1e-12

        vortex = generate_field(spec, "vortex", strength=0.1)
        values = [path_transport(vortex, LatticePath(start, steps)).value
                  for steps in steps_sets]
        assert (max(values) - min(values)) / max(values) > 1e-3


def test_criterion_06_derivative_consistency():
    with criterion(6, 10.0, "covariant vs first-order derivative converges "
                            "with slope >= 0.9"):
        fx = make_fixtures((1.6, 1.6), 600)
        residuals = []
        for d in DELTAS:
            n = int(round(1.6 / d))
            spec = LatticeSpec((n, n), d)
            phi = ComplexLatticeField(sample_scalar(fx.psi[0], spec), spec)
            a = sample_gauge(fx.a, spec)
            worst = max(
                float(np.max(np.abs(covariant_derivative(phi, a, mu)
                                    - first_order_covariant(phi, a, mu))))
                for mu in range(2))
            residuals.append(worst)
        slope = np.polyfit(np.log(DELTAS), np.log(residuals), 1)[0]
        assert slope >= 0.9, (slope, residuals)


def test_criterion_07_abelian_gauge_laws():
    with criterion(7, 20.0, "A invariant bitwise; exact link covariance to "
                            "1e-12; first-order covariance slope >= 0.9"):
        spec = LatticeSpec((8, 8), 0.25)
        fx = make_fixtures((2.0, 2.0), 700)
        cfg = AbelianConfig(a=sample_gauge(fx.a, spec),
                            gamma=sample_gauge(fx.gamma, spec),
                            g_r=0.8, g_i=1.1, mass=0.5, a_mass=0.3)
        psi = sample_multiplet(fx.psi, spec)
        t = GaugeTransformation(sample_scalar(fx.phase, spec))
        _, cfg_t = gauge_transform_abelian(psi, cfg, t)
        assert cfg_t.a is cfg.a
        assert np.array_equal(cfg_t.a.values, cfg.a.values)
        assert covariance_residual_abelian(psi, cfg, t, EXPONENTIAL) <= 1e-12

        residuals = []
        for d in DELTAS:
            n = int(round(1.6 / d))
            sp = LatticeSpec((n, n), d)
            fo = make_fixtures((1.6, 1.6), 701)
            residuals.append(covariance_residual_abelian(
                sample_multiplet(fo.psi, sp),
                AbelianConfig(sample_gauge(fo.a, sp), sample_gauge(fo.gamma, sp),
                              0.8, 1.1, 0.5, 0.3),
                GaugeTransformation(sample_scalar(fo.phase, sp)),
                FIRST_ORDER))
        slope = np.polyfit(np.log(DELTAS), np.log(residuals), 1)[0]
        assert slope >= 0.9, (slope, residuals)


def test_criterion_08_su2_gauge_laws():
    with criterion(8, 30.0, "SU(2) links unitary and unimodular to 1e-12; "
                            "Pauli algebra exact; adjoint action preserves "
                            "|Omega|; covariance slope >= 0.9"):
        for j, k in itertools.product(range(3), range(3)):
            lhs = (PAULI[j] @ PAULI[k] - PAULI[k] @ PAULI[j]) / 4.0
            rhs = 1j * np.einsum("l,lab->ab", EPSILON[j, k], PAULI) / 2.0
            assert np.array_equal(lhs, rhs)

        spec = LatticeSpec((8, 8), 0.25)
        fx = make_fixtures((2.0, 2.0), 800, components=2)
        cfg = SU2Config(
            abelian=AbelianConfig(sample_gauge(fx.a, spec),
                                  sample_gauge(fx.gamma, spec),
                                  0.8, 1.1, 0.5, 0.3),
            omega=sample_omega(fx.omega, spec), g=0.9)
        psi = sample_multiplet(fx.psi, spec)
        for mu in range(2):
            links = su2_link_grid(cfg, mu)
            unit = np.einsum("...ba,...bc->...ac", links.conj(), links)
            assert np.max(np.abs(unit - np.eye(2))) <= 1e-12
            rot = su2_rotation(0.9 * spec.spacing * cfg.omega[..., mu, :])
            det = rot[..., 0, 0] * rot[..., 1, 1] - rot[..., 0, 1] * rot[..., 1, 0]
            assert np.max(np.abs(det - 1.0)) <= 1e-12

        theta = np.empty(spec.extent + (3,))
        theta[...] = (0.7, -0.2, 0.4)
        _, cfg_rot, _ = gauge_transform_su2(
            psi, cfg, GaugeTransformation(np.zeros(spec.extent), theta))
        before = np.linalg.norm(cfg.omega, axis=-1)
        after = np.linalg.norm(cfg_rot.omega, axis=-1)
        assert np.max(np.abs(after - before)) <= 1e-12

        fo = make_fixtures((1.6, 1.6), 801, components=2)
        residuals = []
        for d in DELTAS:
            n = int(round(1.6 / d))
            sp = LatticeSpec((n, n), d)
            scfg = SU2Config(
                abelian=AbelianConfig(sample_gauge(fo.a, sp),
                                      sample_gauge(fo.gamma, sp),
                                      0.8, 1.1, 0.5, 0.3),
                omega=sample_omega(fo.omega, sp), g=0.9)
            pos_theta = np.stack(
                [sample_scalar(t, sp) for t in fo.theta], axis=-1)
            transform = GaugeTransformation(sample_scalar(fo.phase, sp), pos_theta)
            residuals.append(covariance_residual_su2(
                sample_multiplet(fo.psi, sp), scfg, transform, FIRST_ORDER))
        slope = np.polyfit(np.log(DELTAS), np.log(residuals), 1)[0]
        assert slope >= 0.9, (slope, residuals)


def test_criterion_09_scaled_hilbert_invariants():
    with criterion(9, 5.0, "scaled inner products reproduce plain ones to "
                           "1e-12 over 1000 random draws"):
        rng = np.random.default_rng(900)
        for k in range(1000):
            r = float(10.0 ** rng.uniform(-3, 3))
            v = random_unitary(2, 9000 + k)
            s = ScaledHilbertStructure(r, v)
            psi = rng.normal(size=2) + 1j * rng.normal(size=2)
            phi = rng.normal(size=2) + 1j * rng.normal(size=2)
            u = vector_correspondence(psi, s)
            w = vector_correspondence(phi, s)
            got = scaled_inner(u, w, s).value
            want = complex(np.vdot(psi, phi))
            assert abs(got - want) <= 1e-12 * max(abs(got), abs(want), 1e-6)
            unit = psi / np.linalg.norm(psi)
            u1 = vector_correspondence(unit, s)
            norm_element = element_of(scaled_inner(u1, u1, s))
            assert abs(norm_element.canonical - r) <= 1e-12 * r


def test_criterion_10_anchor_covariance():
    with criterion(10, 5.0, "transported integrals transform by the anchor "
                            "transport to 1e-10 across 5 anchors"):
        spec = LatticeSpec((6, 6), 0.25)
        pot = sample_scalar(
            make_fixtures((1.5, 1.5), 1000).phase, spec)
        a = generate_field(spec, "gradient-of-f", f=pot)
        rng = np.random.default_rng(1001)
        phi = ComplexLatticeField(
            rng.normal(size=spec.extent) + 1j * rng.normal(size=spec.extent), spec)
        anchors = [(0, 0), (1, 3), (2, 5), (4, 2), (5, 5)]
        report = anchor_dependence_report(phi, a, anchors)
        assert len(report.pairs) == 10
        assert report.max_deviation <= 1e-10


def test_criterion_11_determinism(tmp_path):
    with criterion(11, 120.0, "two `scaledgauge all` runs give byte-identical "
                              "CSV outputs"):
        config = {
            "seed": 424242,
            "lattice": {"extent": [6, 6], "spacing": 0.25},
            "field": {"kind": "gradient-of-f", "amplitude": 0.5},
            "samples": 1000,
            "hilbert": {"dimension": 2, "samples": 1000},
            "delta_series": [0.1, 0.05, 0.025, 0.0125],
            "box_length": 1.6,
            "anchors": 5,
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["all", "--config", str(path), "--out", str(out1)]) == 0
        assert main(["all", "--config", str(path), "--out", str(out2)]) == 0
        files1 = sorted(p.relative_to(out1) for p in out1.rglob("*.csv"))
        files2 = sorted(p.relative_to(out2) for p in out2.rglob("*.csv"))
        assert files1 == files2 and files1
        for rel in files1:
            assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes(), rel
