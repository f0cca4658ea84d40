"""Gauge field: link factors, transport, integrability, quadrature."""

import itertools
import math

import numpy as np
import pytest

from scaledgauge.gauge import (
    IntegrabilityReport,
    ParamPath,
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
from scaledgauge.lattice import (
    LatticePath,
    LatticeSpec,
    Plaquette,
    Step,
    enumerate_plaquettes,
    neighbor,
)


def all_monotone_paths(start, end, spec):
    """Oracle: every staircase path between two sites (clamped geometry)."""
    deltas = [e - s for s, e in zip(start, end)]
    steps = []
    for axis, d in enumerate(deltas):
        steps.extend([Step(axis, +1 if d > 0 else -1)] * abs(d))
    seen = set()
    for perm in itertools.permutations(steps):
        if perm in seen:
            continue
        seen.add(perm)
        yield LatticePath(start, perm)


def grid_spec(extent=(4, 4), spacing=0.5, boundary="periodic"):
    return LatticeSpec(extent, spacing, boundary)


def test_zero_field_gives_unit_links():
    spec = grid_spec()
    field = generate_field(spec, "zero")
    for site in spec.sites():
        for mu in range(spec.dims):
            assert link_factor(field, site, Step(mu, +1)).value == 1.0


def test_link_factor_formula():
    spec = LatticeSpec((4, 4), 0.1)
    field = generate_field(spec, "constant", components=0.5)
    lf = link_factor(field, (1, 1), Step(0, +1))
    assert lf.value == math.exp(0.05)


def test_forward_times_reverse_is_one_exactly():
    # the closed two-step path multiplies a link with its reverse; the
    # exponents cancel exactly, so the product is exactly 1
    spec = grid_spec()
    field = generate_field(spec, "seeded-random", seed=1, amplitude=0.9)
    for site in spec.sites():
        for mu in range(spec.dims):
            step = Step(mu, +1)
            round_trip = path_transport(
                field, LatticePath(site, (step, step.reversed())))
            assert round_trip.value == 1.0
            there = neighbor(site, step, spec)
            e_fwd = link_factor(field, site, step).exponent
            e_rev = link_factor(field, there, step.reversed()).exponent
            assert e_fwd + e_rev == 0.0


def test_empty_path_transport_is_one():
    spec = grid_spec()
    field = generate_field(spec, "seeded-random", seed=2)
    t = path_transport(field, LatticePath((0, 0), ()))
    assert t.value == 1.0 and t.link_product == 1.0


def test_two_step_transport_formula():
    # transport over x -> y -> z multiplies exp(A(x) d) and exp(A(y) d)
    spec = LatticeSpec((4, 4), 0.5)
    field = generate_field(spec, "seeded-random", seed=3, amplitude=0.7)
    x = (1, 2)
    path = LatticePath(x, (Step(0, +1), Step(1, +1)))
    y = neighbor(x, Step(0, +1), spec)
    want = math.exp(field.values[x][0] * 0.5 + field.values[y][1] * 0.5)
    got = path_transport(field, path).value
    assert abs(got - want) <= 1e-15 * want


def test_path_then_reversal_is_one():
    spec = grid_spec()
    field = generate_field(spec, "seeded-random", seed=4)
    path = LatticePath((0, 0), (Step(0, +1), Step(1, +1), Step(0, +1)))
    back = path.reversed_from((2, 1))
    full = LatticePath((0, 0), path.steps + back.steps)
    assert path_transport(field, full).value == 1.0


def test_dual_forms_agree_on_random_paths():
    spec = LatticeSpec((6, 6), 0.3)
    field = generate_field(spec, "seeded-random", seed=5, amplitude=1.0)
    rng = np.random.default_rng(6)
    for _ in range(1000):
        site = tuple(int(rng.integers(0, n)) for n in spec.extent)
        steps = tuple(Step(int(rng.integers(0, 2)), +1 if rng.random() < 0.5 else -1)
                      for _ in range(int(rng.integers(0, 12))))
        t = path_transport(field, LatticePath(site, steps))
        assert abs(t.value - t.link_product) <= 1e-12 * t.value


def test_loop_equals_exp_of_curl():
    spec = LatticeSpec((5, 5), 0.5)
    field = generate_field(spec, "seeded-random", seed=7, amplitude=1.0)
    for q in enumerate_plaquettes(spec):
        loop = loop_transport(field, q)
        want = math.exp(spec.spacing**2 * plaquette_curl(field, q))
        assert abs(loop - want) <= 1e-12 * want


def test_constant_field_has_zero_curl():
    spec = grid_spec()
    field = generate_field(spec, "constant", components=[0.3, -0.2])
    for q in enumerate_plaquettes(spec):
        assert plaquette_curl(field, q) == 0.0


def test_dyadic_gradient_curl_is_exactly_zero():
    # dyadic potential values and dyadic spacing make every difference
    # exact, so mixed differences cancel bitwise
    spec = LatticeSpec((4, 4), 0.5)
    pot = np.array([[(i * i - 3 * j + i * j) / 16.0 for j in range(4)]
                    for i in range(4)])
    field = generate_field(spec, "gradient-of-f", f=pot)
    for q in enumerate_plaquettes(spec):
        assert plaquette_curl(field, q) == 0.0
        assert loop_transport(field, q) == 1.0
    report = is_integrable(field, tol=0.0)
    assert report.integrable and report.worst_deviation == 0.0


def test_smooth_gradient_field_is_integrable():
    spec = LatticeSpec((6, 6), 0.25)
    field = generate_field(
        spec, "gradient-of-f",
        f=lambda site: math.sin(0.9 * site[0]) * math.cos(0.7 * site[1]))
    report = is_integrable(field, tol=1e-12)
    assert report.integrable


def test_vortex_field_is_not_integrable():
    spec = LatticeSpec((6, 6), 0.5)
    field = generate_field(spec, "vortex", strength=0.1)
    report = is_integrable(field, tol=1e-10)
    assert not report.integrable
    assert report.worst_deviation > 1e-3
    assert isinstance(report.worst_plaquette, Plaquette)


def test_zero_field_integrable_with_zero_deviation():
    report = is_integrable(generate_field(grid_spec(), "zero"))
    assert report.integrable and report.worst_deviation == 0.0


def test_path_independence_iff_zero_curl():
    # gradient field: all staircase paths between opposite corners agree;
    # vortex field: they spread by much more than the tolerance
    spec = LatticeSpec((4, 4), 0.5, boundary="clamped")
    start, end = (0, 0), (3, 3)
    n_paths = 0

    grad = generate_field(
        spec, "gradient-of-f",
        f=lambda site: math.sin(1.1 * site[0] + 0.3) + 0.5 * site[1] * site[0] / 7.0)
    values = []
    for path in all_monotone_paths(start, end, spec):
        values.append(path_transport(grad, path).value)
        n_paths += 1
    assert n_paths == 20  # C(6,3) staircase paths corner to corner
    spread = (max(values) - min(values)) / abs(values[0])
    assert spread <= 1e-12

    vortex = generate_field(spec, "vortex", strength=0.1)
    values = [path_transport(vortex, p).value
              for p in all_monotone_paths(start, end, spec)]
    spread = (max(values) - min(values)) / abs(values[0])
    assert spread > 1e-3


def test_gradient_transport_telescopes():
    # over a gradient field the transport exponent telescopes to
    # f(end) - f(start), whatever the path
    spec = LatticeSpec((5, 5), 0.25, boundary="clamped")
    pot = np.array([[math.cos(0.8 * i) + 0.1 * j * j for j in range(5)]
                    for i in range(5)])
    field = generate_field(spec, "gradient-of-f", f=pot)
    start, end = (0, 0), (3, 4)
    want = math.exp(pot[end] - pot[start])
    for path in all_monotone_paths(start, end, spec):
        got = path_transport(field, path).value
        assert abs(got - want) <= 1e-12 * want


def test_link_factor_first_order_convergence():
    rng = np.random.default_rng(8)
    a = rng.uniform(-1, 1, 32)
    deltas = [0.1, 0.05, 0.025, 0.0125]
    residuals = [np.max(np.abs(np.exp(a * d) - 1.0 - a * d)) for d in deltas]
    slope = np.polyfit(np.log(deltas), np.log(residuals), 1)[0]
    assert slope >= 1.9


def test_line_integral_zero_field():
    spec = LatticeSpec((4, 4), 1.0)
    path = straight_line_path((0, 0), (3, 2), spec)
    assert line_integral_transport(lambda p: np.zeros(2), path, 16) == 1.0


def test_line_integral_constant_field_exact():
    # constant integrand: Simpson is exact, transport is exp(A . (b - a))
    spec = LatticeSpec((5, 5), 0.5)
    a_vec = np.array([0.4, -0.3])
    path = straight_line_path((0, 0), (4, 2), spec)
    length_vec = spec.position((4, 2)) - spec.position((0, 0))
    want = math.exp(float(a_vec @ length_vec))
    got = line_integral_transport(lambda p: a_vec, path, 8)
    assert abs(got - want) <= 1e-14 * want


def test_line_integral_gradient_closed_form_and_order():
    # A = grad f: the transport is exp(f(b) - f(a)) for any path, and the
    # Simpson error falls off at fourth order
    spec = LatticeSpec((4, 4), 1.0)

    def f(p):
        return math.sin(1.3 * p[0] + 0.4) * math.cos(0.9 * p[1])

    def grad_f(p):
        return np.array([
            1.3 * math.cos(1.3 * p[0] + 0.4) * math.cos(0.9 * p[1]),
            -0.9 * math.sin(1.3 * p[0] + 0.4) * math.sin(0.9 * p[1]),
        ])

    start, end = (0, 0), (3, 3)
    path = straight_line_path(start, end, spec)
    want = math.exp(f(spec.position(end)) - f(spec.position(start)))
    errors = []
    ns = [4, 8, 16, 32]
    for n in ns:
        got = line_integral_transport(grad_f, path, n)
        errors.append(abs(got - want) / want)
    slope = np.polyfit(np.log([1.0 / n for n in ns]), np.log(errors), 1)[0]
    assert slope >= 3.5
    # order 4 predicts an 8^4 = 4096x drop from n=4 to n=32
    assert errors[0] / errors[-1] >= 1000.0


def test_param_path_endpoint_validation():
    spec = LatticeSpec((4, 4), 1.0)
    bad = ParamPath(point=lambda s: np.array([0.5, 0.0]),
                    velocity=lambda s: np.zeros(2),
                    start_site=(0, 0), end_site=(0, 0))
    with pytest.raises(ValueError):
        bad.check_endpoints(spec)
    good = straight_line_path((1, 1), (2, 3), spec)
    good.check_endpoints(spec)


def test_quadrature_count_validation():
    spec = LatticeSpec((4, 4), 1.0)
    path = straight_line_path((0, 0), (1, 0), spec)
    with pytest.raises(ValueError):
        line_integral_transport(lambda p: np.zeros(2), path, 3)
    with pytest.raises(ValueError):
        line_integral_transport(lambda p: np.zeros(2), path, 0)


def test_generators_deterministic_and_validated():
    spec = grid_spec()
    f1 = generate_field(spec, "seeded-random", seed=9)
    f2 = generate_field(spec, "seeded-random", seed=9)
    assert np.array_equal(f1.values, f2.values)
    assert np.all(generate_field(spec, "zero").values == 0.0)
    const = generate_field(spec, "gradient-of-f", f=lambda s: 4.25)
    assert np.all(const.values == 0.0)
    with pytest.raises(ValueError):
        generate_field(spec, "perlin")


def test_field_values_are_read_only():
    field = generate_field(grid_spec(), "seeded-random", seed=10)
    with pytest.raises(ValueError):
        field.values[0, 0, 0] = 1.0
