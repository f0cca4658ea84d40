"""The real gauge field and its parallel-transport machinery.

A real field A carries one component per site and direction.  The
factor attached to the directed link from x to its forward neighbor
along axis mu is exp(A_mu(x) * spacing); traversing the same link
backwards contributes the reciprocal.  Transport along a path is the
product of link factors, computed here as the exponential of the sum
of signed link exponents so that a path followed by its reversal gives
exactly 1 (the two exponents cancel exactly; the product of two rounded
exponentials would not).

Path independence of transport is equivalent to all plaquette curls
vanishing; :func:`is_integrable` sweeps every plaquette and reports the
worst loop deviation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, ScaledGaugeError
from .lattice import (
    CLAMPED,
    LatticePath,
    LatticeSpec,
    Plaquette,
    Site,
    Step,
    neighbor,
)

FIELD_KINDS = ("zero", "constant", "gradient-of-f", "vortex", "seeded-random")
INTEGRABILITY_TOL = 1e-10
DUAL_FORM_TOL = 1e-12
DEFAULT_QUADRATURE = 256


@dataclass(frozen=True)
class RealGaugeField:
    """Per-site, per-axis real components A_mu(x) on a lattice.

    ``potential`` is populated by the gradient generator with the site
    function whose forward differences the field stores.
    """

    values: np.ndarray
    spec: LatticeSpec
    potential: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.spec.extent + (self.spec.dims,):
            raise DimensionMismatchError(
                f"field shape {v.shape} does not match lattice "
                f"{self.spec.extent} with {self.spec.dims} axes")
        if not np.all(np.isfinite(v)):
            raise ValueError("gauge field has non-finite components")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        if self.potential is not None:
            p = np.asarray(self.potential, dtype=float).copy()
            p.flags.writeable = False
            object.__setattr__(self, "potential", p)


@dataclass(frozen=True)
class LinkFactor:
    """Transport factor of a single directed link: value = exp(exponent)."""

    value: float
    exponent: float


@dataclass(frozen=True)
class PathTransport:
    """Transport factor along a lattice path.

    ``value`` is exp of the summed link exponents; ``link_product`` is
    the same quantity as an explicit product of link factors and serves
    as the internal cross-check.
    """

    value: float
    path: LatticePath
    link_product: float


def link_exponent(a: RealGaugeField, site: Site, step: Step) -> float:
    """Signed exponent A_mu * spacing of a directed link.

    The field is evaluated at the tail of the forward-oriented link, so
    the reverse orientation negates the exact same product and the
    round trip cancels exactly.
    """
    spec = a.spec
    if step.orientation == +1:
        tail = site
    else:
        tail = neighbor(site, step, spec)
    e = a.values[tail][step.axis] * spec.spacing
    return e if step.orientation == +1 else -e


def link_factor(a: RealGaugeField, site: Site, step: Step) -> LinkFactor:
    """Link factor exp(+A*spacing) forward, exp(-A*spacing) backward."""
    e = link_exponent(a, site, step)
    return LinkFactor(value=float(np.exp(e)), exponent=e)


def path_transport(a: RealGaugeField, path: LatticePath) -> PathTransport:
    """Transport along a path: exp of the sum of signed link exponents.

    Also forms the explicit product of per-link factors; the two routes
    must agree to relative 1e-12 or the call raises.
    """
    site = path.start
    exponents = []
    product = 1.0
    for step in path.steps:
        lf = link_factor(a, site, step)
        exponents.append(lf.exponent)
        product *= lf.value
        site = neighbor(site, step, a.spec)
    value = float(np.exp(np.sum(exponents))) if exponents else 1.0
    if abs(value - product) > DUAL_FORM_TOL * max(abs(value), abs(product)):
        raise ScaledGaugeError(
            f"transport dual forms disagree: exp-sum {value!r} vs "
            f"product {product!r}")
    return PathTransport(value=value, path=path, link_product=product)


# -- plaquettes and integrability -----------------------------------------


def plaquette_curl(a: RealGaugeField, q: Plaquette) -> float:
    """Forward-difference curl of A on one plaquette."""
    mu, nu = q.axes
    spec = a.spec
    x = q.corner
    x_mu = neighbor(x, Step(mu, +1), spec)
    x_nu = neighbor(x, Step(nu, +1), spec)
    d = spec.spacing
    return (a.values[x_mu][nu] - a.values[x][nu]) / d \
        - (a.values[x_nu][mu] - a.values[x][mu]) / d


def loop_exponent(a: RealGaugeField, q: Plaquette) -> float:
    """Summed link exponents around the plaquette boundary."""
    mu, nu = q.axes
    spec = a.spec
    x = q.corner
    x_mu = neighbor(x, Step(mu, +1), spec)
    x_nu = neighbor(x, Step(nu, +1), spec)
    d = spec.spacing
    return (a.values[x][mu] + a.values[x_mu][nu]
            - a.values[x_nu][mu] - a.values[x][nu]) * d


def loop_transport(a: RealGaugeField, q: Plaquette) -> float:
    """Transport around the plaquette boundary; 1 exactly when curl is 0."""
    return float(np.exp(loop_exponent(a, q)))


def curl_grid(a: RealGaugeField, mu: int, nu: int) -> np.ndarray:
    """Curl on every plaquette corner at once (periodic index semantics)."""
    d = a.spec.spacing
    a_mu = a.values[..., mu]
    a_nu = a.values[..., nu]
    return (np.roll(a_nu, -1, axis=mu) - a_nu) / d \
        - (np.roll(a_mu, -1, axis=nu) - a_mu) / d


@dataclass(frozen=True)
class IntegrabilityReport:
    integrable: bool
    worst_plaquette: Plaquette | None
    worst_deviation: float
    tolerance: float


def is_integrable(a: RealGaugeField, tol: float = INTEGRABILITY_TOL) -> IntegrabilityReport:
    """Sweep all plaquettes; integrable iff max |loop transport - 1| <= tol."""
    spec = a.spec
    if spec.dims < 2:
        return IntegrabilityReport(True, None, 0.0, tol)
    worst = 0.0
    worst_q: Plaquette | None = None
    d = spec.spacing
    for mu, nu in itertools.combinations(range(spec.dims), 2):
        a_mu = a.values[..., mu]
        a_nu = a.values[..., nu]
        exponent = (a_mu + np.roll(a_nu, -1, axis=mu)
                    - np.roll(a_mu, -1, axis=nu) - a_nu) * d
        deviation = np.abs(np.exp(exponent) - 1.0)
        if spec.boundary == CLAMPED:
            mask = np.zeros(spec.extent, dtype=bool)
            sl = [slice(None)] * spec.dims
            sl[mu] = slice(0, spec.extent[mu] - 1)
            sl[nu] = slice(0, spec.extent[nu] - 1)
            mask[tuple(sl)] = True
            deviation = np.where(mask, deviation, 0.0)
        flat = int(np.argmax(deviation))
        dev = float(deviation.flat[flat])
        if dev > worst or worst_q is None:
            worst = dev
            corner = tuple(int(c) for c in np.unravel_index(flat, spec.extent))
            worst_q = Plaquette(corner, (mu, nu))
    return IntegrabilityReport(worst <= tol, worst_q, worst, tol)


# -- continuous-path transport ---------------------------------------------


@dataclass(frozen=True)
class ParamPath:
    """Continuous path s in [0,1] -> R^dims with its derivative map."""

    point: Callable[[float], np.ndarray]
    velocity: Callable[[float], np.ndarray]
    start_site: Site
    end_site: Site

    def check_endpoints(self, spec: LatticeSpec, tol: float = 1e-12) -> None:
        for s, site in ((0.0, self.start_site), (1.0, self.end_site)):
            want = spec.position(site)
            got = np.asarray(self.point(s), dtype=float)
            if np.max(np.abs(got - want)) > tol * max(1.0, float(np.max(np.abs(want)))):
                raise ValueError(f"path endpoint at s={s} is {got}, expected {want}")


def straight_line_path(a: Site, b: Site, spec: LatticeSpec) -> ParamPath:
    """Straight segment between two site positions."""
    pa = spec.position(a)
    pb = spec.position(b)
    return ParamPath(
        point=lambda s: pa + (pb - pa) * s,
        velocity=lambda s: pb - pa,
        start_site=tuple(a),
        end_site=tuple(b),
    )


def line_integral_transport(
    a_cont: Callable[[np.ndarray], np.ndarray],
    path: ParamPath,
    n_quad: int = DEFAULT_QUADRATURE,
) -> float:
    """exp of the line integral of a continuous field along a path.

    The exponent int_0^1 A(P(s)) . dP/ds ds is evaluated with composite
    Simpson quadrature on n_quad intervals (n_quad even, >= 2).
    """
    if n_quad < 2 or n_quad % 2 != 0:
        raise ValueError("n_quad must be an even count >= 2")
    s = np.linspace(0.0, 1.0, n_quad + 1)
    g = np.empty(n_quad + 1)
    for i, si in enumerate(s):
        g[i] = float(np.dot(np.asarray(a_cont(np.asarray(path.point(si)))),
                            np.asarray(path.velocity(si))))
    if not np.all(np.isfinite(g)):
        raise ValueError("non-finite integrand sample")
    h = 1.0 / n_quad
    integral = (h / 3.0) * (g[0] + g[-1] + 4.0 * g[1:-1:2].sum() + 2.0 * g[2:-2:2].sum())
    return float(np.exp(integral))


# -- field generators --------------------------------------------------------


def generate_field(spec: LatticeSpec, kind: str, **params) -> RealGaugeField:
    """Deterministic test-fixture fields.

    kinds:
      zero            no parameters
      constant        components: scalar or per-axis sequence
      gradient-of-f   f: callable site -> value, or per-site array;
                      stores the potential and its forward differences
      vortex          strength (default 0.1), center in physical units
                      (default lattice middle); rotates in the (0,1) plane
      seeded-random   seed, amplitude (default 1.0), uniform in [-amp, amp]
    """
    shape = spec.extent + (spec.dims,)
    if kind == "zero":
        return RealGaugeField(np.zeros(shape), spec)
    if kind == "constant":
        comp = params.get("components", 0.0)
        vals = np.broadcast_to(np.asarray(comp, dtype=float), shape).copy()
        return RealGaugeField(vals, spec)
    if kind in ("gradient-of-f", "gradient"):
        f = params["f"]
        if callable(f):
            pot = np.empty(spec.extent)
            for site in spec.sites():
                pot[site] = f(site)
        else:
            pot = np.asarray(f, dtype=float)
            if pot.shape != spec.extent:
                raise DimensionMismatchError(
                    f"potential shape {pot.shape} != extent {spec.extent}")
        vals = np.empty(shape)
        for mu in range(spec.dims):
            vals[..., mu] = (np.roll(pot, -1, axis=mu) - pot) / spec.spacing
        return RealGaugeField(vals, spec, potential=pot)
    if kind == "vortex":
        if spec.dims < 2:
            raise ValueError("vortex field needs at least 2 dimensions")
        strength = params.get("strength", 0.1)
        center = params.get("center")
        if center is None:
            center = [0.5 * (n - 1) * spec.spacing for n in spec.extent]
        center = np.asarray(center, dtype=float)
        vals = np.zeros(shape)
        for site in spec.sites():
            pos = spec.position(site) - center
            vals[site + (0,)] = -strength * pos[1]
            vals[site + (1,)] = +strength * pos[0]
        return RealGaugeField(vals, spec)
    if kind == "seeded-random":
        rng = np.random.default_rng(params.get("seed", 0))
        amp = params.get("amplitude", 1.0)
        return RealGaugeField(rng.uniform(-amp, amp, shape), spec)
    raise ValueError(f"unknown field kind {kind!r}; expected one of {FIELD_KINDS}")
