"""Abelian and SU(2) gauge theory with the extra real scale field.

The gauge group is the product of a real scale factor GL(1,R) with the
usual U(1) (and SU(2)) phases.  Covariant derivatives come in two
modes:

* exponential: the neighbor value is multiplied by the full link factor
  exp(g_r*A*d) * exp(i*g_i*Gamma*d) (times the SU(2) link matrix), the
  lattice-gauge-theory form, covariant to machine precision under
  link-level transformations;
* first-order: the continuum expansion d' + g_r*A + i*g_i*Gamma
  (- i*g*Omega.tau), whose covariance residual vanishes linearly with
  the spacing.

Local gauge transformations rotate the matter field by the U(1)/SU(2)
phases and shift Gamma and Omega; the real field A is left untouched,
which is what makes a mass term for it admissible.

Conventions fixed here: metric signature (+,-,-,-) with axis 0 as time,
Dirac-representation gamma matrices, Pauli matrices with exact integer
and imaginary-unit entries.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError, InvalidCouplingError
from .gauge import RealGaugeField
from .lattice import PERIODIC, LatticeSpec, Site

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

# antisymmetric structure constants of su(2)
EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_i, _k, _j] = -1.0
EPSILON.flags.writeable = False

GAMMA = np.zeros((4, 4, 4), dtype=complex)
GAMMA[0] = np.diag([1, 1, -1, -1])
for _mu in range(1, 4):
    GAMMA[_mu, :2, 2:] = PAULI[_mu - 1]
    GAMMA[_mu, 2:, :2] = -PAULI[_mu - 1]
GAMMA.flags.writeable = False

EXPONENTIAL = "exponential"
FIRST_ORDER = "first-order"
_MODES = (EXPONENTIAL, FIRST_ORDER)


def metric_signs(dims: int) -> np.ndarray:
    """Diagonal of the metric, axis 0 timelike: (+1, -1, ...)."""
    signs = -np.ones(dims)
    signs[0] = 1.0
    return signs


@dataclass(frozen=True)
class MultipletField:
    """Per-site complex n-tuple (n=1 scalar, n=2 doublet, n=4 spinor)."""

    values: np.ndarray
    spec: LatticeSpec

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == len(self.spec.extent):
            v = v[..., np.newaxis]
        if v.shape[:-1] != self.spec.extent:
            raise DimensionMismatchError(
                f"multiplet shape {v.shape} does not sit on lattice {self.spec.extent}")
        if not np.all(np.isfinite(v)):
            raise ValueError("multiplet has non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def components(self) -> int:
        return self.values.shape[-1]


@dataclass(frozen=True)
class AbelianConfig:
    """Field content and couplings of the Abelian theory.

    ``a`` is the real scale gauge field with coupling ``g_r``; ``gamma``
    the U(1) field with coupling ``g_i``; ``mass`` the matter mass and
    ``a_mass`` the optional mass parameter of ``a``.
    """

    a: RealGaugeField
    gamma: RealGaugeField
    g_r: float
    g_i: float
    mass: float
    a_mass: float

    def __post_init__(self):
        if self.a.spec != self.gamma.spec:
            raise DimensionMismatchError("A and Gamma live on different lattices")
        for name in ("g_r", "g_i", "mass", "a_mass"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def spec(self) -> LatticeSpec:
        return self.a.spec


@dataclass(frozen=True)
class SU2Config:
    """Abelian content plus the three-component SU(2) field Omega."""

    abelian: AbelianConfig
    omega: np.ndarray
    g: float

    def __post_init__(self):
        spec = self.abelian.spec
        w = np.asarray(self.omega, dtype=float)
        if w.shape != spec.extent + (spec.dims, 3):
            raise DimensionMismatchError(
                f"omega shape {w.shape}, expected {spec.extent + (spec.dims, 3)}")
        if not np.all(np.isfinite(w)):
            raise ValueError("omega has non-finite components")
        if not np.isfinite(self.g):
            raise ValueError("g must be finite")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "omega", w)

    @property
    def spec(self) -> LatticeSpec:
        return self.abelian.spec

    @property
    def tau(self) -> np.ndarray:
        return PAULI

    @property
    def xi(self) -> np.ndarray:
        return EPSILON


@dataclass(frozen=True)
class GaugeTransformation:
    """Local transformation: U(1) phase per site, SU(2) parameters per site."""

    phase: np.ndarray
    rotation: np.ndarray | None = None

    def __post_init__(self):
        p = np.asarray(self.phase, dtype=float)
        if not np.all(np.isfinite(p)):
            raise ValueError("phase has non-finite entries")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "phase", p)
        if self.rotation is not None:
            r = np.asarray(self.rotation, dtype=float)
            if r.shape != p.shape + (3,):
                raise DimensionMismatchError(
                    f"rotation shape {r.shape}, expected {p.shape + (3,)}")
            if not np.all(np.isfinite(r)):
                raise ValueError("rotation has non-finite entries")
            r = r.copy()
            r.flags.writeable = False
            object.__setattr__(self, "rotation", r)


def _check_mode(mode: str) -> None:
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {_MODES}")


def _require_field(psi: MultipletField, spec: LatticeSpec) -> None:
    if psi.spec != spec:
        raise DimensionMismatchError("matter field and config lattices differ")
    if spec.boundary != PERIODIC:
        raise ValueError("gauge-theory derivatives need a periodic lattice")


def _forward(values: np.ndarray, axis: int) -> np.ndarray:
    return np.roll(values, -1, axis=axis)


def multiplet_derivative(psi: MultipletField, axis: int) -> np.ndarray:
    """Componentwise forward difference of the multiplet."""
    d = psi.spec.spacing
    return (_forward(psi.values, axis) - psi.values) / d


def abelian_cov_derivative(
    psi: MultipletField, cfg: AbelianConfig, axis: int, mode: str = EXPONENTIAL
) -> np.ndarray:
    """Covariant derivative with GL(1,R) x U(1) link factors."""
    _check_mode(mode)
    _require_field(psi, cfg.spec)
    d = cfg.spec.spacing
    coupled = cfg.g_r * cfg.a.values[..., axis] + 1j * cfg.g_i * cfg.gamma.values[..., axis]
    if mode == EXPONENTIAL:
        factor = np.exp(coupled * d)
        return (factor[..., None] * _forward(psi.values, axis) - psi.values) / d
    return multiplet_derivative(psi, axis) + coupled[..., None] * psi.values


def gauge_transform_abelian(
    psi: MultipletField, cfg: AbelianConfig, t: GaugeTransformation
) -> tuple[MultipletField, AbelianConfig]:
    """Apply a local U(1) transformation.

    The matter field picks up the phase, Gamma shifts by the forward
    difference of the phase function over g_i, and A is returned
    untouched (the same array object).
    """
    if cfg.g_i == 0:
        raise InvalidCouplingError("g_i = 0: Gamma shift is undefined")
    spec = cfg.spec
    if t.phase.shape != spec.extent:
        raise DimensionMismatchError(
            f"phase shape {t.phase.shape} != lattice extent {spec.extent}")
    _require_field(psi, spec)
    lam = np.exp(1j * t.phase)
    psi_values = lam[..., None] * psi.values
    d = spec.spacing
    gamma_values = np.empty_like(cfg.gamma.values)
    for mu in range(spec.dims):
        dphi = (_forward(t.phase, mu) - t.phase) / d
        gamma_values[..., mu] = cfg.gamma.values[..., mu] - dphi / cfg.g_i
    cfg_out = replace(cfg, gamma=RealGaugeField(gamma_values, spec))
    return MultipletField(psi_values, spec), cfg_out


def covariance_residual_abelian(
    psi: MultipletField,
    cfg: AbelianConfig,
    t: GaugeTransformation,
    mode: str = EXPONENTIAL,
) -> float:
    """max |D'(Lambda psi) - Lambda D psi| over sites, components, axes."""
    _check_mode(mode)
    psi_t, cfg_t = gauge_transform_abelian(psi, cfg, t)
    lam = np.exp(1j * t.phase)[..., None]
    worst = 0.0
    for mu in range(cfg.spec.dims):
        lhs = abelian_cov_derivative(psi_t, cfg_t, mu, mode)
        rhs = lam * abelian_cov_derivative(psi, cfg, mu, mode)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


@dataclass(frozen=True)
class FieldStrength:
    """Antisymmetric forward-difference tensor component G_{mu,nu}."""

    values: np.ndarray
    axes: tuple[int, int]


def field_strength(gamma: RealGaugeField, mu: int, nu: int) -> FieldStrength:
    """G_{mu,nu} = d'_mu Gamma_nu - d'_nu Gamma_mu."""
    d = gamma.spec.spacing
    g_nu = gamma.values[..., nu]
    g_mu = gamma.values[..., mu]
    vals = (_forward(g_nu, mu) - g_nu) / d - (_forward(g_mu, nu) - g_mu) / d
    return FieldStrength(vals, (mu, nu))


# -- Lagrangian densities ----------------------------------------------------


@dataclass(frozen=True)
class LagrangianDensity:
    """Per-site value of each named term and their sum."""

    kinetic: np.ndarray
    mass: np.ndarray
    a_mass: np.ndarray
    yang_mills: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.kinetic + self.mass + self.a_mass + self.yang_mills


def _a_mass_term(cfg: AbelianConfig) -> np.ndarray:
    signs = metric_signs(cfg.spec.dims)
    aa = np.einsum("...m,...m,m->...", cfg.a.values, cfg.a.values, signs)
    return -0.5 * cfg.a_mass**2 * aa


def _yang_mills_term(cfg: AbelianConfig) -> np.ndarray:
    signs = metric_signs(cfg.spec.dims)
    out = np.zeros(cfg.spec.extent)
    for mu in range(cfg.spec.dims):
        for nu in range(cfg.spec.dims):
            if mu == nu:
                continue
            g = field_strength(cfg.gamma, mu, nu).values
            out += signs[mu] * signs[nu] * g * g
    return -0.25 * out


def lagrangian_density(
    psi: MultipletField,
    cfg: AbelianConfig,
    kind: str,
    mode: str = EXPONENTIAL,
) -> LagrangianDensity:
    """Klein-Gordon or Dirac density with covariant derivatives.

    Both kinds carry the optional mass term for the scale field and the
    Yang-Mills term of Gamma.  The Dirac kind needs a 4-component
    multiplet; psi-bar is psi-dagger gamma^0.
    """
    _require_field(psi, cfg.spec)
    dims = cfg.spec.dims
    signs = metric_signs(dims)
    if kind == "klein-gordon":
        kinetic = np.zeros(cfg.spec.extent, dtype=complex)
        for mu in range(dims):
            d1 = abelian_cov_derivative(psi, cfg, mu, mode)
            d2 = abelian_cov_derivative(
                MultipletField(d1, cfg.spec), cfg, mu, mode)
            kinetic += signs[mu] * np.einsum("...n,...n->...", psi.values.conj(), d2)
        mass = -cfg.mass**2 * np.einsum(
            "...n,...n->...", psi.values.conj(), psi.values)
    elif kind == "dirac":
        if psi.components != 4:
            raise DimensionMismatchError("dirac density needs a 4-component field")
        if dims > 4:
            raise ValueError("dirac density supports at most 4 dimensions")
        psi_bar = np.einsum("...a,ab->...b", psi.values.conj(), GAMMA[0])
        kinetic = np.zeros(cfg.spec.extent, dtype=complex)
        for mu in range(dims):
            d1 = abelian_cov_derivative(psi, cfg, mu, mode)
            kinetic += 1j * np.einsum("...a,ab,...b->...", psi_bar, GAMMA[mu], d1)
        mass = -cfg.mass * np.einsum("...a,...a->...", psi_bar, psi.values)
    else:
        raise ValueError(f"unknown density kind {kind!r}")
    return LagrangianDensity(
        kinetic=kinetic,
        mass=mass,
        a_mass=_a_mass_term(cfg).astype(complex),
        yang_mills=_yang_mills_term(cfg).astype(complex),
    )


# -- SU(2) ---------------------------------------------------------------


def su2_rotation(vec: np.ndarray) -> np.ndarray:
    """Closed-form exp(-i vec.tau) for a (..., 3) rotation vector.

    Uses (n.tau)^2 = 1: the result is cos|v| - i sin|v| (v.tau)/|v|,
    with the |v| -> 0 limit handled through the cardinal sine.
    """
    v = np.asarray(vec, dtype=float)
    theta = np.linalg.norm(v, axis=-1)
    vtau = np.einsum("...j,jab->...ab", v, PAULI)
    eye = np.eye(2, dtype=complex)
    cos = np.cos(theta)[..., None, None]
    sinc = np.sinc(theta / np.pi)[..., None, None]
    return cos * eye - 1j * sinc * vtau


def su2_link_grid(
    cfg: SU2Config, axis: int, include_scale_factor: bool = False
) -> np.ndarray:
    """U(2) link matrices for every site along one axis.

    exp(i g_i Gamma d) * exp(-i g Omega.tau d); with the scale factor
    the real exp(g_r A d) multiplies the result.
    """
    ab = cfg.abelian
    d = cfg.spec.spacing
    su2 = su2_rotation(cfg.g * d * cfg.omega[..., axis, :])
    phase = np.exp(1j * ab.g_i * ab.gamma.values[..., axis] * d)
    link = phase[..., None, None] * su2
    if include_scale_factor:
        link = np.exp(ab.g_r * ab.a.values[..., axis] * d)[..., None, None] * link
    return link


def su2_link(
    cfg: SU2Config, site: Site, axis: int, include_scale_factor: bool = False
) -> np.ndarray:
    """Link matrix at one site (see :func:`su2_link_grid`)."""
    ab = cfg.abelian
    d = cfg.spec.spacing
    su2 = su2_rotation(cfg.g * d * cfg.omega[site][axis])
    phase = np.exp(1j * ab.g_i * ab.gamma.values[site][axis] * d)
    link = phase * su2
    if include_scale_factor:
        link = np.exp(ab.g_r * ab.a.values[site][axis] * d) * link
    return link


def su2_cov_derivative(
    psi: MultipletField, cfg: SU2Config, axis: int, mode: str = EXPONENTIAL
) -> np.ndarray:
    """Covariant derivative of a doublet under GL(1,R) x U(2)."""
    _check_mode(mode)
    _require_field(psi, cfg.spec)
    if psi.components != 2:
        raise DimensionMismatchError("SU(2) derivative needs a 2-component field")
    ab = cfg.abelian
    d = cfg.spec.spacing
    if mode == EXPONENTIAL:
        link = su2_link_grid(cfg, axis, include_scale_factor=True)
        moved = np.einsum("...ab,...b->...a", link, _forward(psi.values, axis))
        return (moved - psi.values) / d
    coupled = (ab.g_r * ab.a.values[..., axis]
               + 1j * ab.g_i * ab.gamma.values[..., axis])
    omtau = np.einsum("...j,jab->...ab", cfg.omega[..., axis, :], PAULI)
    return (multiplet_derivative(psi, axis)
            + coupled[..., None] * psi.values
            - 1j * cfg.g * np.einsum("...ab,...b->...a", omtau, psi.values))


@dataclass(frozen=True)
class SU2TransformDiagnostics:
    """Finite-spacing artifacts of the SU(2) transformation law.

    ``max_identity_component`` is the largest identity part discarded by
    the tau projection of Omega'; ``max_imaginary_residue`` the largest
    imaginary part dropped when keeping Omega' real;
    ``max_gamma_discrepancy`` the gap between the matrix expression for
    Gamma' and the stored forward-difference form.  All go to zero with
    the spacing.
    """

    max_identity_component: float
    max_imaginary_residue: float
    max_gamma_discrepancy: float


def gauge_transform_su2(
    psi: MultipletField, cfg: SU2Config, t: GaugeTransformation
) -> tuple[MultipletField, SU2Config, SU2TransformDiagnostics]:
    """Apply a local U(2) = U(1) x SU(2) transformation.

    psi picks up Lambda_1 Lambda_2; A is untouched; Gamma shifts as in
    the Abelian case; Omega.tau is conjugated by Lambda_2 minus the
    derivative term, then projected back onto the tau basis.
    """
    if cfg.g == 0:
        raise InvalidCouplingError("g = 0: Omega shift is undefined")
    ab = cfg.abelian
    spec = cfg.spec
    _require_field(psi, spec)
    rotation = t.rotation if t.rotation is not None else np.zeros(spec.extent + (3,))
    lam2 = su2_rotation(0.5 * rotation)
    lam2_inv = np.swapaxes(lam2.conj(), -1, -2)

    psi_abelian, ab_out = gauge_transform_abelian(psi, ab, t)
    psi_values = np.einsum("...ab,...b->...a", lam2, psi_abelian.values)

    d = spec.spacing
    omega_out = np.empty_like(cfg.omega)
    max_identity = 0.0
    max_imag = 0.0
    for mu in range(spec.dims):
        omtau = np.einsum("...j,jab->...ab", cfg.omega[..., mu, :], PAULI)
        adjoint = np.einsum("...ab,...bc,...cd->...ad", lam2, omtau, lam2_inv)
        dlam2 = (_forward(lam2, mu) - lam2) / d
        deriv = np.einsum("...ab,...bc->...ac", dlam2, lam2_inv)
        m = adjoint - (1j / cfg.g) * deriv
        identity_part = 0.5 * np.trace(m, axis1=-2, axis2=-1)
        coeff = 0.5 * np.einsum("...ab,jba->...j", m, PAULI)
        omega_out[..., mu, :] = coeff.real
        max_identity = max(max_identity, float(np.max(np.abs(identity_part))))
        max_imag = max(max_imag, float(np.max(np.abs(coeff.imag))))

    # gap between the matrix form (i/g_i) d'(Lambda_1) Lambda_1^{-1} and
    # the stored forward-difference shift of Gamma
    lam1 = np.exp(1j * t.phase)
    max_gamma = 0.0
    for mu in range(spec.dims):
        eta = (1j / ab.g_i) * (_forward(lam1, mu) - lam1) / d * lam1.conj()
        stored = -(_forward(t.phase, mu) - t.phase) / (d * ab.g_i)
        max_gamma = max(max_gamma, float(np.max(np.abs(eta - stored))))

    cfg_out = SU2Config(abelian=ab_out, omega=omega_out, g=cfg.g)
    diags = SU2TransformDiagnostics(max_identity, max_imag, max_gamma)
    return MultipletField(psi_values, spec), cfg_out, diags


def covariance_residual_su2(
    psi: MultipletField,
    cfg: SU2Config,
    t: GaugeTransformation,
    mode: str = FIRST_ORDER,
) -> float:
    """max |D'(Lambda psi) - Lambda D psi| over sites, components, axes."""
    _check_mode(mode)
    psi_t, cfg_t, _ = gauge_transform_su2(psi, cfg, t)
    rotation = t.rotation if t.rotation is not None else np.zeros(cfg.spec.extent + (3,))
    lam = np.exp(1j * t.phase)[..., None, None] * su2_rotation(0.5 * rotation)
    worst = 0.0
    for mu in range(cfg.spec.dims):
        lhs = su2_cov_derivative(psi_t, cfg_t, mu, mode)
        rhs = np.einsum("...ab,...b->...a", lam, su2_cov_derivative(psi, cfg, mu, mode))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
