"""Finite-dimensional scaled Hilbert structures.

A scaled Hilbert structure carries a scale factor r and a basis unitary
V.  Vectors are stored in the base frame (scale 1, untransformed
basis); the vector corresponding to psi inside the scaled structure has
base representative r * V @ psi.  The compensated operations are

    addition        unchanged,
    scalar action   multiply base representatives, divide by r,
    inner product   base inner product divided by r,

which together preserve the Hilbert-space axioms and norms: the scaled
inner product of two correspondences r*V*psi, r*V*phi reads back as the
plain <psi, phi>.

Inner products are conjugate-linear in the first argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .numbers import ScaledStructure, StructureValue

UNITARITY_TOL = 1e-12


def _as_vector(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def unitarity_defect(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True)
class ScaledHilbertStructure:
    """Scale factor r plus the basis unitary V of the parallel transform."""

    scale: float
    basis_map: np.ndarray

    def __post_init__(self):
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise ValueError(f"scale must be finite positive, got {self.scale}")
        m = np.asarray(self.basis_map, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"basis map must be square, got {m.shape}")
        defect = unitarity_defect(m)
        if defect > UNITARITY_TOL:
            raise ValueError(f"basis map unitarity defect {defect:.3e} > {UNITARITY_TOL}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "basis_map", m)

    @property
    def dimension(self) -> int:
        return self.basis_map.shape[0]

    def number_structure(self) -> ScaledStructure:
        """The scalar structure underlying this space."""
        return ScaledStructure(self.scale)


def _check_dim(s: ScaledHilbertStructure, *vectors: np.ndarray) -> None:
    for v in vectors:
        if v.shape[0] != s.dimension:
            raise DimensionMismatchError(
                f"vector dimension {v.shape[0]} != structure dimension {s.dimension}")


def vector_correspondence(psi, s: ScaledHilbertStructure) -> np.ndarray:
    """Base representative of the scaled-structure vector: r * V @ psi."""
    v = _as_vector(psi)
    _check_dim(s, v)
    return s.scale * (s.basis_map @ v)


def scaled_add(psi_base, phi_base, s: ScaledHilbertStructure) -> np.ndarray:
    """Vector addition; unchanged by the scaling."""
    u = _as_vector(psi_base)
    w = _as_vector(phi_base)
    _check_dim(s, u, w)
    return u + w


def scaled_scalar_mul(
    alpha: StructureValue, psi_base, s: ScaledHilbertStructure
) -> np.ndarray:
    """Scalar action in base terms: multiply representatives, divide by r."""
    if alpha.scale != s.scale:
        raise ValueError(
            f"scalar lives at scale {alpha.scale}, structure at {s.scale}")
    v = _as_vector(psi_base)
    _check_dim(s, v)
    canonical = alpha.scale * alpha.value
    return canonical * v / s.scale


def scaled_inner(psi_base, phi_base, s: ScaledHilbertStructure) -> StructureValue:
    """Scaled inner product of base representatives.

    The base-frame image of the result is <psi_base, phi_base> / r; as
    a structure value it reads <psi_base, phi_base> / r**2, which for
    correspondences r*V*psi, r*V*phi is exactly the plain <psi, phi>.
    """
    u = _as_vector(psi_base)
    w = _as_vector(phi_base)
    _check_dim(s, u, w)
    canonical = complex(np.vdot(u, w)) / s.scale
    return StructureValue(canonical / s.scale, s.scale)


@dataclass(frozen=True)
class TransportStages:
    """Intermediate vectors of the three-step parallel transport."""

    basis_mapped: np.ndarray        # V @ psi, scalars untouched
    scaled_representative: np.ndarray  # r * V @ psi, base frame of the scaled structure
    transported: np.ndarray         # relabeled into the target structure


def three_step_transport(psi, s: ScaledHilbertStructure) -> TransportStages:
    """Transport a vector to the neighboring structure in three steps.

    Step 1 transforms the basis (apply V), step 2 applies the scale
    action (multiply by r), step 3 relabels the result into the target
    structure; the relabeling preserves numeric components, so the final
    stage equals :func:`vector_correspondence`.
    """
    v = _as_vector(psi)
    _check_dim(s, v)
    stage1 = s.basis_map @ v
    stage2 = s.scale * stage1
    return TransportStages(stage1, stage2, stage2.copy())


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-ish unitary from a seeded complex Gaussian QR with phase fix."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases.conj()
