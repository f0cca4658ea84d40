"""Scaled complex-number structures.

A scaled structure is a complex-number system whose values are a factor
r > 0 times those of a reference system.  The factor is compensated in
the basic operations (multiplication divided by r, division multiplied
by r, conjugation rescaled) so that the field axioms hold in every
structure, whatever the value of r.

Every element of the shared base set is stored by its canonical value:
the value it takes in the reference structure with r = 1.  Reading the
same element inside a structure with scale r divides the canonical
value by r; conversely a structure-local value v labels the element
with canonical value r*v.  Two distinct notions follow:

* correspondence: value v in the scaled structure <-> canonical r*v
  (same element, different read-out);
* same number: value v here maps to value v there (different element).

The zero element is the one exception: it reads as 0 in every
structure (the "number vacuum").
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ArithmeticOverflowError,
    NumberVacuumDivisionError,
    SeriesDivergenceError,
)

SERIES_MAX_TERMS = 30
SERIES_GUARD = 1e100


def _is_finite(z: complex) -> bool:
    return cmath.isfinite(complex(z))


@dataclass(frozen=True)
class BaseElement:
    """Element of the base set, labeled by its canonical (scale-1) value."""

    canonical: complex

    def __post_init__(self):
        if not _is_finite(self.canonical):
            raise ValueError(f"non-finite canonical value {self.canonical!r}")


@dataclass(frozen=True)
class StructureValue:
    """A number value together with the scale of the structure it lives in."""

    value: complex
    scale: float

    def __post_init__(self):
        if not _is_finite(self.value):
            raise ValueError(f"non-finite value {self.value!r}")
        _check_scale(self.scale)


def _check_scale(r: float) -> None:
    if not (r > 0.0 and np.isfinite(r)):
        raise ValueError(f"scale factor must be finite and positive, got {r!r}")


@dataclass(frozen=True)
class ScaledStructure:
    """A complex-number structure with scale factor r.

    With r = 1 every operation collapses to plain complex arithmetic.
    Operations take and return :class:`BaseElement`; the element's value
    inside this structure is obtained with :meth:`value_of`.
    """

    scale: float = 1.0

    def __post_init__(self):
        _check_scale(self.scale)

    # -- conversions ----------------------------------------------------

    def value_of(self, e: BaseElement) -> StructureValue:
        """Read an element inside this structure: value = canonical / r."""
        return StructureValue(e.canonical / self.scale, self.scale)

    def element_from_value(self, value: complex) -> BaseElement:
        """Element whose value in this structure is ``value``."""
        return BaseElement(self.scale * complex(value))

    # -- constants ------------------------------------------------------

    def zero(self) -> BaseElement:
        """Additive identity; canonical value 0 for every scale."""
        return BaseElement(0j)

    def one(self) -> BaseElement:
        """Multiplicative identity; canonical value r."""
        return BaseElement(complex(self.scale))

    # -- field operations ------------------------------------------------

    def add(self, u: BaseElement, v: BaseElement) -> BaseElement:
        result = u.canonical + v.canonical
        if not _is_finite(result):
            raise ArithmeticOverflowError("addition overflowed")
        return BaseElement(result)

    def sub(self, u: BaseElement, v: BaseElement) -> BaseElement:
        result = u.canonical - v.canonical
        if not _is_finite(result):
            raise ArithmeticOverflowError("subtraction overflowed")
        return BaseElement(result)

    def neg(self, u: BaseElement) -> BaseElement:
        return BaseElement(-u.canonical)

    def mul(self, u: BaseElement, v: BaseElement) -> BaseElement:
        result = u.canonical * v.canonical / self.scale
        if not _is_finite(result):
            raise ArithmeticOverflowError("multiplication overflowed")
        return BaseElement(result)

    def div(self, u: BaseElement, v: BaseElement) -> BaseElement:
        if v.canonical == 0:
            raise NumberVacuumDivisionError("division by the number vacuum")
        result = self.scale * u.canonical / v.canonical
        if not _is_finite(result):
            raise ArithmeticOverflowError("division overflowed")
        return BaseElement(result)

    def conj(self, u: BaseElement) -> BaseElement:
        # r * conj(c / r) = conj(c) for real positive r; the simplified
        # form keeps the involution bitwise exact.
        return BaseElement(u.canonical.conjugate())


def element_of(a: StructureValue) -> BaseElement:
    """Element labeled by value ``a`` in a structure of scale ``a.scale``."""
    return BaseElement(a.scale * a.value)


def same_number_map(a: StructureValue, target: ScaledStructure) -> StructureValue:
    """Carry a value to another structure keeping the numeric value.

    This is the parallel-transformation notion of sameness: the value is
    unchanged, only the structure tag moves.  It is an isomorphism with
    respect to all structure operations.
    """
    return StructureValue(a.value, target.scale)


def eval_analytic(
    coeffs: Sequence[complex],
    z: StructureValue,
    structure: ScaledStructure,
    max_terms: int = SERIES_MAX_TERMS,
) -> StructureValue:
    """Evaluate sum(coeffs[k] * z**k) inside a scaled structure.

    The evaluation runs entirely through the structure operations
    (Horner form), so the result exercises the compensated arithmetic.
    The returned value satisfies: its canonical image equals
    r * f(z.value) with f the plain complex series.

    Coefficients beyond ``max_terms`` are ignored (fixed truncation
    order).  Raises :class:`SeriesDivergenceError` when a partial result
    grows beyond the guard threshold.
    """
    kept = list(coeffs[: max_terms + 1])
    if not kept:
        return structure.value_of(structure.zero())
    z_el = element_of(same_number_map(z, structure))
    acc = structure.element_from_value(kept[-1])
    for c in reversed(kept[:-1]):
        acc = structure.mul(acc, z_el)
        acc = structure.add(acc, structure.element_from_value(c))
        if abs(structure.value_of(acc).value) > SERIES_GUARD:
            raise SeriesDivergenceError("partial sums exceeded the growth guard")
    return structure.value_of(acc)


def exp_coefficients(max_terms: int = SERIES_MAX_TERMS) -> list[complex]:
    """Taylor coefficients 1/k! of the exponential, for eval_analytic."""
    coeffs = [1.0 + 0j]
    for k in range(1, max_terms + 1):
        coeffs.append(coeffs[-1] / k)
    return coeffs


def exp_in_structure(z: StructureValue, structure: ScaledStructure) -> StructureValue:
    """Exponential evaluated through the structure's own power series."""
    return eval_analytic(exp_coefficients(), z, structure)


# -- axiom suite ---------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    """Residuals of the field-axiom identities for one structure."""

    scale: float
    samples: int
    seed: int
    tolerance: float
    residuals: dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def failing(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v > self.tolerance]


def sample_values(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random complex values with magnitude log-uniform in [1e-3, 1e3].

    The magnitude guard keeps condition numbers bounded so that the
    identity residuals measure rounding, not cancellation.
    """
    mag = 10.0 ** rng.uniform(-3, 3, n)
    phase = rng.uniform(0.0, 2.0 * np.pi, n)
    return mag * np.exp(1j * phase)


def _rel(lhs: complex, rhs: complex, scale_hint: float = 0.0) -> float:
    d = abs(lhs - rhs)
    if d == 0.0:
        return 0.0
    return d / max(abs(lhs), abs(rhs), scale_hint, 1e-300)


def axiom_suite(
    structure: ScaledStructure,
    n_samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> AxiomReport:
    """Check the field axioms on random operands; report max residuals.

    Covers commutativity, associativity, distributivity, identities,
    inverses, the conjugation axioms, and the equation-equivalence law
    (an equation holds in the scaled structure iff its plain counterpart
    holds, with residuals related by the factor r).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    s = structure
    r = s.scale
    a_vals = sample_values(rng, n_samples)
    b_vals = sample_values(rng, n_samples)
    c_vals = sample_values(rng, n_samples)

    res: dict[str, float] = {name: 0.0 for name in (
        "add_commutative", "add_associative", "mul_commutative",
        "mul_associative", "distributive", "add_identity", "mul_identity",
        "add_inverse", "mul_inverse", "conj_involution", "conj_over_add",
        "conj_over_mul", "equation_equivalence",
    )}

    def bump(name: str, value: float) -> None:
        if value > res[name]:
            res[name] = value

    poly = sample_values(rng, 5)  # fixed degree-4 polynomial for eq-equivalence

    for av, bv, cv in zip(a_vals, b_vals, c_vals):
        a = s.element_from_value(av)
        b = s.element_from_value(bv)
        c = s.element_from_value(cv)

        bump("add_commutative", _rel(s.add(a, b).canonical, s.add(b, a).canonical))
        bump("add_associative", _rel(
            s.add(s.add(a, b), c).canonical, s.add(a, s.add(b, c)).canonical))
        bump("mul_commutative", _rel(s.mul(a, b).canonical, s.mul(b, a).canonical))
        bump("mul_associative", _rel(
            s.mul(s.mul(a, b), c).canonical, s.mul(a, s.mul(b, c)).canonical))
        # scale hint guards against cancellation in b + c
        dist_hint = (abs(s.mul(a, b).canonical) + abs(s.mul(a, c).canonical))
        bump("distributive", _rel(
            s.mul(a, s.add(b, c)).canonical,
            s.add(s.mul(a, b), s.mul(a, c)).canonical,
            dist_hint))
        bump("add_identity", _rel(s.add(a, s.zero()).canonical, a.canonical))
        bump("mul_identity", _rel(s.mul(a, s.one()).canonical, a.canonical))
        bump("add_inverse", abs(s.add(a, s.neg(a)).canonical) /
             max(abs(a.canonical), 1e-300))
        bump("mul_inverse", _rel(
            s.mul(a, s.div(s.one(), a)).canonical, s.one().canonical))
        bump("conj_involution", _rel(s.conj(s.conj(a)).canonical, a.canonical))
        bump("conj_over_add", _rel(
            s.conj(s.add(a, b)).canonical,
            s.add(s.conj(a), s.conj(b)).canonical))
        bump("conj_over_mul", _rel(
            s.conj(s.mul(a, b)).canonical,
            s.mul(s.conj(a), s.conj(b)).canonical))

        # Equation equivalence: |f_r(a_r) - b_r| (canonical) = r*|f(a) - b|.
        fa = eval_analytic(poly, StructureValue(av, r), s)
        plain = 0j
        for coeff in reversed(poly):
            plain = plain * av + coeff
        struct_resid = abs(element_of(fa).canonical - element_of(
            StructureValue(bv, r)).canonical)
        plain_resid = abs(plain - bv)
        eq_hint = r * (abs(plain) + abs(bv))
        bump("equation_equivalence",
             abs(struct_resid - r * plain_resid) / max(eq_hint, 1e-300))

    return AxiomReport(scale=r, samples=n_samples, seed=seed, tolerance=tol,
                       residuals=res)
