"""Exception types shared across the package."""


class ScaledGaugeError(Exception):
    """Base class for all package-specific errors."""


class ArithmeticOverflowError(ScaledGaugeError, OverflowError):
    """An operation produced a non-finite number."""


class NumberVacuumDivisionError(ScaledGaugeError, ZeroDivisionError):
    """Division by the zero element (the number vacuum)."""


class SeriesDivergenceError(ScaledGaugeError, ArithmeticError):
    """Partial sums of a power series grew beyond the divergence guard."""


class OutOfLatticeError(ScaledGaugeError, IndexError):
    """A step left the lattice under a clamped boundary."""


class NotIntegrableError(ScaledGaugeError, ValueError):
    """The gauge field failed the integrability check where it was required."""


class InvalidCouplingError(ScaledGaugeError, ValueError):
    """A coupling constant that is divided by was zero."""


class DimensionMismatchError(ScaledGaugeError, ValueError):
    """Operands live on different lattices or have different dimensions."""


class ConfigError(ScaledGaugeError, ValueError):
    """The experiment configuration failed to parse or validate."""
