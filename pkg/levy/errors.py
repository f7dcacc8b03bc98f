"""
Exception hierarchy.
ValidationError covers bad input, NumericalError covers numerical failure.
"""


class HyperExpError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 3


class ValidationError(HyperExpError, ValueError):
    """Input rejected before any computation."""

    exit_code = 2


class NumericalError(HyperExpError, ArithmeticError):
    """A computation failed or lost its guarantees."""

    exit_code = 3


# === Kernel ===

class DegenerateInput(ValidationError):
    """Zero polynomial, empty interval or empty system."""


class SingularMatrix(NumericalError):
    """A pivot fell below the working-precision threshold."""


class RootCountMismatch(NumericalError):
    """Root isolation found a different number of roots than required."""


# === Pade ===

class ApproximantMissing(NumericalError):
    """The [m/n] entry of the Pade table does not exist (singular Hankel system)."""


class PoleEvaluation(NumericalError):
    """Evaluation at a pole of a rational function."""


class MultiplePole(NumericalError):
    """Two poles coincide within tolerance."""


class InvarianceViolation(NumericalError):
    """A Pade invariance identity failed at the sampled points."""


# === Quadrature ===

class NotAStieltjesSequence(NumericalError):
    """Moments do not produce positive weights with nodes inside the support."""


# === Processes and approximations ===

class OutsideStrip(ValidationError):
    """Argument lies on a branch cut or outside the analyticity strip."""


class StripTooNarrow(ValidationError):
    """The strip does not contain z = 1, so no martingale drift exists."""


class ZeroNodeAmbiguity(NumericalError):
    """A quadrature node is too close to zero to classify."""


class VariantUnavailable(ValidationError):
    """The requested (model, k) combination is not a valid approximation."""


class NonpositiveGaussian(NumericalError):
    """The k=2 Gaussian coefficient is not strictly positive."""


class ComplexPoleRoots(NumericalError):
    """A subordinated pole produced non-real roots."""


# === Transforms ===

class GridInsufficient(NumericalError):
    """The truncated Fourier integral has a tail above tolerance."""


class MartingaleViolated(ValidationError):
    """The discounted price process is not a martingale."""
