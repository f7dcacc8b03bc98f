"""
Gaussian quadrature module.
Gauss-Jacobi rules from Jacobi polynomial roots and general rules from moment sequences.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Tuple

from levy.errors import (
    ApproximantMissing,
    DegenerateInput,
    NotAStieltjesSequence,
    RootCountMismatch,
    ValidationError,
)
from levy.numkernel import context, polyder, polyval, real_roots_in_interval
from levy.pade import TaylorSeries, pade

logger = logging.getLogger(__name__)


# === Types ===

@dataclass(frozen=True)
class JacobiParams:
    """Parameters of P_n^(alpha, beta), orthogonal for (1-x)^alpha (1+x)^beta on (-1, 1)."""

    alpha: Any
    beta: Any
    degree: int

    def __post_init__(self):
        if not float(self.alpha) > -1 or not float(self.beta) > -1:
            raise ValidationError(f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})")
        if self.degree < 0:
            raise ValidationError(f"degree must be nonnegative, got {self.degree}")


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a Gaussian rule on (lo, hi)."""

    nodes: Tuple[Any, ...]
    weights: Tuple[Any, ...]
    lo: Any
    hi: Any

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        object.__setattr__(self, 'weights', tuple(self.weights))
        if len(self.nodes) != len(self.weights):
            raise ValidationError("nodes and weights differ in length")

    @property
    def order(self) -> int:
        return len(self.nodes)

    def moment(self, k: int):
        return sum((w * x ** k for x, w in zip(self.nodes, self.weights)), 0)

    def integrate(self, f: Callable):
        return sum((w * f(x) for x, w in zip(self.nodes, self.weights)), 0)

    def scaled(self, factor) -> 'QuadratureRule':
        """Same nodes, weights multiplied by a positive factor."""
        return QuadratureRule(self.nodes, tuple(w * factor for w in self.weights), self.lo, self.hi)


# === Jacobi polynomials ===

def jacobi_coefficients(params: JacobiParams, prec: Optional[int] = None) -> list:
    """Coefficients of P_n^(alpha, beta) as a polynomial in y = (x - 1)/2."""
    ctx = context(prec)
    alpha, beta, n = ctx.convert(params.alpha), ctx.convert(params.beta), params.degree
    return [ctx.binomial(alpha + n, n - j) * ctx.binomial(alpha + beta + n + j, j) for j in range(n + 1)]


def jacobi_eval(params: JacobiParams, x, prec: Optional[int] = None):
    """
    Evaluate P_n^(alpha, beta)(x) from its finite hypergeometric sum.

    Args:
        params: Jacobi parameters and degree.
        x: Evaluation point.
        prec: Decimal digits of the working context.
    """
    ctx = context(prec)
    return polyval(jacobi_coefficients(params, prec), (ctx.convert(x) - 1) / 2)


def jacobi_leading_coefficient(params: JacobiParams, prec: Optional[int] = None):
    ctx = context(prec)
    n = params.degree
    return ctx.binomial(ctx.convert(params.alpha) + ctx.convert(params.beta) + 2 * n, n) / ctx.mpf(2) ** n


def jacobi_norm(params: JacobiParams, prec: Optional[int] = None):
    """Integral of (1-x)^alpha (1+x)^beta P_n(x)^2 over (-1, 1)."""
    ctx = context(prec)
    alpha, beta, n = ctx.convert(params.alpha), ctx.convert(params.beta), params.degree
    scale = ctx.mpf(2) ** (alpha + beta + 1)
    if n == 0:
        return scale * ctx.gamma(alpha + 1) * ctx.gamma(beta + 1) / ctx.gamma(alpha + beta + 2)
    return (scale / (2 * n + alpha + beta + 1)
            * ctx.gamma(n + alpha + 1) * ctx.gamma(n + beta + 1)
            / (ctx.gamma(n + alpha + beta + 1) * ctx.factorial(n)))


def jacobi_roots(params: JacobiParams, prec: Optional[int] = None) -> list:
    """The n roots of P_n^(alpha, beta) in (-1, 1), increasing."""
    if params.degree < 1:
        raise ValidationError("jacobi_roots needs degree ≥ 1")
    roots = real_roots_in_interval(jacobi_coefficients(params, prec), -1, 0, prec, expected=params.degree)
    return [1 + 2 * y for y in roots]


def gauss_jacobi(params: JacobiParams, prec: Optional[int] = None) -> QuadratureRule:
    """
    Gauss rule for (1-x)^alpha (1+x)^beta dx on (-1, 1).

    Weights follow w_j = (k_n / k_{n-1}) h_{n-1} / (P_{n-1}(x_j) P_n'(x_j)),
    with k the leading coefficients and h the squared norms.
    """
    ctx = context(prec)
    n = params.degree
    nodes = jacobi_roots(params, prec)
    previous = JacobiParams(params.alpha, params.beta, n - 1)
    ratio = jacobi_leading_coefficient(params, prec) / jacobi_leading_coefficient(previous, prec)
    h_prev = jacobi_norm(previous, prec)
    deriv = polyder(jacobi_coefficients(params, prec))
    weights = []
    for x in nodes:
        y = (x - 1) / 2
        dp = polyval(deriv, y) / 2
        weights.append(ratio * h_prev / (jacobi_eval(previous, x, prec) * dp))
    return QuadratureRule(nodes, weights, -ctx.one, ctx.one)


def shifted_gauss_jacobi(params: JacobiParams, prec: Optional[int] = None) -> QuadratureRule:
    """Gauss rule for (1-v)^alpha v^beta dv on (0, 1), mapped exactly by v = (x + 1)/2."""
    ctx = context(prec)
    rule = gauss_jacobi(params, prec)
    jacobian = ctx.mpf(2) ** (ctx.convert(params.alpha) + ctx.convert(params.beta) + 1)
    return QuadratureRule(
        [(x + 1) / 2 for x in rule.nodes],
        [w / jacobian for w in rule.weights],
        ctx.zero, ctx.one,
    )


# === Rules from moments ===

def gauss_from_moments(moments: Sequence, support: Tuple[Any, Any], prec: Optional[int] = None) -> QuadratureRule:
    """
    Gauss rule of a positive measure given its first 2n moments.

    The nodes and weights are the poles and residues of the [n-1/n] Pade
    approximant of the Stieltjes series Σ m_j z^j = ∫ ν(dx)/(1 - xz).
    Moments are rescaled to the unit interval first so the Hankel system
    stays balanced for measures concentrated near zero.

    Args:
        moments: m_0 .. m_{2n-1}.
        support: Closed interval (lo, hi) containing the measure; used only for validation.
        prec: Decimal digits of the working context.

    Returns:
        QuadratureRule with n nodes.
    """
    ctx = context(prec)
    if len(moments) < 2 or len(moments) % 2:
        raise ValidationError(f"need an even number of moments, got {len(moments)}")
    n = len(moments) // 2
    lo, hi = ctx.convert(support[0]), ctx.convert(support[1])
    if not lo < hi or ctx.isinf(lo) or ctx.isinf(hi):
        raise DegenerateInput(f"support must be a bounded interval, got ({support[0]}, {support[1]})")
    m = [ctx.convert(v) for v in moments]
    if not m[0] > 0:
        raise NotAStieltjesSequence(f"total mass {ctx.nstr(m[0], 8)} is not positive")

    scale = max(abs(lo), abs(hi))
    normalised = [m[j] / (m[0] * scale ** j) for j in range(2 * n)]
    try:
        r = pade(TaylorSeries([ctx.zero] + normalised), n, n, prec)
    except ApproximantMissing as exc:
        raise NotAStieltjesSequence(f"Hankel system of order {n} is singular: {exc}") from exc

    num_rev = list(reversed(r.numerator[1:n + 1]))
    den_rev = list(reversed(r.denominator))
    try:
        nodes = real_roots_in_interval(den_rev, lo / scale, hi / scale, prec, expected=n)
    except RootCountMismatch as exc:
        raise NotAStieltjesSequence(
            f"order-{n} rule has nodes outside ({ctx.nstr(lo, 8)}, {ctx.nstr(hi, 8)}) or off the real line: {exc}"
        ) from exc
    deriv = polyder(den_rev)
    weights = [polyval(num_rev, y) / polyval(deriv, y) for y in nodes]
    if any(not w > 0 for w in weights):
        raise NotAStieltjesSequence(
            f"order-{n} rule has non-positive weights {[ctx.nstr(w, 5) for w in weights]}"
        )
    logger.debug("Gauss rule of order %d on (%s, %s)", n, ctx.nstr(lo, 6), ctx.nstr(hi, 6))
    return QuadratureRule([y * scale for y in nodes], [w * m[0] for w in weights], lo, hi)
