"""
Pade approximation module.
Builds [m/n] approximants of power series through the Hankel system,
evaluates them and decomposes them into partial fractions.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from levy.errors import (
    ApproximantMissing,
    DegenerateInput,
    InvarianceViolation,
    MultiplePole,
    PoleEvaluation,
    RootCountMismatch,
    SingularMatrix,
    ValidationError,
)
from levy.numkernel import (
    context,
    polyder,
    polytrim,
    polyval,
    real_roots_in_interval,
    solve_dense,
    tolerance,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_POINTS = ('-0.45', '-0.3', '-0.1', '0.15', '0.35')


# === Types ===

@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients c_0, c_1, ... of f(z) = Σ c_i (z - center)^i."""

    coeffs: Tuple[Any, ...]
    center: Any = 0

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, index):
        return self.coeffs[index]

    def truncated(self, order: int) -> 'TaylorSeries':
        return TaylorSeries(self.coeffs[:order + 1], self.center)


@dataclass(frozen=True)
class RationalFunction:
    """P(t)/Q(t) in powers of t = z - center, with Q(0) = 1."""

    numerator: Tuple[Any, ...]
    denominator: Tuple[Any, ...]
    center: Any = 0

    def __post_init__(self):
        object.__setattr__(self, 'numerator', tuple(self.numerator))
        object.__setattr__(self, 'denominator', tuple(self.denominator))
        if not self.denominator or self.denominator[0] != 1:
            raise ValidationError("denominator must equal 1 at the center")

    @property
    def m(self) -> int:
        return len(self.numerator) - 1

    @property
    def n(self) -> int:
        return len(self.denominator) - 1

    def __call__(self, z, prec: Optional[int] = None):
        return evaluate(self, z, prec)


@dataclass(frozen=True)
class PartialFractions:
    """poly(t) + Σ residue / (z - pole), with t = z - center."""

    polynomial: Tuple[Any, ...]
    poles: Tuple[Tuple[Any, Any], ...]
    center: Any = 0

    def __call__(self, z, prec: Optional[int] = None):
        ctx = context(prec)
        z = _as_number(ctx, z)
        total = polyval(self.polynomial, z - self.center)
        return total + ctx.fsum(res / (z - pole) for pole, res in self.poles)


@dataclass(frozen=True)
class InvarianceReport:
    """Result of a Pade invariance check."""

    identity: str
    max_deviation: Any
    points: Tuple[Any, ...]
    tolerance: Any

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def _as_number(ctx, z):
    if isinstance(z, tuple):
        return ctx.mpc(ctx.convert(z[0]), ctx.convert(z[1]))
    return ctx.convert(z)


# === Series arithmetic ===

def series_mul(a: Sequence, b: Sequence, order: int) -> List:
    out = []
    for i in range(order + 1):
        out.append(sum((a[j] * b[i - j] for j in range(max(0, i - len(b) + 1), min(i, len(a) - 1) + 1)), 0))
    return out


def series_div(a: Sequence, b: Sequence, order: int) -> List:
    """Coefficients of a/b through the given order; b[0] must be nonzero."""
    if not b[0]:
        raise DegenerateInput("series division by a series vanishing at the center")
    out = []
    for i in range(order + 1):
        acc = a[i] if i < len(a) else 0
        for j in range(1, min(i, len(b) - 1) + 1):
            acc -= b[j] * out[i - j]
        out.append(acc / b[0])
    return out


def compose_series(outer: Sequence, inner: Sequence, order: int) -> List:
    """
    Coefficients of outer(inner(t)) through the given order.

    Args:
        outer: Coefficients of the outer series.
        inner: Coefficients of the inner series; inner[0] must be zero.
        order: Highest order kept.
    """
    if inner and inner[0]:
        raise DegenerateInput("inner series must vanish at the center")
    result = [0] * (order + 1)
    power = [1] + [0] * order
    for k, c in enumerate(outer[:order + 1]):
        if k:
            power = series_mul(power, inner, order)
        if c:
            for i in range(order + 1):
                result[i] += c * power[i]
    return result


# === Construction ===

def pade(series: TaylorSeries, m: int, n: int, prec: Optional[int] = None) -> RationalFunction:
    """
    Build the [m/n] Pade approximant of a series.

    The denominator solves the Hankel system built from c_{m-n+1}..c_{m+n};
    the numerator follows from the recursion a_i = Σ_{j≤min(i,n)} b_j c_{i-j}.

    Args:
        series: Taylor coefficients at the center.
        m: Numerator degree, m ≥ n.
        n: Denominator degree.
        prec: Decimal digits of the working context.

    Returns:
        RationalFunction with denominator normalised to 1 at the center.
    """
    ctx = context(prec)
    if not m >= n >= 0:
        raise ValidationError(f"[{m}/{n}] requires m ≥ n ≥ 0")
    if len(series) < m + n + 1:
        raise ValidationError(f"[{m}/{n}] needs {m + n + 1} coefficients, got {len(series)}")
    c = [ctx.convert(v) for v in series.coeffs[:m + n + 1]]

    def coeff(i):
        return c[i] if i >= 0 else ctx.zero

    b = [ctx.one]
    if n:
        matrix = [[coeff(m - n + 1 + i + j) for j in range(n)] for i in range(n)]
        rhs = [-coeff(m + 1 + i) for i in range(n)]
        try:
            reversed_b = solve_dense(matrix, rhs, ctx.dps)
        except SingularMatrix as exc:
            raise ApproximantMissing(f"[{m}/{n}] approximant does not exist: {exc}") from exc
        b += list(reversed(reversed_b))
    a = [ctx.fsum(b[j] * c[i - j] for j in range(min(i, n) + 1)) for i in range(m + 1)]
    logger.debug("Built [%d/%d] approximant at %d digits", m, n, ctx.dps)
    return RationalFunction(a, b, ctx.convert(series.center))


def taylor_expand(r: RationalFunction, order: int, prec: Optional[int] = None) -> TaylorSeries:
    """Re-expand P/Q as a series at its center."""
    ctx = context(prec)
    num = [ctx.convert(v) for v in r.numerator]
    den = [ctx.convert(v) for v in r.denominator]
    return TaylorSeries(series_div(num, den, order), r.center)


def order_residual(r: RationalFunction, series: TaylorSeries, prec: Optional[int] = None):
    """Largest coefficient difference between P/Q and the series through order m+n."""
    ctx = context(prec)
    order = r.m + r.n
    expansion = taylor_expand(r, order, prec)
    return max(abs(expansion[i] - ctx.convert(series[i])) for i in range(order + 1))


# === Evaluation ===

def evaluate(r: RationalFunction, z, prec: Optional[int] = None):
    """
    Evaluate P(z)/Q(z).

    Args:
        r: Rational function.
        z: Real number, Python complex, mpc or a (re, im) pair.
        prec: Decimal digits of the working context.
    """
    ctx = context(prec)
    t = _as_number(ctx, z) - r.center
    q = polyval(r.denominator, t)
    q_scale = sum(abs(b) * abs(t) ** i for i, b in enumerate(r.denominator))
    if abs(q) <= q_scale * ctx.mpf(10) ** (-(ctx.dps // 2)):
        raise PoleEvaluation(f"denominator vanishes at z = {ctx.nstr(t + r.center, 10)}")
    return polyval(r.numerator, t) / q


# === Partial fractions ===

def _polydiv(num: Sequence, den: Sequence) -> Tuple[List, List]:
    """Quotient and remainder of ascending-coefficient polynomials."""
    num = list(num)
    d = len(den) - 1
    if len(num) - 1 < d:
        return [], num
    quotient = [0] * (len(num) - d)
    for k in range(len(num) - 1, d - 1, -1):
        factor = num[k] / den[d]
        quotient[k - d] = factor
        for j in range(d + 1):
            num[k - d + j] -= factor * den[j]
    return quotient, num[:d]


def _locate_poles(ctx, den: List) -> List:
    """All real roots of den, searched in (-1, 1) and, reciprocally, outside it."""
    degree = len(den) - 1
    inner = real_roots_in_interval(den, -1, 1, ctx.dps)
    outer = [1 / s for s in real_roots_in_interval(list(reversed(den)), -1, 1, ctx.dps) if s]
    scale = ctx.fsum(abs(b) for b in den)
    edges = [e for e in (-1, 1) if abs(polyval(den, e)) <= scale * tolerance(ctx, 10)]
    poles = sorted(inner + outer + [ctx.mpf(e) for e in edges])
    if len(poles) == degree:
        return poles

    # A missing root without a sign change is a repeated root: look for a
    # stationary point of den where den itself vanishes.
    deriv = polyder(den)
    if len(deriv) > 1:
        for x in _locate_stationary(ctx, deriv):
            if abs(polyval(den, x)) <= scale * tolerance(ctx, ctx.dps / 4):
                raise MultiplePole(f"repeated pole near {ctx.nstr(x, 12)}")
    raise RootCountMismatch(f"denominator of degree {degree} has {len(poles)} real roots; poles are not all real")


def _locate_stationary(ctx, deriv: List) -> List:
    try:
        inner = real_roots_in_interval(deriv, -1, 1, ctx.dps)
        outer = [1 / s for s in real_roots_in_interval(list(reversed(deriv)), -1, 1, ctx.dps) if s]
    except DegenerateInput:
        return []
    return inner + outer


def partial_fractions(r: RationalFunction, prec: Optional[int] = None) -> PartialFractions:
    """
    Decompose P/Q into a polynomial part plus simple real poles.

    Args:
        r: Rational function whose denominator has real simple roots.
        prec: Decimal digits of the working context.

    Returns:
        PartialFractions with poles in z coordinates, sorted increasingly.
    """
    ctx = context(prec)
    num = [ctx.convert(v) for v in r.numerator]
    den = polytrim(r.denominator, ctx)
    quotient, _ = _polydiv(num, den)
    if len(den) == 1:
        return PartialFractions(tuple(quotient), (), r.center)

    roots = _locate_poles(ctx, den)
    spread = max(1, max(abs(x) for x in roots))
    for left, right in zip(roots, roots[1:]):
        if right - left <= spread * tolerance(ctx, 3 * ctx.dps / 4):
            raise MultiplePole(f"poles {ctx.nstr(left, 12)} and {ctx.nstr(right, 12)} coincide")
    deriv = polyder(den)
    poles = tuple((r.center + x, polyval(num, x) / polyval(deriv, x)) for x in roots)
    return PartialFractions(tuple(quotient), poles, r.center)


# === Invariance checks ===

def _sample_points(ctx, points: Optional[Sequence]) -> List:
    return [ctx.convert(p) for p in (points or DEFAULT_SAMPLE_POINTS)]


def _finish(ctx, identity: str, deviations: List, points: List, values: List) -> InvarianceReport:
    scale = max([1] + [abs(v) for v in values])
    report = InvarianceReport(identity, max(deviations), tuple(points), scale * tolerance(ctx, 30))
    if not report.passed:
        raise InvarianceViolation(
            f"{identity}: max deviation {ctx.nstr(report.max_deviation, 5)} "
            f"exceeds {ctx.nstr(report.tolerance, 5)}"
        )
    return report


def check_invariance_rational_substitution(series: TaylorSeries, n: int, a, b,
                                           points: Optional[Sequence] = None,
                                           prec: Optional[int] = None) -> InvarianceReport:
    """
    Check that [n/n] commutes with the substitution w = az/(1+bz).

    With g(w) = f(z(w)), z(w) = w/(a - bw), the identity is g^[n/n](w(z)) = f^[n/n](z).
    """
    ctx = context(prec)
    a, b = ctx.convert(a), ctx.convert(b)
    order = 2 * n
    c = [ctx.convert(v) for v in series.coeffs[:order + 1]]
    inner = [ctx.zero] + [b ** (k - 1) / a ** k for k in range(1, order + 1)]
    g = TaylorSeries(compose_series(c, inner, order))
    f_approx = pade(TaylorSeries(c), n, n, ctx.dps)
    g_approx = pade(g, n, n, ctx.dps)
    points = _sample_points(ctx, points)
    values = [evaluate(f_approx, z, ctx.dps) for z in points]
    mapped = [evaluate(g_approx, a * z / (1 + b * z), ctx.dps) for z in points]
    return _finish(ctx, 'rational substitution', [abs(u - v) for u, v in zip(values, mapped)], points, values)


def check_invariance_mobius(series: TaylorSeries, n: int, a, b, c, d,
                            points: Optional[Sequence] = None,
                            prec: Optional[int] = None) -> InvarianceReport:
    """Check that [n/n] of (a + bf)/(c + df) equals (a + b f^[n/n])/(c + d f^[n/n])."""
    ctx = context(prec)
    a, b, c, d = (ctx.convert(v) for v in (a, b, c, d))
    order = 2 * n
    f = [ctx.convert(v) for v in series.coeffs[:order + 1]]
    top = [b * v for v in f]
    top[0] += a
    bottom = [d * v for v in f]
    bottom[0] += c
    g = TaylorSeries(series_div(top, bottom, order))
    f_approx = pade(TaylorSeries(f), n, n, ctx.dps)
    g_approx = pade(g, n, n, ctx.dps)
    points = _sample_points(ctx, points)
    deviations, values = [], []
    for z in points:
        fz = evaluate(f_approx, z, ctx.dps)
        expected = (a + b * fz) / (c + d * fz)
        values.append(expected)
        deviations.append(abs(evaluate(g_approx, z, ctx.dps) - expected))
    return _finish(ctx, 'mobius transform', deviations, points, values)


def check_invariance_shift(series: TaylorSeries, n: int, m: int, k: int,
                           points: Optional[Sequence] = None,
                           prec: Optional[int] = None) -> InvarianceReport:
    """
    Check g^[n-k/m] = (f^[n/m] - Σ_{i<k} c_i z^i) / z^k for g = (f - Σ_{i<k} c_i z^i) / z^k.

    Requires n - k ≥ m.
    """
    ctx = context(prec)
    if n - k < m:
        raise ValidationError(f"shift by {k} needs n - k ≥ m, got n={n}, m={m}")
    f = [ctx.convert(v) for v in series.coeffs[:n + m + 1]]
    g = TaylorSeries(f[k:])
    f_approx = pade(TaylorSeries(f), n, m, ctx.dps)
    g_approx = pade(g, n - k, m, ctx.dps)
    head = f[:k]
    points = [z for z in _sample_points(ctx, points) if z]
    deviations, values = [], []
    for z in points:
        expected = (evaluate(f_approx, z, ctx.dps) - polyval(head, z)) / z ** k
        values.append(expected)
        deviations.append(abs(evaluate(g_approx, z, ctx.dps) - expected))
    return _finish(ctx, 'coefficient shift', deviations, points, values)
