"""
Hyperexponential approximation module.
Two-sided and one-sided Pade approximations of Laplace exponents, the explicit
Gamma and tempered-stable formulas, and the compositions used for VG, CGMY and NIG.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import OutputConfig
from levy.errors import (
    ComplexPoleRoots,
    NonpositiveGaussian,
    OutsideStrip,
    PoleEvaluation,
    StripTooNarrow,
    ValidationError,
    VariantUnavailable,
    ZeroNodeAmbiguity,
)
from levy.numkernel import context, polymul, tolerance
from levy.pade import RationalFunction, TaylorSeries, series_mul
from levy.processes import (
    CGMY,
    CUTOFF_IDENTITY,
    CUTOFF_ZERO,
    GammaProcess,
    LevyModel,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
    esscher_shift,
)
from levy.quadrature import QuadratureRule, gauss_from_moments

logger = logging.getLogger(__name__)

TWO_SIDED = 'two-sided'
ONE_SIDED = 'one-sided'
TIME_CHANGE = 'time-change'
METHODS = (TWO_SIDED, ONE_SIDED, TIME_CHANGE)

ONE_SIDED_RULE = (
    "k must be 0, 1 or 2 for subordinators with jumps of finite variation "
    "and 1 or 2 for spectrally positive processes with jumps of infinite variation"
)


# === Types ===

@dataclass(frozen=True)
class HyperExpProcess:
    """
    Levy process with Gaussian part and exponential-mixture jumps.

    The Levy density is Σ α e^{-βx} over positive terms for x > 0 and over
    negative terms (β < 0) for x < 0. The drift is read in the declared
    cutoff convention: 'zero' (h ≡ 0) or 'identity' (h ≡ x).
    """

    drift: Any
    sigma2: Any
    positive: Tuple[Tuple[Any, Any], ...] = ()
    negative: Tuple[Tuple[Any, Any], ...] = ()
    cutoff: str = CUTOFF_ZERO
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, 'positive', tuple(tuple(t) for t in self.positive))
        object.__setattr__(self, 'negative', tuple(tuple(t) for t in self.negative))
        if self.cutoff not in (CUTOFF_ZERO, CUTOFF_IDENTITY):
            raise ValidationError(f"unknown cutoff convention '{self.cutoff}'")
        if self.sigma2 < 0:
            raise ValidationError(f"Gaussian variance must be nonnegative, got {self.sigma2}")
        for alpha, beta in self.positive:
            if not (alpha > 0 and beta > 0):
                raise ValidationError(f"positive jump term needs α > 0 and β > 0, got ({alpha}, {beta})")
        for alpha, beta in self.negative:
            if not (alpha > 0 and beta < 0):
                raise ValidationError(f"negative jump term needs α > 0 and β < 0, got ({alpha}, {beta})")

    @property
    def terms(self) -> Tuple[Tuple[Any, Any, int], ...]:
        return tuple((a, b, 1) for a, b in self.positive) + tuple((a, b, -1) for a, b in self.negative)

    @property
    def intensity(self):
        """Total jump intensity Σ α/|β|."""
        return sum((a / abs(b) for a, b, _ in self.terms), 0)

    @property
    def jump_mean(self):
        """Integral of x against the Levy density."""
        return sum((s * a / b ** 2 for a, b, s in self.terms), 0)

    @property
    def finite_variation_drift(self):
        return self.drift if self.cutoff == CUTOFF_ZERO else self.drift - self.jump_mean

    @property
    def identity_drift(self):
        return self.drift if self.cutoff == CUTOFF_IDENTITY else self.drift + self.jump_mean

    @property
    def is_subordinator(self) -> bool:
        return not self.negative and not self.sigma2 and self.finite_variation_drift >= 0

    def with_cutoff(self, cutoff: str) -> 'HyperExpProcess':
        drift = self.finite_variation_drift if cutoff == CUTOFF_ZERO else self.identity_drift
        return replace(self, drift=drift, cutoff=cutoff)

    def strip(self, prec: Optional[int] = None) -> Tuple[Any, Any]:
        """(rho_hat, rho): distances from 0 to the nearest negative and positive poles."""
        ctx = context(prec)
        rho = min((b for _, b in self.positive), default=ctx.inf)
        rho_hat = min((-b for _, b in self.negative), default=ctx.inf)
        return ctx.convert(rho_hat), ctx.convert(rho)

    # === Evaluation ===

    def laplace_exponent(self, z, prec: Optional[int] = None):
        ctx = context(prec)
        z = ctx.mpc(z[0], z[1]) if isinstance(z, tuple) else ctx.convert(z)
        total = ctx.convert(self.sigma2) * z ** 2 / 2 + ctx.convert(self.finite_variation_drift) * z
        gap = tolerance(ctx, ctx.dps / 2)
        for a, b, s in self.terms:
            b = ctx.convert(b)
            if abs(b - z) <= gap * abs(b):
                raise PoleEvaluation(f"z = {ctx.nstr(z, 10)} is a pole of the hyperexponential exponent")
            total += s * ctx.convert(a) * z / (b * (b - z))
        return total

    def exponent_array(self, z) -> np.ndarray:
        """Vectorised psi in double precision."""
        z = np.asarray(z, dtype=complex)
        total = float(self.sigma2) * z ** 2 / 2 + float(self.finite_variation_drift) * z
        for a, b, s in self.terms:
            a, b = float(a), float(b)
            total = total + s * a * z / (b * (b - z))
        return total

    def levy_density(self, x, prec: Optional[int] = None):
        ctx = context(prec)
        x = ctx.convert(x)
        if not x:
            raise ValidationError("Levy density is undefined at x = 0")
        terms = self.positive if x > 0 else self.negative
        return ctx.fsum(ctx.convert(a) * ctx.exp(-ctx.convert(b) * x) for a, b in terms)

    def taylor_coeffs(self, order: int, prec: Optional[int] = None) -> TaylorSeries:
        ctx = context(prec)
        coeffs = [ctx.zero]
        for j in range(1, order + 1):
            coeffs.append(ctx.fsum(s * ctx.convert(a) / ctx.convert(b) ** (j + 1) for a, b, s in self.terms))
        if order >= 1:
            coeffs[1] += ctx.convert(self.finite_variation_drift)
        if order >= 2:
            coeffs[2] += ctx.convert(self.sigma2) / 2
        return TaylorSeries(coeffs)

    def cumulants(self, j_max: int, prec: Optional[int] = None) -> List:
        ctx = context(prec)
        c = self.taylor_coeffs(j_max, prec)
        return [ctx.factorial(j) * c[j] for j in range(1, j_max + 1)]

    def to_rational(self, prec: Optional[int] = None) -> RationalFunction:
        """psi as P(z)/Q(z) with Q(z) = Π (1 - z/β)."""
        ctx = context(prec)
        den = [ctx.one]
        for _, b, _ in self.terms:
            den = polymul(den, [ctx.one, -1 / ctx.convert(b)])
        degree = len(den) + (1 if self.sigma2 else 0)
        series = self.taylor_coeffs(max(degree, 1), prec).coeffs
        num = series_mul(series, den, degree)
        return RationalFunction(num, den)

    def atom(self, t) -> Optional[Tuple[Any, Any]]:
        """(location, mass) of the point mass of X_t, present when there is no Gaussian part."""
        if self.sigma2:
            return None
        ctx = context()
        t = ctx.convert(t)
        return ctx.convert(self.finite_variation_drift) * t, ctx.exp(-ctx.convert(self.intensity) * t)

    # === Serialisation ===

    def to_dict(self, digits: Optional[int] = None) -> Dict[str, Any]:
        digits = digits or OutputConfig.HEP_DIGITS
        ctx = context(max(digits + 10, 30))

        def fmt(v):
            return ctx.nstr(ctx.convert(v), digits)

        return {
            'drift': fmt(self.drift),
            'sigma2': fmt(self.sigma2),
            'cutoff': self.cutoff,
            'positive': [[fmt(a), fmt(b)] for a, b in self.positive],
            'negative': [[fmt(a), fmt(b)] for a, b in self.negative],
            'metadata': self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: Dict[str, Any], prec: Optional[int] = None) -> 'HyperExpProcess':
        ctx = context(prec)
        try:
            return cls(
                ctx.convert(doc['drift']),
                ctx.convert(doc['sigma2']),
                [(ctx.convert(a), ctx.convert(b)) for a, b in doc.get('positive', [])],
                [(ctx.convert(a), ctx.convert(b)) for a, b in doc.get('negative', [])],
                doc.get('cutoff', CUTOFF_ZERO),
                dict(doc.get('metadata', {})),
            )
        except KeyError as exc:
            raise ValidationError(f"hyperexponential document is missing field {exc}") from exc


@dataclass(frozen=True)
class CumulantRow:
    order: int
    model: Any
    approx: Any
    matched: bool


@dataclass(frozen=True)
class ApproximationReport:
    """Provenance of an approximation: order, variant, rational exponent, rules and cumulant table."""

    order: int
    variant: str
    k: Optional[int]
    rational: RationalFunction
    rules: Tuple[QuadratureRule, ...]
    cumulants: Tuple[CumulantRow, ...]

    @property
    def matched_through(self) -> int:
        count = 0
        for row in self.cumulants:
            if not row.matched:
                break
            count = row.order
        return count


# === Helpers ===

def _matches(ctx, exact, approx) -> bool:
    scale = max(abs(exact), tolerance(ctx, ctx.dps / 2))
    return abs(approx - exact) <= scale * tolerance(ctx, 40)


def model_cumulants(model: LevyModel, j_max: int, prec: Optional[int] = None) -> List:
    ctx = context(prec)
    c = model.taylor_coeffs(j_max, prec)
    return [ctx.factorial(j) * c[j] for j in range(1, j_max + 1)]


def cumulant_table(model: LevyModel, hep: HyperExpProcess, j_max: int,
                   prec: Optional[int] = None) -> Tuple[CumulantRow, ...]:
    ctx = context(prec)
    exact = model_cumulants(model, j_max, prec)
    approx = hep.cumulants(j_max, prec)
    return tuple(CumulantRow(j + 1, e, a, _matches(ctx, e, a)) for j, (e, a) in enumerate(zip(exact, approx)))


def _metadata(model: LevyModel, variant: str, n: int, k: Optional[int], **extra) -> Dict[str, Any]:
    try:
        described = model.to_dict()
    except ValidationError:
        described = {'family': model.family}
    meta = {'model': described, 'variant': variant, 'n': n, 'k': k}
    meta.update({key: value for key, value in extra.items() if value is not None})
    return meta


# === Two-sided approximation ===

def approx_two_sided(model: LevyModel, n: int, prec: Optional[int] = None,
                     center=0) -> Tuple[HyperExpProcess, ApproximationReport]:
    """
    [n+1/n] approximation psi_n(z) = az + z² Σ w_i / (1 - z x_i).

    (x_i, w_i) is the order-n Gauss rule of |v|³ mu*(dv), built from the
    Taylor coefficients c_2 .. c_{2n+1}. Positive nodes give positive jump
    terms, negative nodes negative ones, and a zero node becomes a Gaussian
    part with variance 2w.

    Args:
        model: Target model without Gaussian part.
        n: Order of the quadrature rule.
        prec: Decimal digits of the working context.
        center: Expansion point; a nonzero center approximates the tilted
            model and tilts the result back.

    Returns:
        (HyperExpProcess in the h ≡ x convention, ApproximationReport)
    """
    ctx = context(prec)
    if n < 1:
        raise ValidationError(f"order n must be at least 1, got {n}")
    if ctx.convert(center):
        shifted = esscher_shift(model, center, ctx.dps)
        hep, report = approx_two_sided(shifted, n, ctx.dps)
        hep = esscher_hep(hep, -ctx.convert(center), ctx.dps)
        return replace(hep, metadata=_metadata(model, TWO_SIDED, n, None, center=str(center))), report

    c = model.taylor_coeffs(2 * n + 1, ctx.dps).coeffs
    rho_hat, rho = model.strip(ctx.dps)
    lo = -1 / rho_hat if rho_hat != ctx.inf else ctx.zero
    rule = gauss_from_moments(c[2:2 * n + 2], (lo, 1 / rho), ctx.dps)

    largest = max(abs(x) for x in rule.nodes)
    sigma2 = ctx.zero
    positive, negative = [], []
    for x, w in zip(rule.nodes, rule.weights):
        if abs(x) < largest * tolerance(ctx, ctx.dps / 2):
            sigma2 += 2 * w
            continue
        if abs(x) < largest * tolerance(ctx, 3 * ctx.dps / 4):
            raise ZeroNodeAmbiguity(f"node {ctx.nstr(x, 5)} of the order-{n} rule is too close to zero to classify")
        term = (w / abs(x) ** 3, 1 / x)
        (positive if x > 0 else negative).append(term)

    hep = HyperExpProcess(c[1], sigma2, positive, negative, CUTOFF_IDENTITY,
                          _metadata(model, TWO_SIDED, n, None))
    report = ApproximationReport(n, TWO_SIDED, None, hep.to_rational(ctx.dps), (rule,),
                                 cumulant_table(model, hep, 2 * n + 1, ctx.dps))
    logger.info("Two-sided order-%d approximation of %s: %d positive, %d negative terms",
                n, model.family, len(positive), len(negative))
    return hep, report


# === One-sided approximations ===

def _check_one_sided(model: LevyModel, k: int):
    if not model.one_sided:
        raise VariantUnavailable(f"{model.family} model has negative jumps; one-sided approximations need none")
    if k not in (0, 1, 2) or (k == 0 and not model.finite_variation):
        raise VariantUnavailable(f"k = {k} is not available for {model.family}: {ONE_SIDED_RULE}")


def approx_one_sided(model: LevyModel, n: int, k: int, prec: Optional[int] = None,
                     center=0) -> Tuple[HyperExpProcess, ApproximationReport]:
    """
    [n+k/n] approximation of a model without negative jumps.

    psi^[n+k/n](z) = Σ_{j≤k} c_j z^j + z^{k+1} Σ w_i / (1 - z x_i), where
    (x_i, w_i) is the Gauss rule of v^{2+k} mu*(dv) built from c_{k+1} .. c_{k+2n}.
    The Levy density is Σ w_i x_i^{-2-k} e^{-x/x_i}.

    Args:
        model: Subordinator (k ∈ {0, 1, 2}) or spectrally positive model with
            jumps of infinite variation (k ∈ {1, 2}).
        n: Order of the quadrature rule.
        k: Excess of the numerator degree.
        prec: Decimal digits of the working context.
        center: Expansion point, as in approx_two_sided.
    """
    ctx = context(prec)
    _check_one_sided(model, k)
    if n < 1:
        raise ValidationError(f"order n must be at least 1, got {n}")
    if ctx.convert(center):
        shifted = esscher_shift(model, center, ctx.dps)
        hep, report = approx_one_sided(shifted, n, k, ctx.dps)
        hep = esscher_hep(hep, -ctx.convert(center), ctx.dps)
        return replace(hep, metadata=_metadata(model, ONE_SIDED, n, k, center=str(center))), report

    order = k + 2 * n
    finite = model.finite_variation
    c = model.taylor_coeffs(order, ctx.dps, include_drift=not finite).coeffs
    mu = ctx.convert(model.drift) if finite else ctx.zero
    _, rho = model.strip(ctx.dps)
    rule = gauss_from_moments(c[k + 1:order + 1], (ctx.zero, 1 / rho), ctx.dps)

    positive = [(w * x ** (-2 - k), 1 / x) for x, w in zip(rule.nodes, rule.weights)]
    mass = ctx.fsum(w / x for x, w in zip(rule.nodes, rule.weights))
    sigma2 = ctx.zero
    if k == 0:
        drift, cutoff = mu, CUTOFF_ZERO
    elif k == 1 and finite:
        drift, cutoff = mu + c[1] - mass, CUTOFF_ZERO
    else:
        drift, cutoff = mu + c[1], CUTOFF_IDENTITY
    if k == 2:
        sigma2 = 2 * c[2] - 2 * mass
        if not sigma2 > 0:
            raise NonpositiveGaussian(
                f"Gaussian coefficient {ctx.nstr(sigma2, 5)} of the [{n + 2}/{n}] approximation "
                f"of {model.family} is not positive"
            )

    hep = HyperExpProcess(drift, sigma2, positive, (), cutoff, _metadata(model, ONE_SIDED, n, k))
    report = ApproximationReport(n, ONE_SIDED, k, hep.to_rational(ctx.dps), (rule,),
                                 cumulant_table(model, hep, 2 * n + k, ctx.dps))
    logger.info("One-sided [%d/%d] approximation of %s", n + k, n, model.family)
    return hep, report


# === Explicit formulas ===

def _jacobi_denominator(ctx, alpha, beta, n: int) -> List:
    """Ascending coefficients of z^n P_n^(alpha, beta)(2/z - 1) = Σ_j C_j (1 - z)^j z^(n-j)."""
    coeffs = [ctx.zero] * (n + 1)
    for j in range(n + 1):
        cj = ctx.binomial(alpha + n, n - j) * ctx.binomial(alpha + beta + n + j, j)
        for i in range(j + 1):
            coeffs[n - j + i] += cj * ctx.binomial(j, i) * (-1) ** i
    return coeffs


def approx_gamma_explicit(n: int, k: int, prec: Optional[int] = None) -> RationalFunction:
    """
    Closed-form [n+k/n] approximant of -ln(1 - z).

    The denominator is z^n P_n^(0,k)(2/z - 1). For k = 0 the numerator is
    2 Σ_j binom(n,j)² (H_{n-j} - H_j)(1 - z)^j; for k ∈ {1, 2} it follows
    from the order conditions.
    """
    ctx = context(prec)
    if k not in (0, 1, 2) or n < 1:
        raise VariantUnavailable(f"explicit Gamma approximant needs n ≥ 1 and k ∈ {{0,1,2}}, got n={n}, k={k}")
    q = _jacobi_denominator(ctx, ctx.zero, ctx.mpf(k), n)
    if k == 0:
        harmonic = [ctx.zero]
        for j in range(1, n + 1):
            harmonic.append(harmonic[-1] + ctx.one / j)
        p = [ctx.zero] * (n + 1)
        for j in range(n + 1):
            cj = 2 * ctx.binomial(n, j) ** 2 * (harmonic[n - j] - harmonic[j])
            for i in range(j + 1):
                p[i] += cj * ctx.binomial(j, i) * (-1) ** i
    else:
        series = GammaProcess().taylor_coeffs(n + k, ctx.dps).coeffs
        p = series_mul(series, q, n + k)
    scale = q[0]
    return RationalFunction([v / scale for v in p], [v / scale for v in q])


def approx_tempered_stable_explicit(alpha, n: int, k: int, prec: Optional[int] = None) -> RationalFunction:
    """
    Closed-form [n+k/n] approximant of Gamma(-alpha)((1 - z)^alpha - 1).

    q(z) = z^n P_n^(alpha, k-alpha)(2/z - 1) and
    p(z) = Gamma(-alpha)[(1/n!) Σ_{j≤n+k} (2n+k-j)! (-n-alpha)_j / (j!(n+k-j)!) z^j - q(z)].
    """
    ctx = context(prec)
    a = ctx.convert(alpha)
    if not ((0 < a < 1 and k in (0, 1, 2)) or (1 < a < 2 and k in (1, 2))) or n < 1:
        raise VariantUnavailable(f"tempered stable alpha={alpha} with k={k}: {ONE_SIDED_RULE}")
    q = _jacobi_denominator(ctx, a, k - a, n)
    q_padded = q + [ctx.zero] * k
    head = [
        ctx.factorial(2 * n + k - j) * ctx.rf(-n - a, j) / (ctx.factorial(j) * ctx.factorial(n + k - j))
        / ctx.factorial(n)
        for j in range(n + k + 1)
    ]
    g = ctx.gamma(-a)
    p = [g * (h - v) for h, v in zip(head, q_padded)]
    scale = q[0]
    return RationalFunction([v / scale for v in p], [v / scale for v in q])


# === Compositions ===

def compose_difference(pos: HyperExpProcess, neg: HyperExpProcess, extra_drift=0) -> HyperExpProcess:
    """
    Process X = Y⁺ - Y⁻ (+ extra drift) for independent spectrally positive Y⁺, Y⁻.

    Args:
        pos: Process supplying the positive jumps.
        neg: Process whose jumps are reflected into negative jumps.
        extra_drift: Linear drift added to the result.
    """
    if pos.negative or neg.negative:
        raise ValidationError("compose_difference needs spectrally positive inputs")
    if pos.cutoff == CUTOFF_ZERO and neg.cutoff == CUTOFF_ZERO:
        drift, cutoff = pos.drift - neg.drift, CUTOFF_ZERO
    else:
        drift, cutoff = pos.identity_drift - neg.identity_drift, CUTOFF_IDENTITY
    reflected = [(a, -b) for a, b in neg.positive]
    return HyperExpProcess(drift + extra_drift, pos.sigma2 + neg.sigma2, pos.positive, reflected, cutoff)


def subordinate_brownian(sub: HyperExpProcess, sigma_bm, a_bm, prec: Optional[int] = None) -> HyperExpProcess:
    """
    Brownian motion with drift a_bm and volatility sigma_bm time-changed by a subordinator.

    psi_Z(z) = psi_sub(sigma² z²/2 + a z). Each pole β of psi_sub splits into the
    roots z± = (-a ± sqrt(a² + 2σ²β))/σ², each carrying amplitude α / sqrt(a² + 2σ²β).
    """
    ctx = context(prec)
    sigma, a = ctx.convert(sigma_bm), ctx.convert(a_bm)
    if not sigma > 0:
        raise ValidationError(f"Brownian volatility must be positive, got {sigma_bm}")
    if sub.negative or sub.sigma2:
        raise ValidationError("time change must be a subordinator: no negative jumps, no Gaussian part")
    b = ctx.convert(sub.finite_variation_drift)
    if b < 0:
        raise ValidationError(f"subordinator drift {ctx.nstr(b, 8)} is negative")
    s2 = sigma ** 2
    positive, negative = [], []
    for alpha, beta in sub.positive:
        disc = a ** 2 + 2 * s2 * ctx.convert(beta)
        if not disc > 0:
            raise ComplexPoleRoots(f"pole {ctx.nstr(beta, 8)} gives non-real roots for a={a_bm}, sigma={sigma_bm}")
        root = ctx.sqrt(disc)
        amplitude = ctx.convert(alpha) / root
        positive.append((amplitude, (-a + root) / s2))
        negative.append((amplitude, (-a - root) / s2))
    return HyperExpProcess(b * a, b * s2, positive, negative, CUTOFF_ZERO)


def rescale(hep: HyperExpProcess, c, lam, prec: Optional[int] = None) -> HyperExpProcess:
    """
    Process with exponent lam·psi(c z).

    Drift scales by lam·c, Gaussian variance by lam·c², and a term (α, β)
    becomes (lam·α/c, β/c), so the density is (lam/c)·π(x/c).
    """
    ctx = context(prec)
    c, lam = ctx.convert(c), ctx.convert(lam)
    if not (c > 0 and lam > 0):
        raise ValidationError(f"rescale needs positive factors, got c={c}, lambda={lam}")
    return HyperExpProcess(
        lam * c * ctx.convert(hep.drift),
        lam * c ** 2 * ctx.convert(hep.sigma2),
        [(lam * ctx.convert(a) / c, ctx.convert(b) / c) for a, b in hep.positive],
        [(lam * ctx.convert(a) / c, ctx.convert(b) / c) for a, b in hep.negative],
        hep.cutoff,
        hep.metadata,
    )


def esscher_hep(hep: HyperExpProcess, shift, prec: Optional[int] = None) -> HyperExpProcess:
    """Tilted process with exponent psi(z + shift) - psi(shift); each β moves to β - shift."""
    ctx = context(prec)
    h = ctx.convert(shift)
    rho_hat, rho = hep.strip(ctx.dps)
    if not -rho_hat < h < rho:
        raise OutsideStrip(f"tilt {ctx.nstr(h, 10)} outside ({ctx.nstr(-rho_hat, 10)}, {ctx.nstr(rho, 10)})")
    sigma2 = ctx.convert(hep.sigma2)
    tilted = HyperExpProcess(
        ctx.convert(hep.finite_variation_drift) + sigma2 * h,
        sigma2,
        [(ctx.convert(a), ctx.convert(b) - h) for a, b in hep.positive],
        [(ctx.convert(a), ctx.convert(b) - h) for a, b in hep.negative],
        CUTOFF_ZERO,
        hep.metadata,
    )
    return tilted.with_cutoff(hep.cutoff)


def martingale_hep(hep: HyperExpProcess, rate, prec: Optional[int] = None) -> HyperExpProcess:
    """Adjust the drift so that psi(1) = rate."""
    ctx = context(prec)
    _, rho = hep.strip(ctx.dps)
    if not rho > 1:
        raise StripTooNarrow(f"hyperexponential strip ends at {ctx.nstr(rho, 10)} ≤ 1")
    correction = ctx.convert(rate) - hep.laplace_exponent(1, ctx.dps)
    return replace(hep, drift=ctx.convert(hep.drift) + correction)


def _add_drift(hep: HyperExpProcess, drift) -> HyperExpProcess:
    return replace(hep, drift=hep.drift + drift)


def _composite_report(model: LevyModel, hep: HyperExpProcess, n: int, k: Optional[int],
                      reports: Sequence[ApproximationReport], matched: int, prec) -> ApproximationReport:
    rules = tuple(rule for report in reports for rule in report.rules)
    return ApproximationReport(n, ONE_SIDED, k, hep.to_rational(prec), rules,
                               cumulant_table(model, hep, matched, prec))


def approx_vg_difference(model: VarianceGamma, n_pos: int, k_pos: int, n_neg: Optional[int] = None,
                         k_neg: Optional[int] = None, prec: Optional[int] = None
                         ) -> Tuple[HyperExpProcess, ApproximationReport]:
    """VG as the difference of two rescaled Gamma approximations, one per tail."""
    ctx = context(prec)
    n_neg = n_pos if n_neg is None else n_neg
    k_neg = k_pos if k_neg is None else k_neg
    a, a_hat, nu = ctx.convert(model.a), ctx.convert(model.a_hat), ctx.convert(model.nu)
    up, up_report = approx_one_sided(GammaProcess(), n_pos, k_pos, ctx.dps)
    down, down_report = approx_one_sided(GammaProcess(), n_neg, k_neg, ctx.dps)
    hep = compose_difference(rescale(up, 1 / a, 1 / nu, ctx.dps), rescale(down, 1 / a_hat, 1 / nu, ctx.dps),
                             ctx.convert(model.drift))
    hep = replace(hep, metadata=_metadata(model, ONE_SIDED, n_pos, k_pos, n_neg=n_neg, k_neg=k_neg))
    matched = min(2 * n_pos + k_pos, 2 * n_neg + k_neg)
    return hep, _composite_report(model, hep, n_pos, k_pos, (up_report, down_report), matched, ctx.dps)


def approx_cgmy_difference(model: CGMY, n_pos: int, k_pos: int, n_neg: Optional[int] = None,
                           k_neg: Optional[int] = None, prec: Optional[int] = None
                           ) -> Tuple[HyperExpProcess, ApproximationReport]:
    """CGMY as the difference of two rescaled tempered-stable approximations, one per tail."""
    ctx = context(prec)
    n_neg = n_pos if n_neg is None else n_neg
    k_neg = k_pos if k_neg is None else k_neg
    C, G, M, Y = (ctx.convert(v) for v in (model.C, model.G, model.M, model.Y))
    stable = TemperedStable(model.Y)
    up, up_report = approx_one_sided(stable, n_pos, k_pos, ctx.dps)
    down, down_report = approx_one_sided(stable, n_neg, k_neg, ctx.dps)
    hep = compose_difference(
        rescale(up, 1 / M, C * ctx.power(M, Y), ctx.dps),
        rescale(down, 1 / G, C * ctx.power(G, Y), ctx.dps),
        ctx.convert(model.drift),
    )
    hep = replace(hep, metadata=_metadata(model, ONE_SIDED, n_pos, k_pos, n_neg=n_neg, k_neg=k_neg))
    matched = min(2 * n_pos + k_pos, 2 * n_neg + k_neg)
    return hep, _composite_report(model, hep, n_pos, k_pos, (up_report, down_report), matched, ctx.dps)


def _check_time_change(k: int):
    if k not in (0, 1):
        raise VariantUnavailable(f"time change needs a subordinator approximation, k ∈ {{0,1}}, got k={k}")


def approx_vg_time_change(model: VarianceGamma, n: int, k: int, prec: Optional[int] = None
                          ) -> Tuple[HyperExpProcess, ApproximationReport]:
    """VG as Brownian motion time-changed by an approximated Gamma subordinator of unit mean rate."""
    ctx = context(prec)
    _check_time_change(k)
    nu = ctx.convert(model.nu)
    theta, sigma = model.theta_sigma(ctx.dps)
    gamma, gamma_report = approx_one_sided(GammaProcess(), n, k, ctx.dps)
    sub = rescale(gamma, nu, 1 / nu, ctx.dps)
    hep = _add_drift(subordinate_brownian(sub, sigma, theta, ctx.dps), ctx.convert(model.drift))
    hep = replace(hep, metadata=_metadata(model, TIME_CHANGE, n, k))
    return hep, _composite_report(model, hep, n, k, (gamma_report,), 2 * n + k, ctx.dps)


def approx_nig_time_change(model: NormalInverseGaussian, n: int, k: int, prec: Optional[int] = None
                           ) -> Tuple[HyperExpProcess, ApproximationReport]:
    """
    NIG as Brownian motion time-changed by an approximated inverse Gaussian subordinator.

    The subordinator comes from the tempered-stable alpha = 1/2 approximation:
    psi_IG(u) = lam·psi_TS(kappa u) with lam = 1/(2 sqrt(pi) kappa).
    """
    ctx = context(prec)
    _check_time_change(k)
    kappa = ctx.convert(model.kappa)
    stable, stable_report = approx_one_sided(TemperedStable(ctx.mpf(1) / 2), n, k, ctx.dps)
    sub = rescale(stable, kappa, 1 / (2 * ctx.sqrt(ctx.pi) * kappa), ctx.dps)
    hep = subordinate_brownian(sub, model.sigma, model.a_bm, ctx.dps)
    hep = _add_drift(hep, ctx.convert(model.drift))
    hep = replace(hep, metadata=_metadata(model, TIME_CHANGE, n, k))
    return hep, _composite_report(model, hep, n, k, (stable_report,), 2 * n + k, ctx.dps)


def approximate(model: LevyModel, method: str, n: int, k: Optional[int] = None,
                n_neg: Optional[int] = None, k_neg: Optional[int] = None,
                center=0, prec: Optional[int] = None) -> Tuple[HyperExpProcess, ApproximationReport]:
    """
    Dispatch to the approximation matching a model and method.

    Args:
        model: Target model.
        method: 'two-sided', 'one-sided' or 'time-change'.
        n: Order (positive tail order for differences).
        k: Numerator excess; defaults to 1, valid for every one-sided case.
        n_neg: Negative tail order for VG/CGMY differences.
        k_neg: Negative tail excess for VG/CGMY differences.
        center: Expansion point for direct approximations.
        prec: Decimal digits of the working context.
    """
    k = 1 if k is None else k
    if method == TWO_SIDED:
        return approx_two_sided(model, n, prec, center)
    if method == ONE_SIDED:
        if model.one_sided:
            return approx_one_sided(model, n, k, prec, center)
        if isinstance(model, VarianceGamma):
            return approx_vg_difference(model, n, k, n_neg, k_neg, prec)
        if isinstance(model, CGMY):
            return approx_cgmy_difference(model, n, k, n_neg, k_neg, prec)
        raise VariantUnavailable(f"no one-sided construction for {model.family}")
    if method == TIME_CHANGE:
        if isinstance(model, VarianceGamma):
            return approx_vg_time_change(model, n, k, prec)
        if isinstance(model, NormalInverseGaussian):
            return approx_nig_time_change(model, n, k, prec)
        raise VariantUnavailable(f"no time-change construction for {model.family}")
    raise ValidationError(f"unknown method '{method}', expected one of {METHODS}")


# === Evaluation helpers ===

def levy_density(hep: HyperExpProcess, x, prec: Optional[int] = None):
    return hep.levy_density(x, prec)


def laplace_exponent_hep(hep: HyperExpProcess, z, prec: Optional[int] = None):
    return hep.laplace_exponent(z, prec)


def cumulants(target: Union[HyperExpProcess, LevyModel], j_max: int, prec: Optional[int] = None) -> List:
    """Cumulants κ_1 .. κ_{j_max}, i.e. j! times the Taylor coefficients of psi."""
    if isinstance(target, HyperExpProcess):
        return target.cumulants(j_max, prec)
    return model_cumulants(target, j_max, prec)
