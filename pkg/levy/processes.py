"""
Levy model catalogue.
Laplace exponents, Taylor coefficients at arbitrary centers, analyticity strips,
Levy densities and martingale drift calibration for the supported families.
"""

import copy
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from levy.errors import OutsideStrip, StripTooNarrow, ValidationError
from levy.numkernel import context, tolerance
from levy.pade import TaylorSeries, compose_series

logger = logging.getLogger(__name__)

CUTOFF_ZERO = 'zero'
CUTOFF_IDENTITY = 'identity'


@dataclass(frozen=True)
class CharacteristicTriple:
    """Drift, Gaussian variance and jump density under a declared cutoff convention."""

    a: Any
    sigma2: Any
    density: Callable
    cutoff: str

    def __post_init__(self):
        if self.cutoff not in (CUTOFF_ZERO, CUTOFF_IDENTITY):
            raise ValidationError(f"unknown cutoff convention '{self.cutoff}'")
        if self.sigma2 < 0:
            raise ValidationError("Gaussian variance must be nonnegative")


# === Series building blocks ===

def _log_coeffs(ctx, s, center, order: int) -> List:
    """Taylor coefficients of -ln(1 - w/s) at w = center."""
    base = s - center
    coeffs = [-ctx.log(base / s)]
    coeffs += [base ** -i / i for i in range(1, order + 1)]
    return coeffs


def _power_coeffs(ctx, base, y, sign: int, order: int) -> List:
    """Taylor coefficients of (base + sign·z)^y at z = 0, base > 0."""
    lead = ctx.power(base, y)
    return [lead * ctx.binomial(y, i) * (sign / base) ** i for i in range(order + 1)]


def _param(value):
    if isinstance(value, str):
        return value
    return str(value)


# === Models ===

class LevyModel:
    """
    Base class of a Levy process with completely monotone jumps.

    Subclasses provide the jump part of the Laplace exponent; the linear
    drift is handled here.
    """

    family = 'custom'
    finite_variation = True
    one_sided = False

    def __init__(self, drift=0):
        self.drift = drift

    # --- subclass hooks ---

    def parameters(self) -> Dict[str, Any]:
        return {}

    def _strip(self, ctx) -> Tuple[Any, Any]:
        raise NotImplementedError

    def _jump_exponent(self, ctx, z):
        raise NotImplementedError

    def _jump_coefficients(self, ctx, order: int, center) -> List:
        raise NotImplementedError

    def _jump_array(self, z: np.ndarray) -> np.ndarray:
        ctx = context(30)
        return np.array([complex(self._jump_exponent(ctx, ctx.mpc(v.real, v.imag))) for v in z.ravel()]).reshape(z.shape)

    def _jump_density(self, ctx, x):
        raise ValidationError(f"{self.family} model has no Levy density formula")

    # --- public interface ---

    def strip(self, prec: Optional[int] = None) -> Tuple[Any, Any]:
        """Return (rho_hat, rho); the exponent is analytic for -rho_hat < Re z < rho."""
        return self._strip(context(prec))

    def check_strip(self, ctx, z):
        rho_hat, rho = self._strip(ctx)
        if ctx.im(z) == 0 and (ctx.re(z) >= rho or ctx.re(z) <= -rho_hat):
            raise OutsideStrip(
                f"z = {ctx.nstr(z, 10)} lies on a branch cut of the {self.family} exponent "
                f"(strip ({ctx.nstr(-rho_hat, 10)}, {ctx.nstr(rho, 10)}))"
            )

    def laplace_exponent(self, z, prec: Optional[int] = None):
        ctx = context(prec)
        z = ctx.mpc(z[0], z[1]) if isinstance(z, tuple) else ctx.convert(z)
        self.check_strip(ctx, z)
        return ctx.convert(self.drift) * z + self._jump_exponent(ctx, z)

    def taylor_coeffs(self, order: int, prec: Optional[int] = None, center=0,
                      include_drift: bool = True) -> TaylorSeries:
        """
        Taylor coefficients of psi at a center inside the strip.

        Args:
            order: Highest order N ≥ 1.
            prec: Decimal digits of the working context.
            center: Expansion point; 0 gives c_0 = 0.
            include_drift: Add the linear drift term.
        """
        if order < 1:
            raise ValidationError(f"Taylor order must be at least 1, got {order}")
        ctx = context(prec)
        center = ctx.convert(center)
        if center:
            self.check_strip(ctx, center)
        coeffs = self._jump_coefficients(ctx, order, center)
        if include_drift:
            drift = ctx.convert(self.drift)
            coeffs[0] += drift * center
            coeffs[1] += drift
        if not center:
            coeffs[0] = ctx.zero
        return TaylorSeries(coeffs, center)

    def exponent_array(self, z) -> np.ndarray:
        """Vectorised psi in double precision (principal branches)."""
        z = np.asarray(z, dtype=complex)
        return float(self.drift) * z + self._jump_array(z)

    def levy_density(self, x, prec: Optional[int] = None):
        ctx = context(prec)
        x = ctx.convert(x)
        if not x:
            raise ValidationError("Levy density is undefined at x = 0")
        if x < 0 and self.one_sided:
            return ctx.zero
        return self._jump_density(ctx, x)

    def characteristic_triple(self, prec: Optional[int] = None) -> CharacteristicTriple:
        ctx = context(prec)
        density = lambda x: self.levy_density(x, ctx.dps)
        if self.finite_variation:
            return CharacteristicTriple(ctx.convert(self.drift), ctx.zero, density, CUTOFF_ZERO)
        return CharacteristicTriple(self.taylor_coeffs(1, ctx.dps)[1], ctx.zero, density, CUTOFF_IDENTITY)

    def with_drift(self, drift) -> 'LevyModel':
        model = copy.copy(self)
        model.drift = drift
        return model

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'params': {key: _param(value) for key, value in self.parameters().items()},
            'drift': _param(self.drift),
        }

    def __repr__(self) -> str:
        params = ', '.join(f"{k}={v}" for k, v in self.parameters().items())
        return f"{type(self).__name__}({params}, drift={self.drift})"


class GammaProcess(LevyModel):
    """psi(z) = -ln(1 - z)."""

    family = 'gamma'
    one_sided = True

    def _strip(self, ctx):
        return ctx.inf, ctx.one

    def _jump_exponent(self, ctx, z):
        return -ctx.log(1 - z)

    def _jump_coefficients(self, ctx, order, center):
        return _log_coeffs(ctx, ctx.one, center, order)

    def _jump_array(self, z):
        return -np.log(1 - z)

    def _jump_density(self, ctx, x):
        return ctx.exp(-x) / x


class TemperedStable(LevyModel):
    """psi(z) = Gamma(-alpha)((1 - z)^alpha - 1), alpha in (0, 1) or (1, 2)."""

    family = 'ts'
    one_sided = True

    def __init__(self, alpha, drift=0):
        super().__init__(drift)
        value = float(alpha)
        if not (0 < value < 1 or 1 < value < 2):
            raise ValidationError(f"tempered stable index must lie in (0,1)∪(1,2), got {alpha}")
        self.alpha = alpha
        self.finite_variation = value < 1

    def parameters(self):
        return {'alpha': self.alpha}

    def _strip(self, ctx):
        return ctx.inf, ctx.one

    def _jump_exponent(self, ctx, z):
        alpha = ctx.convert(self.alpha)
        return ctx.gamma(-alpha) * (ctx.power(1 - z, alpha) - 1)

    def _jump_coefficients(self, ctx, order, center):
        alpha = ctx.convert(self.alpha)
        g = ctx.gamma(-alpha)
        coeffs = [g * c for c in _power_coeffs(ctx, 1 - center, alpha, -1, order)]
        coeffs[0] -= g
        return coeffs

    def _jump_array(self, z):
        alpha = float(self.alpha)
        return special.gamma(-alpha) * ((1 - z) ** alpha - 1)

    def _jump_density(self, ctx, x):
        return x ** (-1 - ctx.convert(self.alpha)) * ctx.exp(-x)


class VarianceGamma(LevyModel):
    """psi(z) = mu z - (1/nu) ln(1 - z/a) - (1/nu) ln(1 + z/a_hat)."""

    family = 'vg'

    def __init__(self, a, a_hat, nu, drift=0):
        super().__init__(drift)
        if not (float(a) > 0 and float(a_hat) > 0 and float(nu) > 0):
            raise ValidationError(f"VG parameters must be positive, got a={a}, a_hat={a_hat}, nu={nu}")
        self.a = a
        self.a_hat = a_hat
        self.nu = nu

    @classmethod
    def from_theta_sigma(cls, theta, sigma, nu, drift=0, prec: Optional[int] = None) -> 'VarianceGamma':
        """Convert the Brownian time-change parameters (theta, sigma, nu)."""
        ctx = context(prec)
        theta, sigma, nu = ctx.convert(theta), ctx.convert(sigma), ctx.convert(nu)
        if not (sigma > 0 and nu > 0):
            raise ValidationError(f"sigma and nu must be positive, got sigma={sigma}, nu={nu}")
        mu_p = ctx.sqrt(theta ** 2 + 2 * sigma ** 2 / nu) / 2 + theta / 2
        mu_n = mu_p - theta
        return cls(1 / (mu_p * nu), 1 / (mu_n * nu), nu, drift)

    def theta_sigma(self, prec: Optional[int] = None) -> Tuple[Any, Any]:
        ctx = context(prec)
        nu = ctx.convert(self.nu)
        mu_p = 1 / (ctx.convert(self.a) * nu)
        mu_n = 1 / (ctx.convert(self.a_hat) * nu)
        return mu_p - mu_n, ctx.sqrt(2 * nu * mu_p * mu_n)

    def parameters(self):
        return {'a': self.a, 'a_hat': self.a_hat, 'nu': self.nu}

    def _strip(self, ctx):
        return ctx.convert(self.a_hat), ctx.convert(self.a)

    def _jump_exponent(self, ctx, z):
        a, a_hat, nu = ctx.convert(self.a), ctx.convert(self.a_hat), ctx.convert(self.nu)
        return -(ctx.log(1 - z / a) + ctx.log(1 + z / a_hat)) / nu

    def _jump_coefficients(self, ctx, order, center):
        a, a_hat, nu = ctx.convert(self.a), ctx.convert(self.a_hat), ctx.convert(self.nu)
        pos = _log_coeffs(ctx, a, center, order)
        neg = _log_coeffs(ctx, -a_hat, center, order)
        return [(p + q) / nu for p, q in zip(pos, neg)]

    def _jump_array(self, z):
        a, a_hat, nu = float(self.a), float(self.a_hat), float(self.nu)
        return -(np.log(1 - z / a) + np.log(1 + z / a_hat)) / nu

    def _jump_density(self, ctx, x):
        rate = ctx.convert(self.a) if x > 0 else ctx.convert(self.a_hat)
        return ctx.exp(-rate * abs(x)) / (ctx.convert(self.nu) * abs(x))


class CGMY(LevyModel):
    """psi(z) = mu z + C Gamma(-Y)[(M - z)^Y - M^Y + (G + z)^Y - G^Y]."""

    family = 'cgmy'

    def __init__(self, C, G, M, Y, drift=0):
        super().__init__(drift)
        y = float(Y)
        if not (0 < y < 1 or 1 < y < 2):
            raise ValidationError(f"CGMY index Y must lie in (0,1)∪(1,2), got {Y}")
        if not (float(C) > 0 and float(G) > 0 and float(M) > 0):
            raise ValidationError(f"C, G and M must be positive, got C={C}, G={G}, M={M}")
        self.C, self.G, self.M, self.Y = C, G, M, Y
        self.finite_variation = y < 1

    def parameters(self):
        return {'C': self.C, 'G': self.G, 'M': self.M, 'Y': self.Y}

    def _strip(self, ctx):
        return ctx.convert(self.G), ctx.convert(self.M)

    def _scale(self, ctx):
        return ctx.convert(self.C) * ctx.gamma(-ctx.convert(self.Y))

    def _jump_exponent(self, ctx, z):
        G, M, Y = ctx.convert(self.G), ctx.convert(self.M), ctx.convert(self.Y)
        return self._scale(ctx) * (ctx.power(M - z, Y) - ctx.power(M, Y) + ctx.power(G + z, Y) - ctx.power(G, Y))

    def _jump_coefficients(self, ctx, order, center):
        G, M, Y = ctx.convert(self.G), ctx.convert(self.M), ctx.convert(self.Y)
        pos = _power_coeffs(ctx, M - center, Y, -1, order)
        neg = _power_coeffs(ctx, G + center, Y, 1, order)
        coeffs = [self._scale(ctx) * (p + q) for p, q in zip(pos, neg)]
        coeffs[0] -= self._scale(ctx) * (ctx.power(M, Y) + ctx.power(G, Y))
        return coeffs

    def _jump_array(self, z):
        C, G, M, Y = float(self.C), float(self.G), float(self.M), float(self.Y)
        return C * special.gamma(-Y) * ((M - z) ** Y - M ** Y + (G + z) ** Y - G ** Y)

    def _jump_density(self, ctx, x):
        rate = ctx.convert(self.M) if x > 0 else ctx.convert(self.G)
        return ctx.convert(self.C) * ctx.exp(-rate * abs(x)) / abs(x) ** (1 + ctx.convert(self.Y))


class InverseGaussianSubordinator(LevyModel):
    """psi(z) = (1 - sqrt(1 - kappa z)) / kappa."""

    family = 'ig'
    one_sided = True

    def __init__(self, kappa, drift=0):
        super().__init__(drift)
        if not float(kappa) > 0:
            raise ValidationError(f"kappa must be positive, got {kappa}")
        self.kappa = kappa

    def parameters(self):
        return {'kappa': self.kappa}

    def _strip(self, ctx):
        return ctx.inf, 1 / ctx.convert(self.kappa)

    def _jump_exponent(self, ctx, z):
        kappa = ctx.convert(self.kappa)
        return (1 - ctx.sqrt(1 - kappa * z)) / kappa

    def _jump_coefficients(self, ctx, order, center):
        kappa = ctx.convert(self.kappa)
        base = 1 - kappa * center
        root = _power_coeffs(ctx, base, ctx.mpf(1) / 2, -1, order)
        # (base - kappa z)^(1/2): the z^i coefficient picks up kappa^i
        coeffs = [-root[i] * kappa ** (i - 1) for i in range(order + 1)]
        coeffs[0] += 1 / kappa
        return coeffs

    def _jump_array(self, z):
        kappa = float(self.kappa)
        return (1 - np.sqrt(1 - kappa * z)) / kappa

    def _jump_density(self, ctx, x):
        kappa = ctx.convert(self.kappa)
        return ctx.exp(-x / kappa) / (2 * ctx.sqrt(ctx.pi * kappa) * x ** ctx.mpf(1.5))


class NormalInverseGaussian(LevyModel):
    """psi(z) = mu z + psi_IG(sigma^2 z^2 / 2 + a_bm z) with psi_IG the inverse Gaussian exponent."""

    family = 'nig'
    finite_variation = False

    def __init__(self, kappa, sigma, a_bm, drift=0):
        super().__init__(drift)
        if not (float(kappa) > 0 and float(sigma) > 0):
            raise ValidationError(f"kappa and sigma must be positive, got kappa={kappa}, sigma={sigma}")
        self.kappa, self.sigma, self.a_bm = kappa, sigma, a_bm
        self.subordinator = InverseGaussianSubordinator(kappa)

    def parameters(self):
        return {'kappa': self.kappa, 'sigma': self.sigma, 'a_bm': self.a_bm}

    def _shape(self, ctx):
        """(alpha, beta, delta) of the standard NIG parameterisation."""
        kappa, sigma, theta = ctx.convert(self.kappa), ctx.convert(self.sigma), ctx.convert(self.a_bm)
        alpha = ctx.sqrt(theta ** 2 / sigma ** 4 + 2 / (kappa * sigma ** 2))
        return alpha, theta / sigma ** 2, sigma / ctx.sqrt(2 * kappa)

    def _strip(self, ctx):
        alpha, beta, _ = self._shape(ctx)
        return alpha + beta, alpha - beta

    def check_strip(self, ctx, z):
        super().check_strip(ctx, z)
        rho_hat, rho = self._strip(ctx)
        if not -rho_hat < ctx.re(z) < rho:
            raise OutsideStrip(f"z = {ctx.nstr(z, 10)} lies outside the NIG strip")

    def _inner(self, ctx, z):
        sigma, theta = ctx.convert(self.sigma), ctx.convert(self.a_bm)
        return sigma ** 2 * z ** 2 / 2 + theta * z

    def _jump_exponent(self, ctx, z):
        return self.subordinator._jump_exponent(ctx, self._inner(ctx, z))

    def _jump_coefficients(self, ctx, order, center):
        sigma, theta = ctx.convert(self.sigma), ctx.convert(self.a_bm)
        outer = self.subordinator._jump_coefficients(ctx, order, self._inner(ctx, center))
        inner = [ctx.zero, sigma ** 2 * center + theta, sigma ** 2 / 2] + [ctx.zero] * max(0, order - 2)
        return compose_series(outer, inner[:order + 1], order)

    def _jump_array(self, z):
        sigma, theta = float(self.sigma), float(self.a_bm)
        return self.subordinator._jump_array(sigma ** 2 * z ** 2 / 2 + theta * z)

    def _jump_density(self, ctx, x):
        alpha, beta, delta = self._shape(ctx)
        return delta * alpha / (ctx.pi * abs(x)) * ctx.exp(beta * x) * ctx.besselk(1, alpha * abs(x))


class CustomModel(LevyModel):
    """
    Model supplied through a coefficient generator.

    Args:
        coefficients: Callable (ctx, order, center) -> list of Taylor coefficients
            of the jump exponent, or a finite list of coefficients at 0.
        rho: Right end of the strip.
        rho_hat: Minus the left end of the strip.
        exponent: Optional callable (ctx, z) -> psi(z).
        array_exponent: Optional vectorised exponent for Fourier work.
        density: Optional callable (ctx, x) -> Levy density.
    """

    family = 'custom'

    def __init__(self, coefficients, rho, rho_hat, exponent: Optional[Callable] = None,
                 array_exponent: Optional[Callable] = None, density: Optional[Callable] = None,
                 one_sided: bool = False, finite_variation: bool = True, drift=0, name: str = 'custom'):
        super().__init__(drift)
        self.coefficients = coefficients
        self.rho = rho
        self.rho_hat = rho_hat
        self.exponent = exponent
        self.array_exponent = array_exponent
        self.density = density
        self.one_sided = one_sided
        self.finite_variation = finite_variation
        self.name = name

    def parameters(self):
        params = {'rho': self.rho, 'rho_hat': self.rho_hat, 'name': self.name}
        if not callable(self.coefficients):
            params['coefficients'] = [_param(c) for c in self.coefficients]
        return params

    def to_dict(self):
        if callable(self.coefficients):
            raise ValidationError(f"custom model '{self.name}' has a generated series and cannot be serialised")
        doc = super().to_dict()
        doc['params']['one_sided'] = self.one_sided
        doc['params']['finite_variation'] = self.finite_variation
        return doc

    def _strip(self, ctx):
        return ctx.convert(self.rho_hat), ctx.convert(self.rho)

    def _jump_exponent(self, ctx, z):
        if self.exponent is None:
            raise ValidationError(f"custom model '{self.name}' has no closed-form exponent")
        return self.exponent(ctx, z)

    def _jump_coefficients(self, ctx, order, center):
        if callable(self.coefficients):
            return list(self.coefficients(ctx, order, center))
        if center:
            raise ValidationError(f"custom model '{self.name}' only has coefficients at 0")
        if len(self.coefficients) < order + 1:
            raise ValidationError(
                f"custom model '{self.name}' has {len(self.coefficients)} coefficients, order {order} requested"
            )
        return [ctx.convert(c) for c in self.coefficients[:order + 1]]

    def _jump_array(self, z):
        if self.array_exponent is not None:
            return self.array_exponent(z)
        return super()._jump_array(z)

    def _jump_density(self, ctx, x):
        if self.density is None:
            return super()._jump_density(ctx, x)
        return self.density(ctx, x)


# === Operations ===

def laplace_exponent(model: LevyModel, z, prec: Optional[int] = None):
    return model.laplace_exponent(z, prec)


def taylor_coeffs(model: LevyModel, order: int, prec: Optional[int] = None) -> TaylorSeries:
    return model.taylor_coeffs(order, prec)


def esscher_shift(model: LevyModel, shift, prec: Optional[int] = None) -> LevyModel:
    """
    Exponentially tilted model with psi~(z) = psi(shift + z) - psi(shift).

    Args:
        model: Model to tilt.
        shift: Tilt parameter strictly inside (-rho_hat, rho).
        prec: Decimal digits used to validate the shift.

    Returns:
        CustomModel with strip (rho_hat + shift, rho - shift), or the model itself for shift 0.
    """
    ctx = context(prec)
    shift_value = ctx.convert(shift)
    if not shift_value:
        return model
    rho_hat, rho = model.strip(ctx.dps)
    if not -rho_hat < shift_value < rho:
        raise OutsideStrip(f"Esscher shift {shift} outside ({ctx.nstr(-rho_hat, 10)}, {ctx.nstr(rho, 10)})")

    def coefficients(inner_ctx, order, center):
        a = inner_ctx.convert(shift)
        coeffs = list(model.taylor_coeffs(order, inner_ctx.dps, center=a + center).coeffs)
        coeffs[0] -= model.laplace_exponent(a, inner_ctx.dps)
        return coeffs

    def exponent(inner_ctx, z):
        a = inner_ctx.convert(shift)
        return model.laplace_exponent(a + z, inner_ctx.dps) - model.laplace_exponent(a, inner_ctx.dps)

    def array_exponent(z):
        a = float(shift_value)
        return model.exponent_array(a + z) - model.exponent_array(np.array(a))

    def density(inner_ctx, x):
        return inner_ctx.exp(inner_ctx.convert(shift) * x) * model.levy_density(x, inner_ctx.dps)

    shifted = CustomModel(
        coefficients,
        rho - shift_value,
        rho_hat + shift_value,
        exponent=exponent,
        array_exponent=array_exponent,
        density=density,
        one_sided=model.one_sided,
        finite_variation=model.finite_variation,
        name=f"esscher({model.family}, {shift})",
    )
    shifted.base, shifted.shift = model, shift
    return shifted


def martingale_drift(model: LevyModel, rate, prec: Optional[int] = None):
    """
    Drift mu making exp(X_t - rate·t) a martingale, i.e. psi(1) = rate.

    Any drift already carried by the model is ignored.
    """
    ctx = context(prec)
    _, rho = model.strip(ctx.dps)
    if not rho > 1:
        raise StripTooNarrow(f"{model.family} strip ends at rho = {ctx.nstr(rho, 10)} ≤ 1")
    return ctx.convert(rate) - model.with_drift(0).laplace_exponent(1, ctx.dps)


def calibrated(model: LevyModel, rate, prec: Optional[int] = None) -> LevyModel:
    """Copy of the model with the martingale drift for the given rate."""
    return model.with_drift(martingale_drift(model, rate, prec))


def hankel_positivity(model: LevyModel, n: int, prec: Optional[int] = None) -> bool:
    """
    Check that the leading Hankel minors of (c_2, ..., c_{2n+1}) are positive.

    These coefficients are the moments of |v|^3 mu*(dv), so a completely
    monotone model must pass.
    """
    ctx = context(prec)
    c = model.taylor_coeffs(2 * n + 1, ctx.dps, include_drift=False).coeffs
    moments = c[2:]
    matrix = [[moments[i + j] for j in range(n)] for i in range(n)]
    threshold = max(abs(v) for v in moments) * tolerance(ctx, 10)
    for col in range(n):
        pivot = matrix[col][col]
        if not pivot > threshold:
            logger.warning("Hankel pivot %d of %s is %s", col, model, ctx.nstr(pivot, 5))
            return False
        for r in range(col + 1, n):
            factor = matrix[r][col] / pivot
            for k in range(col, n):
                matrix[r][k] -= factor * matrix[col][k]
    return True


# === Serialisation ===

MODEL_FAMILIES = {
    'gamma': lambda p, d: GammaProcess(drift=d),
    'ts': lambda p, d: TemperedStable(p['alpha'], drift=d),
    'vg': lambda p, d: (
        VarianceGamma(p['a'], p['a_hat'], p['nu'], drift=d) if 'a' in p
        else VarianceGamma.from_theta_sigma(p['theta'], p['sigma'], p['nu'], drift=d)
    ),
    'cgmy': lambda p, d: CGMY(p['C'], p['G'], p['M'], p['Y'], drift=d),
    'ig': lambda p, d: InverseGaussianSubordinator(p['kappa'], drift=d),
    'nig': lambda p, d: NormalInverseGaussian(p['kappa'], p['sigma'], p['a_bm'], drift=d),
    'custom': lambda p, d: CustomModel(
        p['coefficients'], p['rho'], p.get('rho_hat', 'inf'),
        one_sided=bool(p.get('one_sided', False)),
        finite_variation=bool(p.get('finite_variation', True)),
        drift=d, name=p.get('name', 'custom'),
    ),
}


def model_from_dict(doc: Dict[str, Any]) -> LevyModel:
    """
    Build a model from its JSON-compatible document.

    Args:
        doc: {'family': tag, 'params': {...}, 'drift': value}.
    """
    family = doc.get('family')
    if family not in MODEL_FAMILIES:
        raise ValidationError(f"unknown model family '{family}', expected one of {sorted(MODEL_FAMILIES)}")
    try:
        return MODEL_FAMILIES[family](doc.get('params', {}), doc.get('drift', 0))
    except KeyError as exc:
        raise ValidationError(f"{family} model document is missing parameter {exc}") from exc
