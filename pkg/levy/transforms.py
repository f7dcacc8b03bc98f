"""
Fourier transforms module.
CDFs by damped Fourier inversion with atom removal, and European option prices
by the damped-payoff transform. Integration runs in double precision.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from config.settings import GridConfig, NumericConfig
from levy.errors import GridInsufficient, MartingaleViolated, OutsideStrip, StripTooNarrow, ValidationError
from levy.hyperexp import HyperExpProcess
from levy.numkernel import context
from levy.processes import LevyModel

logger = logging.getLogger(__name__)

Target = Union[HyperExpProcess, LevyModel]

CHUNK = 64


# === Types ===

@dataclass(frozen=True)
class InversionGrid:
    """
    Truncated Fourier grid u = 0, du, ..., u_max.

    damping is the real part of the integration contour; None lets each
    operation pick its own default.
    """

    damping: Optional[float] = None
    u_max: float = 2000.0
    du: float = 0.05
    scheme: str = 'simpson'

    def __post_init__(self):
        if self.scheme not in GridConfig.SCHEMES:
            raise ValidationError(f"unknown quadrature scheme '{self.scheme}', expected one of {GridConfig.SCHEMES}")
        if not (self.du > 0 and self.u_max > 0):
            raise ValidationError(f"grid needs du > 0 and u_max > 0, got du={self.du}, u_max={self.u_max}")
        steps = round(self.u_max / self.du)
        if steps < 2 or abs(steps * self.du - self.u_max) > 1e-9 * self.u_max:
            raise ValidationError(f"u_max={self.u_max} is not an integer number of steps du={self.du}")
        if self.scheme == 'simpson' and steps % 2:
            raise ValidationError(f"Simpson's rule needs an even step count, got {steps}")

    @classmethod
    def from_config(cls, **overrides) -> 'InversionGrid':
        params = GridConfig.get_grid_params(**overrides)
        return cls(params['damping'], float(params['u_max']), float(params['du']), params['scheme'])

    @property
    def steps(self) -> int:
        return round(self.u_max / self.du)

    def nodes(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.du

    def weights(self) -> np.ndarray:
        n = self.steps
        w = np.full(n + 1, self.du)
        if self.scheme == 'trapezoid':
            w[0] = w[-1] = self.du / 2
        else:
            w[1:-1:2] = 4 * self.du / 3
            w[2:-1:2] = 2 * self.du / 3
            w[0] = w[-1] = self.du / 3
        return w


@dataclass(frozen=True)
class AsymptoticTriple:
    """psi(z) = r2 z² + r1 z + r0 + O(1/z) as |z| grows."""

    r2: Any
    r1: Any
    r0: Any


# === Helpers ===

def asymptotic_coeffs(hep: HyperExpProcess) -> AsymptoticTriple:
    """Read (r2, r1, r0) off the hyperexponential fields: σ²/2, the h ≡ 0 drift and minus the intensity."""
    ctx = context()
    return AsymptoticTriple(
        ctx.convert(hep.sigma2) / 2,
        ctx.convert(hep.finite_variation_drift),
        -ctx.convert(hep.intensity),
    )


def atom(target: Target, t) -> Optional[Tuple[Any, Any]]:
    """Point mass (location, mass) of X_t, or None when the law has no atom."""
    if isinstance(target, HyperExpProcess):
        return target.atom(t)
    return None


def _strip(target: Target) -> Tuple[float, float]:
    rho_hat, rho = target.strip()
    return float(rho_hat), float(rho)


def _transform(target: Target, t: float, z: np.ndarray) -> Tuple[np.ndarray, Optional[Tuple[float, float]]]:
    """E exp(z X_t) with the atom removed, plus the removed (location, mass)."""
    if isinstance(target, HyperExpProcess) and not target.sigma2:
        drift = float(target.finite_variation_drift)
        intensity = float(target.intensity)
        rest = np.zeros_like(z)
        for a, b, s in target.terms:
            rest = rest + s * float(a) / (float(b) - z)
        loc, log_mass = drift * t, -intensity * t
        base = z * loc + log_mass
        exponent = t * rest
        # e^{-λt} underflows where e^{t·rest} overflows; combine those exponents first
        small = np.abs(exponent) < 1
        phi = np.empty_like(base)
        phi[small] = np.exp(base[small]) * np.expm1(exponent[small])
        phi[~small] = np.exp(base[~small] + exponent[~small]) - np.exp(base[~small])
        return phi, (loc, math.exp(log_mass))
    return np.exp(t * target.exponent_array(z)), None


def _fourier_sum(values: np.ndarray, u: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Re Σ_j values_j e^{-i u_j x} for every x, in fixed-size chunks."""
    out = np.empty(len(xs))
    for start in range(0, len(xs), CHUNK):
        phase = np.outer(xs[start:start + CHUNK], u)
        out[start:start + CHUNK] = np.cos(phase) @ values.real + np.sin(phase) @ values.imag
    return out


def _check_tail(g_end: complex, u_max: float, x: float, scale: float):
    estimate = abs(g_end) * min(u_max, 1 / abs(x) if x else u_max) * scale / math.pi
    if estimate > GridConfig.TAIL_TOLERANCE:
        raise GridInsufficient(
            f"truncation tail estimate {estimate:.3e} at u_max={u_max} exceeds "
            f"{GridConfig.TAIL_TOLERANCE:.1e}; increase --umax"
        )


def _exact(ctx, value):
    return ctx.convert(repr(float(value))) if isinstance(value, float) else ctx.convert(value)


def _check_martingale(target: Target, rate):
    ctx = context()
    _, rho = target.strip()
    if not rho > 1:
        raise StripTooNarrow(f"strip ends at rho = {ctx.nstr(rho, 10)} ≤ 1, so psi(1) is infinite")
    gap = abs(target.laplace_exponent(1) - _exact(ctx, rate))
    if gap > NumericConfig.MARTINGALE_TOLERANCE:
        raise MartingaleViolated(
            f"|psi(1) - r| = {ctx.nstr(gap, 5)} exceeds {NumericConfig.MARTINGALE_TOLERANCE:.1e}; "
            "calibrate the drift first"
        )


# === Distribution functions ===

def cdf_values(target: Target, t, xs: Sequence[float], grid: Optional[InversionGrid] = None) -> np.ndarray:
    """
    P(X_t ≤ x) for every x in xs.

    F(x) = 1 - (e^{-cx}/π) ∫_0^∞ Re[e^{-iux} φ(c+iu)/(c+iu)] du - m·1{x < ℓ},
    where φ is the transform with the atom (ℓ, m) removed.

    Args:
        target: HyperExpProcess or LevyModel.
        t: Time horizon, t > 0.
        xs: Abscissae, all strictly positive.
        grid: Integration grid; defaults come from GridConfig.

    Returns:
        numpy array of probabilities.
    """
    grid = grid or InversionGrid.from_config()
    t = float(t)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if not t > 0:
        raise ValidationError(f"time horizon must be positive, got {t}")
    if np.any(xs <= 0):
        raise ValidationError(f"CDF inversion needs x > 0, got min x = {xs.min()}")
    c = GridConfig.CDF_DAMPING if grid.damping is None else float(grid.damping)
    _, rho = _strip(target)
    if not 0 < c < rho:
        raise OutsideStrip(f"CDF damping {c} must lie in (0, {rho})")

    u = grid.nodes()
    z = c + 1j * u
    phi, removed = _transform(target, t, z)
    g = phi / z
    _check_tail(g[-1], grid.u_max, xs.min(), math.exp(-c * xs.min()))

    integral = _fourier_sum(g * grid.weights(), u, xs)
    values = 1 - np.exp(-c * xs) / math.pi * integral
    if removed is not None:
        loc, mass = removed
        values = values - mass * (xs < loc)
    logger.debug("Inverted CDF at %d points on %d nodes (damping %.3f)", len(xs), len(u), c)
    return values


def cdf(target: Target, t, x, grid: Optional[InversionGrid] = None) -> float:
    return float(cdf_values(target, t, [x], grid)[0])


def gamma_cdf_exact(t, x) -> float:
    """P(X_t ≤ x) for the unit-rate Gamma process: the regularised lower incomplete gamma function."""
    return float(special.gammainc(float(t), float(x)))


# === Option prices ===

def _fourier_price(target: Target, S0: float, K: float, T: float, r: float, grid: InversionGrid,
                   c: float, payoff: Callable[[float], float]) -> float:
    k = math.log(K / S0)
    u = grid.nodes()
    z = c + 1j * u
    phi, removed = _transform(target, T, z)
    g = phi / (z * (z - 1))
    scale = math.exp(-r * T - (c - 1) * k)
    _check_tail(g[-1], grid.u_max, k, scale)

    integral = _fourier_sum(g * grid.weights(), u, np.array([k]))[0]
    price = S0 * scale / math.pi * float(integral)
    if removed is not None:
        loc, mass = removed
        price += math.exp(-r * T) * mass * payoff(S0 * math.exp(loc))
    return price


def _contract(S0, K, T) -> Tuple[float, float, float]:
    S0, K, T = float(S0), float(K), float(T)
    if not (S0 > 0 and K > 0 and T > 0):
        raise ValidationError(f"contract needs S0, K, T > 0, got S0={S0}, K={K}, T={T}")
    return S0, K, T


def price_european_call(target: Target, S0, K, T, r, grid: Optional[InversionGrid] = None,
                        damping: Optional[float] = None) -> float:
    """
    European call price under exp(X_T) with psi(1) = r.

    C = S0 e^{-rT} e^{-(c-1)k}/π ∫_0^∞ Re[e^{-iuk} φ(c+iu)/((c+iu)(c-1+iu))] du
        + e^{-rT} m (S0 e^ℓ - K)^+,
    with k = ln(K/S0) and damping c in (1, rho).

    Args:
        target: HyperExpProcess or LevyModel satisfying the martingale condition.
        S0: Spot price.
        K: Strike.
        T: Maturity.
        r: Risk-free rate.
        grid: Integration grid; its damping is used when set.
        damping: Overrides the grid damping; default is the midpoint of (1, rho).
    """
    grid = grid or InversionGrid.from_config()
    S0, K, T = _contract(S0, K, T)
    _check_martingale(target, r)
    _, rho = _strip(target)
    c = damping if damping is not None else grid.damping
    c = ((1 + rho) / 2 if math.isfinite(rho) else 1.5) if c is None else float(c)
    if not 1 < c < rho:
        raise OutsideStrip(f"call damping {c} must lie in (1, {rho})")
    price = _fourier_price(target, S0, K, T, float(r), grid, c, lambda s: max(s - K, 0.0))
    logger.info("Call S0=%s K=%s T=%s: %.10f (damping %.4f)", S0, K, T, price, c)
    return price


def price_european_put(target: Target, S0, K, T, r, grid: Optional[InversionGrid] = None,
                       damping: Optional[float] = None) -> float:
    """Put price by the same transform with damping in (-rho_hat, 0); default -min(rho_hat, 2)/2."""
    grid = grid or InversionGrid.from_config()
    S0, K, T = _contract(S0, K, T)
    _check_martingale(target, r)
    rho_hat, _ = _strip(target)
    c = damping if damping is not None else grid.damping
    c = -min(rho_hat, 2.0) / 2 if c is None else float(c)
    if not -rho_hat < c < 0:
        raise OutsideStrip(f"put damping {c} must lie in ({-rho_hat}, 0)")
    price = _fourier_price(target, S0, K, T, float(r), grid, c, lambda s: max(K - s, 0.0))
    logger.info("Put S0=%s K=%s T=%s: %.10f (damping %.4f)", S0, K, T, price, c)
    return price
