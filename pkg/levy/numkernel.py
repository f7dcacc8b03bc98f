"""
Numerical kernel module.
Provides extended-precision contexts, dense linear solve and real root isolation.
"""

import logging
import threading
from typing import Any, List, Optional, Sequence

from mpmath.ctx_mp import MPContext

from config.settings import NumericConfig
from levy.errors import DegenerateInput, RootCountMismatch, SingularMatrix

logger = logging.getLogger(__name__)

_local = threading.local()

MIN_PRECISION = 15


# === Contexts ===

def context(prec: Optional[int] = None) -> MPContext:
    """
    Return the arithmetic context for a precision.

    Contexts are cached per thread, so concurrent callers never share
    mutable precision state.

    Args:
        prec: Decimal digits. If None, uses NumericConfig.PRECISION.
    """
    dps = int(prec or NumericConfig.PRECISION)
    if dps < MIN_PRECISION:
        raise DegenerateInput(f"precision must be at least {MIN_PRECISION} digits, got {dps}")
    contexts = getattr(_local, 'contexts', None)
    if contexts is None:
        contexts = _local.contexts = {}
    ctx = contexts.get(dps)
    if ctx is None:
        ctx = MPContext()
        ctx.dps = dps
        contexts[dps] = ctx
    return ctx


def to_big(value: Any, prec: Optional[int] = None):
    """Parse int, float, str, Fraction or mpf at working precision."""
    return context(prec).convert(value)


def tolerance(ctx: MPContext, digits: float):
    """Return 10^(digits - p) for the context precision p."""
    return ctx.mpf(10) ** (digits - ctx.dps)


# === Polynomials (ascending coefficients) ===

def polyval(coeffs: Sequence, x):
    """Evaluate c_0 + c_1 x + ... by Horner's rule."""
    result = 0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def polyder(coeffs: Sequence) -> List:
    """Coefficients of the derivative."""
    return [i * coeffs[i] for i in range(1, len(coeffs))]


def polymul(p: Sequence, q: Sequence) -> List:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def polytrim(coeffs: Sequence, ctx: MPContext) -> List:
    """Drop leading (highest-order) coefficients that vanish relative to the largest one."""
    coeffs = [ctx.convert(c) for c in coeffs]
    scale = max((abs(c) for c in coeffs), default=0)
    if not scale:
        return []
    cutoff = scale * tolerance(ctx, 10)
    while coeffs and abs(coeffs[-1]) <= cutoff:
        coeffs.pop()
    return coeffs


# === Linear algebra ===

def solve_dense(matrix: Sequence[Sequence], rhs: Sequence, prec: Optional[int] = None) -> List:
    """
    Solve matrix·x = rhs by Gaussian elimination with partial pivoting.

    Args:
        matrix: Square array of numbers.
        rhs: Right-hand side vector.
        prec: Decimal digits of the working context.

    Returns:
        Solution vector.
    """
    ctx = context(prec)
    n = len(matrix)
    if n == 0:
        raise DegenerateInput("empty linear system")
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise DegenerateInput(f"system is not square: {n} rows, rhs of length {len(rhs)}")

    a = [[ctx.convert(v) for v in row] + [ctx.convert(rhs[i])] for i, row in enumerate(matrix)]
    scale = max(abs(v) for row in a for v in row[:n])
    threshold = scale * ctx.mpf(10) ** (-(ctx.dps // 2))
    if not scale:
        raise SingularMatrix(f"zero {n}x{n} matrix")

    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(a[r][col]))
        pivot = a[pivot_row][col]
        if abs(pivot) < threshold:
            raise SingularMatrix(
                f"pivot {ctx.nstr(pivot, 5)} in column {col} below threshold "
                f"{ctx.nstr(threshold, 5)} at {ctx.dps} digits"
            )
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
        for r in range(col + 1, n):
            factor = a[r][col] / pivot
            if factor:
                row_r, row_c = a[r], a[col]
                for c in range(col, n + 1):
                    row_r[c] -= factor * row_c[c]

    x = [ctx.zero] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n] - ctx.fsum(a[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / a[r][r]

    residual = max(
        abs(ctx.fsum(ctx.convert(matrix[i][j]) * x[j] for j in range(n)) - ctx.convert(rhs[i]))
        for i in range(n)
    )
    rhs_norm = max(abs(ctx.convert(v)) for v in rhs)
    if residual > tolerance(ctx, 10) * max(rhs_norm, scale * max(abs(v) for v in x)):
        logger.warning(
            "Residual %s of %dx%d solve suggests precision exhaustion at %d digits",
            ctx.nstr(residual, 5), n, n, ctx.dps
        )
    return x


# === Root isolation ===

def _chebyshev_grid(ctx: MPContext, lo, hi, count: int) -> List:
    half = (hi - lo) / 2
    points = [lo + half * (1 - ctx.cospi(ctx.mpf(j) / count)) for j in range(count + 1)]
    points[0], points[-1] = lo, hi
    return points


def _polish(ctx: MPContext, coeffs: Sequence, deriv: Sequence, left, right, f_left):
    """Bisect the bracket down to a coarse width, then finish with Newton steps."""
    coarse = (right - left) * ctx.mpf(2) ** -40
    while right - left > coarse:
        mid = (left + right) / 2
        f_mid = polyval(coeffs, mid)
        if not f_mid:
            return mid
        if (f_mid > 0) == (f_left > 0):
            left, f_left = mid, f_mid
        else:
            right = mid
    x = (left + right) / 2
    eps = tolerance(ctx, 5)
    for _ in range(60):
        d = polyval(deriv, x)
        if not d:
            break
        step = polyval(coeffs, x) / d
        candidate = x - step
        if not left - coarse <= candidate <= right + coarse:
            break
        x = candidate
        if abs(step) <= eps * max(1, abs(x)):
            return x
    # Newton stalled: bisect to full precision
    f_left = polyval(coeffs, left)
    while right - left > eps * max(1, abs(left)):
        mid = (left + right) / 2
        f_mid = polyval(coeffs, mid)
        if not f_mid:
            return mid
        if (f_mid > 0) == (f_left > 0):
            left, f_left = mid, f_mid
        else:
            right = mid
    return (left + right) / 2


def _isolate(ctx: MPContext, coeffs: Sequence, lo, hi, count: int) -> List:
    deriv = polyder(coeffs)
    grid = _chebyshev_grid(ctx, lo, hi, count)
    values = [polyval(coeffs, x) for x in grid]
    roots = []
    for i in range(count):
        left, right = grid[i], grid[i + 1]
        f_left, f_right = values[i], values[i + 1]
        if not f_left:
            if 0 < i:
                roots.append(left)
            continue
        if f_right and (f_left > 0) != (f_right > 0):
            roots.append(_polish(ctx, coeffs, deriv, left, right, f_left))
    return roots


def real_roots_in_interval(poly: Sequence, lo, hi, prec: Optional[int] = None,
                           expected: Optional[int] = None) -> List:
    """
    Find the real simple roots of a polynomial inside the open interval (lo, hi).

    Sign changes are bracketed on a Chebyshev-spaced grid, each bracket is
    refined independently, and the grid is doubled while the count falls
    short of the expected number.

    Args:
        poly: Ascending coefficients c_0, c_1, ...
        lo: Left end of the interval.
        hi: Right end of the interval.
        prec: Decimal digits of the working context.
        expected: Required number of roots, when theory fixes it.

    Returns:
        Strictly increasing list of roots.
    """
    ctx = context(prec)
    lo, hi = ctx.convert(lo), ctx.convert(hi)
    if not lo < hi:
        raise DegenerateInput(f"empty interval ({ctx.nstr(lo, 8)}, {ctx.nstr(hi, 8)})")
    coeffs = polytrim(poly, ctx)
    if not coeffs:
        raise DegenerateInput("zero polynomial")
    degree = len(coeffs) - 1
    if degree == 0:
        roots = []
    else:
        count = max(64, 8 * degree * degree)
        roots = _isolate(ctx, coeffs, lo, hi, count)
        for _ in range(4):
            if expected is None or len(roots) == expected:
                break
            count *= 2
            logger.debug("Refining root grid to %d points (found %d of %d)", count, len(roots), expected)
            roots = _isolate(ctx, coeffs, lo, hi, count)

    if expected is not None and len(roots) != expected:
        raise RootCountMismatch(
            f"found {len(roots)} roots of a degree-{degree} polynomial in "
            f"({ctx.nstr(lo, 8)}, {ctx.nstr(hi, 8)}), expected {expected} at {ctx.dps} digits"
        )
    gap = tolerance(ctx, 3 * ctx.dps / 4) * (hi - lo)
    for left, right in zip(roots, roots[1:]):
        if right - left <= gap:
            raise RootCountMismatch(f"roots {ctx.nstr(left, 10)} and {ctx.nstr(right, 10)} coincide")
    return roots
