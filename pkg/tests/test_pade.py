"""
Test suite for Pade approximants.
Tests series arithmetic, construction, evaluation, partial fractions and invariance checks.
"""

import pytest
from levy.errors import (
    ApproximantMissing,
    DegenerateInput,
    MultiplePole,
    PoleEvaluation,
    RootCountMismatch,
    ValidationError,
)
from levy.numkernel import tolerance
from levy.pade import (
    RationalFunction,
    TaylorSeries,
    check_invariance_mobius,
    check_invariance_rational_substitution,
    check_invariance_shift,
    compose_series,
    evaluate,
    order_residual,
    pade,
    partial_fractions,
    series_div,
    series_mul,
    taylor_expand,
)
from levy.processes import GammaProcess


@pytest.fixture
def exp_series(ctx):
    """Taylor series of e^z through order 20."""
    return TaylorSeries([1 / ctx.factorial(j) for j in range(21)])


@pytest.fixture
def log_series(prec):
    """Taylor series of -ln(1 - z) through order 20."""
    return GammaProcess().taylor_coeffs(20, prec)


@pytest.mark.pade
class TestSeriesArithmetic:
    """Tests for truncated power series operations."""

    def test_series_mul(self):
        """TC-SER-001: Verify (1 + z)² = 1 + 2z + z²."""
        assert series_mul([1, 1], [1, 1], 3) == [1, 2, 1, 0]

    def test_series_div_geometric(self, ctx):
        """TC-SER-002: Verify 1/(1 - z) has all coefficients equal to one."""
        out = series_div([ctx.one], [ctx.one, -ctx.one], 6)
        assert all(c == 1 for c in out), f"Geometric series coefficients should be 1, got {out}"

    def test_series_div_by_vanishing_series(self):
        """TC-SER-003: Verify division by a series vanishing at the center is rejected."""
        with pytest.raises(DegenerateInput):
            series_div([1], [0, 1], 3)

    def test_compose_series(self):
        """TC-SER-004: Verify composition of w + w² with z + z²."""
        assert compose_series([0, 1, 1], [0, 1, 1], 3) == [0, 1, 2, 2]

    def test_compose_needs_vanishing_inner(self):
        """TC-SER-005: Verify an inner series with nonzero constant is rejected."""
        with pytest.raises(DegenerateInput):
            compose_series([0, 1], [1, 1], 2)

    def test_truncated(self, exp_series):
        """TC-SER-006: Verify truncation keeps order + 1 coefficients."""
        assert len(exp_series.truncated(4)) == 5


@pytest.mark.pade
class TestPadeConstruction:
    """Tests for [m/n] approximant construction."""

    def test_exp_one_one(self, ctx, prec, exp_series):
        """TC-PADE-001: Verify [1/1] of e^z is (1 + z/2)/(1 - z/2)."""
        r = pade(exp_series, 1, 1, prec)
        half = ctx.mpf(1) / 2
        assert r.numerator == (1, half)
        assert r.denominator == (1, -half)

    @pytest.mark.parametrize("m,n", [(2, 2), (4, 3), (6, 6), (9, 8)])
    def test_order_conditions(self, ctx, prec, log_series, m, n):
        """TC-PADE-002: Verify P/Q matches the series through order m + n."""
        r = pade(log_series, m, n, prec)
        residual = order_residual(r, log_series, prec)
        assert residual < tolerance(ctx, 30), f"[{m}/{n}] residual {residual} too large"

    def test_degrees(self, prec, log_series):
        """TC-PADE-003: Verify the numerator and denominator degrees."""
        r = pade(log_series, 5, 3, prec)
        assert (r.m, r.n) == (5, 3)

    def test_denominator_normalised(self, prec, log_series):
        """TC-PADE-004: Verify the denominator equals one at the center."""
        assert pade(log_series, 3, 3, prec).denominator[0] == 1

    def test_m_below_n_rejected(self, prec, log_series):
        """TC-PADE-005: Verify m < n is rejected."""
        with pytest.raises(ValidationError):
            pade(log_series, 2, 3, prec)

    def test_too_few_coefficients(self, prec):
        """TC-PADE-006: Verify a short series is rejected."""
        with pytest.raises(ValidationError):
            pade(TaylorSeries([0, 1, 2]), 2, 2, prec)

    def test_missing_approximant(self, prec):
        """TC-PADE-007: Verify a singular Hankel system raises ApproximantMissing."""
        with pytest.raises(ApproximantMissing):
            pade(TaylorSeries([1, 0, 1]), 1, 1, prec)

    def test_taylor_expand_round_trip(self, ctx, prec, exp_series):
        """TC-PADE-008: Verify re-expanding [4/4] of e^z reproduces its first nine coefficients."""
        r = pade(exp_series, 4, 4, prec)
        expansion = taylor_expand(r, 8, prec)
        for j in range(9):
            assert abs(expansion[j] - exp_series[j]) < tolerance(ctx, 30)

    def test_rational_function_needs_unit_denominator(self):
        """TC-PADE-009: Verify a denominator not equal to one at the center is rejected."""
        with pytest.raises(ValidationError):
            RationalFunction((1,), (2, 1))


@pytest.mark.pade
class TestEvaluation:
    """Tests for rational function evaluation."""

    def test_real_evaluation(self, ctx, prec, exp_series):
        """TC-EVAL-001: Verify [6/6] of e^z is accurate at z = 0.5."""
        r = pade(exp_series, 6, 6, prec)
        assert abs(evaluate(r, '0.5', prec) - ctx.exp(ctx.mpf('0.5'))) < ctx.mpf('1e-12')

    def test_complex_pair_evaluation(self, ctx, prec, exp_series):
        """TC-EVAL-002: Verify a (re, im) pair is evaluated as a complex number."""
        r = pade(exp_series, 6, 6, prec)
        value = r((0, 1), prec)
        assert abs(value - ctx.exp(ctx.mpc(0, 1))) < ctx.mpf('1e-10')

    def test_pole_evaluation(self, prec):
        """TC-EVAL-003: Verify evaluation at a pole raises PoleEvaluation."""
        r = RationalFunction((1,), (1, -1))
        with pytest.raises(PoleEvaluation):
            evaluate(r, 1, prec)


@pytest.mark.pade
class TestPartialFractions:
    """Tests for partial fraction decomposition."""

    def test_exp_one_one(self, ctx, prec, exp_series):
        """TC-PF-001: Verify (1 + z/2)/(1 - z/2) = -1 - 4/(z - 2)."""
        pf = partial_fractions(pade(exp_series, 1, 1, prec), prec)
        assert len(pf.poles) == 1
        pole, residue = pf.poles[0]
        assert abs(pole - 2) < tolerance(ctx, 10)
        assert abs(residue + 4) < tolerance(ctx, 10)
        assert abs(pf.polynomial[0] + 1) < tolerance(ctx, 10)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_log_poles_beyond_one(self, prec, log_series, n):
        """TC-PF-002: Verify the poles of [n/n] of -ln(1 - z) are real and lie beyond 1."""
        pf = partial_fractions(pade(log_series, n, n, prec), prec)
        assert len(pf.poles) == n
        assert all(pole > 1 for pole, _ in pf.poles), "Poles should lie on the branch cut"

    def test_decomposition_matches_evaluation(self, ctx, prec, log_series):
        """TC-PF-003: Verify the decomposition evaluates to the same values."""
        r = pade(log_series, 5, 4, prec)
        pf = partial_fractions(r, prec)
        for z in ('-2', '-0.5', '0.3', '0.9'):
            assert abs(pf(z, prec) - evaluate(r, z, prec)) < tolerance(ctx, 30)

    def test_double_pole(self, prec):
        """TC-PF-004: Verify a repeated pole raises MultiplePole."""
        with pytest.raises(MultiplePole):
            partial_fractions(RationalFunction((1,), (1, -4, 4)), prec)

    def test_complex_poles(self, prec):
        """TC-PF-005: Verify non-real poles are reported."""
        with pytest.raises(RootCountMismatch):
            partial_fractions(RationalFunction((1,), (1, 0, 1)), prec)


@pytest.mark.pade
class TestInvariance:
    """Tests for the Pade invariance identities."""

    def test_mobius(self, prec, exp_series):
        """TC-INV-001: Verify invariance under (1 + 2f)/(3 + f)."""
        report = check_invariance_mobius(exp_series, 4, 1, 2, 3, 1, prec=prec)
        assert report.passed

    def test_rational_substitution(self, prec, exp_series):
        """TC-INV-002: Verify invariance under w = 2z/(1 + z)."""
        report = check_invariance_rational_substitution(exp_series, 4, 2, 1, prec=prec)
        assert report.passed

    def test_coefficient_shift(self, prec, log_series):
        """TC-INV-003: Verify [n-k/m] of the shifted series matches the shifted [n/m]."""
        report = check_invariance_shift(log_series, 5, 3, 2, prec=prec)
        assert report.passed

    def test_shift_needs_room(self, prec, log_series):
        """TC-INV-004: Verify n - k < m is rejected."""
        with pytest.raises(ValidationError):
            check_invariance_shift(log_series, 3, 3, 1, prec=prec)
