"""
Test suite for the extended-precision kernel.
Tests contexts, polynomial helpers, dense solves and real root isolation.
"""

import pytest
from levy.errors import DegenerateInput, RootCountMismatch, SingularMatrix
from levy.numkernel import (
    context,
    polyder,
    polymul,
    polytrim,
    polyval,
    real_roots_in_interval,
    solve_dense,
    to_big,
    tolerance,
)


@pytest.mark.numkernel
class TestContexts:
    """Tests for precision contexts."""

    def test_context_precision(self):
        """TC-NUM-001: Verify the context carries the requested digits."""
        assert context(50).dps == 50
        assert context(120).dps == 120

    def test_context_cached_per_precision(self):
        """TC-NUM-002: Verify repeated calls reuse one context per precision."""
        assert context(64) is context(64)
        assert context(64) is not context(65)

    def test_precision_floor(self):
        """TC-NUM-003: Verify precisions below the floor are rejected."""
        with pytest.raises(DegenerateInput):
            context(10)

    def test_to_big_parses_strings_exactly(self, prec):
        """TC-NUM-004: Verify decimal strings are parsed at working precision."""
        ctx = context(prec)
        value = to_big('0.1', prec)
        assert abs(value * 10 - 1) < ctx.mpf(10) ** (-prec + 2)

    def test_tolerance(self, ctx):
        """TC-NUM-005: Verify tolerance(ctx, d) = 10^(d - p)."""
        assert tolerance(ctx, 10) == ctx.mpf(10) ** (10 - ctx.dps)


@pytest.mark.numkernel
class TestPolynomials:
    """Tests for ascending-coefficient polynomial helpers."""

    def test_polyval_horner(self):
        """TC-POLY-001: Verify evaluation of 1 + 2x + 3x² at x = 2."""
        assert polyval([1, 2, 3], 2) == 17

    def test_polyder(self):
        """TC-POLY-002: Verify the derivative of 1 + 2x + 3x² is 2 + 6x."""
        assert polyder([1, 2, 3]) == [2, 6]

    def test_polymul(self):
        """TC-POLY-003: Verify (1 + x)(1 - x) = 1 - x²."""
        assert polymul([1, 1], [1, -1]) == [1, 0, -1]

    def test_polymul_empty(self):
        """TC-POLY-004: Verify an empty factor gives an empty product."""
        assert polymul([], [1, 2]) == []

    def test_polytrim_drops_negligible_leading_terms(self, ctx):
        """TC-POLY-005: Verify leading coefficients below tolerance are removed."""
        tiny = ctx.mpf(10) ** (-ctx.dps)
        assert len(polytrim([1, 2, tiny], ctx)) == 2

    def test_polytrim_zero_polynomial(self, ctx):
        """TC-POLY-006: Verify the zero polynomial trims to nothing."""
        assert polytrim([0, 0, 0], ctx) == []


@pytest.mark.numkernel
class TestSolveDense:
    """Tests for Gaussian elimination with partial pivoting."""

    def test_small_system(self, ctx, prec):
        """TC-LIN-001: Verify a 3x3 system with known solution."""
        matrix = [[2, 1, -1], [-3, -1, 2], [-2, 1, 2]]
        x = solve_dense(matrix, [8, -11, -3], prec)
        expected = [2, 3, -1]
        for got, want in zip(x, expected):
            assert abs(got - want) < tolerance(ctx, 5), f"Solution {got} should equal {want}"

    def test_pivoting_on_zero_diagonal(self, ctx, prec):
        """TC-LIN-002: Verify a zero leading pivot is handled by row exchange."""
        x = solve_dense([[0, 1], [1, 0]], [3, 4], prec)
        assert abs(x[0] - 4) < tolerance(ctx, 5)
        assert abs(x[1] - 3) < tolerance(ctx, 5)

    def test_hilbert_system(self, ctx, prec):
        """TC-LIN-003: Verify an ill-conditioned Hilbert system is solved at high precision."""
        n = 8
        matrix = [[ctx.one / (i + j + 1) for j in range(n)] for i in range(n)]
        rhs = [ctx.fsum(row) for row in matrix]
        x = solve_dense(matrix, rhs, prec)
        assert max(abs(v - 1) for v in x) < ctx.mpf(10) ** (-(prec - 30))

    def test_singular_matrix(self, prec):
        """TC-LIN-004: Verify a rank-deficient matrix raises SingularMatrix."""
        with pytest.raises(SingularMatrix):
            solve_dense([[1, 2], [2, 4]], [1, 2], prec)

    def test_zero_matrix(self, prec):
        """TC-LIN-005: Verify the zero matrix raises SingularMatrix."""
        with pytest.raises(SingularMatrix):
            solve_dense([[0, 0], [0, 0]], [1, 1], prec)

    @pytest.mark.parametrize("matrix,rhs", [
        ([], []),
        ([[1, 2]], [1]),
        ([[1, 0], [0, 1]], [1]),
    ])
    def test_malformed_system(self, matrix, rhs, prec):
        """TC-LIN-006: Verify empty or non-square systems raise DegenerateInput."""
        with pytest.raises(DegenerateInput):
            solve_dense(matrix, rhs, prec)

    @pytest.mark.parametrize("size", [5, 15, 30])
    def test_random_system_residual(self, ctx, prec, data_generator, size):
        """TC-LIN-007: Verify random well-conditioned systems are solved with a small residual."""
        matrix, rhs = data_generator.generate_dense_system(size)
        matrix = [[ctx.convert(v) for v in row] for row in matrix]
        rhs = [ctx.convert(v) for v in rhs]
        x = solve_dense(matrix, rhs, prec)
        residual = max(abs(ctx.fdot(row, x) - b) for row, b in zip(matrix, rhs))
        scale = max(abs(b) for b in rhs)
        assert residual <= tolerance(ctx, 10) * scale, f"Residual {residual} too large for size {size}"


@pytest.mark.numkernel
class TestRootIsolation:
    """Tests for real root isolation in an interval."""

    @pytest.fixture
    def cubic(self, ctx):
        """(x - 0.1)(x - 0.5)(x - 0.9)."""
        p = [ctx.one]
        for root in ('0.1', '0.5', '0.9'):
            p = polymul(p, [-ctx.convert(root), ctx.one])
        return p

    def test_finds_all_roots(self, ctx, prec, cubic):
        """TC-ROOT-001: Verify the three roots of a cubic are found in order."""
        roots = real_roots_in_interval(cubic, 0, 1, prec, expected=3)
        for got, want in zip(roots, ('0.1', '0.5', '0.9')):
            assert abs(got - ctx.convert(want)) < tolerance(ctx, 10), f"Root {got} should equal {want}"

    def test_roots_strictly_increasing(self, prec, cubic):
        """TC-ROOT-002: Verify returned roots are strictly increasing."""
        roots = real_roots_in_interval(cubic, -5, 5, prec)
        assert all(a < b for a, b in zip(roots, roots[1:]))

    def test_subinterval(self, prec, cubic):
        """TC-ROOT-003: Verify only roots inside the interval are returned."""
        roots = real_roots_in_interval(cubic, '0.3', 1, prec)
        assert len(roots) == 2

    def test_expected_count_mismatch(self, prec, cubic):
        """TC-ROOT-004: Verify a wrong expected count raises RootCountMismatch."""
        with pytest.raises(RootCountMismatch):
            real_roots_in_interval(cubic, '0.3', 1, prec, expected=3)

    def test_double_root_not_counted(self, prec):
        """TC-ROOT-005: Verify a double root without sign change fails the expected count."""
        with pytest.raises(RootCountMismatch):
            real_roots_in_interval([0.25, -1, 1], 0, 1, prec, expected=2)

    def test_clustered_roots(self, ctx, prec):
        """TC-ROOT-006: Verify roots clustered near an endpoint are separated."""
        targets = [ctx.mpf(10) ** -j for j in range(1, 6)]
        p = [ctx.one]
        for root in targets:
            p = polymul(p, [-root, ctx.one])
        roots = real_roots_in_interval(p, 0, 1, prec, expected=5)
        for got, want in zip(roots, sorted(targets)):
            assert abs(got - want) <= want * tolerance(ctx, 20)

    def test_zero_polynomial(self, prec):
        """TC-ROOT-007: Verify the zero polynomial raises DegenerateInput."""
        with pytest.raises(DegenerateInput):
            real_roots_in_interval([0, 0], 0, 1, prec)

    def test_empty_interval(self, prec):
        """TC-ROOT-008: Verify an empty interval raises DegenerateInput."""
        with pytest.raises(DegenerateInput):
            real_roots_in_interval([1, 1], 1, 1, prec)

    def test_constant_has_no_roots(self, prec):
        """TC-ROOT-009: Verify a nonzero constant has no roots."""
        assert real_roots_in_interval([3], 0, 1, prec) == []
