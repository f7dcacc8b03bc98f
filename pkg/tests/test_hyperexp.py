"""
Test suite for hyperexponential approximations.
Tests the process type, two-sided and one-sided constructions, explicit formulas
and the compositions for VG, CGMY and NIG.
"""

import numpy as np
import pytest
from data.test_data import INVALID_HEP_DATA
from levy.errors import PoleEvaluation, ValidationError, VariantUnavailable, OutsideStrip, StripTooNarrow
from levy.hyperexp import (
    HyperExpProcess,
    approx_cgmy_difference,
    approx_gamma_explicit,
    approx_nig_time_change,
    approx_one_sided,
    approx_tempered_stable_explicit,
    approx_two_sided,
    approx_vg_difference,
    approx_vg_time_change,
    approximate,
    compose_difference,
    cumulants,
    esscher_hep,
    martingale_hep,
    rescale,
    subordinate_brownian,
)
from levy.numkernel import tolerance
from levy.pade import evaluate, pade
from levy.processes import (
    CUTOFF_IDENTITY,
    CUTOFF_ZERO,
    CustomModel,
    GammaProcess,
    InverseGaussianSubordinator,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
)


def max_gap(ctx, left, right):
    return max(abs(ctx.convert(a) - ctx.convert(b)) for a, b in zip(left, right))


@pytest.mark.hyperexp
class TestHyperExpProcess:
    """Tests for the hyperexponential process type."""

    @pytest.mark.parametrize("doc", INVALID_HEP_DATA)
    def test_invalid_documents(self, doc):
        """TC-HEP-001: Verify invalid parameters raise ValidationError."""
        with pytest.raises(ValidationError):
            HyperExpProcess.from_dict(doc)

    def test_missing_field(self):
        """TC-HEP-002: Verify a document without drift is rejected."""
        with pytest.raises(ValidationError):
            HyperExpProcess.from_dict({'sigma2': '0'})

    def test_intensity_and_strip(self, ctx, sample_hep):
        """TC-HEP-003: Verify intensity Σ α/|β| and the strip (4, 3)."""
        expected = ctx.mpf(2) / 3 + ctx.mpf('0.5') / 7 + ctx.mpf(1) / 4
        assert abs(sample_hep.intensity - expected) < tolerance(ctx, 10)
        assert sample_hep.strip() == (4, 3)

    def test_laplace_exponent(self, ctx, prec, sample_hep):
        """TC-HEP-004: Verify psi(1) = 83/210 for the reference process."""
        assert abs(sample_hep.laplace_exponent(1, prec) - ctx.mpf(83) / 210) < tolerance(ctx, 10)

    def test_exponent_array_matches(self, prec, random_hep):
        """TC-HEP-005: Verify the vectorised exponent agrees with the extended one."""
        z = np.array([0.5 + 0j, 1 + 10j, -1 + 100j])
        for zi, vi in zip(z, random_hep.exponent_array(z)):
            exact = complex(random_hep.laplace_exponent((zi.real, zi.imag), prec))
            assert abs(vi - exact) <= 1e-10 * max(1.0, abs(exact))

    def test_pole_evaluation(self, prec, sample_hep):
        """TC-HEP-006: Verify evaluation at a pole raises PoleEvaluation."""
        with pytest.raises(PoleEvaluation):
            sample_hep.laplace_exponent(3, prec)

    def test_levy_density(self, ctx, prec, sample_hep):
        """TC-HEP-007: Verify the density picks the terms of the matching sign."""
        x = ctx.mpf('0.5')
        assert abs(sample_hep.levy_density(x, prec) - (2 * ctx.exp(-3 * x) + ctx.mpf('0.5') * ctx.exp(-7 * x))) \
            < tolerance(ctx, 10)
        assert abs(sample_hep.levy_density(-x, prec) - ctx.exp(-2)) < tolerance(ctx, 10)

    def test_cutoff_conversion_preserves_exponent(self, ctx, prec, random_hep):
        """TC-HEP-008: Verify switching the cutoff convention leaves psi unchanged."""
        other = random_hep.with_cutoff(CUTOFF_IDENTITY if random_hep.cutoff == CUTOFF_ZERO else CUTOFF_ZERO)
        z = ctx.mpf('0.7')
        assert abs(other.laplace_exponent(z, prec) - random_hep.laplace_exponent(z, prec)) < tolerance(ctx, 10)

    def test_cumulants(self, ctx, prec, sample_hep):
        """TC-HEP-009: Verify κ_2 = σ² + Σ 2α/|β|³."""
        kappa = cumulants(sample_hep, 2, prec)
        expected = 2 * (2 / ctx.mpf(27) + ctx.mpf('0.5') / 343 + ctx.mpf(1) / 64)
        assert abs(kappa[1] - expected) < tolerance(ctx, 10)

    def test_to_rational(self, ctx, prec, random_hep):
        """TC-HEP-010: Verify the rational form evaluates to psi."""
        r = random_hep.to_rational(prec)
        assert r.n == len(random_hep.terms)
        for z in ('-0.9', '0.4', '1.1'):
            assert abs(evaluate(r, z, prec) - random_hep.laplace_exponent(z, prec)) < tolerance(ctx, 30)

    def test_to_rational_with_gaussian_part(self, ctx, prec, data_generator):
        """TC-HEP-011: Verify the rational form keeps the z² term of a Gaussian part."""
        hep = HyperExpProcess.from_dict(data_generator.generate_hep_doc(gaussian=True))
        r = hep.to_rational(prec)
        assert r.m == r.n + 2
        assert abs(evaluate(r, '0.6', prec) - hep.laplace_exponent('0.6', prec)) < tolerance(ctx, 30)

    def test_atom(self, ctx, sample_hep):
        """TC-HEP-012: Verify the point mass e^{-λt} at b·t."""
        loc, mass = sample_hep.atom(2)
        assert abs(loc - ctx.mpf('0.2')) < tolerance(ctx, 10)
        assert abs(mass - ctx.exp(-2 * sample_hep.intensity)) < tolerance(ctx, 10)

    def test_no_atom_with_gaussian_part(self, data_generator):
        """TC-HEP-013: Verify a Gaussian part removes the atom."""
        hep = HyperExpProcess.from_dict(data_generator.generate_hep_doc(gaussian=True))
        assert hep.atom(1) is None

    def test_document_round_trip(self, ctx, prec, data_generator):
        """TC-HEP-014: Verify serialisation at 30 digits preserves psi."""
        for doc in data_generator.generate_hep_docs(5):
            hep = HyperExpProcess.from_dict(doc)
            again = HyperExpProcess.from_dict(hep.to_dict(30))
            assert again.cutoff == hep.cutoff
            assert abs(again.laplace_exponent('0.5', prec) - hep.laplace_exponent('0.5', prec)) < ctx.mpf('1e-25')

    def test_subordinator_flag(self):
        """TC-HEP-015: Verify is_subordinator needs no negative jumps, no Gaussian part and b ≥ 0."""
        assert HyperExpProcess(0, 0, [(1, 2)]).is_subordinator
        assert not HyperExpProcess(-1, 0, [(1, 2)]).is_subordinator
        assert not HyperExpProcess(0, 0, [(1, 2)], [(1, -2)]).is_subordinator


@pytest.mark.hyperexp
class TestTwoSided:
    """Tests for the two-sided [n+1/n] approximation."""

    def test_reproduces_hyperexponential_model(self, ctx, prec):
        """TC-TWO-001: Verify a hyperexponential target with Gaussian part is recovered exactly."""
        source = HyperExpProcess(ctx.mpf('0.1'), ctx.mpf('0.3'), [(2, 3)], [(1, -4)])
        model = CustomModel(list(source.taylor_coeffs(7, prec).coeffs), rho='2.5', rho_hat='3.5')
        hep, _ = approx_two_sided(model, 3, prec)
        assert abs(hep.sigma2 - ctx.mpf('0.3')) < tolerance(ctx, 30)
        assert len(hep.positive) == 1 and len(hep.negative) == 1
        assert max_gap(ctx, hep.positive[0], (2, 3)) < tolerance(ctx, 30)
        assert max_gap(ctx, hep.negative[0], (1, -4)) < tolerance(ctx, 30)
        assert abs(hep.finite_variation_drift - ctx.mpf('0.1')) < tolerance(ctx, 30)

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_vg_moment_matching(self, prec, vg_benchmark_model, n):
        """TC-TWO-002: Verify the first 2n + 1 cumulants match."""
        hep, report = approx_two_sided(vg_benchmark_model, n, prec)
        assert report.matched_through == 2 * n + 1
        assert len(hep.positive) + len(hep.negative) == n

    def test_vg_terms_in_strip(self, prec, vg_benchmark_model):
        """TC-TWO-003: Verify positive rates exceed rho and negative rates lie below -rho_hat."""
        hep, _ = approx_two_sided(vg_benchmark_model, 6, prec)
        rho_hat, rho = vg_benchmark_model.strip(prec)
        assert hep.positive and hep.negative
        assert all(b >= rho for _, b in hep.positive)
        assert all(b <= -rho_hat for _, b in hep.negative)
        assert hep.sigma2 == 0

    def test_identity_cutoff_drift(self, ctx, prec, cgmy_benchmark_model):
        """TC-TWO-004: Verify the drift is c_1 in the h ≡ x convention."""
        hep, _ = approx_two_sided(cgmy_benchmark_model, 4, prec)
        assert hep.cutoff == CUTOFF_IDENTITY
        assert abs(hep.drift - cgmy_benchmark_model.taylor_coeffs(1, prec)[1]) < tolerance(ctx, 10)

    def test_gamma_one_sided_result(self, prec, gamma_model):
        """TC-TWO-005: Verify a subordinator target gives positive terms only."""
        hep, _ = approx_two_sided(gamma_model, 5, prec)
        assert not hep.negative and hep.sigma2 == 0
        assert all(b > 1 for _, b in hep.positive)

    def test_convergence_in_order(self, ctx, prec, vg_benchmark_model):
        """TC-TWO-006: Verify the error at an interior point decreases with n."""
        z = ctx.mpf(5)
        exact = vg_benchmark_model.laplace_exponent(z, prec)
        errors = [abs(approx_two_sided(vg_benchmark_model, n, prec)[0].laplace_exponent(z, prec) - exact)
                  for n in (2, 4, 8)]
        assert errors[0] > errors[1] > errors[2], f"Errors should decrease: {errors}"

    def test_nonzero_center(self, ctx, prec):
        """TC-TWO-007: Verify expansion at a center matches derivatives there."""
        model = VarianceGamma('3', '4', '0.5')
        h, t = ctx.mpf('1.5'), ctx.mpf('0.001')
        hep, _ = approx_two_sided(model, 3, prec, center=h)
        got = hep.laplace_exponent(h + t, prec) - hep.laplace_exponent(h, prec)
        want = model.laplace_exponent(h + t, prec) - model.laplace_exponent(h, prec)
        assert abs(got - want) < ctx.mpf('1e-18')
        assert hep.metadata['center'] == str(h)

    def test_order_must_be_positive(self, prec, gamma_model):
        """TC-TWO-008: Verify n = 0 is rejected."""
        with pytest.raises(ValidationError):
            approx_two_sided(gamma_model, 0, prec)


@pytest.mark.hyperexp
class TestOneSided:
    """Tests for the one-sided [n+k/n] approximations."""

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_gamma_moment_matching(self, prec, gamma_model, k):
        """TC-ONE-001: Verify the first 2n + k cumulants match."""
        hep, report = approx_one_sided(gamma_model, 4, k, prec)
        assert report.matched_through == 8 + k
        assert not hep.negative

    @pytest.mark.parametrize("k", [0, 1, 2])
    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_gamma_matches_explicit_formula(self, ctx, prec, gamma_model, n, k):
        """TC-ONE-002: Verify the generic construction equals the closed-form approximant."""
        hep, _ = approx_one_sided(gamma_model, n, k, prec)
        explicit = approx_gamma_explicit(n, k, prec)
        for z in ('-3', '-0.5', '0.5'):
            assert abs(hep.laplace_exponent(z, prec) - evaluate(explicit, z, prec)) < tolerance(ctx, 40)

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_cutoff_conventions(self, gamma_model, prec, k):
        """TC-ONE-003: Verify k ≤ 1 keeps h ≡ 0 for subordinators and k = 2 adds a Gaussian part."""
        hep, _ = approx_one_sided(gamma_model, 3, k, prec)
        assert hep.cutoff == (CUTOFF_IDENTITY if k == 2 else CUTOFF_ZERO)
        assert (hep.sigma2 > 0) == (k == 2)
        if k == 0:
            assert hep.drift == 0

    @pytest.mark.parametrize("model", [GammaProcess(), TemperedStable('0.5'), TemperedStable('1.2'),
                                       InverseGaussianSubordinator('0.5')], ids=repr)
    def test_gaussian_part_positive(self, prec, model):
        """TC-ONE-004: Verify the k = 2 Gaussian coefficient is positive across orders."""
        for n in (1, 3, 6):
            hep, _ = approx_one_sided(model, n, 2, prec)
            assert hep.sigma2 > 0, f"sigma2 for n={n} should be positive"

    def test_subordinator_approximation_is_subordinator(self, prec):
        """TC-ONE-005: Verify k ∈ {0, 1} approximations of subordinators stay subordinators."""
        for k in (0, 1):
            hep, _ = approx_one_sided(TemperedStable('0.5'), 4, k, prec)
            assert hep.is_subordinator

    def test_infinite_variation_uses_identity_cutoff(self, ctx, prec):
        """TC-ONE-006: Verify alpha > 1 uses h ≡ x with drift c_1."""
        model = TemperedStable('1.5')
        hep, _ = approx_one_sided(model, 3, 1, prec)
        assert hep.cutoff == CUTOFF_IDENTITY
        assert abs(hep.drift - model.taylor_coeffs(1, prec)[1]) < tolerance(ctx, 10)

    @pytest.mark.parametrize("model,k", [
        (GammaProcess(), 3),
        (TemperedStable('1.5'), 0),
        (VarianceGamma('3', '4', '0.5'), 1),
    ], ids=['gamma-k3', 'ts-infinite-k0', 'vg-two-sided'])
    def test_variant_unavailable(self, prec, model, k):
        """TC-ONE-007: Verify invalid (model, k) pairs raise VariantUnavailable."""
        with pytest.raises(VariantUnavailable):
            approx_one_sided(model, 3, k, prec)

    @pytest.mark.parametrize("alpha,k", [('0.5', 0), ('0.5', 1), ('0.5', 2), ('1.2', 1), ('1.2', 2)])
    def test_tempered_stable_explicit_formula(self, ctx, prec, alpha, k):
        """TC-ONE-008: Verify the closed-form tempered-stable approximant equals the generic Pade one."""
        model = TemperedStable(alpha)
        for n in (1, 4, 7):
            explicit = approx_tempered_stable_explicit(ctx.convert(alpha), n, k, prec)
            generic = pade(model.taylor_coeffs(2 * n + k, prec), n + k, n, prec)
            assert max_gap(ctx, explicit.numerator, generic.numerator) < tolerance(ctx, 40)
            assert max_gap(ctx, explicit.denominator, generic.denominator) < tolerance(ctx, 40)

    def test_explicit_formula_variant_check(self, prec):
        """TC-ONE-009: Verify the explicit formulas reject unavailable variants."""
        with pytest.raises(VariantUnavailable):
            approx_gamma_explicit(3, 3, prec)
        with pytest.raises(VariantUnavailable):
            approx_tempered_stable_explicit('1.5', 3, 0, prec)


@pytest.mark.hyperexp
class TestTransformations:
    """Tests for rescaling, tilting, drift calibration and composition."""

    def test_rescale(self, ctx, prec, sample_hep):
        """TC-TRF-001: Verify rescale gives lam·psi(c z)."""
        c, lam, z = ctx.mpf(2), ctx.mpf('0.5'), ctx.mpf('0.4')
        scaled = rescale(sample_hep, c, lam, prec)
        assert abs(scaled.laplace_exponent(z, prec) - lam * sample_hep.laplace_exponent(c * z, prec)) \
            < tolerance(ctx, 10)

    def test_rescale_needs_positive_factors(self, prec, sample_hep):
        """TC-TRF-002: Verify non-positive factors are rejected."""
        with pytest.raises(ValidationError):
            rescale(sample_hep, -1, 1, prec)

    def test_esscher_hep(self, ctx, prec, data_generator):
        """TC-TRF-003: Verify the tilted exponent psi(z + h) - psi(h), Gaussian part included."""
        hep = HyperExpProcess.from_dict(data_generator.generate_hep_doc(gaussian=True))
        h, z = ctx.mpf('0.3'), ctx.mpf('-0.6')
        tilted = esscher_hep(hep, h, prec)
        expected = hep.laplace_exponent(z + h, prec) - hep.laplace_exponent(h, prec)
        assert abs(tilted.laplace_exponent(z, prec) - expected) < tolerance(ctx, 10)
        assert tilted.cutoff == hep.cutoff

    def test_esscher_hep_outside_strip(self, prec, sample_hep):
        """TC-TRF-004: Verify a tilt past the nearest pole is rejected."""
        with pytest.raises(OutsideStrip):
            esscher_hep(sample_hep, 5, prec)

    def test_martingale_hep(self, ctx, prec, sample_hep):
        """TC-TRF-005: Verify psi(1) = r after calibration."""
        calibrated = martingale_hep(sample_hep, '0.04', prec)
        assert abs(calibrated.laplace_exponent(1, prec) - ctx.mpf('0.04')) < tolerance(ctx, 10)

    def test_martingale_hep_needs_wide_strip(self, ctx, prec):
        """TC-TRF-006: Verify a pole inside (0, 1] is rejected."""
        with pytest.raises(StripTooNarrow):
            martingale_hep(HyperExpProcess(0, 0, [(1, ctx.mpf('0.8'))]), '0.04', prec)

    def test_compose_difference(self, ctx, prec):
        """TC-TRF-007: Verify psi_X(z) = psi_+(z) + psi_-(-z)."""
        up = HyperExpProcess(ctx.mpf('0.2'), 0, [(2, 3)])
        down = HyperExpProcess(ctx.mpf('0.1'), 0, [(1, 5)])
        both = compose_difference(up, down)
        z = ctx.mpf('1.3')
        expected = up.laplace_exponent(z, prec) + down.laplace_exponent(-z, prec)
        assert abs(both.laplace_exponent(z, prec) - expected) < tolerance(ctx, 10)
        assert both.negative == ((1, -5),)

    def test_compose_difference_rejects_negative_jumps(self, sample_hep):
        """TC-TRF-008: Verify inputs must be spectrally positive."""
        with pytest.raises(ValidationError):
            compose_difference(sample_hep, sample_hep)

    def test_subordinate_brownian(self, ctx, prec):
        """TC-TRF-009: Verify psi_Z(z) = psi_sub(σ²z²/2 + a z)."""
        sub = HyperExpProcess(ctx.mpf('0.05'), 0, [(2, 3), (1, 9)])
        sigma, a = ctx.mpf('0.3'), ctx.mpf('-0.2')
        z = ctx.mpf('1.1')
        hep = subordinate_brownian(sub, sigma, a, prec)
        expected = sub.laplace_exponent(sigma ** 2 * z ** 2 / 2 + a * z, prec)
        assert abs(hep.laplace_exponent(z, prec) - expected) < tolerance(ctx, 10)
        assert len(hep.positive) == len(hep.negative) == 2

    def test_subordinate_brownian_needs_subordinator(self, prec, sample_hep):
        """TC-TRF-010: Verify a time change with negative jumps is rejected."""
        with pytest.raises(ValidationError):
            subordinate_brownian(sample_hep, '0.3', '0', prec)


@pytest.mark.hyperexp
class TestCompositeApproximations:
    """Tests for the VG, CGMY and NIG constructions."""

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_vg_difference(self, prec, vg_benchmark_model, k):
        """TC-CMP-001: Verify the VG difference matches 2N + k cumulants."""
        hep, report = approx_vg_difference(vg_benchmark_model, 3, k, prec=prec)
        assert report.matched_through >= 6 + k
        assert len(hep.positive) == len(hep.negative) == 3

    def test_vg_difference_mixed_orders(self, prec, vg_benchmark_model):
        """TC-CMP-002: Verify each tail takes its own order."""
        hep, report = approx_vg_difference(vg_benchmark_model, 4, 1, n_neg=2, k_neg=0, prec=prec)
        assert (len(hep.positive), len(hep.negative)) == (4, 2)
        assert report.matched_through >= 4
        assert hep.metadata['n_neg'] == 2

    @pytest.mark.parametrize("k", [1, 2])
    def test_cgmy_difference(self, prec, cgmy_benchmark_model, k):
        """TC-CMP-003: Verify the CGMY difference matches 2N + k cumulants."""
        _, report = approx_cgmy_difference(cgmy_benchmark_model, 3, k, prec=prec)
        assert report.matched_through >= 6 + k

    def test_cgmy_difference_needs_k_for_infinite_variation(self, prec, cgmy_benchmark_model):
        """TC-CMP-004: Verify k = 0 is unavailable for Y > 1."""
        with pytest.raises(VariantUnavailable):
            approx_cgmy_difference(cgmy_benchmark_model, 3, 0, prec=prec)

    @pytest.mark.parametrize("k", [0, 1])
    def test_vg_time_change(self, ctx, prec, k):
        """TC-CMP-005: Verify the time-changed VG matches 2n + k cumulants."""
        model = VarianceGamma.from_theta_sigma('-0.14', '0.12', '0.2', prec=prec)
        hep, report = approx_vg_time_change(model, 3, k, prec)
        assert report.matched_through >= 6 + k
        assert hep.sigma2 >= 0

    @pytest.mark.parametrize("k", [0, 1])
    def test_nig_time_change(self, prec, k):
        """TC-CMP-006: Verify the time-changed NIG matches 2n + k cumulants."""
        model = NormalInverseGaussian('0.4', '0.3', '-0.1')
        _, report = approx_nig_time_change(model, 3, k, prec)
        assert report.matched_through >= 6 + k

    def test_time_change_rejects_k2(self, prec):
        """TC-CMP-007: Verify k = 2 subordinators cannot time-change a Brownian motion."""
        with pytest.raises(VariantUnavailable):
            approx_vg_time_change(VarianceGamma('3', '4', '0.5'), 3, 2, prec)


@pytest.mark.hyperexp
class TestDispatch:
    """Tests for the approximate() dispatcher."""

    def test_one_sided_vg_uses_difference(self, prec, vg_benchmark_model):
        """TC-DSP-001: Verify one-sided VG builds both tails."""
        hep, _ = approximate(vg_benchmark_model, 'one-sided', 2, 1, prec=prec)
        assert hep.positive and hep.negative

    def test_default_k(self, prec, gamma_model):
        """TC-DSP-002: Verify k defaults to 1."""
        _, report = approximate(gamma_model, 'one-sided', 2, prec=prec)
        assert report.k == 1

    @pytest.mark.parametrize("model,method", [
        (NormalInverseGaussian('0.4', '0.3', '-0.1'), 'one-sided'),
        (GammaProcess(), 'time-change'),
    ], ids=['nig-one-sided', 'gamma-time-change'])
    def test_unavailable_constructions(self, prec, model, method):
        """TC-DSP-003: Verify constructions without a definition raise VariantUnavailable."""
        with pytest.raises(VariantUnavailable):
            approximate(model, method, 2, prec=prec)

    def test_unknown_method(self, prec, gamma_model):
        """TC-DSP-004: Verify an unknown method is rejected."""
        with pytest.raises(ValidationError):
            approximate(gamma_model, 'continued-fraction', 2, prec=prec)

    def test_metadata(self, prec, gamma_model):
        """TC-DSP-005: Verify provenance metadata is attached."""
        hep, _ = approximate(gamma_model, 'one-sided', 3, 0, prec=prec)
        assert hep.metadata['variant'] == 'one-sided'
        assert hep.metadata['n'] == 3 and hep.metadata['k'] == 0
        assert hep.metadata['model']['family'] == 'gamma'
