import math

import numpy as np
import pytest

from permkit import rng
from permkit.bosonic import (
    OVERFLOW,
    CatInputSpec,
    OutcomeDistribution,
    amplitude_regime_check,
    bs_distribution,
    cat_amplitude,
    cat_distribution,
    fock_amplitude,
    hong_ou_mandel_unitary,
    photon_fraction,
    reject_to_fixed_n,
    rejection_sampling_pipeline,
    sample,
    tv_distance,
)
from permkit.errors import EmptyConditioning, ZeroAmplitude


class TestFockAmplitude:
    def test_identity_diagonal(self):
        assert fock_amplitude(np.eye(3), (2, 0, 1), (2, 0, 1)) == pytest.approx(1.0)

    def test_hong_ou_mandel_cancels(self):
        hom = hong_ou_mandel_unitary()
        assert abs(fock_amplitude(hom, (1, 1), (1, 1))) <= 1e-12

    def test_photon_conservation(self):
        u = rng.haar_unitary(3, 5)
        assert fock_amplitude(u, (1, 0, 0), (1, 1, 0)) == 0j


class TestBsDistribution:
    def test_identity_single_photon(self):
        d = bs_distribution(np.eye(3), 1)
        assert d.probs[(1, 0, 0)] == pytest.approx(1.0)
        assert d.probs[(0, 1, 0)] == pytest.approx(0.0)

    def test_hong_ou_mandel_bunching(self):
        d = bs_distribution(hong_ou_mandel_unitary(), 2)
        assert d.probs[(2, 0)] == pytest.approx(0.5)
        assert d.probs[(0, 2)] == pytest.approx(0.5)
        assert d.probs[(1, 1)] == pytest.approx(0.0, abs=1e-12)

    def test_normalization_random_haar(self):
        d = bs_distribution(rng.haar_unitary(4, 10), 2)
        assert abs(d.total_enumerated() - 1.0) <= 1e-9
        assert d.truncated_mass == 0.0
        assert all(sum(p) == 2 for p in d.probs)


class TestCatAmplitude:
    def test_below_threshold_is_zero(self):
        u = rng.haar_unitary(4, 20)
        spec = CatInputSpec(0.5, 2, 4)
        assert cat_amplitude(u, spec, (1, 0, 0, 0)) == 0j

    def test_wrong_parity_is_zero(self):
        u = rng.haar_unitary(4, 21)
        spec = CatInputSpec(0.5, 2, 4)
        assert cat_amplitude(u, spec, (1, 1, 1, 0)) == 0j

    def test_ratio_to_single_photon(self):
        u = rng.haar_unitary(4, 22)
        alpha = 0.4 + 0.3j
        spec = CatInputSpec(alpha, 2, 4)
        expected = alpha**2 / math.sinh(abs(alpha) ** 2)
        for p in [(1, 1, 0, 0), (2, 0, 0, 0), (0, 1, 0, 1)]:
            fock = fock_amplitude(u, p, (1, 1, 0, 0))
            cat = cat_amplitude(u, spec, p)
            assert cat == pytest.approx(expected * fock, abs=1e-12)

    def test_zero_alpha_rejected(self):
        with pytest.raises(ZeroAmplitude):
            CatInputSpec(0.0, 1, 2)


class TestCatDistribution:
    def test_mass_at_n_is_cutoff_independent(self):
        u = rng.haar_unitary(4, 30)
        spec = CatInputSpec(0.5, 2, 4)
        masses = []
        for cutoff in (2, 4, 8):
            d = cat_distribution(u, spec, cutoff)
            masses.append(d.mass_at_weight(2))
        expected = photon_fraction(0.5, 2)
        for mass in masses:
            assert abs(mass - expected) <= 1e-10

    def test_small_alpha_concentrates(self):
        u = rng.haar_unitary(3, 31)
        spec = CatInputSpec(0.05, 2, 3)
        d = cat_distribution(u, spec, 6)
        assert d.mass_at_weight(2) >= 0.99

    def test_single_mode_fock_expansion(self):
        alpha = 0.7
        spec = CatInputSpec(alpha, 1, 1)
        d = cat_distribution(np.eye(1), spec, 9)
        s = math.sinh(alpha**2)
        for p in range(1, 10, 2):
            expected = alpha ** (2 * p) / (math.factorial(p) * s)
            assert d.probs[(p,)] == pytest.approx(expected, rel=1e-12)

    def test_parity_support(self):
        u = rng.haar_unitary(3, 32)
        d = cat_distribution(u, CatInputSpec(0.6, 1, 3), 5)
        assert all(sum(p) % 2 == 1 for p in d.probs)

    def test_mass_accounting(self):
        u = rng.haar_unitary(4, 33)
        d = cat_distribution(u, CatInputSpec(0.8, 2, 4), 8)
        assert abs(d.total_enumerated() + d.truncated_mass - 1.0) <= 1e-9
        assert 0.0 <= d.truncated_mass <= d.tail_bound + 1e-12

    def test_photon_number_marginal_matches_input_law(self):
        # A passive interferometer conserves total photon number, so the
        # output weight marginal must reproduce the input cat photon-number
        # distribution at EVERY weight, not just at n; this pins down the
        # above-threshold amplitudes through an independent route.
        from permkit.bosonic import cat_total_photon_pmf

        u = rng.haar_unitary(3, 34)
        alpha = 0.9
        n, cutoff = 2, 8
        d = cat_distribution(u, CatInputSpec(alpha, n, 3), cutoff)
        pmf = cat_total_photon_pmf(alpha, n, cutoff)
        for total in range(n, cutoff + 1, 2):
            assert d.mass_at_weight(total) == pytest.approx(pmf[total], abs=1e-12)

    def test_cutoff_below_n_rejected(self):
        with pytest.raises(ValueError):
            cat_distribution(np.eye(2), CatInputSpec(0.5, 2, 2), 1)


class TestPhotonFraction:
    def test_zero_photons(self):
        assert photon_fraction(0.7, 0) == 1.0

    def test_single_photon_unit_alpha(self):
        assert photon_fraction(1.0, 1) == pytest.approx(1.0 / math.sinh(1.0))

    def test_two_photons_half_alpha(self):
        assert photon_fraction(0.5, 2) == pytest.approx(0.0625 / math.sinh(0.25) ** 2)

    def test_complex_alpha_uses_modulus(self):
        assert photon_fraction(0.3 + 0.4j, 2) == pytest.approx(photon_fraction(0.5, 2))

    def test_zero_amplitude(self):
        with pytest.raises(ZeroAmplitude):
            photon_fraction(0.0, 1)


class TestRejection:
    def test_already_conditioned_unchanged(self):
        d = bs_distribution(rng.haar_unitary(3, 40), 2)
        r = reject_to_fixed_n(d, 2)
        assert tv_distance(r.probs, d.probs) <= 1e-12

    def test_cat_rejection_equals_single_photon(self):
        u = rng.haar_unitary(4, 41)
        spec = CatInputSpec(0.5, 2, 4)
        cat = cat_distribution(u, spec, 8)
        bs = bs_distribution(u, 2)
        assert tv_distance(reject_to_fixed_n(cat, 2).probs, bs.probs) <= 1e-12

    @pytest.mark.parametrize("m,n", [(2, 1), (3, 2), (4, 3)])
    def test_rejection_exact_across_sizes(self, m, n):
        u = rng.haar_unitary(m, 42 + m)
        cat = cat_distribution(u, CatInputSpec(0.6, n, m), n + 4)
        bs = bs_distribution(u, n)
        assert tv_distance(reject_to_fixed_n(cat, n).probs, bs.probs) <= 1e-12

    def test_outcomewise_proportionality(self):
        u = rng.haar_unitary(4, 45)
        alpha = 0.7
        spec = CatInputSpec(alpha, 2, 4)
        cat = cat_distribution(u, spec, 6)
        bs = bs_distribution(u, 2)
        frac = photon_fraction(alpha, 2)
        for p, prob in bs.probs.items():
            expected = frac * prob
            assert abs(cat.probs[p] - expected) <= 1e-10 * max(1e-300, abs(expected))

    def test_toy_distribution(self):
        d = OutcomeDistribution({(1, 0): 0.3, (2, 0): 0.7}, cutoff=2, truncated_mass=0.0)
        r = reject_to_fixed_n(d, 1)
        assert r.probs == {(1, 0): 1.0}

    def test_empty_conditioning(self):
        d = OutcomeDistribution({(2, 0): 1.0}, cutoff=2, truncated_mass=0.0)
        with pytest.raises(EmptyConditioning):
            reject_to_fixed_n(d, 1)


class TestSampling:
    def test_point_mass(self):
        d = OutcomeDistribution({(3, 1): 1.0}, cutoff=4, truncated_mass=0.0)
        assert sample(d, 10, 0) == [(3, 1)] * 10

    def test_seed_determinism(self):
        d = bs_distribution(rng.haar_unitary(3, 50), 2)
        assert sample(d, 100, 12) == sample(d, 100, 12)

    def test_empirical_convergence(self):
        d = bs_distribution(rng.haar_unitary(3, 51), 2)
        count = 40_000
        draws = sample(d, count, 8)
        freq: dict = {}
        for o in draws:
            freq[o] = freq.get(o, 0.0) + 1.0 / count
        assert tv_distance(freq, d.probs) <= 3.0 * math.sqrt(len(d.probs) / count)

    def test_overflow_sentinel_frequency(self):
        d = OutcomeDistribution({(1,): 0.5}, cutoff=1, truncated_mass=0.5)
        draws = sample(d, 4000, 5)
        overflow = sum(1 for o in draws if o is OVERFLOW)
        assert 0.4 <= overflow / 4000 <= 0.6


class TestPipeline:
    def test_summary_matches_closed_forms(self):
        u = rng.haar_unitary(4, 60)
        spec = CatInputSpec(0.3, 2, 4)
        rep = rejection_sampling_pipeline(u, spec, 8, 20_000, 9)
        assert abs(rep.kept_fraction - rep.expected_fraction) <= 3 * rep.fraction_stderr
        assert rep.tv_kept_vs_single_photon <= 3.0 * math.sqrt(rep.support_size / rep.kept_samples)
        assert rep.expected_fraction == pytest.approx(photon_fraction(0.3, 2))


class TestRegimeCheck:
    def test_lemma_scaling_value(self):
        rep = amplitude_regime_check(16, 100, 1.0)
        assert rep.defined
        assert rep.alpha == pytest.approx(16 ** (-0.25) * math.log(100) ** 0.25)
        assert rep.fraction >= 1.0 / 100

    def test_leading_order_agreement(self):
        rep = amplitude_regime_check(16, 100, 1.0)
        # ln(fraction) = -n(a^4/6 - a^8/180 + ...), so the defect is O(n a^8)
        defect = abs(math.log(rep.fraction) + 16 * rep.alpha**4 / 6.0)
        assert defect <= 16 * rep.alpha**8

    def test_zero_scaling_flagged(self):
        rep = amplitude_regime_check(4, 10, 0.0)
        assert not rep.defined and rep.fraction is None
