"""Ensemble generation, decodability margins, and persistence."""

import numpy as np
import pytest

from jointrec import (Dictionary, EnsembleGenerationError, check_positivity,
                      generate_ensemble, identity_transform, load_ensemble,
                      load_signal_csv, margin_lower_bound, save_ensemble,
                      thresholding_margin, translation_transform)
from jointrec.ensemble import COEFF_MAGNITUDE_RANGE
from jointrec.transforms import CandidateSet, TransformVector


def brute_force_margin(signal, support, atoms):
    """Margin straight from its definition, via python loops."""
    unit = signal / np.linalg.norm(signal)
    support = set(int(i) for i in support)
    inside = min(abs(float(unit @ atoms[:, i])) for i in support)
    outside = max(abs(float(unit @ atoms[:, i]))
                  for i in range(atoms.shape[1]) if i not in support)
    return inside - outside


def identity_vector(dictionary, n_views):
    ident = identity_transform(dictionary)
    return TransformVector((ident,) * n_views)


class TestThresholdingMargin:
    def test_single_atom_on_onb(self, onb_dict):
        y = onb_dict.atom(3)
        assert thresholding_margin(y, [3], onb_dict) == pytest.approx(1.0)

    def test_missing_support_atom_gives_zero(self, onb_dict):
        y = onb_dict.atom(3) + onb_dict.atom(5)
        assert thresholding_margin(y, [3], onb_dict) == pytest.approx(0.0)

    def test_unequal_coefficients(self, onb_dict):
        y = 2.0 * onb_dict.atom(0) + 1.0 * onb_dict.atom(1)
        norm = np.sqrt(5.0)
        expected = 1.0 / norm - 0.0
        assert thresholding_margin(y, [0, 1], onb_dict) == pytest.approx(expected)

    def test_matches_brute_force(self, small_gabor_dict):
        rng = np.random.default_rng(11)
        atoms = small_gabor_dict.atoms
        for _ in range(20):
            support = rng.choice(small_gabor_dict.n_atoms, size=4,
                                 replace=False)
            coeffs = rng.uniform(0.5, 1.5, size=4)
            y = atoms[:, support] @ coeffs
            assert thresholding_margin(y, support, small_gabor_dict) == (
                pytest.approx(brute_force_margin(y, support, atoms)))

    def test_scale_invariant(self, onb_dict):
        y = onb_dict.atom(0) + 0.7 * onb_dict.atom(4)
        a = thresholding_margin(y, [0, 4], onb_dict)
        b = thresholding_margin(10.0 * y, [0, 4], onb_dict)
        assert a == pytest.approx(b)

    def test_rejects_degenerate_inputs(self, onb_dict):
        with pytest.raises(ValueError):
            thresholding_margin(np.zeros(16), [0], onb_dict)
        with pytest.raises(ValueError):
            thresholding_margin(onb_dict.atom(0), [], onb_dict)
        with pytest.raises(ValueError):
            thresholding_margin(onb_dict.atom(0), [0, 0], onb_dict)
        with pytest.raises(ValueError):
            thresholding_margin(onb_dict.atom(0), list(range(16)), onb_dict)


class TestPositivity:
    def test_holds_for_positive_combination(self, onb_dict):
        y = onb_dict.atom(1) + 2.0 * onb_dict.atom(2)
        assert check_positivity(y, [1, 2], onb_dict)

    def test_fails_for_negative_coefficient(self, onb_dict):
        y = onb_dict.atom(1) - 2.0 * onb_dict.atom(2)
        assert not check_positivity(y, [1, 2], onb_dict)

    def test_atom_inversion_repairs(self, small_gabor_dict):
        # flipping to the negated twin atom makes the inner product
        # positive again: the dictionary's +- pairing exists for this.
        # Atoms 0 and 40 sit 50 samples apart, so they barely interact.
        atoms = small_gabor_dict.atoms
        assert small_gabor_dict.params[40].t - small_gabor_dict.params[0].t == 50
        y = atoms[:, 0] - 1.5 * atoms[:, 40]
        assert not check_positivity(y, [0, 40], small_gabor_dict)
        assert check_positivity(y, [0, 41], small_gabor_dict)


class TestGenerateEnsemble:
    def test_basic_contract_on_onb(self, onb_dict):
        transforms = identity_vector(onb_dict, 3)
        ens = generate_ensemble(onb_dict, 4, transforms, seed=0)
        assert ens.n_views == 3
        assert ens.sparsity == 4
        assert ens.margin > 0.0
        for j in range(3):
            assert np.array_equal(ens.supports[j], ens.reference_support)
            rebuilt = onb_dict.atoms[:, ens.supports[j]] @ ens.coefficients[j]
            assert np.allclose(rebuilt, ens.signals[j], atol=1e-10)
            assert thresholding_margin(ens.signals[j], ens.supports[j],
                                       onb_dict) >= ens.margin - 1e-12
            assert check_positivity(ens.signals[j], ens.supports[j], onb_dict)

    def test_coefficient_magnitudes_in_range(self, onb_dict):
        ens = generate_ensemble(onb_dict, 5, identity_vector(onb_dict, 2),
                                seed=1)
        lo, hi = COEFF_MAGNITUDE_RANGE
        for x in ens.coefficients:
            mags = np.abs(x)
            assert np.all((mags >= lo) & (mags <= hi))

    def test_custom_coeff_range(self, onb_dict):
        ens = generate_ensemble(onb_dict, 5, identity_vector(onb_dict, 2),
                                seed=1, coeff_range=(0.9, 1.1))
        for x in ens.coefficients:
            mags = np.abs(x)
            assert np.all((mags >= 0.9) & (mags <= 1.1))

    def test_shared_rule_duplicates_coefficients(self, onb_dict):
        ens = generate_ensemble(onb_dict, 4, identity_vector(onb_dict, 3),
                                coeff_rule="shared", seed=2)
        for x in ens.coefficients[1:]:
            assert np.array_equal(np.abs(x), np.abs(ens.coefficients[0]))

    def test_independent_rule_differs(self, onb_dict):
        ens = generate_ensemble(onb_dict, 6, identity_vector(onb_dict, 3),
                                coeff_rule="independent", seed=3)
        assert not np.array_equal(np.abs(ens.coefficients[0]),
                                  np.abs(ens.coefficients[1]))

    def test_deterministic_given_seed(self, onb_dict):
        a = generate_ensemble(onb_dict, 4, identity_vector(onb_dict, 2),
                              seed=9)
        b = generate_ensemble(onb_dict, 4, identity_vector(onb_dict, 2),
                              seed=9)
        assert np.array_equal(a.reference_support, b.reference_support)
        for xa, xb in zip(a.coefficients, b.coefficients):
            assert np.array_equal(xa, xb)

    def test_translated_supports(self, small_gaussian_dict):
        ident = identity_transform(small_gaussian_dict)
        shift = translation_transform(small_gaussian_dict, (2, 0))
        transforms = TransformVector((ident, shift))
        ens = generate_ensemble(small_gaussian_dict, 2, transforms, seed=4,
                                require_margin=False,
                                require_positivity=False)
        assert np.array_equal(ens.supports[1],
                              shift.mapping[ens.reference_support])

    def test_margin_infeasible_raises(self, small_gabor_dict):
        # every atom has a negated twin, so the margin can never be
        # positive on this dictionary
        transforms = identity_vector(small_gabor_dict, 2)
        with pytest.raises(EnsembleGenerationError):
            generate_ensemble(small_gabor_dict, 3, transforms, seed=5,
                              max_attempts=50)

    def test_rejects_bad_sparsity(self, onb_dict):
        with pytest.raises(ValueError):
            generate_ensemble(onb_dict, 0, identity_vector(onb_dict, 2))
        with pytest.raises(ValueError):
            generate_ensemble(onb_dict, 16, identity_vector(onb_dict, 2))

    def test_rejects_bad_coeff_range(self, onb_dict):
        with pytest.raises(ValueError):
            generate_ensemble(onb_dict, 2, identity_vector(onb_dict, 2),
                              coeff_range=(0.0, 1.0))
        with pytest.raises(ValueError):
            generate_ensemble(onb_dict, 2, identity_vector(onb_dict, 2),
                              coeff_range=(2.0, 1.0))


class TestMarginLowerBound:
    def test_single_atom_onb(self):
        # one atom, orthonormal columns: the bound is exactly 1
        assert margin_lower_bound([np.array([1.0])], 0.0, 0.0) == (
            pytest.approx(1.0))

    def test_equal_coefficients_onb(self):
        x = np.ones(4)
        assert margin_lower_bound([x], 0.0, 0.0) == pytest.approx(0.5)

    def test_clamps_to_zero_when_infeasible(self):
        # heavy coherence swamps the coefficient ratio
        x = np.array([0.5, 1.5])
        assert margin_lower_bound([x], 0.6, 0.7) == 0.0

    def test_never_exceeds_recorded_margin_on_onb(self, onb_dict):
        for seed in range(10):
            ens = generate_ensemble(onb_dict, 3,
                                    identity_vector(onb_dict, 2), seed=seed)
            bound = margin_lower_bound(ens.coefficients, 0.0, 0.0)
            assert bound <= ens.margin + 1e-12

    def test_worst_view_controls(self):
        flat = np.ones(4)
        skewed = np.array([0.5, 1.5, 1.5, 1.5])
        joint = margin_lower_bound([flat, skewed], 0.0, 0.0)
        assert joint == pytest.approx(margin_lower_bound([skewed], 0.0, 0.0))


class TestPersistence:
    def test_round_trip(self, onb_dict, tmp_path):
        ens = generate_ensemble(onb_dict, 4, identity_vector(onb_dict, 3),
                                seed=21)
        path = tmp_path / "ensemble.json"
        save_ensemble(ens, path)
        again = load_ensemble(path, onb_dict)
        assert np.array_equal(again.reference_support, ens.reference_support)
        assert again.margin == pytest.approx(ens.margin)
        for j in range(3):
            assert np.array_equal(again.supports[j], ens.supports[j])
            assert np.allclose(again.coefficients[j], ens.coefficients[j])
            assert np.allclose(again.signals[j], ens.signals[j], atol=1e-12)

    def test_round_trip_with_translation(self, small_gaussian_dict, tmp_path):
        ident = identity_transform(small_gaussian_dict)
        shift = translation_transform(small_gaussian_dict, (0, 2))
        ens = generate_ensemble(small_gaussian_dict, 2,
                                TransformVector((ident, shift)), seed=22,
                                require_margin=False,
                                require_positivity=False)
        path = tmp_path / "ensemble.json"
        save_ensemble(ens, path)
        again = load_ensemble(path, small_gaussian_dict)
        assert again.transforms == ens.transforms

    def test_load_signal_csv(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("0.5\n-1.25\n3.0\n")
        y = load_signal_csv(path)
        assert np.array_equal(y, np.array([0.5, -1.25, 3.0]))
