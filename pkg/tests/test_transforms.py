"""Atom transforms, candidate sets, and candidate enumeration."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jointrec import (AtomTransform, CandidateSet, apply_to_support,
                      enumerate_vectors, identity_transform,
                      realize_transform, transform_from_mapping,
                      translation_transform)
from jointrec.transforms import TransformVector


class TestAtomTransform:
    def test_identity(self, small_gabor_dict):
        t = identity_transform(small_gabor_dict)
        assert t.is_identity
        assert np.array_equal(t.mapping,
                              np.arange(small_gabor_dict.n_atoms))
        assert t.domain_mask.all()

    def test_rejects_out_of_range_targets(self):
        with pytest.raises(ValueError):
            AtomTransform("bad", np.array([0, 5], dtype=np.int64))

    def test_rejects_collisions(self):
        with pytest.raises(ValueError):
            AtomTransform("collide", np.array([1, 1, 0], dtype=np.int64))

    def test_partial_domain_allowed(self):
        t = AtomTransform("partial", np.array([2, -1, 0], dtype=np.int64))
        assert not t.domain_mask[1]
        assert t.domain_mask[0] and t.domain_mask[2]

    def test_equality_by_mapping(self, small_gabor_dict):
        a = identity_transform(small_gabor_dict)
        b = transform_from_mapping("same",
                                   np.arange(small_gabor_dict.n_atoms))
        assert a == b and hash(a) == hash(b)


class TestTranslation1D:
    def test_shifts_translation_parameter(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, 10)
        for i in range(small_gabor_dict.n_atoms):
            j = t.mapping[i]
            if j < 0:
                continue
            pi, pj = small_gabor_dict.params[i], small_gabor_dict.params[j]
            assert pj.t == pi.t + 10
            assert (pj.s, pj.omega, pj.sign) == (pi.s, pi.omega, pi.sign)

    def test_off_grid_shift_is_empty(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, 3)
        assert not t.domain_mask.any()

    def test_boundary_leaves_domain(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, 10)
        last_t = max(p.t for p in small_gabor_dict.params)
        for i, p in enumerate(small_gabor_dict.params):
            assert t.domain_mask[i] == (p.t + 10 <= last_t)

    def test_spec_round_trip(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, -10)
        again = realize_transform(small_gabor_dict, t.spec())
        assert t == again


class TestTranslation2D:
    def test_shifts_both_coordinates(self, small_gaussian_dict):
        t = translation_transform(small_gaussian_dict, (2, -2))
        for i in range(small_gaussian_dict.n_atoms):
            j = t.mapping[i]
            if j < 0:
                continue
            pi = small_gaussian_dict.params[i]
            pj = small_gaussian_dict.params[j]
            assert (pj.tx, pj.ty) == (pi.tx + 2, pi.ty - 2)

    def test_inverse_composes_to_identity_on_domain(self, small_gaussian_dict):
        fwd = translation_transform(small_gaussian_dict, (2, 2))
        back = translation_transform(small_gaussian_dict, (-2, -2))
        for i in range(small_gaussian_dict.n_atoms):
            j = fwd.mapping[i]
            if j >= 0 and back.mapping[j] >= 0:
                assert back.mapping[j] == i

    def test_zero_offset_is_identity(self, small_gaussian_dict):
        t = translation_transform(small_gaussian_dict, (0, 0))
        assert t.is_identity

    def test_odd_offset_leaves_grid(self, small_gaussian_dict):
        # translation grid uses odd pixel coordinates, so a unit shift
        # lands between grid points for every atom
        t = translation_transform(small_gaussian_dict, (1, 0))
        assert not t.domain_mask.any()


class TestApplyToSupport:
    def test_maps_and_keeps_order(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, 10)
        support = np.array([0, 5, 8])
        image = apply_to_support(t, support)
        assert np.array_equal(image, t.mapping[support])

    def test_out_of_domain_raises(self, small_gabor_dict):
        t = translation_transform(small_gabor_dict, 10)
        outside = int(np.flatnonzero(~t.domain_mask)[0])
        with pytest.raises(ValueError):
            apply_to_support(t, np.array([outside]))


class TestTransformVector:
    def test_first_must_be_identity(self, small_gabor_dict):
        shift = translation_transform(small_gabor_dict, 10)
        with pytest.raises(ValueError):
            TransformVector((shift, shift))

    def test_equality(self, small_gabor_dict):
        ident = identity_transform(small_gabor_dict)
        shift = translation_transform(small_gabor_dict, 10)
        assert (TransformVector((ident, shift))
                == TransformVector((ident, shift)))
        assert (TransformVector((ident, shift))
                != TransformVector((ident, ident)))


class TestCandidateSet:
    def test_enumeration_count_and_order(self, small_gaussian_dict):
        offsets = [(-2, 0), (0, 0), (2, 0)]
        cands = CandidateSet.from_uniform_offsets(small_gaussian_dict,
                                                  offsets, 3)
        assert cands.size == 9
        vectors = list(enumerate_vectors(cands))
        assert len(vectors) == 9
        # last view varies fastest, first candidate is (first, first)
        assert vectors[0][1] == cands.per_view[0][0]
        assert vectors[0][2] == cands.per_view[1][0]
        assert vectors[1][2] == cands.per_view[1][1]
        assert vectors[3][1] == cands.per_view[0][1]

    def test_single_view_yields_identity_only(self, small_gaussian_dict):
        cands = CandidateSet.from_uniform_offsets(small_gaussian_dict,
                                                  [(0, 0)], 1)
        vectors = list(enumerate_vectors(cands))
        assert len(vectors) == 1
        assert vectors[0][0].is_identity

    def test_full_scale_candidate_count(self, small_gaussian_dict):
        offsets = [(dx, dy) for dx in (-2, 0, 2) for dy in (-2, 0, 2)]
        cands = CandidateSet.from_uniform_offsets(small_gaussian_dict,
                                                  offsets, 4)
        assert cands.size == 729

    def test_repeated_offsets_share_realizations(self, small_gaussian_dict):
        cands = CandidateSet.from_offsets(
            small_gaussian_dict, [[(2, 2), (0, 0)], [(2, 2)]])
        assert cands.per_view[0][0] is cands.per_view[1][0]


def _tiny_1d():
    from jointrec import build_gabor_1d_dictionary
    return build_gabor_1d_dictionary(60, scales=[4.0], omegas=[2.0])


def _tiny_2d():
    from jointrec import build_gaussian_2d_dictionary, odd_translations
    return build_gaussian_2d_dictionary(8, 8, [0.0], [2.0], [1.0],
                                        odd_translations(8, 8))


_TINY_1D = _tiny_1d()
_TINY_2D = _tiny_2d()


@settings(max_examples=30, deadline=None)
@given(shift=st.integers(min_value=-12, max_value=12))
def test_translation_injective_on_domain(shift):
    # property from the contract: no two atoms may collapse onto one
    t = translation_transform(_TINY_1D, shift * 10)
    defined = t.mapping[t.mapping >= 0]
    assert len(np.unique(defined)) == len(defined)


@settings(max_examples=30, deadline=None)
@given(dx=st.integers(-3, 3), dy=st.integers(-3, 3))
def test_translation_round_trip_property(dx, dy):
    fwd = translation_transform(_TINY_2D, (2 * dx, 2 * dy))
    back = translation_transform(_TINY_2D, (-2 * dx, -2 * dy))
    for i in range(_TINY_2D.n_atoms):
        j = fwd.mapping[i]
        if j >= 0:
            assert back.mapping[j] == i
