"""Atom index transformations and candidate transformation vectors.

Supports across views are related by per-view transformations that act on
atom indices: view j's support is the image of the reference (view 1)
support under transform j.  A transform is a partial injective map on the
dictionary's atom indices, stored as an integer array with -1 marking
atoms outside the domain (for example, translations that would move an
atom's center off the grid).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from math import prod

import numpy as np

from .dictionary import Dictionary


class AtomTransform:
    """Partial injective map on atom indices.

    ``mapping[i]`` is the index of the image of atom i, or -1 when atom i
    lies outside the transform's domain.  Equality compares mappings, not
    labels, so a zero translation equals the identity.
    """

    __slots__ = ("label", "mapping", "_spec")

    def __init__(self, label: str, mapping, spec=None, _validate=True):
        mapping = np.asarray(mapping, dtype=np.int64)
        if mapping.ndim != 1 or mapping.size == 0:
            raise ValueError("mapping must be a nonempty 1D index array")
        if _validate:
            if mapping.max() >= mapping.size or mapping.min() < -1:
                raise ValueError("mapping targets must lie in -1..K-1")
            defined = mapping[mapping >= 0]
            if defined.size != np.unique(defined).size:
                raise ValueError("mapping must be injective on its domain")
        mapping = mapping.copy()
        mapping.setflags(write=False)
        self.label = label
        self.mapping = mapping
        self._spec = spec

    @property
    def n_atoms(self) -> int:
        return self.mapping.size

    @property
    def domain_mask(self) -> np.ndarray:
        return self.mapping >= 0

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.mapping, np.arange(self.n_atoms)))

    def spec(self):
        """JSON-serializable description, or None for ad-hoc mappings."""
        return self._spec

    def __eq__(self, other):
        if not isinstance(other, AtomTransform):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)

    def __hash__(self):
        return hash(self.mapping.tobytes())

    def __repr__(self):
        return f"AtomTransform({self.label!r})"


def identity_transform(dictionary: Dictionary) -> AtomTransform:
    """The identity map on the dictionary's atom indices (full domain)."""
    return AtomTransform("identity", np.arange(dictionary.n_atoms),
                         spec={"kind": "identity"}, _validate=False)


def translation_transform(dictionary: Dictionary, offset) -> AtomTransform:
    """Translation acting on atom centers, realized as an index map.

    For 2D dictionaries ``offset`` is (dx, dy) in pixels; for 1D
    dictionaries it is a single integer sample shift.  An atom maps to
    the atom with identical remaining parameters and shifted center; when
    the shifted center is not on the parameter grid the atom falls
    outside the domain.
    """
    if dictionary.params is None:
        raise ValueError("translations need a dictionary with parameter records")
    if dictionary.variant == "gaussian_2d":
        try:
            dx, dy = (int(offset[0]), int(offset[1]))
        except (TypeError, IndexError):
            raise ValueError("2D translation offset must be a (dx, dy) pair")
        mapping = np.fromiter(
            (dictionary.index_of(replace(p, tx=p.tx + dx, ty=p.ty + dy))
             for p in dictionary.params),
            dtype=np.int64, count=dictionary.n_atoms)
        label = f"shift({dx:+d},{dy:+d})"
        spec = {"kind": "translation", "offset": [dx, dy]}
    elif dictionary.variant == "gabor_1d":
        if np.ndim(offset) != 0:
            offset = offset[0] if len(offset) == 1 else None
        if offset is None:
            raise ValueError("1D translation offset must be a single integer")
        dt = int(offset)
        mapping = np.fromiter(
            (dictionary.index_of(replace(p, t=p.t + dt))
             for p in dictionary.params),
            dtype=np.int64, count=dictionary.n_atoms)
        label = f"shift({dt:+d})"
        spec = {"kind": "translation", "offset": dt}
    else:
        raise ValueError(
            f"translations are not defined for variant {dictionary.variant!r}")
    return AtomTransform(label, mapping, spec=spec)


def transform_from_mapping(label: str, mapping) -> AtomTransform:
    """Wrap a user-supplied index map; validates range and injectivity."""
    return AtomTransform(label, mapping)


def realize_transform(dictionary: Dictionary, spec) -> AtomTransform:
    """Build a transform from its serializable description."""
    kind = spec.get("kind")
    if kind == "identity":
        return identity_transform(dictionary)
    if kind == "translation":
        return translation_transform(dictionary, spec["offset"])
    raise ValueError(f"unknown transform kind {kind!r}")


def apply_to_support(transform: AtomTransform, support) -> np.ndarray:
    """Map a support index array through the transform, preserving order.

    Raises ValueError when any support atom lies outside the transform's
    domain; decoders treat such candidates as invalid rather than erroring.
    """
    support = np.asarray(support, dtype=np.int64)
    if support.ndim != 1:
        raise ValueError("support must be a 1D index array")
    if support.size and (support.min() < 0 or support.max() >= transform.n_atoms):
        raise ValueError("support index out of range")
    image = transform.mapping[support]
    if np.any(image < 0):
        bad = support[image < 0]
        raise ValueError(
            f"support atoms {bad.tolist()} outside domain of {transform.label}")
    return image


@dataclass(frozen=True)
class TransformVector:
    """Per-view transforms (T_1, ..., T_J) with T_1 the identity."""

    transforms: tuple[AtomTransform, ...]

    def __post_init__(self):
        if len(self.transforms) < 1:
            raise ValueError("a transform vector needs at least one view")
        if not self.transforms[0].is_identity:
            raise ValueError("the first (reference view) transform must be identity")
        sizes = {t.n_atoms for t in self.transforms}
        if len(sizes) != 1:
            raise ValueError("all transforms must act on the same dictionary")

    @property
    def n_views(self) -> int:
        return len(self.transforms)

    def __len__(self):
        return len(self.transforms)

    def __iter__(self):
        return iter(self.transforms)

    def __getitem__(self, index):
        return self.transforms[index]


@dataclass(frozen=True)
class CandidateSet:
    """Candidate transforms per view: view 1 is pinned to the identity,
    views 2..J each carry a finite nonempty candidate list."""

    identity: AtomTransform
    per_view: tuple[tuple[AtomTransform, ...], ...]

    def __post_init__(self):
        if not self.identity.is_identity:
            raise ValueError("reference transform must be the identity")
        for cands in self.per_view:
            if len(cands) == 0:
                raise ValueError("each view needs at least one candidate")
            for t in cands:
                if t.n_atoms != self.identity.n_atoms:
                    raise ValueError("candidate acts on a different dictionary")

    @property
    def n_views(self) -> int:
        return len(self.per_view) + 1

    @property
    def size(self) -> int:
        """Number of candidate transformation vectors."""
        return prod(len(c) for c in self.per_view)

    @classmethod
    def from_offsets(cls, dictionary: Dictionary, offsets_per_view):
        """Realize translation candidates for views 2..J.

        ``offsets_per_view`` holds one offset list per non-reference view.
        Repeated offsets are realized once and shared.
        """
        cache: dict[tuple, AtomTransform] = {}

        def realized(off):
            key = tuple(np.atleast_1d(off).tolist())
            if key not in cache:
                cache[key] = translation_transform(dictionary, off)
            return cache[key]

        per_view = tuple(tuple(realized(off) for off in offsets)
                         for offsets in offsets_per_view)
        return cls(identity_transform(dictionary), per_view)

    @classmethod
    def from_uniform_offsets(cls, dictionary: Dictionary, offsets, n_views: int):
        """Same translation candidate list for every view 2..n_views."""
        if n_views < 1:
            raise ValueError("need at least one view")
        made = cls.from_offsets(dictionary, [offsets])
        return cls(made.identity, made.per_view * (n_views - 1))


def enumerate_vectors(candidates: CandidateSet):
    """Yield every candidate TransformVector in lexicographic order.

    The Cartesian product over views runs with the last view varying
    fastest, matching the order of the per-view candidate lists; a
    single-view candidate set yields exactly the identity vector.
    """
    for combo in product(*candidates.per_view):
        yield TransformVector((candidates.identity,) + combo)
