"""Parametric dictionaries of unit-norm atoms.

Two families are provided.  The 2D family rotates, scales and translates
the window g(x, y) = exp(-x^2 - y^2) over a pixel grid; the 1D family
consists of Gaussian windows modulated by a cosine (Gabor functions) on
an integer sample grid.  Atoms are sampled at integer grid positions,
truncated by the grid border, and normalized to unit Euclidean norm
afterwards, so every column of the atom matrix has norm 1.

Construction is deterministic: the same parameter grid always yields a
bit-identical atom matrix with the same column order.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from itertools import product
from pathlib import Path

import numpy as np

UNIT_NORM_TOL = 1e-9
DUPLICATE_ATOM_TOL = 1e-12


@dataclass(frozen=True)
class GaussianAtom2D:
    """Rotation angle, per-axis scales and integer pixel translation of one atom."""

    theta: float
    sx: float
    sy: float
    tx: int
    ty: int


@dataclass(frozen=True)
class ModulatedAtom1D:
    """Center, width, modulation frequency and sign of one 1D atom."""

    t: int
    s: float
    omega: float
    sign: int


class Dictionary:
    """A set of K unit-norm atoms stored as the columns of an N x K matrix.

    Parameters
    ----------
    atoms : ndarray, shape (N, K)
        Atom matrix.  Columns must have unit norm within 1e-9 unless
        ``normalize`` is set.
    params : sequence, optional
        One hashable parameter record per atom, aligned with the columns.
        Required for parametric transforms; plain matrices may omit it.
    variant : str
        One of ``"gaussian_2d"``, ``"gabor_1d"`` or ``"custom"``.
    grid : tuple, optional
        Sampling grid shape: (height, width) for images, (n,) for 1D.
    normalize : bool
        When true, columns are rescaled to unit norm instead of checked.
    """

    def __init__(self, atoms, params=None, variant="custom", grid=None,
                 normalize=False):
        atoms = np.array(atoms, dtype=float)
        if atoms.ndim != 2 or atoms.shape[0] == 0 or atoms.shape[1] == 0:
            raise ValueError("atoms must be a nonempty N x K matrix")
        norms = np.linalg.norm(atoms, axis=0)
        if normalize:
            if np.any(norms == 0.0):
                raise ValueError("cannot normalize an all-zero atom")
            atoms /= norms
        elif np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise ValueError(
                f"atom columns must be unit norm within {UNIT_NORM_TOL:g} "
                f"(worst deviation {worst:g})")
        atoms.setflags(write=False)
        self.atoms = atoms
        if params is not None:
            params = tuple(params)
            if len(params) != atoms.shape[1]:
                raise ValueError("need exactly one parameter record per atom")
        self.params = params
        self.variant = variant
        self.grid = tuple(grid) if grid is not None else None
        self._param_index = None

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]

    @property
    def signal_length(self) -> int:
        return self.atoms.shape[0]

    def atom(self, index: int) -> np.ndarray:
        return self.atoms[:, index]

    def index_of(self, params) -> int:
        """Column index of the atom with exactly these parameters, or -1."""
        if self.params is None:
            raise ValueError("dictionary carries no parameter records")
        if self._param_index is None:
            self._param_index = {p: i for i, p in enumerate(self.params)}
        return self._param_index.get(params, -1)

    def __repr__(self):
        return (f"Dictionary(variant={self.variant!r}, "
                f"n_atoms={self.n_atoms}, signal_length={self.signal_length})")


def gaussian_atom_2d(width: int, height: int, params: GaussianAtom2D) -> np.ndarray:
    """Sample one rotated, scaled and translated Gaussian atom on the pixel grid.

    The window g(x, y) = exp(-x^2 - y^2) is evaluated at

        X = ((x - tx) cos(theta) - (y - ty) sin(theta)) / sx
        Y = ((y - ty) cos(theta) + (x - tx) sin(theta)) / sy

    for integer pixels x in 0..width-1 (columns) and y in 0..height-1 (rows),
    flattened row-major to a vector of length width*height, then normalized.
    """
    if width <= 0 or height <= 0:
        raise ValueError("grid dimensions must be positive")
    if params.sx <= 0 or params.sy <= 0:
        raise ValueError("degenerate scale: sx and sy must be positive")
    xs = np.arange(width, dtype=float)
    ys = np.arange(height, dtype=float)
    u = xs[np.newaxis, :] - params.tx
    v = ys[:, np.newaxis] - params.ty
    c = np.cos(params.theta)
    s = np.sin(params.theta)
    rx = (u * c - v * s) / params.sx
    ry = (v * c + u * s) / params.sy
    values = np.exp(-rx * rx - ry * ry).ravel()
    return values / np.linalg.norm(values)


def modulated_atom_1d(n: int, params: ModulatedAtom1D) -> np.ndarray:
    """Sample one cosine-modulated Gaussian atom at integer positions 1..n."""
    if n <= 0:
        raise ValueError("signal length must be positive")
    if params.s <= 0:
        raise ValueError("degenerate scale: s must be positive")
    if params.sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    x = np.arange(1, n + 1, dtype=float)
    u = (x - params.t) / params.s
    values = params.sign * np.exp(-u * u) * np.cos(params.omega * u)
    return values / np.linalg.norm(values)


def odd_translations(width: int, height: int) -> list[tuple[int, int]]:
    """All pixel translations with odd x and y coordinates, column-major in x."""
    return [(tx, ty) for tx in range(1, width, 2) for ty in range(1, height, 2)]


def build_gaussian_2d_dictionary(width, height, thetas, sxs, sys, translations):
    """Build a 2D Gaussian dictionary over a Cartesian parameter grid.

    One atom is generated per (theta, sx, sy, translation) tuple, in
    deterministic grid order with theta outermost and translation
    innermost.  Tuples whose atom vector coincides with an earlier one
    (max abs difference at most 1e-12) are dropped; the Gaussian window
    is even, so theta and theta + pi always produce the same atom.

    Parameters
    ----------
    width, height : int
        Pixel grid dimensions; atoms live in R^(width*height).
    thetas, sxs, sys : sequence of float
        Rotation angles and per-axis scales; scales must be positive.
    translations : sequence of (int, int)
        Pixel centers (tx, ty), each inside the grid.
    """
    if width <= 0 or height <= 0:
        raise ValueError("grid dimensions must be positive")
    thetas = [float(t) for t in thetas]
    sxs = [float(s) for s in sxs]
    sys = [float(s) for s in sys]
    translations = [(int(tx), int(ty)) for tx, ty in translations]
    if not thetas or not sxs or not sys or not translations:
        raise ValueError("empty parameter grid")
    if any(s <= 0 for s in sxs) or any(s <= 0 for s in sys):
        raise ValueError("degenerate scale: all scales must be positive")
    for tx, ty in translations:
        if not (0 <= tx < width and 0 <= ty < height):
            raise ValueError(f"translation ({tx}, {ty}) outside the image grid")

    xs = np.arange(width, dtype=float)
    ys = np.arange(height, dtype=float)
    txs = np.array([t[0] for t in translations], dtype=float)
    tys = np.array([t[1] for t in translations], dtype=float)
    # broadcast to (n_translations, height, width) per (theta, sx, sy) combo
    u = xs[np.newaxis, np.newaxis, :] - txs[:, np.newaxis, np.newaxis]
    v = ys[np.newaxis, :, np.newaxis] - tys[:, np.newaxis, np.newaxis]

    blocks = []
    params = []
    for theta, sx, sy in product(thetas, sxs, sys):
        c = np.cos(theta)
        s = np.sin(theta)
        rx = (u * c - v * s) / sx
        ry = (v * c + u * s) / sy
        vals = np.exp(-rx * rx - ry * ry).reshape(len(translations), -1)
        vals /= np.linalg.norm(vals, axis=1, keepdims=True)
        blocks.append(vals)
        params.extend(GaussianAtom2D(theta, sx, sy, tx, ty)
                      for tx, ty in translations)
    rows = np.concatenate(blocks, axis=0)
    keep = _drop_duplicate_atoms(rows, params)
    atoms = np.ascontiguousarray(rows[keep].T)
    kept_params = [params[i] for i in keep]
    return Dictionary(atoms, params=kept_params, variant="gaussian_2d",
                      grid=(height, width))


def _drop_duplicate_atoms(rows, params):
    """Keep-first duplicate removal over atom rows.

    Duplicates come from exact symmetries in the angle/scale parameters,
    which leave the translation fixed, so only atoms sharing a translation
    need to be compared.
    """
    groups: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(params):
        groups.setdefault((p.tx, p.ty), []).append(i)
    keep_mask = np.ones(len(params), dtype=bool)
    for idxs in groups.values():
        kept: list[int] = []
        for i in idxs:
            if kept:
                gap = np.abs(rows[kept] - rows[i]).max(axis=1).min()
                if gap <= DUPLICATE_ATOM_TOL:
                    keep_mask[i] = False
                    continue
            kept.append(i)
    return np.flatnonzero(keep_mask)


def build_gabor_1d_dictionary(n, t_start=1, t_step=10,
                              scales=(4.0, 8.0, 16.0),
                              omegas=(2.0, 4.0, 6.0, 8.0, 10.0),
                              include_negated=True):
    """Build a 1D dictionary of cosine-modulated Gaussian atoms.

    Atoms g_(t,s,omega)(x) = rho * exp(-((x-t)/s)^2) * cos(omega (x-t)/s)
    are sampled at x = 1..n for centers t = t_start, t_start + t_step, ...
    up to n.  With ``include_negated`` the negated copy -g follows each g
    as a distinct atom, which lets decoders represent sign flips by atom
    choice.  Order is deterministic with t outermost, then scale, then
    frequency, then sign.
    """
    if n <= 0:
        raise ValueError("signal length must be positive")
    if t_step < 1:
        raise ValueError("t_step must be at least 1")
    if not (1 <= t_start <= n):
        raise ValueError("t_start must lie in 1..n")
    scales = [float(s) for s in scales]
    omegas = [float(w) for w in omegas]
    if not scales or not omegas:
        raise ValueError("empty parameter grid")
    if any(s <= 0 for s in scales):
        raise ValueError("degenerate scale: all scales must be positive")

    x = np.arange(1, n + 1, dtype=float)
    columns = []
    params = []
    for t in range(t_start, n + 1, t_step):
        for s in scales:
            u = (x - t) / s
            window = np.exp(-u * u)
            for omega in omegas:
                g = window * np.cos(omega * u)
                g = g / np.linalg.norm(g)
                columns.append(g)
                params.append(ModulatedAtom1D(t, s, omega, 1))
                if include_negated:
                    columns.append(-g)
                    params.append(ModulatedAtom1D(t, s, omega, -1))
    atoms = np.column_stack(columns)
    return Dictionary(atoms, params=params, variant="gabor_1d", grid=(n,))


def babel_function(dictionary: Dictionary, m: int) -> float:
    """Cumulative coherence mu_1(m) of the dictionary.

    mu_1(m) = max over atoms k of the largest sum of m absolute inner
    products |<atom_l, atom_k>| with l ranging over m distinct atoms
    other than k.  mu_1(0) = 0, and mu_1 vanishes for every m on an
    orthonormal basis.
    """
    k_total = dictionary.n_atoms
    if not 0 <= m < k_total:
        raise ValueError(f"m must lie in 0..{k_total - 1}")
    if m == 0:
        return 0.0
    atoms = dictionary.atoms
    best = -np.inf
    block = 512
    for start in range(0, k_total, block):
        stop = min(start + block, k_total)
        gram = np.abs(atoms.T @ atoms[:, start:stop])
        gram[np.arange(start, stop), np.arange(stop - start)] = -np.inf
        top = np.partition(gram, k_total - m, axis=0)[k_total - m:, :]
        best = max(best, float(top.sum(axis=0).max()))
    return best


def gram_row(dictionary: Dictionary, atom_index: int) -> np.ndarray:
    """Inner products of every atom with the atom at ``atom_index``."""
    if not 0 <= atom_index < dictionary.n_atoms:
        raise ValueError("atom index out of range")
    return dictionary.atoms.T @ dictionary.atoms[:, atom_index]


def save_dictionary(dictionary: Dictionary, path) -> None:
    """Write the atom matrix plus parameter metadata to an ``.npz`` bundle."""
    path = Path(path)
    meta = {
        "variant": dictionary.variant,
        "grid": list(dictionary.grid) if dictionary.grid is not None else None,
        "n_atoms": dictionary.n_atoms,
        "signal_length": dictionary.signal_length,
        "params": ([asdict(p) for p in dictionary.params]
                   if dictionary.params is not None
                   and dictionary.variant != "custom" else None),
    }
    with open(path, "wb") as fh:
        np.savez(fh, atoms=dictionary.atoms, meta=json.dumps(meta))


def load_dictionary(path) -> Dictionary:
    """Load a dictionary written by :func:`save_dictionary`."""
    with np.load(Path(path), allow_pickle=False) as data:
        atoms = data["atoms"]
        meta = json.loads(str(data["meta"]))
    params = None
    if meta["params"] is not None:
        if meta["variant"] == "gaussian_2d":
            params = [GaussianAtom2D(**p) for p in meta["params"]]
        elif meta["variant"] == "gabor_1d":
            params = [ModulatedAtom1D(**p) for p in meta["params"]]
        else:
            raise ValueError(f"unknown dictionary variant {meta['variant']!r}")
    grid = tuple(meta["grid"]) if meta["grid"] is not None else None
    return Dictionary(atoms, params=params, variant=meta["variant"], grid=grid)
