"""Simplicial homology and cohomology with coefficients in F_p.

Chain groups use the canonical simplex enumeration of the complex: the
coordinate of a degree-n chain at index j is the coefficient of the j-th
n-simplex in lexicographic order. All bases are chosen deterministically
from row-reduced echelon forms, so equal inputs give identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import Simplex, SimplicialComplex, SimplicialMap
from .errors import ValidationError
from .fplinalg import (
    FpMatrix,
    check_prime,
    coordinates_in_quotient,
    kernel_basis,
    pivot_columns,
)


def boundary_matrix(k: SimplicialComplex, n: int, p: int) -> FpMatrix:
    """Matrix of the boundary map from n-chains to (n-1)-chains.

    Rows are indexed by (n-1)-simplices, columns by n-simplices, both in
    canonical order; the face omitting the i-th vertex gets sign (-1)^i.
    """
    check_prime(p)
    rows = k.faces(n - 1)
    cols = k.faces(n)
    row_index = {s: i for i, s in enumerate(rows)}
    data = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face:
                data[row_index[face], j] = 1 if i % 2 == 0 else p - 1
    return FpMatrix(data, p)


def _augmentation(k: SimplicialComplex, p: int) -> FpMatrix:
    return FpMatrix(np.ones((1, len(k.faces(0))), dtype=np.int64), p)


@dataclass(frozen=True)
class HomologyBasis:
    """Basis data for H_n(K; F_p).

    `representatives` holds one cycle per basis class as a column;
    `boundaries` spans the image of the next boundary map. Coordinates of an
    arbitrary cycle are taken modulo the boundary space.
    """

    complex: SimplicialComplex
    degree: int
    p: int
    reduced: bool
    representatives: FpMatrix
    boundaries: FpMatrix
    cycles: FpMatrix

    @property
    def dim(self) -> int:
        return self.representatives.ncols

    def coordinates(self, chain) -> tuple[int, ...]:
        """Class of a cycle in this basis; error if the chain is no cycle."""
        vec = np.asarray(chain, dtype=np.int64).reshape(-1) % self.p
        n_simp = len(self.complex.faces(self.degree))
        if vec.shape[0] != n_simp:
            raise ValidationError(
                f"chain has {vec.shape[0]} coordinates, expected {n_simp}")
        try:
            coords = coordinates_in_quotient(vec, self.boundaries,
                                             self.representatives)
        except ValidationError:
            raise ValidationError("chain is not a cycle") from None
        return tuple(int(c) for c in coords)

    def representative_cycle(self, i: int) -> dict[Simplex, int]:
        """The i-th basis cycle as a simplex-to-coefficient mapping."""
        col = self.representatives.column(i)
        faces = self.complex.faces(self.degree)
        return {faces[j]: int(col[j]) for j in range(len(faces)) if col[j]}


def homology_basis(k: SimplicialComplex, n: int, p: int,
                   reduced: bool = False) -> HomologyBasis:
    """Deterministic basis of H_n(K; F_p) (reduced uses the augmentation in
    degree 0, so a point has trivial homology everywhere)."""
    check_prime(p)
    if n < 0:
        raise ValidationError("negative degree")
    if n == 0 and reduced:
        d_n = _augmentation(k, p)
    else:
        d_n = boundary_matrix(k, n, p)
    d_next = boundary_matrix(k, n + 1, p)
    cycles = kernel_basis(d_n)
    # independent boundary columns, then the cycle columns extending them
    stacked = FpMatrix(np.hstack([d_next.data, cycles.data]), p)
    pivots = pivot_columns(stacked)
    nb = d_next.ncols
    boundary_cols = [d_next.column(j) for j in pivots if j < nb]
    rep_cols = [cycles.column(j - nb) for j in pivots if j >= nb]
    n_simp = len(k.faces(n))
    return HomologyBasis(
        complex=k, degree=n, p=p, reduced=reduced,
        representatives=FpMatrix.from_columns(rep_cols, n_simp, p),
        boundaries=FpMatrix.from_columns(boundary_cols, n_simp, p),
        cycles=cycles,
    )


def betti_numbers(k: SimplicialComplex, p: int,
                  reduced: bool = False) -> tuple[int, ...]:
    """dim H_n for n = 0..dim(K) (a -1-dimensional empty complex gives ())."""
    return tuple(
        homology_basis(k, n, p, reduced=reduced).dim
        for n in range(k.dim + 1)
    )


def _permutation_sign(values) -> int:
    inversions = 0
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def chain_vector(k: SimplicialComplex, n: int,
                 coefficients: dict[Simplex, int], p: int) -> np.ndarray:
    """Coordinate vector of a chain given as simplex -> coefficient."""
    faces = k.faces(n)
    index = {s: i for i, s in enumerate(faces)}
    vec = np.zeros(len(faces), dtype=np.int64)
    for s, c in coefficients.items():
        t = tuple(s)
        if t not in index:
            raise ValidationError(f"{t} is not a {n}-simplex of the complex")
        vec[index[t]] = c % p
    return vec


def pushforward_chain(f: SimplicialMap, n: int, vec, p: int) -> np.ndarray:
    """Chain-level pushforward: degenerate simplex images contribute zero,
    the rest the sign of the vertex-sorting permutation."""
    dom_faces = f.domain.faces(n)
    cod_faces = f.codomain.faces(n)
    cod_index = {s: i for i, s in enumerate(cod_faces)}
    v = np.asarray(vec, dtype=np.int64).reshape(-1) % p
    out = np.zeros(len(cod_faces), dtype=np.int64)
    for j, s in enumerate(dom_faces):
        c = int(v[j])
        if c == 0:
            continue
        images = [f.vertex_map[x] for x in s]
        if len(set(images)) != len(images):
            continue
        target = tuple(sorted(images))
        sign = _permutation_sign(images)
        out[cod_index[target]] = (out[cod_index[target]] + sign * c) % p
    return out


def induced_map_on_homology(f: SimplicialMap, dom: HomologyBasis,
                            cod: HomologyBasis) -> FpMatrix:
    """Matrix of H_n(f) from the domain basis to the codomain basis."""
    if dom.degree != cod.degree or dom.p != cod.p or dom.reduced != cod.reduced:
        raise ValidationError("homology bases do not match in degree or prime")
    if f.domain != dom.complex or f.codomain != cod.complex:
        raise ValidationError("bases do not belong to the map's complexes")
    cols = []
    for i in range(dom.dim):
        image = pushforward_chain(f, dom.degree, dom.representatives.column(i),
                                  dom.p)
        cols.append(np.array(cod.coordinates(image), dtype=np.int64))
    return FpMatrix.from_columns(cols, cod.dim, dom.p)


def induced_map_on_cohomology(f: SimplicialMap, dom: HomologyBasis,
                              cod: HomologyBasis) -> FpMatrix:
    """Matrix of H^n(f) in the dual bases: the transpose of H_n(f), mapping
    codomain classes to domain classes."""
    return induced_map_on_homology(f, dom, cod).transpose()


def classify_matrix(m: FpMatrix) -> str:
    """'iso', 'mono', 'epi', or 'neither' for a linear map given as a matrix."""
    from .fplinalg import rank

    r = rank(m)
    mono = r == m.ncols
    epi = r == m.nrows
    if mono and epi:
        return "iso"
    if mono:
        return "mono"
    if epi:
        return "epi"
    return "neither"


def restriction_classification(f: SimplicialMap, n: int, p: int,
                               reduced: bool = False) -> str:
    """Classification of H_n(f) as iso / mono / epi / neither."""
    dom = homology_basis(f.domain, n, p, reduced=reduced)
    cod = homology_basis(f.codomain, n, p, reduced=reduced)
    return classify_matrix(induced_map_on_homology(f, dom, cod))
