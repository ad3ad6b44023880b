"""Simplicial complexes: faces, orientations, incidence signs, boundaries.

The reference orientation of every face is its ascending-label vertex
order; this convention fixes the sign of every matrix in the package.
Faces are globally ordered by (dimension, label tuple), so all matrix
layouts are reproducible regardless of input file order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exact import rat_zeros


class ComplexFormatError(ValueError):
    """Raised on malformed complex input."""


@dataclass(frozen=True, order=True)
class Face:
    """A face as a sorted tuple of vertex labels."""

    vertices: tuple[str, ...]

    @staticmethod
    def of(labels) -> "Face":
        vs = tuple(sorted(labels))
        if not vs:
            raise ComplexFormatError("empty face")
        if len(set(vs)) != len(vs):
            raise ComplexFormatError(f"duplicate vertex in face {labels}")
        return Face(vs)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def __str__(self) -> str:
        return " ".join(self.vertices)

    def boundary(self) -> list["Face"]:
        if self.dimension == 0:
            return []
        return [Face(self.vertices[:i] + self.vertices[i + 1:]) for i in range(len(self.vertices))]


@dataclass(frozen=True)
class OrientedFace:
    """One of the two orientation classes of a face.

    ``flipped=False`` is the ascending-label (reference) class; flipping
    corresponds to an odd permutation of the vertex order.
    """

    face: Face
    flipped: bool = False

    def __neg__(self) -> "OrientedFace":
        return OrientedFace(self.face, not self.flipped)


def permutation_parity(sequence, sorted_sequence) -> bool:
    """True when ``sequence`` is an odd permutation of ``sorted_sequence``."""
    seq = list(sequence)
    target = list(sorted_sequence)
    if sorted(seq) != target:
        raise ValueError("not a permutation")
    parity = False
    for i in range(len(seq)):
        if seq[i] != target[i]:
            j = seq.index(target[i], i + 1)
            seq[i], seq[j] = seq[j], seq[i]
            parity = not parity
    return parity


def oriented_face_from_sequence(labels) -> OrientedFace:
    """Oriented face given by an explicit vertex ordering."""
    face = Face.of(labels)
    return OrientedFace(face, permutation_parity(list(labels), face.vertices))


class SimplicialComplex:
    """A finite simplicial complex, closed under taking subfaces."""

    def __init__(self, faces):
        face_set = set(faces)
        if not face_set:
            raise ComplexFormatError("complex has no faces")
        for f in list(face_set):
            for size in range(1, len(f.vertices)):
                for sub in combinations(f.vertices, size):
                    face_set.add(Face(sub))
        self.faces: frozenset[Face] = frozenset(face_set)
        self.dimension: int = max(f.dimension for f in face_set)
        self.faces_by_dim: dict[int, tuple[Face, ...]] = {
            k: tuple(sorted(f for f in face_set if f.dimension == k))
            for k in range(self.dimension + 1)
        }
        self.all_faces: tuple[Face, ...] = tuple(
            f for k in range(self.dimension + 1) for f in self.faces_by_dim[k]
        )
        self._index = {f: i for i, f in enumerate(self.all_faces)}
        self._dim_index = {
            f: i for k in range(self.dimension + 1) for i, f in enumerate(self.faces_by_dim[k])
        }

    def __contains__(self, face: Face) -> bool:
        return face in self.faces

    def n_faces(self, k: int | None = None) -> int:
        if k is None:
            return len(self.all_faces)
        return len(self.faces_by_dim.get(k, ()))

    def index_of(self, face: Face) -> int:
        """Position of a face in the global (dimension, lexicographic) order."""
        return self._index[face]

    def dim_index_of(self, face: Face) -> int:
        """Position of a face within its own dimension block."""
        return self._dim_index[face]


def parse_complex(text: str) -> SimplicialComplex:
    """Parse the maximal-face line format.

    One face per line as whitespace-separated vertex labels; lines starting
    with '#' and blank lines are ignored.  The downward closure of all
    listed faces is returned.
    """
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        labels = line.split()
        for lab in labels:
            if "#" in lab:
                raise ComplexFormatError(f"line {lineno}: malformed label {lab!r}")
        if len(set(labels)) != len(labels):
            raise ComplexFormatError(f"line {lineno}: duplicate vertex in face")
        faces.append(Face.of(labels))
    if not faces:
        raise ComplexFormatError("no faces in input")
    return SimplicialComplex(faces)


def incidence_sign(tau: OrientedFace, sigma: OrientedFace) -> int:
    """Boundary incidence sign between an oriented face and an oriented subface.

    With ascending-label representatives, the subface obtained by dropping
    the i-th vertex carries sign (-1)**i, so that the boundary of an edge
    is its ending point minus its starting point.  Flipping either argument
    negates the result.
    """
    tv, sv = tau.face.vertices, sigma.face.vertices
    if len(tv) != len(sv) + 1 or not set(sv) < set(tv):
        raise ValueError(f"{sigma.face} is not a boundary subface of {tau.face}")
    missing = (set(tv) - set(sv)).pop()
    i = tv.index(missing)
    sign = -1 if i % 2 else 1
    if tau.flipped:
        sign = -sign
    if sigma.flipped:
        sign = -sign
    return sign


def boundary_matrix(complex: SimplicialComplex, k: int) -> np.ndarray:
    """Integer boundary matrix from k-faces to (k-1)-faces (reference orientation)."""
    if not 0 <= k <= complex.dimension:
        raise ValueError(f"k={k} out of range 0..{complex.dimension}")
    if k == 0:
        return rat_zeros(0, complex.n_faces(0))
    rows = complex.faces_by_dim[k - 1]
    cols = complex.faces_by_dim[k]
    row_pos = {f: i for i, f in enumerate(rows)}
    mat = rat_zeros(len(rows), len(cols))
    for j, sigma in enumerate(cols):
        for rho in sigma.boundary():
            mat[row_pos[rho], j] = incidence_sign(OrientedFace(sigma), OrientedFace(rho))
    return mat


def adjacency(complex: SimplicialComplex, k: int, direction: str) -> dict[Face, frozenset[Face]]:
    """Up- or down-adjacency among k-faces.

    Up: two distinct k-faces are adjacent when their union is a (k+1)-face.
    Down: when they share a (k-1)-subface (equivalently |intersection| = k).
    """
    if not 0 <= k <= complex.dimension:
        raise ValueError(f"k={k} out of range 0..{complex.dimension}")
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    neighbors: dict[Face, set[Face]] = {f: set() for f in complex.faces_by_dim[k]}
    if direction == "up":
        for tau in complex.faces_by_dim.get(k + 1, ()):
            subs = tau.boundary()
            for a, b in combinations(subs, 2):
                neighbors[a].add(b)
                neighbors[b].add(a)
    else:
        by_sub: dict[Face, list[Face]] = {}
        for sigma in complex.faces_by_dim[k]:
            for rho in sigma.boundary():
                by_sub.setdefault(rho, []).append(sigma)
        for group in by_sub.values():
            for a, b in combinations(group, 2):
                neighbors[a].add(b)
                neighbors[b].add(a)
    return {f: frozenset(s) for f, s in neighbors.items()}
