"""Exact linear algebra helpers: rational matrices and scaled-matrix forms.

Many operators in this package have entries of the form q * sqrt(a_i / a_j)
with q, a_i, a_j rational.  They are stored exactly as

    M = diag(row_scale)**(1/2) @ body @ diag(col_scale)**(1/2)

with a rational ``body`` and positive rational scale vectors.  Products,
sums, transposes and equality checks then stay in rational arithmetic; the
square roots only materialize in the floating-point mirror ``to_float``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def frac_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def as_object_array(rows: Sequence[Sequence]) -> np.ndarray:
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    out = np.empty((n_rows, n_cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise ValueError("ragged rows")
        for j, v in enumerate(row):
            out[i, j] = Fraction(v)
    return out


def rat_zeros(n_rows: int, n_cols: int) -> np.ndarray:
    out = np.empty((n_rows, n_cols), dtype=object)
    out[:, :] = Fraction(0)
    return out


def rat_eye(n: int) -> np.ndarray:
    out = rat_zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def mat_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool((a == b).all())


def mat_is_zero(a: np.ndarray) -> bool:
    return all(v == 0 for v in a.flat)


def mat_to_float(a: np.ndarray) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in a], dtype=float)


def bareiss_rank(mat: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(map(int, row)) for row in mat]
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(row, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        p = m[row][col]
        for r in range(row + 1, n_rows):
            factor = m[r][col]
            for c in range(col, n_cols):
                m[r][c] = (p * m[r][c] - factor * m[row][c]) // prev
        prev = p
        rank += 1
        row += 1
        if row == n_rows:
            break
    return rank


def rational_rank(mat: np.ndarray) -> int:
    """Rank of a matrix with Fraction entries, computed exactly."""
    if mat.size == 0:
        return 0
    rows = []
    for row in mat:
        den = math.lcm(*(Fraction(v).denominator for v in row))
        rows.append([int(Fraction(v) * den) for v in row])
    return bareiss_rank(rows)


class ScaledMatrix:
    """M = diag(row_scale)^(1/2) @ body @ diag(col_scale)^(1/2), all rational."""

    __slots__ = ("row_scale", "col_scale", "body")

    def __init__(self, row_scale: Iterable, col_scale: Iterable, body: np.ndarray):
        self.row_scale = tuple(Fraction(x) for x in row_scale)
        self.col_scale = tuple(Fraction(x) for x in col_scale)
        if any(x <= 0 for x in self.row_scale) or any(x <= 0 for x in self.col_scale):
            raise ValueError("scales must be positive")
        if body.shape != (len(self.row_scale), len(self.col_scale)):
            raise ValueError("body shape does not match scales")
        self.body = body

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(mat: np.ndarray) -> "ScaledMatrix":
        r, c = mat.shape
        return ScaledMatrix([Fraction(1)] * r, [Fraction(1)] * c, mat)

    @staticmethod
    def identity(n: int) -> "ScaledMatrix":
        return ScaledMatrix.from_rational(rat_eye(n))

    # -- structure ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.body.shape

    @property
    def T(self) -> "ScaledMatrix":
        return ScaledMatrix(self.col_scale, self.row_scale, self.body.T.copy())

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "ScaledMatrix":
        body = self.body[np.ix_(rows, cols)].copy() if rows and cols else rat_zeros(len(rows), len(cols))
        return ScaledMatrix(
            [self.row_scale[i] for i in rows],
            [self.col_scale[j] for j in cols],
            body,
        )

    def entry(self, i: int, j: int) -> Fraction:
        """Exact entry value; raises if the entry is irrational."""
        b = self.body[i, j]
        if b == 0:
            return Fraction(0)
        root = frac_sqrt(self.row_scale[i] * self.col_scale[j])
        if root is None:
            raise ValueError("entry is irrational")
        return b * root

    # -- algebra ------------------------------------------------------

    def __matmul__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        mid = []
        for i, (cs, rs) in enumerate(zip(self.col_scale, other.row_scale)):
            root = frac_sqrt(cs * rs)
            if root is None:
                # an irrational inner factor is harmless when nothing
                # contracts through this index
                if all(v == 0 for v in self.body[:, i]) or all(
                    v == 0 for v in other.body[i, :]
                ):
                    root = Fraction(1)
                else:
                    raise ValueError("inner scales do not compose exactly")
            mid.append(root)
        scaled = np.empty_like(other.body)
        for i, m in enumerate(mid):
            scaled[i, :] = other.body[i, :] * m
        return ScaledMatrix(self.row_scale, other.col_scale, self.body @ scaled)

    def rebase(self, row_scale: Iterable, col_scale: Iterable) -> "ScaledMatrix":
        """Re-express with new scales; needs each nonzero entry's conversion
        factor sqrt((r_old*c_old)/(r_new*c_new)) to be rational."""
        row_scale = tuple(Fraction(x) for x in row_scale)
        col_scale = tuple(Fraction(x) for x in col_scale)
        rr = [a / b for a, b in zip(self.row_scale, row_scale)]
        cc = [a / b for a, b in zip(self.col_scale, col_scale)]
        body = np.empty_like(self.body)
        for i, ri in enumerate(rr):
            for j, cj in enumerate(cc):
                v = self.body[i, j]
                if v == 0:
                    body[i, j] = Fraction(0)
                    continue
                f = frac_sqrt(ri * cj)
                if f is None:
                    raise ValueError("scales are not compatible")
                body[i, j] = v * f
        return ScaledMatrix(row_scale, col_scale, body)

    def __add__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        try:
            other = other.rebase(self.row_scale, self.col_scale)
        except ValueError:
            rebased = self.rebase(other.row_scale, other.col_scale)
            return ScaledMatrix(other.row_scale, other.col_scale, rebased.body + other.body)
        return ScaledMatrix(self.row_scale, self.col_scale, self.body + other.body)

    def __sub__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        return self + (-other)

    def __neg__(self) -> "ScaledMatrix":
        return ScaledMatrix(self.row_scale, self.col_scale, -self.body)

    def scale(self, factor) -> "ScaledMatrix":
        factor = Fraction(factor)
        return ScaledMatrix(self.row_scale, self.col_scale, self.body * factor)

    # -- predicates ---------------------------------------------------

    def equals(self, other: "ScaledMatrix") -> bool:
        """Exact entrywise equality, independent of the chosen scales."""
        if self.shape != other.shape:
            return False
        for i in range(self.shape[0]):
            ri, si = self.row_scale[i], other.row_scale[i]
            for j in range(self.shape[1]):
                a, b = self.body[i, j], other.body[i, j]
                if (a == 0) != (b == 0):
                    return False
                if a == 0:
                    continue
                if (a > 0) != (b > 0):
                    return False
                if a * a * ri * self.col_scale[j] != b * b * si * other.col_scale[j]:
                    return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, ScaledMatrix) and self.equals(other)

    def __hash__(self):
        raise TypeError("unhashable")

    def is_zero(self) -> bool:
        return mat_is_zero(self.body)

    def is_symmetric(self) -> bool:
        return self.equals(self.T)

    # -- floating mirror ----------------------------------------------

    def to_float(self) -> np.ndarray:
        r = np.sqrt(np.array([float(x) for x in self.row_scale]))
        c = np.sqrt(np.array([float(x) for x in self.col_scale]))
        return mat_to_float(self.body) * np.outer(r, c)
