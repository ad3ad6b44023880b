"""Combinatorial and normalized Hodge Laplacians of a simplicial complex.

The normalization weight of a k-face is W_k = LP / (k+1)!, which makes the
normalized up/down Laplacians the negatives of the signed conditional-walk
operators.  Ranks (hence Betti numbers) come from exact fraction-free
elimination, never from floating-point decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .complex_core import SimplicialComplex, boundary_matrix
from .exact import ScaledMatrix, rational_rank, rat_zeros
from .graded_cover import (
    components,
    compute_path_weights,
    cover_from_complex,
    detect_coherent,
)
from .operators import build_conditional, eigen, eigenvalue_multiplicity, multiset_match


@dataclass(frozen=True)
class NormalizationWeights:
    w: dict[int, tuple[Fraction, ...]]


@dataclass(frozen=True)
class HodgeLaplacian:
    up: ScaledMatrix
    down: ScaledMatrix
    k: int
    normalized: bool

    @property
    def full(self) -> ScaledMatrix:
        return self.up + self.down


@dataclass(frozen=True)
class HodgeReport:
    k: int
    rank_up: int
    rank_down: int
    harmonic: int
    n_k: int


def normalization_weights(complex: SimplicialComplex) -> NormalizationWeights:
    cover = cover_from_complex(complex)
    pw = compute_path_weights(cover)
    w: dict[int, tuple[Fraction, ...]] = {}
    for k in range(complex.dimension + 1):
        w[k] = tuple(
            Fraction(pw.lp[complex.index_of(f)], factorial(k + 1))
            for f in complex.faces_by_dim[k]
        )
    return NormalizationWeights(w)


def _coboundary(complex: SimplicialComplex, k: int) -> ScaledMatrix:
    """Coboundary from k-cochains to (k+1)-cochains (transpose of boundary)."""
    if k >= complex.dimension:
        return ScaledMatrix.from_rational(rat_zeros(0, complex.n_faces(k)))
    return ScaledMatrix.from_rational(boundary_matrix(complex, k + 1).T.copy())


def normalized_coboundary(
    complex: SimplicialComplex, k: int, weights: NormalizationWeights | None = None
) -> ScaledMatrix:
    """W_{k+1}^(1/2) @ coboundary @ W_k^(-1/2), exactly."""
    if weights is None:
        weights = normalization_weights(complex)
    if k >= complex.dimension:
        return ScaledMatrix(
            [], [Fraction(1) / w for w in weights.w[k]], rat_zeros(0, complex.n_faces(k))
        )
    return ScaledMatrix(
        weights.w[k + 1],
        [Fraction(1) / w for w in weights.w[k]],
        boundary_matrix(complex, k + 1).T.copy(),
    )


def hodge(complex: SimplicialComplex, k: int, normalized: bool = False) -> HodgeLaplacian:
    """Up and down Hodge Laplacians in dimension k."""
    if not 0 <= k <= complex.dimension:
        raise ValueError(f"k={k} out of range 0..{complex.dimension}")
    if normalized:
        weights = normalization_weights(complex)
        dk = normalized_coboundary(complex, k, weights)
        up = dk.T @ dk
        if k == 0:
            n0 = complex.n_faces(0)
            down = ScaledMatrix(weights.w[0], weights.w[0], rat_zeros(n0, n0))
        else:
            dkm1 = normalized_coboundary(complex, k - 1, weights)
            down = dkm1 @ dkm1.T
        return HodgeLaplacian(up, down, k, True)
    dk = _coboundary(complex, k)
    up = dk.T @ dk
    if k == 0:
        down = ScaledMatrix.from_rational(rat_zeros(complex.n_faces(0), complex.n_faces(0)))
    else:
        dkm1 = _coboundary(complex, k - 1)
        down = dkm1 @ dkm1.T
    return HodgeLaplacian(up, down, k, False)


def hodge_decomposition(
    complex: SimplicialComplex, k: int, normalized: bool = False
) -> HodgeReport:
    """Ranks of the up/down images and the harmonic dimension (k-th Betti number)."""
    if not 0 <= k <= complex.dimension:
        raise ValueError(f"k={k} out of range 0..{complex.dimension}")
    n_k = complex.n_faces(k)
    if normalized:
        weights = normalization_weights(complex)
        rank_up = rational_rank(normalized_coboundary(complex, k, weights).body)
        rank_down = (
            rational_rank(normalized_coboundary(complex, k - 1, weights).body) if k else 0
        )
    else:
        rank_up = rational_rank(boundary_matrix(complex, k + 1)) if k < complex.dimension else 0
        rank_down = rational_rank(boundary_matrix(complex, k)) if k else 0
    return HodgeReport(k, rank_up, rank_down, n_k - rank_up - rank_down, n_k)


def betti_numbers(complex: SimplicialComplex, normalized: bool = False) -> tuple[int, ...]:
    return tuple(
        hodge_decomposition(complex, k, normalized).harmonic
        for k in range(complex.dimension + 1)
    )


def check_laplacian_walk_identity(complex: SimplicialComplex, k: int) -> bool:
    """Normalized Laplacians equal the negated signed conditional operators, exactly."""
    lap = hodge(complex, k, normalized=True)
    cover = cover_from_complex(complex)
    pw = compute_path_weights(cover)
    a_up = build_conditional(cover, k, "up", "signed", pw=pw)
    a_down = build_conditional(cover, k, "down", "signed", pw=pw)
    return lap.up.equals(-a_up.sm) and lap.down.equals(-a_down.sm)


def verify_hodge_properties(complex: SimplicialComplex) -> dict:
    """H1-H3 and NH1-NH6 on one complex; returns {check: (ok, detail)}."""
    report: dict[str, tuple[bool, str]] = {}

    def check(name: str, ok: bool, detail: str = ""):
        report[name] = (bool(ok), detail)

    cover = cover_from_complex(complex)
    dim = complex.dimension
    laps = {(k, nrm): hodge(complex, k, nrm) for k in range(dim + 1) for nrm in (False, True)}
    for k in range(dim + 1):
        for nrm in (False, True):
            lap = laps[(k, nrm)]
            tag = f"k={k}" + (" normalized" if nrm else "")
            check(
                f"annihilation {tag}",
                (lap.up @ lap.down).is_zero() and (lap.down @ lap.up).is_zero(),
            )
            check(
                f"symmetry {tag}",
                lap.up.is_symmetric() and lap.down.is_symmetric(),
            )
            ev_up = eigen(lap.up.to_float()).eigenvalues if lap.up.shape[0] else ()
            ev_dn = eigen(lap.down.to_float()).eigenvalues if lap.down.shape[0] else ()
            check(
                f"positive_semidefinite {tag}",
                all(v >= -1e-10 for v in ev_up) and all(v >= -1e-10 for v in ev_dn),
            )
            if nrm:
                check(
                    f"spectrum_bounded_by_one {tag}",
                    all(v <= 1 + 1e-10 for v in list(ev_up) + list(ev_dn)),
                )
        check(
            f"normalized_harmonic_dim k={k}",
            hodge_decomposition(complex, k, False).harmonic
            == hodge_decomposition(complex, k, True).harmonic,
        )
    for k in range(1, dim + 1):
        for nrm in (False, True):
            tag = f"k={k}" + (" normalized" if nrm else "")
            up_prev = [v for v in eigen(laps[(k - 1, nrm)].up.to_float()).eigenvalues if abs(v) > 1e-8]
            down_k = [v for v in eigen(laps[(k, nrm)].down.to_float()).eigenvalues if abs(v) > 1e-8]
            check(f"nonzero_spectra_match {tag}", multiset_match(up_prev, down_k))
        # multiplicity of eigenvalue 1 counts coherent components
        up_prev = eigen(laps[(k - 1, True)].up.to_float()).eigenvalues
        down_k = eigen(laps[(k, True)].down.to_float()).eigenvalues
        mult_up = eigenvalue_multiplicity(up_prev, 1.0)
        mult_down = eigenvalue_multiplicity(down_k, 1.0)
        n_coherent = sum(
            1
            for comp in components(cover, "quotient-up", k - 1).members
            if detect_coherent(cover, comp, "up") is not None
        )
        check(
            f"saturation_counts_coherent k={k}",
            mult_up == mult_down == n_coherent,
            f"multiplicity {mult_up}/{mult_down}, coherent components {n_coherent}",
        )
    for k in range(dim + 1):
        check(
            f"walk_identity k={k}",
            check_laplacian_walk_identity(complex, k),
        )
    return report
