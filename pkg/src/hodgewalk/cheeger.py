"""Auxiliary graphs, brute-force Cheeger constants, and combined bounds.

The quotient constant minimizes cut-weight over measure across all proper
nonempty subsets; the signed constant additionally minimizes over
orientations of the chosen subset (the subset may be everything).  Both
searches are exact: comparisons are done by integer cross-multiplication
after clearing denominators once.  Enumeration is capped at 24 nodes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact import ScaledMatrix, rat_zeros
from .graded_cover import (
    GradedSignedDoubleCover,
    PathWeights,
    component_correspondence,
    compute_path_weights,
    detect_coherent,
)
from .operators import SymmetricOperator, build_conditional, eigen

BRUTE_FORCE_CAP = 24


class BruteForceGuardError(ValueError):
    """Raised when a cut enumeration would exceed the 2**24 guard."""


@dataclass(frozen=True)
class AuxiliaryGraph:
    direction: str
    k: int
    nodes: tuple[int, ...]
    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    sign: tuple[int, ...]
    weight: tuple[Fraction, ...]
    measure: tuple[Fraction, ...]
    degree_term: Fraction

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class CheegerReport:
    k: int
    up_component: tuple[int, ...]
    down_component: tuple[int, ...]
    d_up: Fraction
    d_down: Fraction
    coherent: bool
    h_quotient_up: Fraction | None
    h_quotient_down: Fraction | None
    h_signed_up: Fraction | None
    h_signed_down: Fraction | None
    gap_quotient: float | None
    gap_signed: float | None
    lower_quotient: Fraction | None
    upper_quotient: Fraction | None
    lower_signed: Fraction | None
    upper_signed: Fraction | None
    sandwich_quotient_ok: bool | None
    sandwich_signed_ok: bool | None
    rate_lower: Fraction | None
    rate_upper: Fraction | None
    witnesses: dict


def build_aux(
    cover: GradedSignedDoubleCover,
    component,
    direction: str,
    pw: PathWeights | None = None,
) -> AuxiliaryGraph:
    """Auxiliary weighted signed graph of one up- or down-component.

    Up: nodes weighted by LP, edges by LP of the shared coface, signs by
    the product of the two incidence signs.  Down: edge weight
    LP(a) * LP(b) / LP(shared face).  The degree term is k+1 for the up
    case and k+1 - min LP(s) * sum 1/LP(child) for the down case.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if pw is None:
        pw = compute_path_weights(cover)
    comp = tuple(sorted(component))
    k = cover.dims[comp[0]]
    if any(cover.dims[q] != k for q in comp):
        raise ValueError("component mixes dimensions")
    if direction == "up":
        if len(comp) == 1 and cover.is_leaf(comp[0]):
            raise ValueError("up auxiliary graph requires a non-leaf component")
    else:
        if len(comp) < 2:
            raise ValueError("down auxiliary graph requires at least two faces")
    pos = {q: i for i, q in enumerate(comp)}
    edges, signs, weights = [], [], []
    for i, a in enumerate(comp):
        for b in comp[i + 1:]:
            mids = (
                cover.shared_parents(a, b) if direction == "up" else cover.shared_children(a, b)
            )
            if not mids:
                continue
            if len(mids) != 1:
                raise ValueError("auxiliary weights need a unique shared mid-node")
            v = mids[0]
            if direction == "up":
                s = cover.sign_ref[(a, v)] * cover.sign_ref[(b, v)]
                w = Fraction(pw.lp[v])
            else:
                s = cover.sign_ref[(v, a)] * cover.sign_ref[(v, b)]
                w = Fraction(pw.lp[a] * pw.lp[b], pw.lp[v])
            edges.append((pos[a], pos[b]))
            signs.append(s)
            weights.append(w)
    measure = tuple(Fraction(pw.lp[q]) for q in comp)
    if direction == "up":
        degree_term = Fraction(k + 1)
    else:
        degree_term = Fraction(k + 1) - min(
            pw.lp[q] * sum(Fraction(1, pw.lp[t]) for t in cover.children[q]) for q in comp
        )
    return AuxiliaryGraph(
        direction,
        k,
        comp,
        tuple(cover.labels[q] for q in comp),
        tuple(edges),
        tuple(signs),
        tuple(weights),
        measure,
        degree_term,
    )


def aux_laplacian(aux: AuxiliaryGraph, flavor: str) -> SymmetricOperator:
    """Measure-normalized weighted Laplacian of the auxiliary graph."""
    if flavor not in ("quotient", "signed"):
        raise ValueError("flavor must be 'quotient' or 'signed'")
    n = aux.n
    body = rat_zeros(n, n)
    for (i, j), s, w in zip(aux.edges, aux.sign, aux.weight):
        body[i, i] += w
        body[j, j] += w
        off = -w if flavor == "quotient" else -s * w
        body[i, j] += off
        body[j, i] += off
    inv_measure = [Fraction(1) / m for m in aux.measure]
    sm = ScaledMatrix(inv_measure, inv_measure, body)
    return SymmetricOperator(f"aux-{aux.direction}-{aux.k}-{flavor}", aux.labels, aux.nodes, sm)


def _integerized(aux: AuxiliaryGraph):
    wden = lcm(*(w.denominator for w in aux.weight)) if aux.weight else 1
    mden = lcm(*(m.denominator for m in aux.measure))
    wints = [int(w * wden) for w in aux.weight]
    mints = [int(m * mden) for m in aux.measure]
    return wints, wden, mints, mden


def _guard(n: int) -> None:
    if n > BRUTE_FORCE_CAP:
        raise BruteForceGuardError(
            f"component has {n} nodes; brute-force search is capped at {BRUTE_FORCE_CAP}"
        )


def _quotient_scan(args):
    """Minimize cut/min-measure over masks in [lo, hi); exact integer compare."""
    pairs, mints, total_m, lo, hi, full = args
    best_num = best_den = None
    best_mask = None
    for mask in range(lo, hi):
        if mask == 0 or mask == full:
            continue
        mu = 0
        m = mask
        while m:
            low = m & -m
            mu += mints[low.bit_length() - 1]
            m ^= low
        cut = 0
        for i, j, w in pairs:
            if ((mask >> i) & 1) != ((mask >> j) & 1):
                cut += w
        den = min(mu, total_m - mu)
        if best_num is None or cut * best_den < best_num * den:
            best_num, best_den, best_mask = cut, den, mask
    return best_num, best_den, best_mask


def cheeger_quotient(aux: AuxiliaryGraph, threads: int = 1):
    """Exact quotient Cheeger constant with a witness subset.

    Minimizes over the 2**n - 2 proper nonempty subsets; ties resolve to
    the lexicographically smallest bitmask.  With threads > 1 the mask
    space is split across processes (the min-reduction is order-free).
    """
    n = aux.n
    if n < 2:
        raise ValueError("quotient Cheeger constant needs at least two nodes")
    _guard(n)
    wints, wden, mints, mden = _integerized(aux)
    pairs = [(i, j, w) for (i, j), w in zip(aux.edges, wints)]
    total_m = sum(mints)
    full = (1 << n) - 1
    if threads > 1 and n > 12:
        chunks = []
        step = (full + threads) // threads
        for lo in range(0, full + 1, step):
            chunks.append((pairs, mints, total_m, lo, min(lo + step, full + 1), full))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [r for r in pool.map(_quotient_scan, chunks) if r[0] is not None]
        best_num, best_den, best_mask = None, None, None
        for num, den, mask in results:
            if (
                best_num is None
                or num * best_den < best_num * den
                or (num * best_den == best_num * den and mask < best_mask)
            ):
                best_num, best_den, best_mask = num, den, mask
    else:
        best_num, best_den, best_mask = _quotient_scan((pairs, mints, total_m, 0, full + 1, full))
    h = Fraction(best_num, wden) / Fraction(best_den, mden)
    witness = tuple(aux.nodes[i] for i in range(n) if (best_mask >> i) & 1)
    return h, witness


def _signed_best_orientation(members, pairs_in):
    """Minimal within-subset negative weight over orientations, with witness.

    Orientations are enumerated per connected piece of the induced graph
    with one node fixed per piece (switching equivalence); the negative
    pair weight counts both ordered pairs, hence the factor 2.  The scan
    walks a Gray code over the free nodes, updating the frustrated weight
    incrementally through each node's incident pairs.
    """
    m = len(members)
    adj = {i: [] for i in range(m)}
    incident = [[] for _ in range(m)]
    for pi, (i, j, w, s) in enumerate(pairs_in):
        adj[i].append(j)
        adj[j].append(i)
        incident[i].append(pi)
        incident[j].append(pi)
    pieces, seen = [], set()
    for start in range(m):
        if start in seen:
            continue
        stack, piece = [start], []
        seen.add(start)
        while stack:
            x = stack.pop()
            piece.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        pieces.append(sorted(piece))
    free = [x for piece in pieces for x in piece[1:]]
    x = [1] * m
    bad = [s == -1 for (_i, _j, _w, s) in pairs_in]
    neg = sum(2 * w for (_i, _j, w, _s), b in zip(pairs_in, bad) if b)
    best, best_x = neg, list(x)
    if best == 0 or not free:
        return best, best_x
    gray_prev = 0
    for t in range(1, 1 << len(free)):
        gray = t ^ (t >> 1)
        node = free[(gray ^ gray_prev).bit_length() - 1]
        gray_prev = gray
        x[node] = -x[node]
        for pi in incident[node]:
            i, j, w, s = pairs_in[pi]
            now_bad = x[i] * x[j] * s == -1
            if now_bad != bad[pi]:
                neg += 2 * w if now_bad else -2 * w
                bad[pi] = now_bad
        if neg < best:
            best, best_x = neg, list(x)
            if best == 0:
                break
    return best, best_x


def _balanced_orientation(aux: AuxiliaryGraph):
    """Sign-propagation balance check over the whole auxiliary graph.

    Returns the orientation flips making every edge sign positive, or
    None when the graph is frustrated.
    """
    n = aux.n
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for (i, j), s in zip(aux.edges, aux.sign):
        adj[i].append((j, s))
        adj[j].append((i, s))
    x = [0] * n
    for start in range(n):
        if x[start]:
            continue
        x[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, s in adj[a]:
                if not x[b]:
                    x[b] = x[a] * s
                    stack.append(b)
    for (i, j), s in zip(aux.edges, aux.sign):
        if x[i] * x[j] != s:
            return None
    return x


def _propagated_frustration(aux: AuxiliaryGraph, wints) -> int:
    """Frustrated weight of the spanning-tree-propagated orientation (both
    ordered pairs counted); an upper bound for the full-set beta numerator."""
    n = aux.n
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for (i, j), s in zip(aux.edges, aux.sign):
        adj[i].append((j, s))
        adj[j].append((i, s))
    x = [0] * n
    for start in range(n):
        if x[start]:
            continue
        x[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, s in adj[a]:
                if not x[b]:
                    x[b] = x[a] * s
                    stack.append(b)
    return sum(
        2 * w
        for (i, j), w, s in zip(aux.edges, wints, aux.sign)
        if x[i] * x[j] * s == -1
    )


def cheeger_signed(aux: AuxiliaryGraph, threads: int = 1):
    """Exact signed Cheeger constant with a (subset, orientation) witness.

    The subset may be the whole node set; the orientation outside the
    subset is irrelevant.  Zero exactly when the component is coherent
    (beta = 0 forces the full set with a balanced orientation, which is
    checked directly by sign propagation).  Otherwise subsets are scanned
    in ascending bitmask order; the orientation search inside a subset
    fixes one node per connected piece (switching equivalence) and is
    skipped entirely when the cross weight alone cannot beat the
    incumbent.
    """
    n = aux.n
    if n == 0:
        raise ValueError("empty auxiliary graph")
    _guard(n)
    balanced = _balanced_orientation(aux)
    if balanced is not None:
        witness_nodes = tuple(aux.nodes)
        orientation = {aux.nodes[i]: (xi == -1) for i, xi in enumerate(balanced)}
        return Fraction(0), (witness_nodes, orientation)
    wints, wden, mints, mden = _integerized(aux)
    pairs = [(i, j, w, s) for (i, j), w, s in zip(aux.edges, wints, aux.sign)]
    # a cheap upper bound on the minimum strengthens pruning from the start:
    # the full set under the best propagated orientation, and every singleton
    prop = _propagated_frustration(aux, wints)
    bound_num, bound_den = prop, sum(mints)
    for i in range(n):
        deg = sum(w for (a, b, w, _s) in pairs if i in (a, b))
        if deg * bound_den < bound_num * mints[i]:
            bound_num, bound_den = deg, mints[i]
    best_num = best_den = None
    best_mask = best_x = None
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if (mask >> i) & 1]
        member_pos = {node: p for p, node in enumerate(members)}
        mu = sum(mints[i] for i in members)
        cut = 0
        pairs_in = []
        for (i, j, w, s) in pairs:
            ini, inj = (mask >> i) & 1, (mask >> j) & 1
            if ini != inj:
                cut += w
            elif ini:
                pairs_in.append((member_pos[i], member_pos[j], w, s))
        if cut * bound_den > bound_num * mu:
            continue
        if best_num is not None and cut * best_den >= best_num * mu:
            continue
        neg, x = _signed_best_orientation(members, pairs_in)
        num = cut + neg
        if best_num is None or num * best_den < best_num * mu:
            best_num, best_den, best_mask, best_x = num, mu, mask, (members, x)
    h = Fraction(best_num, wden) / Fraction(best_den, mden)
    members, x = best_x
    witness_nodes = tuple(aux.nodes[i] for i in members)
    witness_orientation = {aux.nodes[i]: (xi == -1) for i, xi in zip(members, x)}
    return h, (witness_nodes, witness_orientation)


def _restricted_gap(cover, pw, k, direction, flavor, comp) -> float:
    op = build_conditional(cover, k, direction, flavor, pw=pw).restrict(comp)
    ev = eigen(op.sm).eigenvalues
    if flavor == "quotient":
        return 1.0 - ev[-2]
    return 1.0 - (-ev[0])


def combined_report(
    cover: GradedSignedDoubleCover,
    k: int,
    pw: PathWeights | None = None,
    threads: int = 1,
) -> list[CheegerReport]:
    """Combined Cheeger bounds for every paired component in dimensions k-1/k.

    Emits, per flavor, lower bound max(h_up^2/k, h_down^2/d_down)/(2(k+1)),
    the shared spectral gap, and upper bound 2*min(h_up, h_down)/(k+1).
    Coherent or singleton pairs get the all-zero signed triple; a singleton
    down-component additionally drops the quotient down-constant.
    """
    cover.require_strong()
    if pw is None:
        pw = compute_path_weights(cover)
    reports = []
    for down_comp, up_comp in component_correspondence(cover, k):
        coherent = detect_coherent(cover, down_comp, "down") is not None
        witnesses: dict = {}
        d_up = Fraction(k + 1)
        aux_down = None
        if len(down_comp) >= 2:
            aux_down = build_aux(cover, down_comp, "down", pw)
            d_down = aux_down.degree_term
        else:
            q = down_comp[0]
            d_down = Fraction(k + 1) - pw.lp[q] * sum(
                Fraction(1, pw.lp[t]) for t in cover.children[q]
            )
        h_q_up = h_q_down = h_s_up = h_s_down = None
        gap_q = gap_s = None
        if len(up_comp) >= 2:
            aux_up = build_aux(cover, up_comp, "up", pw)
            h_q_up, wit = cheeger_quotient(aux_up, threads)
            witnesses["quotient_up"] = wit
            h_s_up, wit = cheeger_signed(aux_up, threads)
            witnesses["signed_up"] = wit
            gap_q = _restricted_gap(cover, pw, k - 1, "up", "quotient", up_comp)
            gap_s = _restricted_gap(cover, pw, k - 1, "up", "signed", up_comp)
        if aux_down is not None:
            h_q_down, wit = cheeger_quotient(aux_down, threads)
            witnesses["quotient_down"] = wit
            h_s_down, wit = cheeger_signed(aux_down, threads)
            witnesses["signed_down"] = wit
        lower_q = upper_q = None
        options_q = []
        if h_q_up is not None:
            options_q.append((h_q_up * h_q_up / k, h_q_up))
        if h_q_down is not None and d_down > 0:
            options_q.append((h_q_down * h_q_down / d_down, h_q_down))
        if options_q:
            lower_q = max(o[0] for o in options_q) / (2 * (k + 1))
            upper_q = 2 * min(o[1] for o in options_q) / (k + 1)
        if coherent:
            lower_s = Fraction(0)
            upper_s = Fraction(0)
            gap_s = 0.0 if gap_s is None else gap_s
        else:
            options_s = [(h_s_up * h_s_up / k, h_s_up)]
            if h_s_down is not None and d_down > 0:
                options_s.append((h_s_down * h_s_down / d_down, h_s_down))
            lower_s = max(o[0] for o in options_s) / (2 * (k + 1))
            upper_s = 2 * min(o[1] for o in options_s) / (k + 1)
        sandwich_q = (
            None
            if gap_q is None or lower_q is None
            else float(lower_q) <= gap_q + 1e-9 and gap_q <= float(upper_q) + 1e-9
        )
        sandwich_s = (
            None
            if gap_s is None or lower_s is None
            else float(lower_s) <= gap_s + 1e-9 and gap_s <= float(upper_s) + 1e-9
        )
        rate_lower = rate_upper = None
        if not coherent and h_q_up is not None and h_q_down is not None:
            rate_lower = 1 - 2 * max(min(h_q_up, h_q_down), min(h_s_up, h_s_down)) / (k + 1)
            rate_upper = 1 - min(
                max(h_q_up * h_q_up / k, h_q_down * h_q_down / d_down),
                max(h_s_up * h_s_up / k, h_s_down * h_s_down / d_down),
            ) / (2 * (k + 1))
        reports.append(
            CheegerReport(
                k=k,
                up_component=up_comp,
                down_component=down_comp,
                d_up=d_up,
                d_down=d_down,
                coherent=coherent,
                h_quotient_up=h_q_up,
                h_quotient_down=h_q_down,
                h_signed_up=h_s_up,
                h_signed_down=h_s_down,
                gap_quotient=gap_q,
                gap_signed=gap_s,
                lower_quotient=lower_q,
                upper_quotient=upper_q,
                lower_signed=lower_s,
                upper_signed=upper_s,
                sandwich_quotient_ok=sandwich_q,
                sandwich_signed_ok=sandwich_s,
                rate_lower=rate_lower,
                rate_upper=rate_upper,
                witnesses=witnesses,
            )
        )
    return reports
