"""Independent brute-force oracles used to cross-check library results.

Everything here is written straight from the definitions (path
enumeration, exhaustive orientation search, naive double loops) and does
not share code with the library implementations it checks.
"""

from fractions import Fraction
from itertools import product

import numpy as np


def ascending_paths(cover, q):
    """All ascending paths from q to any leaf, as node tuples."""
    if cover.is_leaf(q):
        return [(q,)]
    paths = []
    for v in cover.parents[q]:
        paths.extend((q,) + p for p in ascending_paths(cover, v))
    return paths


def descending_paths(cover, q):
    if cover.is_root(q):
        return [(q,)]
    paths = []
    for t in cover.children[q]:
        paths.extend((q,) + p for p in descending_paths(cover, t))
    return paths


def root_to_leaf_paths(cover):
    paths = []
    for r in range(cover.n_quotient):
        if cover.is_root(r):
            paths.extend(tuple(p) for p in ascending_paths(cover, r))
    return paths


def coherence_by_enumeration(cover, component, direction):
    """Exhaustive 2^n orientation search for a coherence witness."""
    comp = sorted(component)
    lonely = cover.is_leaf if direction == "up" else cover.is_root
    if len(comp) == 1 and lonely(comp[0]):
        return False
    for flips in product((False, True), repeat=len(comp)):
        orient = dict(zip(comp, flips))
        ok = True
        for i, a in enumerate(comp):
            for b in comp[i + 1:]:
                mids = (
                    cover.shared_parents(a, b)
                    if direction == "up"
                    else cover.shared_children(a, b)
                )
                for m in mids:
                    if direction == "up":
                        sa = cover.sign_ref[(a, m)] * (-1 if orient[a] else 1)
                        sb = cover.sign_ref[(b, m)] * (-1 if orient[b] else 1)
                    else:
                        sa = cover.sign_ref[(m, a)] * (-1 if orient[a] else 1)
                        sb = cover.sign_ref[(m, b)] * (-1 if orient[b] else 1)
                    if sa != sb:
                        ok = False
        if ok:
            return True
    return False


def naive_cheeger_quotient(aux):
    """Plain double loop over proper nonempty subsets, Fraction arithmetic."""
    n = aux.n
    best = None
    for mask in range(1, (1 << n) - 1):
        inside = [(mask >> i) & 1 for i in range(n)]
        cut = sum(
            w for (i, j), w in zip(aux.edges, aux.weight) if inside[i] != inside[j]
        )
        mu_in = sum(m for i, m in enumerate(aux.measure) if inside[i])
        mu_out = sum(aux.measure) - mu_in
        beta = Fraction(cut) / min(mu_in, mu_out)
        if best is None or beta < best:
            best = beta
    return best


def naive_cheeger_signed(aux):
    """Plain double loop over (subset, full orientation) pairs."""
    n = aux.n
    best = None
    for mask in range(1, 1 << n):
        inside = [(mask >> i) & 1 for i in range(n)]
        mu_in = sum(m for i, m in enumerate(aux.measure) if inside[i])
        cut = sum(
            w for (i, j), w in zip(aux.edges, aux.weight) if inside[i] != inside[j]
        )
        for bits in range(1 << n):
            x = [1 if (bits >> i) & 1 == 0 else -1 for i in range(n)]
            neg = sum(
                2 * w
                for (i, j), w, s in zip(aux.edges, aux.weight, aux.sign)
                if inside[i] and inside[j] and x[i] * x[j] * s == -1
            )
            beta = Fraction(cut + neg) / mu_in
            if best is None or beta < best:
                best = beta
    return best


def two_step_conditional(P, dims, k, direction, lonely):
    """Conditional walk matrix from the full quotient transition matrix.

    Conditioning halves each of the two steps (probability 1/2 of moving
    the required way), so the conditioned product is scaled by 4.  Lonely
    nodes (leaves for up, roots for down) keep an identity row.
    """
    nodes = [q for q, d in enumerate(dims) if d == k]
    mid_dim = k + 1 if direction == "up" else k - 1
    mids = [q for q, d in enumerate(dims) if d == mid_dim]
    m = len(nodes)
    out = np.empty((m, m), dtype=object)
    out[:, :] = Fraction(0)
    for a, qa in enumerate(nodes):
        if lonely(qa):
            out[a, a] = Fraction(1)
            continue
        for b, qb in enumerate(nodes):
            total = Fraction(0)
            for v in mids:
                total += P[qa, v] * P[v, qb]
            out[a, b] = 4 * total
    return nodes, out


def two_step_conditional_cover(P, dims, n, k, direction, lonely):
    """Cover version of the two-step conditioning oracle."""
    nodes = [q for q, d in enumerate(dims) if d == k]
    nodes = nodes + [q + n for q in nodes]
    mid_dim = k + 1 if direction == "up" else k - 1
    mids = [q for q, d in enumerate(dims) if d == mid_dim]
    mids = mids + [q + n for q in mids]
    m = len(nodes)
    out = np.empty((m, m), dtype=object)
    out[:, :] = Fraction(0)
    for a, ua in enumerate(nodes):
        if lonely(ua % n):
            flip = nodes.index(ua + n if ua < n else ua - n)
            out[a, a] = Fraction(1, 2)
            out[a, flip] = Fraction(1, 2)
            continue
        for b, ub in enumerate(nodes):
            total = Fraction(0)
            for v in mids:
                total += P[ua, v] * P[v, ub]
            out[a, b] = 4 * total
    return nodes, out


def sample_step_by_paths(cover, pw, u, rng):
    """One walk step via the uniform root-to-leaf path description.

    Draws a uniform root-to-leaf path through the quotient node, then
    follows the action rules, moving along the sampled path for U/D.
    """
    n = cover.n_quotient
    q, flip = u % n, u >= n
    leaf, root = cover.is_leaf(q), cover.is_root(q)
    through = [p for p in root_to_leaf_paths(cover) if q in p]
    path = through[rng.randbelow(len(through))]
    i = path.index(q)
    if leaf and root:
        return q + n * rng.next_bit()
    if leaf != root:
        action = ("S", "D" if leaf else "U")[rng.next_bit()]
    else:
        action = ("U", "D")[rng.next_bit()]
    if action == "S":
        return q + n * rng.next_bit()
    if action == "U":
        v = path[i + 1]
        target_flip = flip ^ (cover.sign_ref[(q, v)] == -1)
        return v + n * target_flip
    t = path[i - 1]
    target_flip = flip ^ (cover.sign_ref[(t, q)] == 1)
    return t + n * target_flip


def normalized_graph_laplacian(complex):
    """Classic symmetric normalized Laplacian of a 1-dimensional complex.

    Returned exactly as D^(-1/2) (D - A) D^(-1/2), i.e. a ScaledMatrix with
    scales 1/deg and body D - A; entries themselves are irrational.
    """
    from hodgewalk.exact import ScaledMatrix

    vertices = complex.faces_by_dim[0]
    pos = {f.vertices[0]: i for i, f in enumerate(vertices)}
    nv = len(vertices)
    body = np.empty((nv, nv), dtype=object)
    body[:, :] = Fraction(0)
    deg = [Fraction(0)] * nv
    for e in complex.faces_by_dim[1]:
        i, j = pos[e.vertices[0]], pos[e.vertices[1]]
        body[i, j] = body[j, i] = Fraction(-1)
        deg[i] += 1
        deg[j] += 1
    if any(d == 0 for d in deg):
        raise ValueError("graph has an isolated vertex")
    for i in range(nv):
        body[i, i] = deg[i]
    inv = [Fraction(1) / d for d in deg]
    return ScaledMatrix(inv, inv, body)
