"""Double covers of graded signed graphs.

A cover is stored through its involutory quotient: an ordered list of
graded nodes, dimension-increasing edges, and one reference sign per
quotient edge.  The 2N cover nodes are indexed as q (unflipped) and
q + N (flipped); signs between arbitrary lifts follow from the
compatibility rules  [-v : u] = [v : -u] = -[v : u].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex_core import Face, OrientedFace, SimplicialComplex, incidence_sign


class CoverSpecError(ValueError):
    """Raised on malformed cover-spec input."""


class NonStrongGradingError(ValueError):
    """Raised when dimension-k machinery is requested on a non-strong grading."""


@dataclass(frozen=True)
class CoverNode:
    quotient_index: int
    flipped: bool
    dimension: int


class GradedSignedDoubleCover:
    """Quotient view of a double cover of a graded signed graph."""

    def __init__(self, dims, edges, signs, labels, faces=None):
        self.dims: tuple[int, ...] = tuple(dims)
        self.labels: tuple[str, ...] = tuple(labels)
        self.faces: tuple[Face, ...] | None = tuple(faces) if faces is not None else None
        n = len(self.dims)
        parents: list[list[int]] = [[] for _ in range(n)]
        children: list[list[int]] = [[] for _ in range(n)]
        self.sign_ref: dict[tuple[int, int], int] = {}
        for (child, parent), s in zip(edges, signs):
            if self.dims[child] >= self.dims[parent]:
                raise CoverSpecError(
                    f"edge {self.labels[child]} -> {self.labels[parent]} does not increase dimension"
                )
            if s not in (1, -1):
                raise CoverSpecError(f"sign must be +1 or -1, got {s}")
            if (child, parent) in self.sign_ref:
                raise CoverSpecError(f"duplicate edge {self.labels[child]} -> {self.labels[parent]}")
            parents[child].append(parent)
            children[parent].append(child)
            self.sign_ref[(child, parent)] = s
        self.parents: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(p)) for p in parents)
        self.children: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(c)) for c in children)
        self.strong: bool = all(
            self.dims[p] == self.dims[c] + 1 for (c, p) in self.sign_ref
        )
        self.nodes_by_dim: dict[int, tuple[int, ...]] = {}
        for q, d in enumerate(self.dims):
            self.nodes_by_dim.setdefault(d, ())
        for d in self.nodes_by_dim:
            self.nodes_by_dim[d] = tuple(q for q, dq in enumerate(self.dims) if dq == d)

    # -- basic structure ------------------------------------------------

    @property
    def n_quotient(self) -> int:
        return len(self.dims)

    @property
    def n_cover(self) -> int:
        return 2 * len(self.dims)

    def is_leaf(self, q: int) -> bool:
        return not self.parents[q]

    def is_root(self, q: int) -> bool:
        return not self.children[q]

    def is_isolated(self, q: int) -> bool:
        return self.is_leaf(q) and self.is_root(q)

    def cover_node(self, u: int) -> CoverNode:
        n = self.n_quotient
        return CoverNode(u % n, u >= n, self.dims[u % n])

    def cover_label(self, u: int) -> str:
        n = self.n_quotient
        return ("-" if u >= n else "+") + self.labels[u % n]

    def cover_sign(self, child_u: int, parent_u: int) -> int:
        """Sign of the cover edge between two lifts (compatibility rules)."""
        n = self.n_quotient
        s = self.sign_ref[(child_u % n, parent_u % n)]
        if child_u >= n:
            s = -s
        if parent_u >= n:
            s = -s
        return s

    def require_strong(self) -> None:
        if not self.strong:
            raise NonStrongGradingError("operation requires a strong grading")

    # -- dimension-k adjacency (strong gradings) -------------------------

    def shared_parents(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.parents[a]) & set(self.parents[b])))

    def shared_children(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.children[a]) & set(self.children[b])))

    def up_adjacency(self, k: int) -> dict[int, set[int]]:
        self.require_strong()
        adj: dict[int, set[int]] = {q: set() for q in self.nodes_by_dim.get(k, ())}
        for v in self.nodes_by_dim.get(k + 1, ()):
            kids = self.children[v]
            for i, a in enumerate(kids):
                for b in kids[i + 1:]:
                    adj[a].add(b)
                    adj[b].add(a)
        return adj

    def down_adjacency(self, k: int) -> dict[int, set[int]]:
        self.require_strong()
        adj: dict[int, set[int]] = {q: set() for q in self.nodes_by_dim.get(k, ())}
        for t in self.nodes_by_dim.get(k - 1, ()):
            ups = self.parents[t]
            for i, a in enumerate(ups):
                for b in ups[i + 1:]:
                    adj[a].add(b)
                    adj[b].add(a)
        return adj


def cover_from_complex(complex: SimplicialComplex) -> GradedSignedDoubleCover:
    """The double cover associated with a simplicial complex.

    Quotient nodes are the faces in global order, edges are the boundary
    subface pairs, and reference signs come from the incidence of the
    ascending-label orientations.  The grading is strong by construction.
    """
    faces = complex.all_faces
    index = {f: i for i, f in enumerate(faces)}
    edges, signs = [], []
    for tau in faces:
        for rho in tau.boundary():
            edges.append((index[rho], index[tau]))
            signs.append(incidence_sign(OrientedFace(tau), OrientedFace(rho)))
    return GradedSignedDoubleCover(
        dims=[f.dimension for f in faces],
        edges=edges,
        signs=signs,
        labels=[str(f) for f in faces],
        faces=faces,
    )


def parse_cover_spec(text: str) -> GradedSignedDoubleCover:
    """Parse the cover-spec format.

    Lines are ``node <id> <dim>`` or ``edge <child-id> <parent-id> <+1|-1>``;
    '#' lines and blank lines are ignored.  Nodes are ordered by
    (dimension, first appearance).
    """
    raw_nodes: list[tuple[str, int]] = []
    raw_edges: list[tuple[str, str, int]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 3:
            name, dim = parts[1], parts[2]
            if name in seen:
                raise CoverSpecError(f"line {lineno}: duplicate node {name!r}")
            try:
                raw_nodes.append((name, int(dim)))
            except ValueError:
                raise CoverSpecError(f"line {lineno}: bad dimension {dim!r}") from None
            seen.add(name)
        elif parts[0] == "edge" and len(parts) == 4:
            if parts[3] not in ("+1", "-1", "1"):
                raise CoverSpecError(f"line {lineno}: sign must be +1 or -1")
            raw_edges.append((parts[1], parts[2], int(parts[3])))
        else:
            raise CoverSpecError(f"line {lineno}: unrecognized line {line!r}")
    if not raw_nodes:
        raise CoverSpecError("no nodes in input")
    order = sorted(range(len(raw_nodes)), key=lambda i: (raw_nodes[i][1], i))
    names = [raw_nodes[i][0] for i in order]
    dims = [raw_nodes[i][1] for i in order]
    pos = {name: i for i, name in enumerate(names)}
    edges, signs = [], []
    for child, parent, s in raw_edges:
        if child not in pos or parent not in pos:
            missing = child if child not in pos else parent
            raise CoverSpecError(f"unknown node id {missing!r}")
        edges.append((pos[child], pos[parent]))
        signs.append(s)
    return GradedSignedDoubleCover(dims=dims, edges=edges, signs=signs, labels=names)


# -- path weights ---------------------------------------------------------


@dataclass(frozen=True)
class PathWeights:
    """Leaf-path and root-path counts per quotient node (exact integers)."""

    lp: tuple[int, ...]
    rp: tuple[int, ...]

    def h(self, q: int) -> Fraction:
        return Fraction(self.lp[q], self.rp[q])

    def h_vector(self, nodes) -> list[Fraction]:
        return [self.h(q) for q in nodes]

    def through(self, q: int) -> int:
        """Number of root-to-leaf paths passing through q."""
        return self.lp[q] * self.rp[q]


def compute_path_weights(cover: GradedSignedDoubleCover) -> PathWeights:
    """LP/RP by the defining recursions, processing nodes by dimension."""
    order = sorted(range(cover.n_quotient), key=lambda q: cover.dims[q])
    lp = [0] * cover.n_quotient
    rp = [0] * cover.n_quotient
    for q in reversed(order):
        lp[q] = 1 if cover.is_leaf(q) else sum(lp[v] for v in cover.parents[q])
    for q in order:
        rp[q] = 1 if cover.is_root(q) else sum(rp[t] for t in cover.children[q])
    return PathWeights(tuple(lp), tuple(rp))


def leaves_and_roots(cover: GradedSignedDoubleCover) -> tuple[frozenset[int], frozenset[int]]:
    leaves = frozenset(q for q in range(cover.n_quotient) if cover.is_leaf(q))
    roots = frozenset(q for q in range(cover.n_quotient) if cover.is_root(q))
    return leaves, roots


# -- components -----------------------------------------------------------

COMPONENT_KINDS = (
    "quotient",
    "cover",
    "quotient-up",
    "quotient-down",
    "cover-up",
    "cover-down",
)


@dataclass(frozen=True)
class ComponentSet:
    kind: str
    dimension: int | None
    members: tuple[tuple[int, ...], ...]
    # per component: sorted (node, flipped) witness items, or None
    coherent: tuple[tuple[tuple[int, bool], ...] | None, ...] | None = field(default=None)


def _connected_parts(nodes, neighbors) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    parts = []
    for start in nodes:
        if start in seen:
            continue
        stack, part = [start], set()
        seen.add(start)
        while stack:
            x = stack.pop()
            part.add(x)
            for y in neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        parts.append(tuple(sorted(part)))
    return sorted(parts)


def components(
    cover: GradedSignedDoubleCover,
    kind: str,
    k: int | None = None,
    with_coherence: bool = False,
) -> ComponentSet:
    """Connected components of the requested kind.

    Cover kinds merge the two lifts of an isolated (resp. leaf/root) node
    into a single pair-component.  For quotient up/down kinds,
    ``with_coherence`` annotates each component with its witness
    orientation (or None).
    """
    if kind not in COMPONENT_KINDS:
        raise ValueError(f"unknown component kind {kind!r}")
    if with_coherence and kind not in ("quotient-up", "quotient-down"):
        raise ValueError("coherence flags apply to quotient up/down kinds only")
    n = cover.n_quotient
    if kind == "quotient":
        neigh = lambda q: list(cover.parents[q]) + list(cover.children[q])
        return ComponentSet(kind, None, tuple(_connected_parts(range(n), neigh)))
    if kind == "cover":
        def neigh(u):
            q, flip = u % n, u >= n
            out = []
            for p in cover.parents[q]:
                out.extend((p, p + n))
            for c in cover.children[q]:
                out.extend((c, c + n))
            return out
        parts = _connected_parts(range(2 * n), neigh)
        merged = _merge_pairs(parts, n, cover.is_isolated)
        return ComponentSet(kind, None, merged)
    if k is None:
        raise ValueError("up/down component kinds require a dimension k")
    cover.require_strong()
    if kind in ("quotient-up", "quotient-down"):
        adj = cover.up_adjacency(k) if kind == "quotient-up" else cover.down_adjacency(k)
        members = tuple(_connected_parts(sorted(adj), lambda q: adj[q]))
        coherent = None
        if with_coherence:
            direction = "up" if kind == "quotient-up" else "down"
            coherent = tuple(
                _orientation_items(detect_coherent(cover, comp, direction))
                for comp in members
            )
        return ComponentSet(kind, k, members, coherent)
    adj = cover.up_adjacency(k) if kind == "cover-up" else cover.down_adjacency(k)
    lonely = cover.is_leaf if kind == "cover-up" else cover.is_root
    def neigh(u):
        q = u % n
        out = []
        for b in adj[q]:
            out.extend((b, b + n))
        if not lonely(q):
            # a node with a parent (resp. child) shares it with its own flip
            out.append(u + n if u < n else u - n)
        return out
    nodes = [q for q in sorted(adj)] + [q + n for q in sorted(adj)]
    parts = _connected_parts(nodes, neigh)
    return ComponentSet(kind, k, _merge_pairs(parts, n, lonely))


def _orientation_items(witness):
    if witness is None:
        return None
    return tuple(sorted(witness.items()))


def _merge_pairs(parts, n, is_lonely) -> tuple[tuple[int, ...], ...]:
    merged, used = [], set()
    for part in parts:
        if len(part) == 1 and is_lonely(part[0] % n):
            q = part[0] % n
            if q in used:
                continue
            used.add(q)
            merged.append((q, q + n))
        else:
            merged.append(part)
    return tuple(sorted(merged))


def component_correspondence(cover: GradedSignedDoubleCover, k: int):
    """Pairs (down-component in dim k, up-component in dim k-1).

    Non-root down-components map to non-leaf up-components by taking all
    children, with taking all parents as the inverse.
    """
    cover.require_strong()
    if k < 1:
        raise ValueError("k must be at least 1")
    down = components(cover, "quotient-down", k).members
    up = components(cover, "quotient-up", k - 1).members
    up_of = {q: comp for comp in up for q in comp}
    pairs = []
    for comp in down:
        if all(cover.is_root(q) for q in comp):
            continue
        kids = sorted({t for q in comp for t in cover.children[q]})
        targets = {id(up_of[t]) for t in kids}
        if len(targets) != 1:
            raise AssertionError("down-component children span several up-components")
        up_comp = up_of[kids[0]]
        back = sorted({v for t in up_comp for v in cover.parents[t] if cover.dims[v] == k})
        if tuple(back) != comp:
            raise AssertionError("correspondence is not involutive")
        pairs.append((comp, up_comp))
    return pairs


# -- coherence ------------------------------------------------------------


def detect_coherent(cover: GradedSignedDoubleCover, component, direction: str):
    """Witness orientation making all shared-coface (or shared-face) signs equal.

    Returns a dict {quotient index -> flipped} on the component's nodes, or
    None when the component is not coherent.  Leaf (resp. root) singleton
    components are not coherent by definition; other singletons are, with
    the trivial witness.  Detection is linear-time sign propagation over
    the adjacency; two shared mid-nodes forcing contradictory pair signs
    make the component incoherent immediately.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    comp = tuple(sorted(component))
    if len(comp) == 1:
        q = comp[0]
        lonely = cover.is_leaf(q) if direction == "up" else cover.is_root(q)
        return None if lonely else {q: False}
    shared = cover.shared_parents if direction == "up" else cover.shared_children
    # collapse each adjacent pair to a single required sign x_a * x_b
    pair_sign: dict[tuple[int, int], int] = {}
    for i, a in enumerate(comp):
        for b in comp[i + 1:]:
            mids = shared(a, b)
            if not mids:
                continue
            sgns = set()
            for m in mids:
                if direction == "up":
                    sgns.add(cover.sign_ref[(a, m)] * cover.sign_ref[(b, m)])
                else:
                    sgns.add(cover.sign_ref[(m, a)] * cover.sign_ref[(m, b)])
            if len(sgns) > 1:
                return None
            pair_sign[(a, b)] = sgns.pop()
    # propagate x over a spanning tree, then check every constraint
    x: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {q: [] for q in comp}
    for (a, b), s in pair_sign.items():
        adj[a].append((b, s))
        adj[b].append((a, s))
    for start in comp:
        if start in x:
            continue
        x[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for b, s in adj[a]:
                if b not in x:
                    x[b] = x[a] * s
                    stack.append(b)
    for (a, b), s in pair_sign.items():
        if x[a] * x[b] != s:
            return None
    return {q: x[q] == -1 for q in comp}


# -- (k+1)-partitions ------------------------------------------------------


def find_partition(cover: GradedSignedDoubleCover, component):
    """Search for a (k+1)-partition of the vertices under a down-component.

    Only defined for covers of simplicial complexes.  Backtracks over
    vertex-to-class assignments in lexicographic vertex order, pruning on
    the constraint that the vertices of every member face take pairwise
    distinct classes; classes are introduced in first-use order so the
    first witness found is canonical.  Returns k+1 vertex-label lists or
    None.
    """
    if cover.faces is None:
        raise ValueError("partitions are only defined for simplicial covers")
    comp = tuple(sorted(component))
    k = cover.dims[comp[0]]
    if any(cover.dims[q] != k for q in comp):
        raise ValueError("component mixes dimensions")
    member_faces = [cover.faces[q] for q in comp]
    vertices = sorted({v for f in member_faces for v in f.vertices})
    vpos = {v: i for i, v in enumerate(vertices)}
    face_vertexsets = [tuple(vpos[v] for v in f.vertices) for f in member_faces]
    constraints: dict[int, set[int]] = {i: set() for i in range(len(vertices))}
    for fv in face_vertexsets:
        for i, a in enumerate(fv):
            for b in fv[i + 1:]:
                constraints[a].add(b)
                constraints[b].add(a)
    n_classes = k + 1
    assign = [-1] * len(vertices)

    def backtrack(i: int, used: int) -> bool:
        if i == len(vertices):
            return True
        forbidden = {assign[j] for j in constraints[i] if assign[j] >= 0}
        for cls in range(min(used + 1, n_classes)):
            if cls in forbidden:
                continue
            assign[i] = cls
            if backtrack(i + 1, max(used, cls + 1)):
                return True
            assign[i] = -1
        return False

    if not backtrack(0, 0):
        return None
    classes: list[list[str]] = [[] for _ in range(n_classes)]
    for i, v in enumerate(vertices):
        classes[assign[i]].append(v)
    return classes
