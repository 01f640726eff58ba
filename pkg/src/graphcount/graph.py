"""Decomposable (chordal) graph machinery.

Vertices are stored as an ordered tuple of string labels; internally every
vertex is an index ``0..n-1`` and every vertex subset is an ``int`` bitmask.
Most public functions accept label iterables and return frozensets of labels,
while the ``*_mask`` helpers expose the bitmask form used by the numerical
modules.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

MAX_VERTICES = 30


class GraphError(ValueError):
    """Invalid graph input (bad labels, self-loops, duplicate edges...)."""


class NotDecomposableError(GraphError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True, eq=True)
class UndirectedGraph:
    """Simple undirected graph with labelled vertices.

    ``adj[i]`` is the bitmask of neighbours of vertex ``i``.
    """

    vertices: tuple
    adj: tuple

    def __post_init__(self):
        n = len(self.vertices)
        if n > MAX_VERTICES:
            raise GraphError(f"at most {MAX_VERTICES} vertices are supported")
        if len(set(self.vertices)) != n:
            raise GraphError("vertex labels must be unique")
        if len(self.adj) != n:
            raise GraphError("adjacency length does not match vertex count")
        full = (1 << n) - 1
        for i, a in enumerate(self.adj):
            if a & ~full:
                raise GraphError("adjacency refers to unknown vertices")
            if a >> i & 1:
                raise GraphError(f"self-loop at {self.vertices[i]!r}")
            for j in bits(a):
                if not self.adj[j] >> i & 1:
                    raise GraphError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Sequence] = ()) -> "UndirectedGraph":
        labels = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(labels)}
        if len(index) != len(labels):
            raise GraphError("vertex labels must be unique")
        adj = [0] * len(labels)
        for edge in edges:
            if len(edge) != 2:
                raise GraphError(f"edge must have two endpoints: {edge!r}")
            a, b = (str(e) for e in edge)
            if a not in index or b not in index:
                raise GraphError(f"edge {edge!r} uses an unknown vertex")
            i, j = index[a], index[b]
            if i == j:
                raise GraphError(f"self-loop at {a!r}")
            if adj[i] >> j & 1:
                raise GraphError(f"duplicate edge {edge!r}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(labels, tuple(adj))

    @classmethod
    def from_edge_indices(cls, vertices: Sequence, pairs: Iterable[tuple]) -> "UndirectedGraph":
        adj = [0] * len(vertices)
        for i, j in pairs:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(tuple(vertices), tuple(adj))

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def idx(self, label) -> int:
        try:
            return self.index[str(label)]
        except KeyError:
            raise GraphError(f"unknown vertex {label!r}") from None

    def mask(self, labels: Optional[Iterable] = None) -> int:
        """Bitmask of a label collection; ``None`` means all vertices."""
        if labels is None:
            return self.full_mask
        m = 0
        for v in labels:
            m |= 1 << self.idx(v)
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in bits(mask))

    def has_edge(self, a, b) -> bool:
        return bool(self.adj[self.idx(a)] >> self.idx(b) & 1)

    @cached_property
    def edge_pairs(self) -> tuple:
        """Edges as sorted index pairs ``(i, j)`` with ``i < j``."""
        return tuple((i, j) for i in range(self.n) for j in bits(self.adj[i]) if i < j)

    @property
    def edges(self) -> list:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edge_pairs]

    def key(self) -> tuple:
        """Canonical key: the sorted edge list (labels fixed, no isomorphism quotient)."""
        return tuple(self.edges)

    def is_clique_mask(self, mask: int) -> bool:
        return all((mask & ~(1 << i)) & ~self.adj[i] == 0 for i in bits(mask))

    def is_clique(self, labels: Iterable) -> bool:
        return self.is_clique_mask(self.mask(labels))

    def complement(self) -> "UndirectedGraph":
        full = self.full_mask
        return UndirectedGraph(self.vertices, tuple(full & ~a & ~(1 << i) for i, a in enumerate(self.adj)))

    def toggle(self, a: int, b: int) -> "UndirectedGraph":
        """Graph with the edge between vertex indices ``a`` and ``b`` flipped."""
        adj = list(self.adj)
        adj[a] ^= 1 << b
        adj[b] ^= 1 << a
        return UndirectedGraph(self.vertices, tuple(adj))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    def __repr__(self):
        return f"UndirectedGraph({list(self.vertices)}, edges={self.edges})"


# -- constructors ----------------------------------------------------------

def _labels(vertices) -> list:
    if isinstance(vertices, int):
        return [str(i) for i in range(1, vertices + 1)]
    return [str(v) for v in vertices]


def complete_graph(vertices) -> UndirectedGraph:
    v = _labels(vertices)
    return UndirectedGraph.from_edges(v, itertools.combinations(v, 2))


def empty_graph(vertices) -> UndirectedGraph:
    return UndirectedGraph.from_edges(_labels(vertices))


def path_graph(vertices) -> UndirectedGraph:
    v = _labels(vertices)
    return UndirectedGraph.from_edges(v, zip(v, v[1:]))


def star_graph(vertices) -> UndirectedGraph:
    """Star with the first vertex as the hub."""
    v = _labels(vertices)
    return UndirectedGraph.from_edges(v, [(v[0], w) for w in v[1:]])


def cycle_graph(vertices) -> UndirectedGraph:
    v = _labels(vertices)
    return UndirectedGraph.from_edges(v, list(zip(v, v[1:])) + [(v[-1], v[0])])


def read_graph(path) -> UndirectedGraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh))


def graph_from_json(obj) -> UndirectedGraph:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise GraphError('graph JSON must be an object with "vertices" and "edges"')
    return UndirectedGraph.from_edges(obj["vertices"], obj.get("edges", []))


def write_graph(g: UndirectedGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_json(), fh, indent=2)


# -- utilities ---------------------------------------------------------------

def neighbors(g: UndirectedGraph, v) -> frozenset:
    return g.labels(g.adj[g.idx(v)])


def induced_subgraph(g: UndirectedGraph, labels: Iterable) -> UndirectedGraph:
    keep = [i for i in range(g.n) if g.mask(labels) >> i & 1]
    return induced_subgraph_mask(g, sum(1 << i for i in keep))


def induced_subgraph_mask(g: UndirectedGraph, mask: int) -> UndirectedGraph:
    keep = list(bits(mask))
    pos = {i: k for k, i in enumerate(keep)}
    adj = []
    for i in keep:
        adj.append(sum(1 << pos[j] for j in bits(g.adj[i] & mask)))
    return UndirectedGraph(tuple(g.vertices[i] for i in keep), tuple(adj))


def simplicial_vertices(g: UndirectedGraph) -> frozenset:
    return g.labels(sum(1 << i for i in range(g.n) if g.is_clique_mask(g.adj[i])))


def component_masks(g: UndirectedGraph, within: Optional[int] = None) -> list:
    todo = g.full_mask if within is None else within
    comps = []
    while todo:
        seed = todo & -todo
        comp, frontier = seed, seed
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= g.adj[i]
            frontier = nxt & todo & ~comp
            comp |= frontier
        comps.append(comp)
        todo &= ~comp
    return comps


def connected_components(g: UndirectedGraph) -> list:
    return [g.labels(c) for c in component_masks(g)]


# -- decomposition -------------------------------------------------------------

@dataclass(frozen=True)
class DecompStructure:
    """Perfect elimination order plus clique/separator decomposition.

    ``maximal_cliques`` is listed in a perfect ordering; ``separators`` holds
    ``(mask, multiplicity)`` pairs of the non-empty minimal separators.
    """

    graph: UndirectedGraph
    peo: tuple
    maximal_cliques: tuple
    separators: tuple
    components: int

    @property
    def clique_labels(self) -> list:
        return [self.graph.labels(c) for c in self.maximal_cliques]

    @property
    def separator_labels(self) -> list:
        return [(self.graph.labels(s), nu) for s, nu in self.separators]

    @cached_property
    def clique_matrix(self):
        return _incidence(self.maximal_cliques, self.graph.n)

    @cached_property
    def separator_matrix(self):
        return _incidence([s for s, _ in self.separators], self.graph.n)

    @cached_property
    def separator_multiplicity(self):
        return np.array([nu for _, nu in self.separators], dtype=float)


def _incidence(masks, n):
    out = np.zeros((len(masks), n), dtype=float)
    for k, m in enumerate(masks):
        for i in bits(m):
            out[k, i] = 1.0
    return out


def mcs_order(g: UndirectedGraph) -> list:
    """Maximum cardinality search visiting order (ties to the lowest index)."""
    weight = [0] * g.n
    visited = 0
    order = []
    for _ in range(g.n):
        best = -1
        for i in range(g.n):
            if not visited >> i & 1 and (best < 0 or weight[i] > weight[best]):
                best = i
        order.append(best)
        visited |= 1 << best
        for j in bits(g.adj[best] & ~visited):
            weight[j] += 1
    return order


def is_peo_indices(g: UndirectedGraph, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(g.n)):
        return False
    remaining = g.full_mask
    for v in order:
        if not g.is_clique_mask(g.adj[v] & remaining):
            return False
        remaining &= ~(1 << v)
    return True


def is_perfect_elimination_order(g: UndirectedGraph, order: Sequence) -> bool:
    try:
        idx = [g.idx(v) for v in order]
    except GraphError:
        return False
    return is_peo_indices(g, idx)


@lru_cache(maxsize=4096)
def _decompose(g: UndirectedGraph) -> Optional[DecompStructure]:
    visit = mcs_order(g)
    peo = visit[::-1]
    if not is_peo_indices(g, peo):
        return None
    pos = {v: k for k, v in enumerate(peo)}
    # candidate clique of v: v plus its neighbours later in the peo;
    # walking the MCS visit order yields the cliques in a perfect ordering
    candidates = []
    for v in visit:
        later = sum(1 << j for j in bits(g.adj[v]) if pos[j] > pos[v])
        candidates.append(later | 1 << v)
    cliques = [c for c in candidates if not any(c != d and c & d == c for d in candidates)]
    seps: dict = {}
    union = 0
    for c in cliques:
        s = c & union
        if s:
            seps[s] = seps.get(s, 0) + 1
        union |= c
    return DecompStructure(
        graph=g,
        peo=tuple(peo),
        maximal_cliques=tuple(cliques),
        separators=tuple(seps.items()),
        components=len(component_masks(g)),
    )


def check_decomposable(g: UndirectedGraph) -> Optional[DecompStructure]:
    """Return the decomposition of ``g``, or ``None`` when ``g`` is not chordal."""
    return _decompose(g)


def is_decomposable(g: UndirectedGraph) -> bool:
    return _decompose(g) is not None


def decompose(g: UndirectedGraph) -> DecompStructure:
    """Like :func:`check_decomposable` but raises on a non-chordal graph."""
    s = _decompose(g)
    if s is None:
        raise NotDecomposableError(f"graph is not decomposable: {g!r}")
    return s


# -- moral DAGs ------------------------------------------------------------------

@dataclass(frozen=True)
class MoralDag:
    """Moral DAG given by a parent bitmask per vertex.

    ``topo_order`` lists vertex indices with every parent before its children.
    """

    graph: UndirectedGraph
    parents: tuple
    topo_order: tuple = field(compare=False)

    @cached_property
    def children(self) -> tuple:
        ch = [0] * self.graph.n
        for i, pa in enumerate(self.parents):
            for j in bits(pa):
                ch[j] |= 1 << i
        return tuple(ch)

    @cached_property
    def descendants(self) -> tuple:
        de = [0] * self.graph.n
        for i in reversed(self.topo_order):
            d = self.children[i]
            for j in bits(self.children[i]):
                d |= de[j]
            de[i] = d
        return tuple(de)

    @cached_property
    def ancestors(self) -> tuple:
        an = [0] * self.graph.n
        for i in self.topo_order:
            a = self.parents[i]
            for j in bits(self.parents[i]):
                a |= an[j]
            an[i] = a
        return tuple(an)

    def non_descendants(self, i: int) -> int:
        return self.graph.full_mask & ~(self.descendants[i] | 1 << i)

    def parent_map(self) -> dict:
        return {self.graph.vertices[i]: self.graph.labels(p) for i, p in enumerate(self.parents)}

    def arrows(self) -> list:
        """Directed edges ``(parent, child)`` as labels."""
        v = self.graph.vertices
        return sorted((v[j], v[i]) for i, p in enumerate(self.parents) for j in bits(p))

    def __repr__(self):
        return "MoralDag(" + ", ".join(f"{a}->{b}" for a, b in self.arrows()) + ")"


def _dag_from_peo(g: UndirectedGraph, peo: Sequence[int]) -> MoralDag:
    pos = {v: k for k, v in enumerate(peo)}
    parents = tuple(sum(1 << j for j in bits(g.adj[i]) if pos[j] > pos[i]) for i in range(g.n))
    return MoralDag(g, parents, tuple(reversed(peo)))


def build_moral_dag(g: UndirectedGraph, peo: Optional[Sequence] = None) -> MoralDag:
    """Orient ``g`` along a perfect elimination order: later vertices become parents.

    With ``peo=None`` the maximum-cardinality-search order is used.
    """
    if peo is None:
        return _dag_from_peo(g, decompose(g).peo)
    idx = [g.idx(v) for v in peo]
    if not is_peo_indices(g, idx):
        raise GraphError(f"not a perfect elimination order: {list(peo)}")
    return _dag_from_peo(g, idx)


def dag_from_arrows(g: UndirectedGraph, arrows: Iterable[Sequence]) -> MoralDag:
    """Moral DAG from ``(parent, child)`` label pairs covering every edge of ``g`` once."""
    parents = [0] * g.n
    for a, b in arrows:
        i, j = g.idx(a), g.idx(b)
        if not g.adj[i] >> j & 1:
            raise GraphError(f"arrow {a}->{b} is not an edge")
        parents[j] |= 1 << i
    order, placed = [], 0
    while len(order) < g.n:
        ready = [i for i in range(g.n) if not placed >> i & 1 and parents[i] & ~placed == 0]
        if not ready:
            raise GraphError("arrows contain a directed cycle")
        order.append(ready[0])
        placed |= 1 << ready[0]
    dag = MoralDag(g, tuple(parents), tuple(order))
    if not is_moral_dag(dag):
        raise GraphError("arrows do not form a moral DAG of the graph")
    return dag


def canonical_dag(g: UndirectedGraph) -> MoralDag:
    return _canonical_dag(g)


@lru_cache(maxsize=4096)
def _canonical_dag(g):
    return _dag_from_peo(g, decompose(g).peo)


def perfect_elimination_orders(g: UndirectedGraph) -> Iterator[tuple]:
    """All perfect elimination orders, by repeatedly removing a simplicial vertex."""

    def rec(remaining, prefix):
        if not remaining:
            yield tuple(prefix)
            return
        for v in bits(remaining):
            if g.is_clique_mask(g.adj[v] & remaining):
                prefix.append(v)
                yield from rec(remaining & ~(1 << v), prefix)
                prefix.pop()

    yield from rec(g.full_mask, [])


def enumerate_moral_dags(g: UndirectedGraph, max_vertices: int = 8) -> list:
    """Every moral DAG with skeleton ``g``, each exactly once."""
    if g.n > max_vertices:
        raise GraphError(f"moral DAG enumeration limited to {max_vertices} vertices")
    decompose(g)
    seen = {}
    for peo in perfect_elimination_orders(g):
        dag = _dag_from_peo(g, peo)
        seen.setdefault(dag.parents, dag)
    return list(seen.values())


def is_moral_dag(dag: MoralDag) -> bool:
    """Acyclic, skeleton equal to ``dag.graph``, and every parent set a clique."""
    g = dag.graph
    for i, pa in enumerate(dag.parents):
        if pa >> i & 1 or not g.is_clique_mask(pa):
            return False
        for j in bits(pa):
            if dag.parents[j] >> i & 1:
                return False
    skeleton = [0] * g.n
    for i, pa in enumerate(dag.parents):
        skeleton[i] |= pa
        for j in bits(pa):
            skeleton[j] |= 1 << i
    if tuple(skeleton) != g.adj:
        return False
    seen = 0
    for i in dag.topo_order:
        if dag.parents[i] & ~seen:
            return False
        seen |= 1 << i
    return seen == g.full_mask


# -- complement cliques ------------------------------------------------------------

def complement_clique_masks(g: UndirectedGraph, within: Optional[int] = None) -> list:
    """All cliques of the complement graph (independent sets of ``g``) inside ``within``."""
    universe = g.full_mask if within is None else within
    out = []

    def expand(r, candidates):
        out.append(r)
        for v in bits(candidates):
            expand(r | 1 << v, candidates & ~g.adj[v] & ~((1 << (v + 1)) - 1))

    expand(0, universe)
    return out


def complement_cliques(g: UndirectedGraph) -> list:
    return [g.labels(m) for m in complement_clique_masks(g)]


# -- graph enumeration ---------------------------------------------------------------

def all_graphs(vertices) -> Iterator[UndirectedGraph]:
    v = _labels(vertices)
    pairs = list(itertools.combinations(range(len(v)), 2))
    for sel in range(1 << len(pairs)):
        yield UndirectedGraph.from_edge_indices(v, [p for k, p in enumerate(pairs) if sel >> k & 1])


def decomposable_graphs(vertices) -> list:
    return [g for g in all_graphs(vertices) if is_decomposable(g)]


def _canonical_form(n, adj):
    best = None
    for perm in itertools.permutations(range(n)):
        code = 0
        for i in range(n):
            for j in bits(adj[i]):
                if i < j:
                    a, b = sorted((perm[i], perm[j]))
                    code |= 1 << (a * n + b)
        if best is None or code < best:
            best = code
    return best


def decomposable_graph_classes(n: int) -> list:
    """One representative per isomorphism class of decomposable graphs on ``n`` vertices.

    Grown by attaching a new vertex to a clique (possibly empty) of a smaller
    chordal graph; every chordal graph arises this way.
    """
    if n < 1:
        return []
    classes = [UndirectedGraph(("1",), (0,))]
    for k in range(2, n + 1):
        found = {}
        for g in classes:
            for c in complement_clique_masks(g.complement()):
                adj = list(g.adj) + [c]
                for j in bits(c):
                    adj[j] |= 1 << (k - 1)
                form = _canonical_form(k, adj)
                if form not in found:
                    found[form] = UndirectedGraph(tuple(str(i) for i in range(1, k + 1)), tuple(adj))
        classes = list(found.values())
    return classes
