"""Metropolis-Hastings search over decomposable graphs with exact Bayes factors.

The graph score is the log marginal likelihood of the data under the
negative multinomial model with a G-Dirichlet prior. It splits into a sum of
per-subset terms ``phi(A)`` over maximal cliques minus separators, so a
single-edge change only touches four subsets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .bayes import Observations, log_marginal_likelihood
from .graph import (
    GraphError,
    NotDecomposableError,
    UndirectedGraph,
    check_decomposable,
    decomposable_graphs,
    empty_graph,
)

EXACT_MAX_VERTICES = 5


class ConfigError(ValueError):
    pass


def _alpha_vector(alpha, n: int) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    a = np.full(n, float(a)) if a.ndim == 0 else a
    if a.shape != (n,):
        raise ConfigError(f"alpha needs 1 or {n} values, got {a.size}")
    if np.any(~(a > 0)):
        raise ConfigError("alpha must be positive")
    return a


def _rows(vertices: Sequence, data) -> np.ndarray:
    if isinstance(data, Observations):
        g = empty_graph(list(vertices))
        return data.aligned(g)
    return np.asarray(data, dtype=np.int64).reshape(-1, len(vertices))


class GraphScorer:
    """Memoized decomposable-graph scores for one data set and hyperparameters.

    ``score(g)`` omits the terms shared by every graph on the same vertices;
    ``log_marginal_likelihood(g)`` adds them back.
    """

    def __init__(self, vertices: Sequence, data, alpha=1.0, beta: float = 1.0, r: float = 1.0):
        self.vertices = tuple(str(v) for v in vertices)
        n = len(self.vertices)
        self.rows = _rows(self.vertices, data)
        self.alpha = _alpha_vector(alpha, n)
        if not beta > 0:
            raise ConfigError("beta must be positive")
        if not r > 0:
            raise ConfigError("r must be positive")
        self.beta, self.r = float(beta), float(r)
        self.k = self.rows.shape[0]
        self.total = self.rows.sum(axis=0)
        self._phi = {}
        self._scores = {}
        tot = self.total.astype(float)
        self.vertex_terms = float(
            -np.sum(gammaln(self.rows + 1.0)) - np.sum(gammaln(self.alpha)) + np.sum(gammaln(self.alpha + tot))
        )

    def phi(self, mask: int) -> float:
        got = self._phi.get(mask)
        if got is not None:
            return got
        idx = [i for i in range(len(self.vertices)) if mask >> i & 1]
        a = float(self.alpha[idx].sum())
        s = float(self.total[idx].sum())
        per_row = self.rows[:, idx].sum(axis=1)
        val = float(np.sum(gammaln(self.r + per_row) - gammaln(self.r)))
        val += math.lgamma(a + self.beta) - math.lgamma(a + s + self.beta + self.k * self.r)
        self._phi[mask] = val
        return val

    def _check(self, g: UndirectedGraph) -> None:
        if g.vertices != self.vertices:
            raise GraphError(f"graph vertices {list(g.vertices)} do not match data columns {list(self.vertices)}")

    def score(self, g: UndirectedGraph) -> float:
        self._check(g)
        got = self._scores.get(g.adj)
        if got is not None:
            return got
        s = check_decomposable(g)
        if s is None:
            raise NotDecomposableError(f"{g!r} is not decomposable")
        val = sum(self.phi(c) for c in s.maximal_cliques)
        val -= sum(nu * self.phi(sep) for sep, nu in s.separators)
        val -= s.components * self.phi(0)
        self._scores[g.adj] = val
        return val

    def log_marginal_likelihood(self, g: UndirectedGraph) -> float:
        return self.score(g) + self.vertex_terms

    def edge_delta(self, adj: tuple, a: int, b: int) -> float:
        """Score change for toggling {a, b}; both graphs must be decomposable."""
        sep = adj[a] & adj[b]
        add = self.phi(sep | 1 << a | 1 << b) + self.phi(sep) - self.phi(sep | 1 << a) - self.phi(sep | 1 << b)
        return -add if adj[a] >> b & 1 else add


def _one_edge_apart(g1: UndirectedGraph, g2: UndirectedGraph) -> Optional[tuple]:
    diff = [i for i in range(g1.n) if g1.adj[i] != g2.adj[i]]
    if len(diff) != 2:
        return None
    a, b = diff
    if (g1.adj[a] ^ g2.adj[a]) != 1 << b or (g1.adj[b] ^ g2.adj[b]) != 1 << a:
        return None
    return a, b


def log_bayes_factor(g1: UndirectedGraph, g2: UndirectedGraph, data, alpha=1.0, beta: float = 1.0,
                     r: float = 1.0, scorer: Optional[GraphScorer] = None) -> float:
    """log of the marginal-likelihood ratio of ``g1`` over ``g2``."""
    if g1.vertices != g2.vertices:
        raise GraphError("graphs must share a vertex set")
    for g in (g1, g2):
        if check_decomposable(g) is None:
            raise NotDecomposableError(f"{g!r} is not decomposable")
    scorer = scorer or GraphScorer(g1.vertices, data, alpha, beta, r)
    pair = _one_edge_apart(g1, g2)
    if pair is not None:
        return scorer.edge_delta(g2.adj, *pair)
    return scorer.score(g1) - scorer.score(g2)


def naive_log_bayes_factor(g1: UndirectedGraph, g2: UndirectedGraph, data, alpha=1.0, beta=1.0, r=1.0) -> float:
    """Difference of two full marginal likelihoods, with no shared-term cancellation."""
    obs = data if isinstance(data, Observations) else Observations(g1.vertices, data)
    a = _alpha_vector(alpha, g1.n)
    return log_marginal_likelihood(g1, a, beta, r, obs) - log_marginal_likelihood(g2, a, beta, r, obs)


# -- the chain ---------------------------------------------------------------------------

def vertex_pairs(n: int) -> list:
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def propose(g: UndirectedGraph, rng) -> UndirectedGraph:
    """Toggle one vertex pair chosen uniformly; the result may not be decomposable."""
    pairs = vertex_pairs(g.n)
    a, b = pairs[rng.integers(len(pairs))]
    return g.toggle(a, b)


@dataclass
class ChainConfig:
    steps: int
    burn_in: Optional[int] = None
    seed: int = 0
    alpha: object = 1.0
    beta: float = 1.0
    r: int = 1
    initial_graph: Optional[UndirectedGraph] = None

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigError("steps must be a positive integer")
        if self.burn_in is None:
            self.burn_in = self.steps // 10
        if int(self.burn_in) != self.burn_in or not 0 <= self.burn_in < self.steps:
            raise ConfigError("burn_in must satisfy 0 <= burn_in < steps")
        if int(self.r) != self.r or self.r < 1:
            raise ConfigError("r must be a positive integer")
        if not self.beta > 0:
            raise ConfigError("beta must be positive")
        self.steps, self.burn_in, self.r = int(self.steps), int(self.burn_in), int(self.r)


@dataclass
class ChainTrace:
    current: UndirectedGraph
    visit_counts: dict = field(default_factory=dict)
    accepted: int = 0
    proposed: int = 0
    proposed_nondecomposable: int = 0

    @property
    def recorded(self) -> int:
        return sum(self.visit_counts.values())

    def fractions(self) -> list:
        """(graph key, visit fraction) pairs, most visited first."""
        total = self.recorded
        items = sorted(self.visit_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(key, count / total) for key, count in items]

    def merge(self, other: "ChainTrace") -> "ChainTrace":
        counts = dict(self.visit_counts)
        for key, c in other.visit_counts.items():
            counts[key] = counts.get(key, 0) + c
        return ChainTrace(other.current, counts, self.accepted + other.accepted, self.proposed + other.proposed,
                          self.proposed_nondecomposable + other.proposed_nondecomposable)


class _Chain:
    """Hot loop state: adjacency tuples, cached chordality, cached graph keys."""

    def __init__(self, scorer: GraphScorer, start: UndirectedGraph):
        self.scorer = scorer
        self.vertices = start.vertices
        self.pairs = vertex_pairs(start.n)
        self._chordal = {}
        self._graphs = {}
        self.adj = start.adj
        self._graphs[start.adj] = start
        if not self.chordal(start.adj):
            raise NotDecomposableError("initial graph is not decomposable")

    def graph(self, adj: tuple) -> UndirectedGraph:
        g = self._graphs.get(adj)
        if g is None:
            g = UndirectedGraph(self.vertices, adj)
            self._graphs[adj] = g
        return g

    def chordal(self, adj: tuple) -> bool:
        ok = self._chordal.get(adj)
        if ok is None:
            ok = check_decomposable(self.graph(adj)) is not None
            self._chordal[adj] = ok
        return ok

    def step(self, trace: ChainTrace, rng, record: bool) -> None:
        a, b = self.pairs[rng.integers(len(self.pairs))]
        adj = list(self.adj)
        adj[a] ^= 1 << b
        adj[b] ^= 1 << a
        adj = tuple(adj)
        trace.proposed += 1
        log_u = math.log(rng.random())
        if not self.chordal(adj):
            trace.proposed_nondecomposable += 1
        elif log_u < self.scorer.edge_delta(self.adj, a, b):
            self.adj = adj
            trace.accepted += 1
        if record:
            trace.visit_counts[self.adj] = trace.visit_counts.get(self.adj, 0) + 1


def mh_step(trace: ChainTrace, scorer: GraphScorer, rng, record: bool = True) -> ChainTrace:
    """Advance one Metropolis-Hastings step in place and return the trace."""
    chain = _Chain(scorer, trace.current)
    counts, trace.visit_counts = trace.visit_counts, {}
    chain.step(trace, rng, record)
    for adj, c in trace.visit_counts.items():
        key = chain.graph(adj).key()
        counts[key] = counts.get(key, 0) + c
    trace.visit_counts = counts
    trace.current = chain.graph(chain.adj)
    return trace


def _single_chain(scorer: GraphScorer, config: ChainConfig, rng) -> ChainTrace:
    start = config.initial_graph or empty_graph(list(scorer.vertices))
    if start.vertices != scorer.vertices:
        raise GraphError("initial graph vertices do not match the data columns")
    chain = _Chain(scorer, start)
    trace = ChainTrace(start)
    for t in range(config.steps):
        chain.step(trace, rng, t >= config.burn_in)
    trace.visit_counts = {chain.graph(adj).key(): c for adj, c in trace.visit_counts.items()}
    trace.current = chain.graph(chain.adj)
    return trace


def run_chain(data, config: ChainConfig, vertices: Optional[Sequence] = None, chains: int = 1) -> ChainTrace:
    """Run ``chains`` independent seeded chains and merge their visit counts."""
    vertices = _vertices(data, vertices)
    scorer = GraphScorer(vertices, data, config.alpha, config.beta, config.r)
    if chains < 1:
        raise ConfigError("chains must be at least 1")
    if chains == 1:
        return _single_chain(scorer, config, np.random.default_rng(config.seed))
    streams = np.random.SeedSequence(config.seed).spawn(chains)
    trace = None
    for ss in streams:
        t = _single_chain(scorer, config, np.random.default_rng(ss))
        trace = t if trace is None else trace.merge(t)
    return trace


def _vertices(data, vertices) -> tuple:
    if vertices is not None:
        return tuple(str(v) for v in vertices)
    if isinstance(data, Observations):
        return data.labels
    raise ConfigError("vertex labels are required when data is a bare array")


# -- exact oracle and reports ------------------------------------------------------------

def exact_posterior(data, alpha=1.0, beta: float = 1.0, r: float = 1.0, vertices: Optional[Sequence] = None) -> dict:
    """Posterior over all decomposable graphs under a uniform graph prior, by enumeration."""
    vertices = _vertices(data, vertices)
    if len(vertices) > EXACT_MAX_VERTICES:
        raise ConfigError(f"exact enumeration is limited to {EXACT_MAX_VERTICES} vertices")
    scorer = GraphScorer(vertices, data, alpha, beta, r)
    graphs = decomposable_graphs(list(vertices))
    scores = np.array([scorer.score(g) for g in graphs])
    probs = np.exp(scores - logsumexp(scores))
    return dict(zip(graphs, probs.tolist()))


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def mh_transition_matrix(graphs: Sequence[UndirectedGraph], scorer: GraphScorer) -> np.ndarray:
    """Exact one-step transition matrix of the chain restricted to ``graphs``."""
    index = {g.adj: i for i, g in enumerate(graphs)}
    P = np.zeros((len(graphs), len(graphs)))
    for i, g in enumerate(graphs):
        pairs = vertex_pairs(g.n)
        for a, b in pairs:
            h = g.toggle(a, b)
            if check_decomposable(h) is None:
                continue
            P[i, index[h.adj]] += min(1.0, math.exp(scorer.edge_delta(g.adj, a, b))) / len(pairs)
        P[i, i] += 1.0 - P[i].sum()
    return P


def _hyper(scorer: GraphScorer) -> dict:
    r = int(scorer.r) if scorer.r.is_integer() else scorer.r
    return {"alpha": scorer.alpha.tolist(), "beta": scorer.beta, "r": r}


def _edge_list(key) -> list:
    return [list(e) for e in key]


def chain_report(trace: ChainTrace, scorer: GraphScorer, config: ChainConfig, chains: int = 1) -> dict:
    graphs = {g.key(): g for g in decomposable_graphs(list(scorer.vertices))} if len(scorer.vertices) <= EXACT_MAX_VERTICES else {}
    results = []
    for key, frac in trace.fractions():
        g = graphs.get(key) or UndirectedGraph.from_edges(scorer.vertices, key)
        results.append({"edges": _edge_list(key), "visit_fraction": frac,
                        "log_score": scorer.log_marginal_likelihood(g)})
    return {
        "method": "mcmc",
        "vertices": list(scorer.vertices),
        "seed": config.seed,
        "steps": config.steps,
        "burn_in": config.burn_in,
        "chains": chains,
        "acceptance_rate": trace.accepted / trace.proposed if trace.proposed else 0.0,
        "nondecomposable_rate": trace.proposed_nondecomposable / trace.proposed if trace.proposed else 0.0,
        "hyperparameters": _hyper(scorer),
        "results": results,
    }


def exact_report(posterior: dict, scorer: GraphScorer) -> dict:
    items = sorted(posterior.items(), key=lambda kv: (-kv[1], kv[0].key()))
    return {
        "method": "exact",
        "vertices": list(scorer.vertices),
        "hyperparameters": _hyper(scorer),
        "results": [{"edges": _edge_list(g.key()), "posterior": p, "log_score": scorer.log_marginal_likelihood(g)}
                    for g, p in items],
    }
