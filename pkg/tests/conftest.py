import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphcount.graph import UndirectedGraph, bits, dag_from_arrows, decompose, path_graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def triangulate(vertices, adj):
    """Fill in edges by eliminating vertices in index order; the result is chordal."""
    adj = list(adj)
    for v in range(len(adj)):
        later = [j for j in bits(adj[v]) if j > v]
        for a in later:
            for b in later:
                if a != b:
                    adj[a] |= 1 << b
    return UndirectedGraph(tuple(vertices), tuple(adj))


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return UndirectedGraph(tuple(str(i + 1) for i in range(n)), tuple(adj))


@st.composite
def chordal_graphs(draw, min_n=1, max_n=6):
    g = draw(graphs(min_n, max_n))
    perm = draw(st.permutations(range(g.n)))
    # eliminate in a random order so fill-in is not biased towards low labels
    inv = {p: k for k, p in enumerate(perm)}
    relabelled = [0] * g.n
    for i in range(g.n):
        for j in bits(g.adj[i]):
            relabelled[inv[i]] |= 1 << inv[j]
    h = triangulate(g.vertices, relabelled)
    back = [0] * g.n
    for k in range(g.n):
        for m in bits(h.adj[k]):
            back[perm[k]] |= 1 << perm[m]
    return UndirectedGraph(g.vertices, tuple(back))


def points_in_M_G(draw, g, scale=1.0):
    """Draw x in M_G through random u coordinates on the canonical moral DAG."""
    from graphcount.polynomials import x_from_u
    from graphcount.graph import canonical_dag

    u = [draw(st.floats(0.02, 0.98 * scale)) for _ in range(g.n)]
    return x_from_u(canonical_dag(g), np.array(u))


@pytest.fixture
def chain():
    return path_graph(["1", "2", "3"])


@pytest.fixture
def chain_dag(chain):
    # 1 <- 2 <- 3 style orientation used by the worked chain examples
    return dag_from_arrows(chain, [("2", "1"), ("3", "2")])


@pytest.fixture
def chain_structure(chain):
    return decompose(chain)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
