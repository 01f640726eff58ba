import json

import pytest
from hypothesis import given

from graphcount.graph import (
    GraphError,
    NotDecomposableError,
    UndirectedGraph,
    all_graphs,
    bits,
    build_moral_dag,
    check_decomposable,
    complement_clique_masks,
    complete_graph,
    cycle_graph,
    dag_from_arrows,
    decomposable_graph_classes,
    decomposable_graphs,
    decompose,
    empty_graph,
    enumerate_moral_dags,
    graph_from_json,
    is_decomposable,
    is_moral_dag,
    is_perfect_elimination_order,
    path_graph,
    read_graph,
    simplicial_vertices,
    star_graph,
    write_graph,
)
from graphcount.oracle import chordal_bruteforce

from conftest import chordal_graphs, graphs


def test_chain_decomposition(chain):
    s = decompose(chain)
    assert sorted(sorted(c) for c in s.clique_labels) == [["1", "2"], ["2", "3"]]
    assert s.separators == ((chain.mask(["2"]), 1),)
    assert s.components == 1


def test_star_separator_multiplicity():
    g = star_graph(["c", "a", "b", "d", "e"])
    s = decompose(g)
    assert len(s.maximal_cliques) == 4
    assert s.separators == ((g.mask(["c"]), 3),)


def test_disconnected_graph_has_no_separators():
    s = decompose(empty_graph("abc"))
    assert s.separators == ()
    assert s.components == 3
    assert len(s.maximal_cliques) == 3


def test_cycle_is_not_decomposable():
    g = cycle_graph(["1", "2", "3", "4"])
    assert check_decomposable(g) is None
    with pytest.raises(NotDecomposableError):
        decompose(g)


@given(graphs(max_n=7))
def test_mcs_agrees_with_bruteforce_chordality(g):
    assert is_decomposable(g) == chordal_bruteforce(g)


@given(chordal_graphs())
def test_peo_and_cliques(g):
    s = decompose(g)
    assert is_perfect_elimination_order(g, [g.vertices[i] for i in s.peo])
    for c in s.maximal_cliques:
        assert g.is_clique_mask(c)
        # maximal: no vertex outside extends it
        assert not any((g.adj[v] & c) == c for v in range(g.n) if not c >> v & 1)


@given(chordal_graphs())
def test_running_intersection(g):
    s = decompose(g)
    union = 0
    for k, c in enumerate(s.maximal_cliques):
        if k:
            sep = c & union
            assert any(sep & d == sep for d in s.maximal_cliques[:k])
        union |= c


@given(chordal_graphs())
def test_clique_separator_counting(g):
    # sum over cliques minus separators of |.| recovers |V| (one per vertex)
    s = decompose(g)
    total = sum(bin(c).count("1") for c in s.maximal_cliques)
    total -= sum(nu * bin(sep).count("1") for sep, nu in s.separators)
    assert total == g.n
    assert len(s.maximal_cliques) - sum(nu for _, nu in s.separators) == s.components


@given(chordal_graphs(max_n=5))
def test_moral_dags_are_moral_and_distinct(g):
    dags = enumerate_moral_dags(g)
    assert len({d.parents for d in dags}) == len(dags)
    assert all(is_moral_dag(d) for d in dags)
    assert is_moral_dag(build_moral_dag(g))


def test_moral_dag_counts():
    assert len(enumerate_moral_dags(path_graph("123"))) == 3
    assert len(enumerate_moral_dags(complete_graph("123"))) == 6
    assert len(enumerate_moral_dags(empty_graph("123"))) == 1


def test_dag_from_arrows(chain):
    dag = dag_from_arrows(chain, [("2", "1"), ("2", "3")])
    assert dag.parent_map() == {"1": frozenset({"2"}), "2": frozenset(), "3": frozenset({"2"})}
    with pytest.raises(GraphError):
        dag_from_arrows(chain, [("1", "2"), ("3", "2")])  # v-structure


def test_class_and_labelled_counts():
    assert [len(decomposable_graph_classes(n)) for n in range(1, 7)] == [1, 2, 4, 10, 27, 94]
    assert [len(decomposable_graphs([str(i) for i in range(n)])) for n in range(1, 6)] == [1, 2, 8, 61, 822]


def test_complement_cliques_of_chain(chain):
    got = {chain.labels(m) for m in complement_clique_masks(chain)}
    assert got == {frozenset(), frozenset("1"), frozenset("2"), frozenset("3"), frozenset("13")}


def test_simplicial_vertices(chain):
    assert simplicial_vertices(chain) == frozenset({"1", "3"})


def test_toggle_round_trip(chain):
    h = chain.toggle(0, 2)
    assert h.has_edge("1", "3")
    assert h.toggle(0, 2) == chain


@pytest.mark.parametrize("edges", [[("1", "1")], [("1", "2"), ("2", "1")], [("1", "9")], [("1",)]])
def test_bad_edges(edges):
    with pytest.raises(GraphError):
        UndirectedGraph.from_edges("123", edges)


def test_json_round_trip(tmp_path, chain):
    path = tmp_path / "g.json"
    write_graph(chain, path)
    assert read_graph(path) == chain
    assert graph_from_json(json.loads(path.read_text())) == chain


def test_all_graphs_count():
    assert sum(1 for _ in all_graphs("1234")) == 64
    assert all(len(list(bits(g.adj[0]))) <= 3 for g in all_graphs("1234"))
