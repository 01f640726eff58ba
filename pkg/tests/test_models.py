import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from graphcount.graph import (
    canonical_dag,
    complete_graph,
    decompose,
    empty_graph,
    enumerate_moral_dags,
    neighbors,
    path_graph,
    simplicial_vertices,
    star_graph,
)
from graphcount.models import (
    MultParams,
    NmParams,
    SupportError,
    bivariate_log_pmf,
    classical_mult_log_pmf,
    classical_nm_log_pmf,
    clique_marginal_log_pmf,
    clique_marginal_x,
    log_coeff_C,
    log_coeff_c,
    log_mgf,
    mult_log_pmf,
    mult_log_pmf_cliques,
    mult_log_pmf_directed,
    mult_sample,
    mult_support,
    nm_log_pmf,
    nm_log_pmf_cliques,
    nm_log_pmf_directed,
    nm_sample,
    reduced_chain_params,
)
from graphcount.oracle import brute_pmf_sum, count_vectors, exact_c, exact_C, marginal_table
from graphcount.polynomials import OutOfDomainError

from conftest import chordal_graphs, points_in_M_G

X = np.array([0.1, 0.2, 0.3])


def test_coefficient_examples(chain_structure):
    assert log_coeff_C(chain_structure, [0, 0, 0], 2.5) == 0.0
    assert log_coeff_C(chain_structure, [1, 1, 1], 2) == pytest.approx(math.log(18))
    assert log_coeff_c(chain_structure, [1, 0, 1], 1) == 0.0
    with pytest.raises(SupportError):
        log_coeff_c(chain_structure, [1, 1, 1], 1)


def test_complete_graph_coefficient_is_multinomial():
    s = decompose(complete_graph("abc"))
    n, r = np.array([2, 1, 3]), 1.5
    expect = math.lgamma(r + 6) - math.lgamma(r) - sum(math.lgamma(k + 1) for k in n)
    assert log_coeff_C(s, n, r) == pytest.approx(expect)


@given(chordal_graphs(max_n=5), st.lists(st.integers(0, 3), min_size=5, max_size=5), st.integers(1, 4))
def test_log_coefficients_match_exact(g, n, r):
    n = n[: g.n]
    s = decompose(g)
    assert log_coeff_C(s, n, r) == pytest.approx(math.log(exact_C(g, n, r)), abs=1e-12)
    c = exact_c(g, n, r)
    if c:
        assert log_coeff_c(s, n, r) == pytest.approx(math.log(c), abs=1e-12)


def test_pmf_examples(chain):
    p = NmParams(chain, 2, X)
    assert nm_log_pmf(p, [1, 1, 1]) == pytest.approx(math.log(18 * 0.006 * 0.43 ** 2), rel=1e-13)
    assert math.exp(nm_log_pmf(p, [1, 1, 1])) == pytest.approx(0.0199692, rel=1e-6)
    assert nm_log_pmf(p, [0, 0, 0]) == pytest.approx(2 * math.log(0.43))
    q = MultParams(chain, 1, [1, 1, 1])
    assert mult_log_pmf(q, [1, 0, 1]) == pytest.approx(math.log(0.2))
    assert mult_log_pmf(MultParams(chain, 3, [1, 2, 1]), [0, 0, 0]) == pytest.approx(-3 * math.log(6))


def test_complete_graph_is_classical(rng):
    g = complete_graph("ab")
    x, y = np.array([0.2, 0.5]), np.array([0.7, 1.3])
    n = count_vectors(2, 6)
    np.testing.assert_allclose(nm_log_pmf(NmParams(g, 2.5, x), n), classical_nm_log_pmf(n, 2.5, x))
    m = mult_support(g, 4)
    np.testing.assert_allclose(mult_log_pmf(MultParams(g, 4, y), m), classical_mult_log_pmf(m, 4, y))
    probs = np.append(y, 1) / (1 + y.sum())
    full = np.column_stack([m, 4 - m.sum(axis=1)])
    np.testing.assert_allclose(mult_log_pmf(MultParams(g, 4, y), m), stats.multinomial.logpmf(full, 4, probs))


def test_disconnected_graph_is_independent():
    g = empty_graph("abc")
    x, y = np.array([0.2, 0.5, 0.3]), np.array([0.7, 1.3, 2.0])
    n = count_vectors(3, 4)
    indep = sum(stats.nbinom.logpmf(n[:, i], 1.5, 1 - x[i]) for i in range(3))
    np.testing.assert_allclose(nm_log_pmf(NmParams(g, 1.5, x), n), indep)
    m = mult_support(g, 2)
    indep = sum(stats.binom.logpmf(m[:, i], 2, y[i] / (1 + y[i])) for i in range(3))
    np.testing.assert_allclose(mult_log_pmf(MultParams(g, 2, y), m), indep)


@given(chordal_graphs(max_n=4), st.data())
def test_three_forms_agree(g, data):
    x = points_in_M_G(data.draw, g)
    y = np.array([data.draw(st.floats(0.1, 4.0)) for _ in range(g.n)])
    r = data.draw(st.sampled_from([1, 2, 3]))
    p, q = NmParams(g, r + 0.5, x), MultParams(g, r, y)
    n = count_vectors(g.n, 4)
    m = mult_support(g, r)
    base_nm, base_mult = nm_log_pmf(p, n), mult_log_pmf(q, m)
    np.testing.assert_allclose(nm_log_pmf_cliques(p, n), base_nm, atol=1e-10)
    np.testing.assert_allclose(mult_log_pmf_cliques(q, m), base_mult, atol=1e-10)
    for dag in enumerate_moral_dags(g):
        np.testing.assert_allclose(nm_log_pmf_directed(p, n, dag), base_nm, atol=1e-10)
        np.testing.assert_allclose(mult_log_pmf_directed(q, m, dag), base_mult, atol=1e-10)


@given(chordal_graphs(max_n=4), st.data())
def test_mult_normalizes(g, data):
    y = np.array([data.draw(st.floats(0.1, 4.0)) for _ in range(g.n)])
    r = data.draw(st.integers(1, 4))
    assert brute_pmf_sum(MultParams(g, r, y)) == pytest.approx(1.0, abs=1e-10)


def test_nm_normalizes(chain):
    p = NmParams(star_graph("abcd"), 1.0, [0.1] * 4)
    assert 1 - 1e-4 <= brute_pmf_sum(p, 25) <= 1 + 1e-12


def test_mult_support_bernoulli(chain):
    sup = {tuple(v) for v in mult_support(chain, 1)}
    assert sup == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)}


def test_clique_marginal_examples(chain):
    assert clique_marginal_x(chain, X, ["2"])[0] == pytest.approx(0.2 / 0.63)
    np.testing.assert_allclose(clique_marginal_x(complete_graph("abc"), X, "abc"), X)
    # a simplicial vertex together with its neighbours: the vertex keeps its parameter
    g = star_graph("cabd")
    x = np.array([0.2, 0.1, 0.15, 0.3])
    for v in simplicial_vertices(g):
        clique = [v, *neighbors(g, v)]
        got = dict(zip([u for u in g.vertices if u in clique], clique_marginal_x(g, x, clique)))
        assert got[v] == pytest.approx(x[g.idx(v)])


@pytest.mark.parametrize("graph", [path_graph("1234"), star_graph("1234")])
def test_clique_marginal_matches_bruteforce(graph):
    x = np.array([0.08, 0.12, 0.1, 0.09])
    p = NmParams(graph, 1.5, x)
    for c in decompose(graph).clique_labels:
        labels = [v for v in graph.vertices if v in c]
        table, missing = marginal_table(p, labels, 30)
        assert missing < 1e-9
        for key in [(0, 0), (1, 0), (2, 3)]:
            assert math.exp(clique_marginal_log_pmf(p, labels, key)) == pytest.approx(table[key], abs=1e-8)


@given(chordal_graphs(min_n=2, max_n=4), st.data())
def test_mult_bivariate_matches_bruteforce(g, data):
    y = np.array([data.draw(st.floats(0.2, 3.0)) for _ in range(g.n)])
    r = data.draw(st.integers(1, 3))
    q = MultParams(g, r, y)
    i, j = g.vertices[0], g.vertices[-1]
    table, _ = marginal_table(q, [i, j])
    for ni in range(r + 1):
        for nj in range(r + 1):
            got = bivariate_log_pmf(q, i, j, ni, nj)
            assert math.exp(got) == pytest.approx(table.get((ni, nj), 0.0), abs=1e-10)


def test_chain_end_points_at_zero(chain):
    p = NmParams(chain, 2.0, X)
    assert reduced_chain_params(p, "1", "3") == pytest.approx((0.1, 0.2, 0.3))
    expect = 2 * math.log(0.43) - 2 * math.log(1 - 0.2)
    assert bivariate_log_pmf(p, "1", "3", 0, 0) == pytest.approx(expect, rel=1e-13)


def test_same_component_without_common_neighbours():
    # 1 and 4 are connected through 2-3 but share no neighbour
    g = path_graph("1234")
    p = NmParams(g, 1.0, [0.1, 0.15, 0.12, 0.1])
    table, missing = marginal_table(p, ["1", "4"], 40)
    assert missing < 1e-10
    for key in [(0, 0), (1, 2), (3, 1)]:
        assert math.exp(bivariate_log_pmf(p, "1", "4", *key)) == pytest.approx(table[key], abs=1e-9)


def test_different_components_are_independent():
    g = empty_graph("ab")
    p = NmParams(g, 2.0, [0.3, 0.4])
    assert reduced_chain_params(p, "a", "b")[1] == pytest.approx(0.0, abs=1e-15)
    got = bivariate_log_pmf(p, "a", "b", 2, 1)
    assert got == pytest.approx(stats.nbinom.logpmf(2, 2, 0.7) + stats.nbinom.logpmf(1, 2, 0.6))


def test_mgf(chain, rng):
    p = NmParams(chain, 2.0, X)
    assert log_mgf(p, [0, 0, 0]) == 0.0
    theta = np.array([0.1, -0.2, 0.05])
    draws = nm_sample(p, rng=rng, size=100_000)
    mc = np.log(np.mean(np.exp(draws @ theta)))
    assert log_mgf(p, theta) == pytest.approx(mc, abs=0.01)
    with pytest.raises(OutOfDomainError):
        log_mgf(p, [3.0, 0, 0])
    q = MultParams(chain, 2, [1, 2, 1])
    assert log_mgf(q, [0.5, 0, 0]) == pytest.approx(
        math.log(np.sum(np.exp(mult_log_pmf(q, mult_support(chain, 2)) + 0.5 * mult_support(chain, 2)[:, 0]))))


def test_sampler_reproducible(chain):
    p = NmParams(chain, 2.0, X)
    a = nm_sample(p, rng=7, size=50)
    b = nm_sample(p, rng=np.random.default_rng(7), size=50)
    np.testing.assert_array_equal(a, b)
    assert nm_sample(p, rng=1).shape == (3,)


def test_samplers_match_pmf(chain, rng):
    q = MultParams(chain, 2, [0.5, 1.0, 2.0])
    draws = mult_sample(q, dag=canonical_dag(chain), rng=rng, size=40_000)
    sup = mult_support(chain, 2)
    probs = np.exp(mult_log_pmf(q, sup))
    freq = np.array([np.mean(np.all(draws == s, axis=1)) for s in sup])
    assert 0.5 * np.abs(freq - probs).sum() < 0.02
    p = NmParams(chain, 1.0, X)
    draws = nm_sample(p, rng=rng, size=40_000)
    assert draws.mean(axis=0) == pytest.approx(
        [sum(n[i] * math.exp(nm_log_pmf(p, n)) for n in count_vectors(3, 30)) for i in range(3)], rel=0.05)
