import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphcount.bayes import Observations
from graphcount.graph import NotDecomposableError, cycle_graph, decomposable_graphs, empty_graph, is_decomposable, path_graph
from graphcount.models import NmParams, nm_sample
from graphcount.select import (
    ChainConfig,
    ChainTrace,
    ConfigError,
    GraphScorer,
    chain_report,
    exact_posterior,
    exact_report,
    log_bayes_factor,
    mh_step,
    mh_transition_matrix,
    naive_log_bayes_factor,
    propose,
    run_chain,
    total_variation,
    vertex_pairs,
)

from conftest import chordal_graphs


def planted_data(k=60, seed=1):
    g = path_graph("abcd")
    rows = nm_sample(NmParams(g, 2.0, [0.3, 0.2, 0.25, 0.2]), rng=seed, size=k)
    return Observations(g.vertices, rows)


@given(chordal_graphs(min_n=4, max_n=5), st.data())
def test_local_bayes_factor_matches_naive(g, data):
    a, b = data.draw(st.sampled_from(vertex_pairs(g.n)))
    h = g.toggle(a, b)
    if not is_decomposable(h):
        return
    rows = np.array([[data.draw(st.integers(0, 4)) for _ in range(g.n)] for _ in range(data.draw(st.integers(1, 6)))])
    obs = Observations(g.vertices, rows)
    local = log_bayes_factor(h, g, obs, 1.3, 0.8, 2.0)
    assert local == pytest.approx(naive_log_bayes_factor(h, g, obs, 1.3, 0.8, 2.0), abs=1e-9)
    assert log_bayes_factor(g, h, obs, 1.3, 0.8, 2.0) == pytest.approx(-local, abs=1e-12)


def test_two_hundred_random_one_edge_pairs():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 200:
        n = int(rng.integers(4, 6))
        graphs = decomposable_graphs([str(i) for i in range(n)])
        g = graphs[rng.integers(len(graphs))]
        pairs = vertex_pairs(n)
        h = g.toggle(*pairs[rng.integers(len(pairs))])
        if not is_decomposable(h):
            continue
        obs = Observations(g.vertices, rng.integers(0, 5, size=(int(rng.integers(1, 20)), n)))
        alpha, beta, r = rng.uniform(0.2, 3.0, n), rng.uniform(0.2, 3.0), int(rng.integers(1, 4))
        local = log_bayes_factor(g, h, obs, alpha, beta, r)
        assert local == pytest.approx(naive_log_bayes_factor(g, h, obs, alpha, beta, r), abs=1e-9)
        checked += 1


def test_bayes_factor_general_pairs():
    obs = planted_data()
    g1, g2 = path_graph("abcd"), empty_graph("abcd")
    assert log_bayes_factor(g1, g1, obs) == 0.0
    assert log_bayes_factor(g1, g2, obs) == pytest.approx(naive_log_bayes_factor(g1, g2, obs), abs=1e-9)
    with pytest.raises(NotDecomposableError):
        log_bayes_factor(cycle_graph("abcd"), g2, obs)


def test_scorer_matches_marginal_likelihood():
    obs = planted_data()
    scorer = GraphScorer(obs.labels, obs, 1.0, 1.0, 2.0)
    g1, g2 = path_graph("abcd"), empty_graph("abcd")
    diff = scorer.log_marginal_likelihood(g1) - scorer.log_marginal_likelihood(g2)
    assert diff == pytest.approx(naive_log_bayes_factor(g1, g2, obs, 1.0, 1.0, 2.0), abs=1e-9)


def test_propose_is_uniform_over_pairs():
    rng = np.random.default_rng(0)
    g = empty_graph("abcd")
    counts = {}
    for _ in range(12_000):
        h = propose(g, rng)
        counts[h.key()] = counts.get(h.key(), 0) + 1
    assert len(counts) == 6
    assert all(abs(c / 12_000 - 1 / 6) < 0.02 for c in counts.values())


def test_detailed_balance():
    obs = planted_data(k=20)
    scorer = GraphScorer(obs.labels, obs, 1.0, 1.0, 2.0)
    graphs = decomposable_graphs(list(obs.labels))
    P = mh_transition_matrix(graphs, scorer)
    np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
    post = exact_posterior(obs, 1.0, 1.0, 2.0)
    pi = np.array([post[g] for g in graphs])
    flow = pi[:, None] * P
    np.testing.assert_allclose(flow, flow.T, atol=1e-14)
    np.testing.assert_allclose(pi @ P, pi, atol=1e-12)


def test_mh_step_never_leaves_decomposable_graphs():
    obs = planted_data(k=10)
    scorer = GraphScorer(obs.labels, obs, 1.0, 1.0, 2.0)
    trace = ChainTrace(empty_graph("abcd"))
    rng = np.random.default_rng(4)
    for _ in range(400):
        mh_step(trace, scorer, rng)
        assert is_decomposable(trace.current)
    assert trace.proposed == 400 == trace.recorded
    assert trace.proposed_nondecomposable > 0


def test_chain_is_seeded():
    obs = planted_data(k=10)
    cfg = ChainConfig(steps=2000, seed=9, r=2)
    a, b = run_chain(obs, cfg), run_chain(obs, cfg)
    assert a.visit_counts == b.visit_counts
    assert a.recorded == 2000 - 200
    merged = run_chain(obs, cfg, chains=3)
    assert merged.recorded == 3 * 1800


def test_chain_matches_exact_posterior_small():
    rows = nm_sample(NmParams(path_graph("abc"), 1.0, [0.3, 0.3, 0.3]), rng=2, size=30)
    obs = Observations(("a", "b", "c"), rows)
    trace = run_chain(obs, ChainConfig(steps=40_000, seed=5))
    exact = {g.key(): p for g, p in exact_posterior(obs).items()}
    assert total_variation(dict(trace.fractions()), exact) < 0.03


def test_exact_posterior_sums_to_one_and_is_uniform_without_data():
    post = exact_posterior(Observations.empty("abc"))
    assert len(post) == 8
    assert sum(post.values()) == pytest.approx(1.0, abs=1e-12)
    assert max(post.values()) == pytest.approx(1 / 8)


@pytest.mark.parametrize("kwargs", [
    {"steps": 0}, {"steps": 10, "burn_in": 10}, {"steps": 10, "r": 0}, {"steps": 10, "beta": 0.0}, {"steps": 2.5},
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        ChainConfig(**kwargs)


def test_scorer_rejects_bad_hyperparameters():
    with pytest.raises(ConfigError):
        GraphScorer("ab", np.zeros((1, 2)), alpha=[1, 2, 3])
    with pytest.raises(ConfigError):
        GraphScorer("ab", np.zeros((1, 2)), alpha=-1)
    with pytest.raises(ConfigError):
        run_chain(np.zeros((1, 2)), ChainConfig(steps=5))


def test_reports():
    obs = planted_data(k=10)
    cfg = ChainConfig(steps=500, seed=1, r=2)
    scorer = GraphScorer(obs.labels, obs, 1.0, 1.0, 2)
    rep = chain_report(run_chain(obs, cfg), scorer, cfg)
    assert rep["hyperparameters"]["r"] == 2
    assert sum(r["visit_fraction"] for r in rep["results"]) == pytest.approx(1.0, abs=1e-9)
    ex = exact_report(exact_posterior(obs, r=2), scorer)
    assert len(ex["results"]) == 61
    assert ex["results"][0]["posterior"] >= ex["results"][-1]["posterior"]
    assert math.isfinite(ex["results"][0]["log_score"])
