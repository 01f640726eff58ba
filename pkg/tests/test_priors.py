import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats
from scipy.stats import qmc

from graphcount.graph import canonical_dag, complete_graph, decompose, empty_graph, enumerate_moral_dags, path_graph
from graphcount.oracle import exact_K, exact_K_dag, exact_k, exact_k_dag
from graphcount.polynomials import x_from_u, y_from_w
from graphcount.priors import (
    DirParams,
    IDirParams,
    PriorError,
    dir_clique_project,
    dir_log_pdf,
    dir_sample,
    dir_u_log_pdf,
    idir_clique_project,
    idir_log_pdf,
    idir_sample,
    idir_w_log_pdf,
    log_jacobian_u,
    log_jacobian_w,
    log_K,
    log_K_cliques,
    log_K_per_vertex,
    log_k,
    log_k_cliques,
    log_k_per_vertex,
)

from conftest import chordal_graphs


def test_chain_constants(chain_structure):
    assert log_K(chain_structure, None, [1, 1, 1], 1) == pytest.approx(math.log(4))
    assert log_k(chain_structure, None, [1, 1, 1], 3) == pytest.approx(math.log(2))


def test_complete_graph_constant_is_dirichlet():
    alpha, beta = np.array([0.5, 2.0, 1.5]), 0.7
    s = decompose(complete_graph("abc"))
    full = np.append(alpha, beta)
    expect = math.lgamma(full.sum()) - sum(math.lgamma(a) for a in full)
    assert log_K(s, None, alpha, beta) == pytest.approx(expect)


@given(chordal_graphs(max_n=5), st.data())
def test_two_forms_agree(g, data):
    alpha = np.array([data.draw(st.floats(0.1, 5.0)) for _ in range(g.n)])
    beta = data.draw(st.floats(0.1, 5.0))
    s = decompose(g)
    big = beta + alpha.sum() + data.draw(st.floats(0.1, 3.0))
    for dag in enumerate_moral_dags(g):
        assert log_K_per_vertex(dag, alpha, beta) == pytest.approx(log_K_cliques(s, alpha, beta), abs=1e-10)
        assert log_k_per_vertex(dag, alpha, big) == pytest.approx(log_k_cliques(s, alpha, big), abs=1e-10)


@given(chordal_graphs(max_n=4), st.lists(st.integers(1, 4), min_size=4, max_size=4), st.integers(1, 3))
def test_exact_constants(g, alpha, beta):
    alpha = alpha[: g.n]
    s = decompose(g)
    assert log_K(s, None, alpha, beta) == pytest.approx(math.log(exact_K(g, alpha, beta)), abs=1e-12)
    top = beta + sum(alpha)
    assert log_k(s, None, alpha, top) == pytest.approx(math.log(exact_k(g, alpha, top)), abs=1e-12)
    for dag in enumerate_moral_dags(g):
        assert exact_K_dag(dag, alpha, beta) == exact_K(g, alpha, beta)
        assert exact_k_dag(dag, alpha, top) == exact_k(g, alpha, top)


def test_parameter_errors(chain):
    with pytest.raises(PriorError):
        DirParams(chain, [1, -1, 1], 1)
    with pytest.raises(PriorError):
        DirParams(chain, [1, 1, 1], 0)
    with pytest.raises(PriorError):
        IDirParams(chain, [1, 1, 1], 2.0)  # must exceed the largest clique total


@given(chordal_graphs(max_n=4), st.data())
def test_change_of_variables(g, data):
    alpha = np.array([data.draw(st.floats(0.3, 4.0)) for _ in range(g.n)])
    beta = data.draw(st.floats(0.3, 4.0))
    u = np.array([data.draw(st.floats(0.05, 0.95)) for _ in range(g.n)])
    w = np.array([data.draw(st.floats(0.05, 20.0)) for _ in range(g.n)])
    p = DirParams(g, alpha, beta)
    q = IDirParams(g, alpha, beta + alpha.sum() + 0.5)
    for dag in enumerate_moral_dags(g):
        lhs = dir_log_pdf(p, x_from_u(dag, u)) + log_jacobian_u(dag, u)
        assert lhs == pytest.approx(dir_u_log_pdf(p, dag, u), abs=1e-9)
        lhs = idir_log_pdf(q, y_from_w(dag, w)) + log_jacobian_w(dag, w)
        assert lhs == pytest.approx(idir_w_log_pdf(q, dag, w), abs=1e-9)


def test_density_outside_domain(chain):
    p = DirParams(chain, [1, 1, 1], 1)
    assert dir_log_pdf(p, [0.5, 0.3, 0.5]) == -math.inf
    out = dir_log_pdf(p, np.array([[0.1, 0.2, 0.3], [0.5, 0.3, 0.5]]))
    assert np.isfinite(out[0]) and out[1] == -math.inf
    assert idir_log_pdf(IDirParams(chain, [1, 1, 1], 3), [1.0, -1.0, 1.0]) == -math.inf


def test_densities_integrate_to_one(chain):
    dag = canonical_dag(chain)
    p = DirParams(chain, [1.5, 2.0, 1.2], 1.8)
    q = IDirParams(chain, [1.5, 2.0, 1.2], 6.0)
    t = qmc.Sobol(3, seed=3).random(2 ** 15)
    t = np.clip(t, 1e-9, 1 - 1e-9)
    # u ~ uniform cube covers M_G once
    dens = np.exp(dir_log_pdf(p, x_from_u(dag, t)) + log_jacobian_u(dag, t))
    assert dens.mean() == pytest.approx(1.0, abs=5e-3)
    w = t / (1 - t)
    dens = np.exp(idir_log_pdf(q, y_from_w(dag, w)) + log_jacobian_w(dag, w) - 2 * np.log1p(-t).sum(axis=1))
    assert dens.mean() == pytest.approx(1.0, abs=5e-3)


def test_samplers_in_domain_and_reproducible(rng):
    g = path_graph("1234")
    p = DirParams(g, [0.5, 1.0, 2.0, 0.8], 1.5)
    xs = dir_sample(p, rng=rng, size=2000)
    assert xs.shape == (2000, 4)
    assert np.all(np.isfinite(dir_log_pdf(p, xs)))
    np.testing.assert_array_equal(dir_sample(p, rng=5, size=3), dir_sample(p, rng=5, size=3))
    q = IDirParams(g, [0.5, 1.0, 2.0, 0.8], 5.0)
    ys = idir_sample(q, rng=rng, size=2000)
    assert np.all(ys > 0)


def test_dirichlet_sample_on_complete_graph(rng):
    g = complete_graph("abc")
    alpha, beta = np.array([1.0, 2.0, 3.0]), 2.0
    xs = dir_sample(DirParams(g, alpha, beta), rng=rng, size=20_000)
    mean = np.append(alpha, beta) / (alpha.sum() + beta)
    np.testing.assert_allclose(xs.mean(axis=0), mean[:3], atol=0.01)


def test_clique_projection_is_dirichlet(rng):
    g = path_graph("123")
    alpha, beta = np.array([1.2, 0.8, 2.0]), 1.5
    p = DirParams(g, alpha, beta)
    xs = dir_sample(p, rng=rng, size=20_000)
    proj = dir_clique_project(p, xs, ["1", "2"])
    assert proj.shape == (20_000, 2)
    ok = [stats.kstest(proj[:, k], stats.beta(alpha[k], alpha[:2].sum() - alpha[k] + beta).cdf).pvalue for k in range(2)]
    assert min(ok) > 0.001


def test_idir_projection_shape():
    g = path_graph("123")
    q = IDirParams(g, [1, 1, 1], 4)
    ys = idir_sample(q, rng=0, size=10)
    assert idir_clique_project(q, ys, ["2", "3"]).shape == (10, 2)


def test_disconnected_u_laws():
    g = empty_graph("ab")
    p = DirParams(g, [2.0, 3.0], 1.5)
    assert p.u_beta_params(canonical_dag(g)) == [(2.0, 1.5), (3.0, 1.5)]
