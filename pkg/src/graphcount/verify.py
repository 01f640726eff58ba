"""Numerical acceptance checks, one per criterion.

Each check returns a :class:`CheckResult` carrying the worst observed metric
next to its tolerance. ``run_checks`` drives them; the CLI ``verify`` command
and the acceptance tests both go through it.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import stats
from scipy.special import gammaln

from . import oracle
from .bayes import Observations, dirnm_log_pmf, idirmult_log_pmf, posterior_update
from .graph import (
    UndirectedGraph,
    bits,
    canonical_dag,
    component_masks,
    dag_from_arrows,
    decomposable_graph_classes,
    decomposable_graphs,
    decompose,
    enumerate_moral_dags,
    path_graph,
    simplicial_vertices,
    star_graph,
)
from .models import (
    MultParams,
    NmParams,
    bivariate_log_pmf,
    clique_marginal_log_pmf,
    log_coeff_C,
    log_coeff_c,
    mult_log_pmf,
    mult_log_pmf_cliques,
    mult_log_pmf_directed,
    mult_sample,
    mult_support,
    nm_log_pmf,
    nm_log_pmf_cliques,
    nm_log_pmf_directed,
    nm_sample,
)
from .polynomials import CliquePolynomial, u_coords, x_from_u
from .priors import (
    DirParams,
    IDirParams,
    dir_clique_project,
    dir_sample,
    idir_sample,
    log_K,
    log_K_cliques,
    log_K_per_vertex,
    log_k,
    log_k_cliques,
    log_k_per_vertex,
)
from .select import ChainConfig, exact_posterior, run_chain, total_variation

DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    number: int
    tag: str
    title: str
    passed: bool
    metric: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:>2} {self.tag:<14} metric={self.metric:.3g} "
                f"tol={self.tolerance:.3g} ({self.seconds:.1f}s) {self.detail}")

    def to_dict(self) -> dict:
        return asdict(self)


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))) if a.size else 0.0


def _abs(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def _random_x(g: UndirectedGraph, rng, size: int, high: float = 0.6) -> np.ndarray:
    """Points of M_G drawn through uniform u-coordinates on the canonical DAG."""
    return x_from_u(canonical_dag(g), rng.uniform(0.01, high, size=(size, g.n)))


def _graphs_up_to(n: int) -> list:
    return [g for k in range(1, n + 1) for g in decomposable_graphs(k)]


def _classes_up_to(n: int) -> list:
    return [g for k in range(1, n + 1) for g in decomposable_graph_classes(k)]


# -- 1 -----------------------------------------------------------------------------------

def check_polynomials(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    graphs = _classes_up_to(6)
    for g in graphs:
        x = _random_x(g, rng, 100)
        y = rng.exponential(1.0, size=(100, g.n))
        dx = CliquePolynomial(g, x, -1)
        dy = CliquePolynomial(g, y, +1)
        D, d = dx.full(), dy.full()
        for dag in enumerate_moral_dags(g):
            worst = max(worst, _rel(np.prod(1.0 - u_coords(dag, x), axis=-1), D))
        full = g.full_mask
        for i in range(g.n):
            anti = dx.anti_neighbourhood(i)
            worst = max(worst, _rel(dx(full & ~(1 << i)) - x[:, i] * dx(anti), D))
            worst = max(worst, _rel(dy(full & ~(1 << i)) + y[:, i] * dy(anti), d))
        comps = component_masks(g)
        worst = max(worst, _rel(np.prod([dx(m) for m in comps], axis=0), D))
        worst = max(worst, _rel(np.prod([dy(m) for m in comps], axis=0), d))
        worst = max(worst, _rel(CliquePolynomial(g, -y, -1).full(), d))
        worst = max(worst, _rel(oracle.clique_polynomial_by_cliques(g, x, -1), D))
        worst = max(worst, _rel(oracle.clique_polynomial_by_cliques(g, y, +1), d))
    return CheckResult(1, "polynomials", "clique-polynomial identities", worst <= 1e-12, worst, 1e-12,
                       f"{len(graphs)} graph classes, 100 draws each")


# -- 2 -----------------------------------------------------------------------------------

def _chain_nm_formula(n, r, x):
    n = np.asarray(n, dtype=float)
    n1, n2, n3 = n[..., 0], n[..., 1], n[..., 2]
    lr = lambda k: gammaln(r + k) - gammaln(r)
    return (lr(n1 + n2) + lr(n2 + n3) - lr(n2) - gammaln(n1 + 1) - gammaln(n2 + 1) - gammaln(n3 + 1)
            + n @ np.log(x) + r * math.log(1 - x[0] - x[1] - x[2] + x[0] * x[2]))


def _chain_mult_formula(n, r, y):
    n = np.asarray(n, dtype=float)
    n1, n2, n3 = n[..., 0], n[..., 1], n[..., 2]
    lf = lambda k: gammaln(r + 1) - gammaln(r - k + 1)
    return (lf(n1 + n2) + lf(n2 + n3) - lf(n2) - gammaln(n1 + 1) - gammaln(n2 + 1) - gammaln(n3 + 1)
            + n @ np.log(y) - r * math.log(1 + y[0] + y[1] + y[2] + y[0] * y[2]))


def check_examples(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    g = path_graph(3)
    g1 = dag_from_arrows(g, [("1", "2"), ("2", "3")])
    g2 = dag_from_arrows(g, [("2", "1"), ("3", "2")])
    g3 = dag_from_arrows(g, [("2", "1"), ("2", "3")])
    worst = 0.0
    points = [np.array([0.1, 0.2, 0.3])] + list(_random_x(g, rng, 50, 0.9))
    for x in points:
        x1, x2, x3 = x
        worst = max(worst, _rel(u_coords(g1, x), [x1 * (1 - x3) / (1 - x2 - x3), x2 / (1 - x3), x3]))
        worst = max(worst, _rel(u_coords(g2, x), [x1, x2 / (1 - x1), x3 * (1 - x1) / (1 - x1 - x2)]))
        worst = max(worst, _rel(u_coords(g3, x), [x1, x2 / ((1 - x1) * (1 - x3)), x3]))
    grid = oracle.count_vectors(3, 10)
    for r in (0.5, 1.0, 2.0, 3.7):
        for x in points[:10]:
            worst = max(worst, _abs(nm_log_pmf(NmParams(g, r, x), grid), _chain_nm_formula(grid, r, x)))
    for r in (1, 2, 3, 4):
        support = mult_support(g, r)
        for y in rng.exponential(1.0, size=(10, 3)):
            worst = max(worst, _abs(mult_log_pmf(MultParams(g, r, y), support), _chain_mult_formula(support, r, y)))
    p = NmParams(g, 2, [0.1, 0.2, 0.3])
    hand = [
        (p.poly.full(), 0.43),
        (math.exp(log_coeff_C(p.structure, [1, 1, 1], 2)), 18.0),
        (math.exp(nm_log_pmf(p, [1, 1, 1])), 0.0199692),
        (math.exp(mult_log_pmf(MultParams(g, 1, [1, 1, 1]), [1, 0, 1])), 0.2),
    ]
    for got, want in hand:
        worst = max(worst, _rel(got, want))
    return CheckResult(2, "examples", "chain worked examples", worst <= 1e-12, worst, 1e-12,
                       "three u-coordinate displays, chain PMF formulas, hand values")


# -- 3 -----------------------------------------------------------------------------------

def check_normalization(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    mult_err = 0.0
    for g in _graphs_up_to(5):
        for r in (1, 2, 3, 4):
            mult_err = max(mult_err, abs(oracle.brute_pmf_sum(MultParams(g, r, rng.exponential(1.0, g.n))) - 1.0))
    nm_short = 0.0
    shapes = [path_graph(3), path_graph(4), star_graph(4), star_graph(5)]
    for g in shapes:
        for r in (0.5, 1.0, 2.0):
            x = rng.dirichlet(np.ones(g.n)) * 0.4
            nm_short = max(nm_short, 1.0 - oracle.brute_pmf_sum(NmParams(g, r, x), 25))
    idir_err = 0.0
    for g in _graphs_up_to(4):
        s = decompose(g)
        for r in (1, 2, 3):
            alpha = rng.uniform(0.5, 2.0, g.n)
            beta = float(np.max(alpha @ s.clique_matrix.T)) + rng.uniform(0.5, 3.0)
            support = mult_support(g, r)
            total = sum(math.exp(idirmult_log_pmf(g, alpha, beta, r, n)) for n in support)
            idir_err = max(idir_err, abs(total - 1.0))
    dir_short = 0.0
    for g in (path_graph(3), star_graph(4)):
        alpha, beta = np.full(g.n, 0.5), 30.0
        vecs = oracle.count_vectors(g.n, 25)
        total = sum(math.exp(dirnm_log_pmf(g, alpha, beta, 1.0, n)) for n in vecs)
        dir_short = max(dir_short, 1.0 - total)
    ok = mult_err <= 1e-10 and nm_short <= 1e-4 and idir_err <= 1e-8 and dir_short <= 1e-4
    metric = max(mult_err / 1e-10, nm_short / 1e-4, idir_err / 1e-8, dir_short / 1e-4)
    detail = (f"mult |sum-1|={mult_err:.2e} nm missing={nm_short:.2e} "
              f"idirmult |sum-1|={idir_err:.2e} dirnm missing={dir_short:.2e}")
    return CheckResult(3, "normalization", "mass functions sum to one", ok, metric, 1.0,
                       detail + " (metric is worst ratio to its tolerance)")


# -- 4 -----------------------------------------------------------------------------------

def check_factorization(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for g in _graphs_up_to(5):
        grid = oracle.count_vectors(g.n, 5)
        p = NmParams(g, rng.uniform(0.5, 3.0), _random_x(g, rng, 1, 0.8)[0])
        q = MultParams(g, int(rng.integers(1, 5)), rng.exponential(1.0, g.n))
        base_nm = nm_log_pmf(p, grid)
        support = grid[np.all(grid @ q.structure.clique_matrix.T <= q.r, axis=1)]
        base_mult = mult_log_pmf(q, support)
        worst = max(worst, _abs(nm_log_pmf_cliques(p, grid), base_nm))
        worst = max(worst, _abs(mult_log_pmf_cliques(q, support), base_mult))
        for dag in enumerate_moral_dags(g):
            worst = max(worst, _abs(nm_log_pmf_directed(p, grid, dag), base_nm))
            worst = max(worst, _abs(mult_log_pmf_directed(q, support, dag), base_mult))
            checked += 1
    return CheckResult(4, "factorization", "joint = DAG product = clique/separator ratio", worst <= 1e-10,
                       worst, 1e-10, f"{checked} moral DAGs, |n| <= 5 (log-scale difference)")


# -- 5 -----------------------------------------------------------------------------------

def _marginal_graphs() -> list:
    return [
        path_graph(4),
        star_graph(4),
        UndirectedGraph.from_edges("1234", [("1", "2"), ("1", "3"), ("2", "3"), ("3", "4")]),
        UndirectedGraph.from_edges("12345", [("1", "2"), ("1", "3"), ("2", "3"), ("2", "4"), ("3", "4"), ("4", "5")]),
        UndirectedGraph.from_edges("12345", [("1", "2"), ("2", "3"), ("3", "4"), ("2", "5")]),
    ]


def check_marginals(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst, worst_tail = 0.0, 0.0
    pairs_checked = 0
    for g in _marginal_graphs():
        cutoff = 40 if g.n == 4 else 26
        x = rng.dirichlet(np.ones(g.n)) * 0.25
        p = NmParams(g, 1.5, x)
        q = MultParams(g, 3, rng.exponential(1.0, g.n))
        s = p.structure
        subsets = [g.labels(c) for c in s.maximal_cliques]
        subsets += [frozenset([v]) for v in g.vertices]
        for labels in subsets:
            labels = sorted(labels, key=g.idx)
            for params, cut in ((p, cutoff), (q, None)):
                table, tail = oracle.marginal_table(params, labels, cut)
                worst_tail = max(worst_tail, tail)
                for n_c, mass in table.items():
                    if sum(n_c) > 4:
                        continue
                    worst = max(worst, abs(math.exp(clique_marginal_log_pmf(params, labels, n_c)) - mass))
        for a in range(g.n):
            for b in range(a + 1, g.n):
                if g.adj[a] >> b & 1:
                    continue
                i, j = g.vertices[a], g.vertices[b]
                pairs_checked += 1
                for params, cut in ((p, cutoff), (q, None)):
                    table, tail = oracle.marginal_table(params, [i, j], cut)
                    worst_tail = max(worst_tail, tail)
                    for n_i in range(4):
                        for n_j in range(4):
                            mass = table.get((n_i, n_j), 0.0)
                            got = math.exp(bivariate_log_pmf(params, i, j, n_i, n_j))
                            worst = max(worst, abs(got - mass))
    ok = worst <= 1e-8 and worst_tail <= 1e-8
    return CheckResult(5, "marginals", "clique and bivariate marginals", ok, worst, 1e-8,
                       f"{pairs_checked} non-adjacent pairs; largest truncated mass {worst_tail:.1e}")


# -- 6 -----------------------------------------------------------------------------------

def check_constants(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for g in _classes_up_to(5):
        s = decompose(g)
        dags = enumerate_moral_dags(g)
        for _ in range(100):
            alpha = rng.uniform(0.1, 5.0, g.n)
            beta = rng.uniform(0.1, 5.0)
            beta_k = float(np.max(alpha @ s.clique_matrix.T)) + rng.uniform(0.05, 5.0)
            K = log_K_cliques(s, alpha, beta)
            k = log_k_cliques(s, alpha, beta_k)
            for dag in dags:
                worst = max(worst, abs(log_K_per_vertex(dag, alpha, beta) - K))
                worst = max(worst, abs(log_k_per_vertex(dag, alpha, beta_k) - k))
    exact_ok = True
    bridges = 0
    for g in _graphs_up_to(4):
        s = decompose(g)
        dags = enumerate_moral_dags(g)
        for n in oracle.count_vectors(g.n, 6 - g.n):
            n = n + 1
            prod_n = math.prod(int(v) for v in n)
            for r in (1, 2, 3):
                C = oracle.exact_C(g, n, r)
                ok = oracle.exact_K(g, n, r) == C * prod_n
                ok &= all(oracle.exact_K_dag(d, n, r) == C * prod_n for d in dags)
                ok &= oracle.exact_C_dag(dags[0], n, r) == C
                worst = max(worst, abs(log_K(s, None, n, r) - (log_coeff_C(s, n, r) + np.log(n).sum())))
                if np.all(n @ s.clique_matrix.T <= r):
                    c = oracle.exact_c(g, n, r)
                    ok &= oracle.exact_k(g, n, r + 1) == c * prod_n
                    ok &= all(oracle.exact_k_dag(d, n, r + 1) == c * prod_n for d in dags)
                    worst = max(worst, abs(log_k(s, None, n, r + 1) - (log_coeff_c(s, n, r) + np.log(n).sum())))
                exact_ok &= bool(ok)
                bridges += 1
    return CheckResult(6, "constants", "normalizing-constant forms and coefficient bridges",
                       worst <= 1e-10 and exact_ok, worst, 1e-10,
                       f"exact rational bridges {'hold' if exact_ok else 'FAIL'} on {bridges} (n, r) cases")


# -- 7 -----------------------------------------------------------------------------------

def _empirical_tv(samples: np.ndarray, support: np.ndarray, exact: np.ndarray) -> float:
    index = {tuple(v): k for k, v in enumerate(support.tolist())}
    counts = np.zeros(len(support))
    outside = 0
    for row, c in zip(*np.unique(samples, axis=0, return_counts=True)):
        k = index.get(tuple(row.tolist()))
        if k is None:
            outside += c
        else:
            counts[k] += c
    emp = counts / len(samples)
    return 0.5 * (np.abs(emp - exact).sum() + outside / len(samples) + max(0.0, 1.0 - exact.sum()))


def check_samplers(seed: int = DEFAULT_SEED, draws: int = 100_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    tv = 0.0
    for g in (path_graph(3), star_graph(4)):
        p = NmParams(g, 1.0, np.full(g.n, 0.05))
        support = oracle.count_vectors(g.n, 25)
        for dag in enumerate_moral_dags(g):
            tv = max(tv, _empirical_tv(nm_sample(p, dag, rng, draws), support, np.exp(nm_log_pmf(p, support))))
        q = MultParams(g, 2, np.full(g.n, 0.15))
        support = mult_support(g, 2)
        for dag in enumerate_moral_dags(g):
            tv = max(tv, _empirical_tv(mult_sample(q, dag, rng, draws), support, np.exp(mult_log_pmf(q, support))))
    pvals = []
    for g, alpha in ((path_graph(3), [1.2, 0.5, 2.0]), (star_graph(4), [0.7, 1.5, 2.5, 0.9])):
        p = DirParams(g, alpha, 1.7)
        x = dir_sample(p, rng=rng, size=draws)
        for v in sorted(simplicial_vertices(g), key=g.idx):
            i = g.idx(v)
            nb = sum(p.alpha[j] for j in bits(g.adj[i]))
            pvals.append(stats.kstest(x[:, i], stats.beta(p.alpha[i], p.beta + nb).cdf).pvalue)
            proj = dir_clique_project(p, x, [v])[:, 0]
            pvals.append(stats.kstest(proj, stats.beta(p.alpha[i], p.beta).cdf).pvalue)
        for dag in enumerate_moral_dags(g):
            u = u_coords(dag, x)
            for i, (a, b) in enumerate(p.u_beta_params(dag)):
                pvals.append(stats.kstest(u[:, i], stats.beta(a, b).cdf).pvalue)
    low = min(pvals)
    ok = tv <= 0.01 and low > 0.01
    return CheckResult(7, "samplers", "sampler laws", ok, tv, 0.01,
                       f"max TV over samplers; {len(pvals)} KS tests, smallest p={low:.3f} (level 0.01)")


# -- 8 -----------------------------------------------------------------------------------

def check_traces(seed: int = DEFAULT_SEED) -> CheckResult:
    mismatches = 0
    cases = 0
    for g in _graphs_up_to(4):
        for n in oracle.count_vectors(g.n, 6):
            cases += 1
            if oracle.trace_class_count(g, n) != oracle.exact_C(g, n, 1):
                mismatches += 1
        support = mult_support(g, 1)
        if {tuple(v) for v in support.tolist()} != oracle.bernoulli_support(g):
            mismatches += 1
        if any(oracle.exact_c(g, n, 1) != 1 for n in support):
            mismatches += 1
        if np.any(log_coeff_c(decompose(g), support, 1) != 0.0):
            mismatches += 1
    return CheckResult(8, "traces", "word classes count the r = 1 coefficients", mismatches == 0,
                       float(mismatches), 0.0, f"{cases} (graph, n) pairs, exact integer comparison")


# -- 9 -----------------------------------------------------------------------------------

def _mixture_check(values: np.ndarray, target: float) -> float:
    se = values.std(ddof=1) / math.sqrt(len(values))
    return abs(values.mean() - target) / se


def check_conjugacy(seed: int = DEFAULT_SEED, draws: int = 100_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    g = path_graph(3)
    s = decompose(g)
    r = 2.0
    alpha, beta = np.array([2.0, 1.5, 3.0]), 4.0
    prior = DirParams(g, alpha, beta)
    x = dir_sample(prior, rng=rng, size=draws)
    log_delta = np.log(CliquePolynomial(g, x, -1).full())
    z = 0.0
    for n in ([0, 0, 0], [1, 0, 2], [2, 1, 1], [0, 3, 0]):
        n = np.array(n)
        vals = np.exp(log_coeff_C(s, n, r) + np.log(x) @ n + r * log_delta)
        z = max(z, _mixture_check(vals, math.exp(dirnm_log_pmf(g, alpha, beta, r, n))))
    ip = IDirParams(g, alpha, 8.0)
    y = idir_sample(ip, rng=rng, size=draws)
    log_d = np.log(CliquePolynomial(g, y, +1).full())
    for n in ([0, 0, 0], [1, 0, 1], [0, 2, 0], [2, 0, 1]):
        n = np.array(n)
        vals = np.exp(log_coeff_c(s, n, 2) + np.log(y) @ n - 2 * log_d)
        z = max(z, _mixture_check(vals, math.exp(idirmult_log_pmf(g, alpha, 8.0, 2, n))))
    rows = np.array([[1, 0, 2], [0, 1, 1], [3, 0, 0]])
    data = Observations(g.vertices, rows)
    post = posterior_update(prior, data, r)
    exact = np.array_equal(post.alpha, alpha + rows.sum(axis=0)) and post.beta == beta + 3 * r
    ipost = posterior_update(ip, Observations(g.vertices, [[1, 0, 1], [0, 2, 0]]), 2)
    exact &= np.array_equal(ipost.alpha, alpha + [1, 2, 1]) and ipost.beta == 8.0 + 4
    step = posterior_update(posterior_update(prior, rows[:1], r), rows[1:], r)
    exact &= np.array_equal(step.alpha, post.alpha) and step.beta == post.beta
    return CheckResult(9, "conjugacy", "Dirichlet mixtures and conjugate updates", z <= 3.0 and bool(exact), z, 3.0,
                       f"max |MC mean - closed form| in standard errors; updates exact: {bool(exact)}")


# -- 10 ----------------------------------------------------------------------------------

def check_selection(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    g = path_graph(3)
    planted = NmParams(g, 3, [0.3, 0.3, 0.3])
    tv, seconds = 0.0, 0.0
    for k in (0, 50):
        data = Observations(g.vertices, nm_sample(planted, rng=rng, size=k))
        cfg = ChainConfig(steps=110_000, burn_in=10_000, seed=seed + k, r=3)
        t = time.perf_counter()
        trace = run_chain(data, cfg)
        seconds = max(seconds, time.perf_counter() - t)
        exact = {h.key(): pr for h, pr in exact_posterior(data, 1.0, 1.0, 3).items()}
        tv = max(tv, total_variation(dict(trace.fractions()), exact))
    data = Observations(g.vertices, nm_sample(planted, rng=rng, size=200))
    post = exact_posterior(data, 1.0, 1.0, 3)
    mode = max(post, key=post.get)
    trace = run_chain(data, ChainConfig(steps=110_000, burn_in=10_000, seed=seed, r=3))
    top = trace.fractions()[0][0]
    recovered = mode == g and top == g.key()
    ok = tv <= 0.02 and seconds <= 30.0 and recovered
    return CheckResult(10, "selection", "structure search against exact posterior", ok, tv, 0.02,
                       f"slowest chain {seconds:.1f}s; planted chain recovered: {recovered}")


CHECKS: list = [
    (1, "polynomials", check_polynomials),
    (2, "examples", check_examples),
    (3, "normalization", check_normalization),
    (4, "factorization", check_factorization),
    (5, "marginals", check_marginals),
    (6, "constants", check_constants),
    (7, "samplers", check_samplers),
    (8, "traces", check_traces),
    (9, "conjugacy", check_conjugacy),
    (10, "selection", check_selection),
]


def check_names() -> list:
    return [tag for _, tag, _ in CHECKS]


def run_check(key, seed: int = DEFAULT_SEED) -> CheckResult:
    for number, tag, fn in CHECKS:
        if key in (number, tag, str(number)):
            t = time.perf_counter()
            result = fn(seed)
            result.seconds = time.perf_counter() - t
            return result
    raise KeyError(f"unknown check {key!r}; choose from {check_names()}")


def run_checks(only: Optional[Iterable] = None, seed: int = DEFAULT_SEED,
               report: Optional[Callable[[CheckResult], None]] = None) -> list:
    keys = list(only) if only else [n for n, _, _ in CHECKS]
    results = []
    for key in keys:
        res = run_check(key, seed)
        if report:
            report(res)
        results.append(res)
    return results
