"""Graph negative multinomial and graph multinomial count distributions.

All mass functions work in natural-log space and accept count arrays of shape
``(..., n)`` (last axis in graph vertex order).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .graph import (
    DecompStructure,
    GraphError,
    MoralDag,
    UndirectedGraph,
    bits,
    canonical_dag,
    decompose,
)
from .hypergeom import log_hyp2f1
from .polynomials import CliquePolynomial, OutOfDomainError, as_vector, in_M_G, u_coords, w_coords


class SupportError(ValueError):
    """Count vector outside the support of the multinomial-type model."""


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def as_counts(g: UndirectedGraph, n) -> np.ndarray:
    if isinstance(n, dict):
        n = [n[v] if v in n else n[int(v)] for v in g.vertices]
    arr = np.asarray(n)
    if arr.shape[-1] != g.n:
        raise GraphError(f"expected {g.n} counts, got {arr.shape[-1]}")
    if np.any(arr < 0) or np.any(arr != np.floor(arr)):
        raise ValueError("counts must be non-negative integers")
    return arr.astype(np.int64)


# -- parameter objects ------------------------------------------------------------

@dataclass(frozen=True)
class NmParams:
    graph: UndirectedGraph
    r: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.graph, self.x))
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.x.ndim != 1 or not in_M_G(self.graph, self.x):
            raise OutOfDomainError("x must lie in M_G")

    @cached_property
    def structure(self) -> DecompStructure:
        return decompose(self.graph)

    @cached_property
    def poly(self) -> CliquePolynomial:
        return CliquePolynomial(self.graph, self.x, -1)

    @cached_property
    def log_Delta(self) -> float:
        return math.log(self.poly.full())


@dataclass(frozen=True)
class MultParams:
    graph: UndirectedGraph
    r: int
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", as_vector(self.graph, self.y))
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("r must be a positive integer")
        object.__setattr__(self, "r", int(self.r))
        if self.y.ndim != 1 or np.any(~(self.y > 0)):
            raise OutOfDomainError("y must be strictly positive")

    @cached_property
    def structure(self) -> DecompStructure:
        return decompose(self.graph)

    @cached_property
    def poly(self) -> CliquePolynomial:
        return CliquePolynomial(self.graph, self.y, +1)

    @cached_property
    def log_delta(self) -> float:
        return math.log(self.poly.full())


# -- coefficients ---------------------------------------------------------------------

def _clique_sums(structure: DecompStructure, n):
    n = np.asarray(n, dtype=float)
    return n @ structure.clique_matrix.T, n @ structure.separator_matrix.T


def log_coeff_C(structure: DecompStructure, n, r: float):
    """log C_G(n, r) through rising factorials in log-gamma form."""
    n = as_counts(structure.graph, n)
    cl, sp = _clique_sums(structure, n)
    lg_r = gammaln(r)
    out = np.sum(gammaln(r + cl) - lg_r, axis=-1)
    if sp.shape[-1]:
        out = out - np.sum(structure.separator_multiplicity * (gammaln(r + sp) - lg_r), axis=-1)
    return out - np.sum(gammaln(n + 1.0), axis=-1)


def in_support(structure: DecompStructure, n, r: int):
    """True where max over maximal cliques of |n_C| is at most r."""
    cl, _ = _clique_sums(structure, as_counts(structure.graph, n))
    return np.all(cl <= r, axis=-1)


def log_coeff_c(structure: DecompStructure, n, r: int):
    """log c_G(n, r) through descending factorials; raises outside N_{G,r}."""
    n = as_counts(structure.graph, n)
    if not np.all(in_support(structure, n, r)):
        raise SupportError(f"counts exceed r={r} on some maximal clique")
    cl, sp = _clique_sums(structure, n)
    lg = gammaln(r + 1.0)
    out = np.sum(lg - gammaln(r - cl + 1.0), axis=-1)
    if sp.shape[-1]:
        out = out - np.sum(structure.separator_multiplicity * (lg - gammaln(r - sp + 1.0)), axis=-1)
    return out - np.sum(gammaln(n + 1.0), axis=-1)


# -- mass functions ------------------------------------------------------------

def nm_log_pmf(p: NmParams, n):
    n = as_counts(p.graph, n)
    return log_coeff_C(p.structure, n, p.r) + n @ np.log(p.x) + p.r * p.log_Delta


def mult_log_pmf(p: MultParams, n):
    n = as_counts(p.graph, n)
    return log_coeff_c(p.structure, n, p.r) + n @ np.log(p.y) - p.r * p.log_delta


def nb_log_pmf(k, shape, u):
    """Univariate negative binomial: C(shape+k-1, k) u^k (1-u)^shape."""
    k = np.asarray(k, dtype=float)
    return gammaln(shape + k) - gammaln(shape) - gammaln(k + 1.0) + k * np.log(u) + shape * np.log1p(-u)


def binom_log_pmf(k, trials, w):
    """Binomial in odds form: C(trials, k) w^k (1+w)^(-trials)."""
    k = np.asarray(k, dtype=float)
    trials = np.asarray(trials, dtype=float)
    with np.errstate(invalid="ignore"):
        out = (gammaln(trials + 1.0) - gammaln(k + 1.0) - gammaln(trials - k + 1.0)
               + k * np.log(w) - trials * np.log1p(w))
    return np.where((k <= trials) & (k >= 0), out, -np.inf)


def classical_nm_log_pmf(n, r, x):
    """Negative multinomial on a complete graph: C(r+|n|-1, n) (1-|x|)^r x^n."""
    n = np.asarray(n, dtype=float)
    x = np.asarray(x, dtype=float)
    tot = n.sum(axis=-1)
    return (gammaln(r + tot) - gammaln(r) - gammaln(n + 1.0).sum(axis=-1)
            + n @ np.log(x) + r * math.log1p(-x.sum()))


def classical_mult_log_pmf(n, r, y):
    """Multinomial with r trials in odds form: r!/(n!(r-|n|)!) y^n (1+|y|)^(-r)."""
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    tot = n.sum(axis=-1)
    with np.errstate(invalid="ignore"):
        out = (gammaln(r + 1.0) - gammaln(n + 1.0).sum(axis=-1) - gammaln(r - tot + 1.0)
               + n @ np.log(y) - r * math.log1p(y.sum()))
    return np.where(tot <= r, out, -np.inf)


def _parent_sums(dag: MoralDag, n):
    n = np.asarray(n, dtype=float)
    pa = np.zeros((dag.graph.n, dag.graph.n))
    for i, m in enumerate(dag.parents):
        for j in bits(m):
            pa[i, j] = 1.0
    return n @ pa.T


def nm_log_pmf_directed(p: NmParams, n, dag: Optional[MoralDag] = None):
    """Product of negative binomial conditionals along a moral DAG."""
    dag = dag or canonical_dag(p.graph)
    n = as_counts(p.graph, n)
    u = u_coords(dag, p.x)
    return np.sum(nb_log_pmf(n, p.r + _parent_sums(dag, n), u), axis=-1)


def mult_log_pmf_directed(p: MultParams, n, dag: Optional[MoralDag] = None):
    """Product of binomial conditionals along a moral DAG."""
    dag = dag or canonical_dag(p.graph)
    n = as_counts(p.graph, n)
    w = w_coords(dag, p.y)
    return np.sum(binom_log_pmf(n, p.r - _parent_sums(dag, n), w), axis=-1)


def nm_log_pmf_cliques(p: NmParams, n):
    """Clique marginals over separator marginals (classical negative multinomials)."""
    n = as_counts(p.graph, n)
    s = p.structure
    out = 0.0
    for c in s.maximal_cliques:
        idx = list(bits(c))
        out = out + classical_nm_log_pmf(n[..., idx], p.r, _clique_x(p.graph, p.poly, c))
    for sep, nu in s.separators:
        idx = list(bits(sep))
        out = out - nu * classical_nm_log_pmf(n[..., idx], p.r, _clique_x(p.graph, p.poly, sep))
    return out


def mult_log_pmf_cliques(p: MultParams, n):
    n = as_counts(p.graph, n)
    s = p.structure
    out = 0.0
    for c in s.maximal_cliques:
        idx = list(bits(c))
        out = out + classical_mult_log_pmf(n[..., idx], p.r, _clique_x(p.graph, p.poly, c))
    for sep, nu in s.separators:
        idx = list(bits(sep))
        out = out - nu * classical_mult_log_pmf(n[..., idx], p.r, _clique_x(p.graph, p.poly, sep))
    return out


def mult_support(g: UndirectedGraph, r: int) -> np.ndarray:
    """All count vectors of N_{G,r} as rows."""
    s = decompose(g)
    grid = np.array(list(itertools.product(range(r + 1), repeat=g.n)), dtype=np.int64).reshape(-1, g.n)
    return grid[in_support(s, grid, r)]


# -- sampling ------------------------------------------------------------------

def nm_sample(p: NmParams, dag: Optional[MoralDag] = None, rng=None, size: Optional[int] = None) -> np.ndarray:
    """Draw from nm_G(r, x) vertex by vertex, parents first."""
    dag = dag or canonical_dag(p.graph)
    if dag.graph != p.graph:
        raise GraphError("DAG skeleton does not match the model graph")
    rng = _rng(rng)
    u = u_coords(dag, p.x)
    shape = () if size is None else (size,)
    out = np.zeros(shape + (p.graph.n,), dtype=np.int64)
    for i in dag.topo_order:
        k = p.r + sum(out[..., j] for j in bits(dag.parents[i]))
        # negative_binomial counts failures with success probability 1 - u
        out[..., i] = rng.negative_binomial(k, 1.0 - u[i], size=shape or None)
    return out


def mult_sample(p: MultParams, dag: Optional[MoralDag] = None, rng=None, size: Optional[int] = None) -> np.ndarray:
    dag = dag or canonical_dag(p.graph)
    if dag.graph != p.graph:
        raise GraphError("DAG skeleton does not match the model graph")
    rng = _rng(rng)
    w = w_coords(dag, p.y)
    shape = () if size is None else (size,)
    out = np.zeros(shape + (p.graph.n,), dtype=np.int64)
    for i in dag.topo_order:
        trials = p.r - sum(out[..., j] for j in bits(dag.parents[i]))
        out[..., i] = rng.binomial(trials, w[i] / (1.0 + w[i]), size=shape or None)
    return out


# -- marginals -------------------------------------------------------------------

def _clique_x(g: UndirectedGraph, poly: CliquePolynomial, clique: int) -> np.ndarray:
    rest = poly(g.full_mask & ~clique)
    return np.array([poly.values[..., i] * poly(poly.anti_neighbourhood(i)) / rest for i in bits(clique)])


def clique_marginal_x(g: UndirectedGraph, x, clique) -> np.ndarray:
    """Parameters x^C of the negative multinomial law of N_C, in vertex order of C."""
    c = g.mask(clique)
    if not g.is_clique_mask(c):
        raise GraphError(f"{sorted(clique)} is not a clique")
    return _clique_x(g, CliquePolynomial(g, as_vector(g, x), -1), c)


def clique_marginal_y(g: UndirectedGraph, y, clique) -> np.ndarray:
    c = g.mask(clique)
    if not g.is_clique_mask(c):
        raise GraphError(f"{sorted(clique)} is not a clique")
    return _clique_x(g, CliquePolynomial(g, as_vector(g, y), +1), c)


def clique_marginal_params(p, clique) -> np.ndarray:
    if isinstance(p, NmParams):
        return clique_marginal_x(p.graph, p.x, clique)
    return clique_marginal_y(p.graph, p.y, clique)


def clique_marginal_log_pmf(p, clique, n_c):
    """Log mass of N_C = n_C on a clique C (n_C in vertex order of C)."""
    theta = clique_marginal_params(p, clique)
    if isinstance(p, NmParams):
        return classical_nm_log_pmf(n_c, p.r, theta)
    return classical_mult_log_pmf(n_c, p.r, theta)


def reduced_chain_params(p, i, j) -> tuple:
    """Parameters of the 1-2-3 chain whose end-point law is the law of (N_i, N_j).

    Needs ``i`` and ``j`` distinct and non-adjacent. With common neighbours
    the parameters are ratios of clique polynomials over ``V`` minus the
    common neighbourhood; otherwise they come from matching the coefficients
    of the clique polynomial, which is affine in each of x_i and x_j.
    Vertices in different components give a middle parameter of zero.
    """
    g = p.graph
    a, b = g.idx(i), g.idx(j)
    if a == b or g.adj[a] >> b & 1:
        raise GraphError("reduced chain needs two distinct non-adjacent vertices")
    poly = p.poly
    nm = isinstance(p, NmParams)
    sep = g.adj[a] & g.adj[b]
    if sep:
        full = g.full_mask
        d_s = poly(full & ~sep)
        d_si = poly(full & ~sep & ~(1 << a))
        d_sj = poly(full & ~sep & ~(1 << b))
        d_g = poly(full)
        if nm:
            t1, t3 = 1.0 - d_s / d_si, 1.0 - d_s / d_sj
            t2 = d_s * (d_s - d_g) / (d_si * d_sj)
        else:
            t1, t3 = d_s / d_si - 1.0, d_s / d_sj - 1.0
            t2 = d_s * (d_g - d_s) / (d_si * d_sj)
        return float(t1), float(t2), float(t3)
    return _chain_params_by_coefficients(p, a, b)


def _chain_params_by_coefficients(p, a: int, b: int) -> tuple:
    g, poly = p.graph, p.poly
    anti_a, anti_b = poly.anti_neighbourhood(a), poly.anti_neighbourhood(b)
    const = poly(g.full_mask & ~(1 << a) & ~(1 << b))
    coef_a = poly(anti_a & ~(1 << b))
    coef_b = poly(anti_b & ~(1 << a))
    coef_ab = poly(anti_a & anti_b)
    v = poly.values
    t1 = v[a] * coef_ab / coef_b
    t3 = v[b] * coef_ab / coef_a
    ratio = const * coef_ab / (coef_a * coef_b)
    t2 = 1.0 - ratio if isinstance(p, NmParams) else ratio - 1.0
    return float(t1), float(t2), float(t3)


def bivariate_log_pmf(p, i, j, n_i: int, n_j: int) -> float:
    """Log mass of (N_i, N_j) = (n_i, n_j) for any two distinct vertices."""
    g = p.graph
    a, b = g.idx(i), g.idx(j)
    if a == b:
        raise GraphError("bivariate marginal needs two distinct vertices")
    if g.adj[a] >> b & 1:
        pair = [v for v in g.vertices if v in (g.vertices[a], g.vertices[b])]
        counts = [n_i if v == g.vertices[a] else n_j for v in pair]
        return float(clique_marginal_log_pmf(p, pair, counts))
    t1, t2, t3 = reduced_chain_params(p, i, j)
    r = p.r
    if isinstance(p, NmParams):
        if not abs(t2) < 1:
            raise OutOfDomainError(f"2F1 argument {t2} outside the unit disc")
        log_delta = math.log((1 - t1) * (1 - t3) - t2)
        return float(
            gammaln(r + n_i) - gammaln(r) - gammaln(n_i + 1.0)
            + gammaln(r + n_j) - gammaln(r) - gammaln(n_j + 1.0)
            + n_i * math.log(t1) + n_j * math.log(t3) + r * log_delta
            + log_hyp2f1(n_i + r, n_j + r, r, t2)
        )
    if n_i > r or n_j > r or n_i < 0 or n_j < 0:
        return -math.inf
    log_delta = math.log((1 + t1) * (1 + t3) + t2)
    return float(
        gammaln(r + 1.0) - gammaln(n_i + 1.0) - gammaln(r - n_i + 1.0)
        + gammaln(r + 1.0) - gammaln(n_j + 1.0) - gammaln(r - n_j + 1.0)
        + n_i * math.log(t1) + n_j * math.log(t3) - r * log_delta
        + log_hyp2f1(n_i - r, n_j - r, -r, -t2)
    )


# -- moment generating function ------------------------------------------------------

def log_mgf(p, theta) -> float:
    """log E exp(<theta, N>); raises when x e^theta leaves M_G (nm case)."""
    theta = as_vector(p.graph, theta)
    if isinstance(p, NmParams):
        shifted = p.x * np.exp(theta)
        if not in_M_G(p.graph, shifted):
            raise OutOfDomainError("x * exp(theta) is outside M_G; the MGF diverges")
        return p.r * (p.log_Delta - math.log(CliquePolynomial(p.graph, shifted, -1).full()))
    shifted = p.y * np.exp(theta)
    return p.r * (math.log(CliquePolynomial(p.graph, shifted, +1).full()) - p.log_delta)
