"""G-Dirichlet and G-inverted Dirichlet priors on the count-model parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy import stats
from scipy.special import gammaln

from .graph import DecompStructure, GraphError, MoralDag, UndirectedGraph, bits, canonical_dag, decompose
from .models import _clique_x, _rng
from .polynomials import CliquePolynomial, as_vector, in_M_G, x_from_u, y_from_w

TWO_FORM_TOL = 1e-10


class PriorError(ValueError):
    pass


def _mask_sum(alpha: np.ndarray, mask: int) -> float:
    return float(sum(alpha[i] for i in bits(mask)))


def _clique_totals(structure: DecompStructure, alpha: np.ndarray):
    return alpha @ structure.clique_matrix.T, alpha @ structure.separator_matrix.T


# -- normalizing constants ---------------------------------------------------------

def log_K_per_vertex(dag: MoralDag, alpha, beta: float) -> float:
    alpha = as_vector(dag.graph, alpha)
    out = 0.0
    for i, pa in enumerate(dag.parents):
        a_pa = _mask_sum(alpha, pa)
        out += math.lgamma(a_pa + alpha[i] + beta) - math.lgamma(a_pa + beta) - math.lgamma(alpha[i])
    return out


def log_K_cliques(structure: DecompStructure, alpha, beta: float) -> float:
    alpha = as_vector(structure.graph, alpha)
    cl, sp = _clique_totals(structure, alpha)
    m = structure.components
    return float(
        np.sum(gammaln(cl + beta)) - m * math.lgamma(beta) - np.sum(gammaln(alpha))
        - np.sum(structure.separator_multiplicity * gammaln(sp + beta))
    )


def log_k_per_vertex(dag: MoralDag, alpha, beta: float) -> float:
    alpha = as_vector(dag.graph, alpha)
    out = 0.0
    for i, pa in enumerate(dag.parents):
        a_pa = _mask_sum(alpha, pa)
        out += math.lgamma(beta - a_pa) - math.lgamma(beta - a_pa - alpha[i]) - math.lgamma(alpha[i])
    return out


def log_k_cliques(structure: DecompStructure, alpha, beta: float) -> float:
    alpha = as_vector(structure.graph, alpha)
    cl, sp = _clique_totals(structure, alpha)
    m = structure.components
    return float(
        m * math.lgamma(beta) + np.sum(structure.separator_multiplicity * gammaln(beta - sp))
        - np.sum(gammaln(alpha)) - np.sum(gammaln(beta - cl))
    )


def _check_dir(alpha: np.ndarray, beta: float) -> None:
    if np.any(~(alpha > 0)) or not beta > 0:
        raise PriorError("G-Dirichlet needs alpha > 0 and beta > 0")


def _check_idir(structure: DecompStructure, alpha: np.ndarray, beta: float) -> None:
    if np.any(~(alpha > 0)):
        raise PriorError("G-inverted Dirichlet needs alpha > 0")
    top = float(np.max(alpha @ structure.clique_matrix.T))
    if not beta > top:
        raise PriorError(f"beta={beta} must exceed the largest clique total {top}")


def _cross_check(a: float, b: float, what: str) -> None:
    if abs(a - b) > TWO_FORM_TOL * max(1.0, abs(a)):
        raise ArithmeticError(f"{what}: clique form {a} and per-vertex form {b} disagree")


def log_K(structure: DecompStructure, dag: Optional[MoralDag], alpha, beta: float) -> float:
    """log K_G(alpha, beta); both closed forms are evaluated and must agree."""
    alpha = as_vector(structure.graph, alpha)
    _check_dir(alpha, beta)
    value = log_K_cliques(structure, alpha, beta)
    _cross_check(value, log_K_per_vertex(dag or canonical_dag(structure.graph), alpha, beta), "log_K")
    return value


def log_k(structure: DecompStructure, dag: Optional[MoralDag], alpha, beta: float) -> float:
    """log k_G(alpha, beta); requires beta above every maximal-clique total of alpha."""
    alpha = as_vector(structure.graph, alpha)
    _check_idir(structure, alpha, beta)
    value = log_k_cliques(structure, alpha, beta)
    _cross_check(value, log_k_per_vertex(dag or canonical_dag(structure.graph), alpha, beta), "log_k")
    return value


# -- parameter objects ---------------------------------------------------------------

@dataclass(frozen=True)
class DirParams:
    graph: UndirectedGraph
    alpha: np.ndarray
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_vector(self.graph, self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        _check_dir(self.alpha, self.beta)

    @cached_property
    def structure(self) -> DecompStructure:
        return decompose(self.graph)

    @cached_property
    def log_norm(self) -> float:
        return log_K(self.structure, None, self.alpha, self.beta)

    def u_beta_params(self, dag: MoralDag):
        """Shape pairs of the independent Beta laws of the u-coordinates."""
        return [(self.alpha[i], self.beta + _mask_sum(self.alpha, dag.parents[i])) for i in range(self.graph.n)]


@dataclass(frozen=True)
class IDirParams:
    graph: UndirectedGraph
    alpha: np.ndarray
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_vector(self.graph, self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        _check_idir(self.structure, self.alpha, self.beta)

    @cached_property
    def structure(self) -> DecompStructure:
        return decompose(self.graph)

    @cached_property
    def log_norm(self) -> float:
        return log_k(self.structure, None, self.alpha, self.beta)

    def w_beta_params(self, dag: MoralDag):
        """Shape pairs of the independent beta-prime laws of the w-coordinates."""
        return [(self.alpha[i], self.beta - _mask_sum(self.alpha, dag.parents[i]) - self.alpha[i])
                for i in range(self.graph.n)]


# -- densities -------------------------------------------------------------------------

def dir_log_pdf(p: DirParams, x):
    x = as_vector(p.graph, x)
    inside = in_M_G(p.graph, x)
    if not np.any(inside):
        return -np.inf if np.ndim(inside) == 0 else np.full(np.shape(inside), -np.inf)
    safe = np.where(np.asarray(inside)[..., None], x, 0.5 / p.graph.n)
    delta = CliquePolynomial(p.graph, safe, -1).full()
    val = p.log_norm + (p.beta - 1.0) * np.log(delta) + np.log(safe) @ (p.alpha - 1.0)
    out = np.where(inside, val, -np.inf)
    return float(out) if np.ndim(out) == 0 else out


def idir_log_pdf(p: IDirParams, y):
    y = as_vector(p.graph, y)
    inside = np.all(y > 0, axis=-1)
    safe = np.where(inside[..., None], y, 1.0)
    delta = CliquePolynomial(p.graph, safe, +1).full()
    val = p.log_norm - p.beta * np.log(delta) + np.log(safe) @ (p.alpha - 1.0)
    out = np.where(inside, val, -np.inf)
    return float(out) if np.ndim(out) == 0 else out


def _n_parents(dag: MoralDag) -> np.ndarray:
    return np.array([len(list(bits(m))) for m in dag.parents], dtype=float)


def log_jacobian_u(dag: MoralDag, u) -> np.ndarray:
    """log |det dx/du| for x = x_from_u(u)."""
    return np.log1p(-np.asarray(u)) @ _n_parents(dag)


def log_jacobian_w(dag: MoralDag, w) -> np.ndarray:
    """log |det dy/dw| for y = y_from_w(w)."""
    return np.log1p(np.asarray(w)) @ _n_parents(dag)


def dir_u_log_pdf(p: DirParams, dag: MoralDag, u):
    """Joint log-density of the u-coordinates: independent Beta laws."""
    u = np.asarray(u, dtype=float)
    return sum(stats.beta.logpdf(u[..., i], a, b) for i, (a, b) in enumerate(p.u_beta_params(dag)))


def idir_w_log_pdf(p: IDirParams, dag: MoralDag, w):
    w = np.asarray(w, dtype=float)
    return sum(stats.betaprime.logpdf(w[..., i], a, b) for i, (a, b) in enumerate(p.w_beta_params(dag)))


# -- sampling --------------------------------------------------------------------------

def _size_shape(size):
    return () if size is None else (size,)


def dir_sample_u(p: DirParams, dag: Optional[MoralDag] = None, rng=None, size: Optional[int] = None):
    dag = dag or canonical_dag(p.graph)
    rng = _rng(rng)
    shape = _size_shape(size)
    u = np.empty(shape + (p.graph.n,))
    for i, (a, b) in enumerate(p.u_beta_params(dag)):
        u[..., i] = rng.beta(a, b, size=shape or None)
    return u


def dir_sample(p: DirParams, dag: Optional[MoralDag] = None, rng=None, size: Optional[int] = None) -> np.ndarray:
    """Draw x ~ Dir_G(alpha, beta) through independent Beta u-coordinates."""
    dag = dag or canonical_dag(p.graph)
    if dag.graph != p.graph:
        raise GraphError("DAG skeleton does not match the prior graph")
    u = dir_sample_u(p, dag, rng, size)
    # keep draws off the boundary where float rounding would leave M_G
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    return x_from_u(dag, u)


def idir_sample(p: IDirParams, dag: Optional[MoralDag] = None, rng=None, size: Optional[int] = None) -> np.ndarray:
    """Draw y ~ IDir_G(alpha, beta); each w_i is a ratio of two gamma variates."""
    dag = dag or canonical_dag(p.graph)
    if dag.graph != p.graph:
        raise GraphError("DAG skeleton does not match the prior graph")
    rng = _rng(rng)
    shape = _size_shape(size)
    w = np.empty(shape + (p.graph.n,))
    for i, (a, b) in enumerate(p.w_beta_params(dag)):
        w[..., i] = rng.standard_gamma(a, size=shape or None) / rng.standard_gamma(b, size=shape or None)
    w = np.maximum(w, np.finfo(float).tiny)
    return y_from_w(dag, w)


def dir_clique_project(p: DirParams, x, clique) -> np.ndarray:
    """Map x to its clique coordinates x^C; for Dir_G draws these follow Dir(alpha_C, beta)."""
    g = p.graph
    c = g.mask(clique)
    if not g.is_clique_mask(c):
        raise GraphError(f"{sorted(clique)} is not a clique")
    x = as_vector(g, x)
    proj = _clique_x(g, CliquePolynomial(g, x, -1), c)
    return np.moveaxis(proj, 0, -1)


def idir_clique_project(p: IDirParams, y, clique) -> np.ndarray:
    g = p.graph
    c = g.mask(clique)
    if not g.is_clique_mask(c):
        raise GraphError(f"{sorted(clique)} is not a clique")
    y = as_vector(g, y)
    return np.moveaxis(_clique_x(g, CliquePolynomial(g, y, +1), c), 0, -1)

