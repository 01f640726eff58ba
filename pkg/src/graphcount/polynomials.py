"""Clique polynomials of a graph and the DAG-indexed factorizing coordinates.

Parameter vectors are numpy arrays whose last axis follows the graph's vertex
order, so every routine here also works on a batch of parameter vectors of
shape ``(..., n)``.
"""
from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .graph import GraphError, MoralDag, UndirectedGraph, bits, canonical_dag

BOUNDARY_EPS = 1e-13


class OutOfDomainError(ValueError):
    """Parameter vector outside the domain of a map (e.g. not in M_G)."""


def as_vector(g: UndirectedGraph, values) -> np.ndarray:
    """Values in vertex order from a label mapping or anything numpy can broadcast."""
    if isinstance(values, dict):
        missing = set(g.vertices) - {str(k) for k in values}
        if missing:
            raise GraphError(f"missing values for vertices {sorted(missing)}")
        return np.array([float(values[_find(values, v)]) for v in g.vertices])
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full(g.n, float(arr))
    if arr.shape[-1] != g.n:
        raise GraphError(f"expected {g.n} coordinates, got {arr.shape[-1]}")
    return arr


def _find(mapping, label):
    if label in mapping:
        return label
    for k in mapping:
        if str(k) == label:
            return k
    raise KeyError(label)


class CliquePolynomial:
    """Memoized evaluator of the clique polynomials of induced subgraphs.

    ``poly(mask)`` returns Delta_{G_A}(x) (``sign=-1``) or delta_{G_A}(y)
    (``sign=+1``) for the vertex subset ``A`` encoded by ``mask``, via
    Delta_A = Delta_{A - i} + sign * x_i * Delta_{A minus the closed neighbourhood of i}
    with ``i`` the lowest vertex of ``A``. One instance per parameter vector.
    """

    def __init__(self, g: UndirectedGraph, values, sign: int = -1):
        self.g = g
        self.values = np.asarray(values, dtype=float)
        self.sign = sign
        one = np.ones(self.values.shape[:-1]) if self.values.ndim > 1 else 1.0
        self._memo = {0: one}

    def __call__(self, mask: int):
        memo = self._memo
        if mask in memo:
            return memo[mask]
        stack = [mask]
        adj, x, sign = self.g.adj, self.values, self.sign
        while stack:
            m = stack[-1]
            if m in memo:
                stack.pop()
                continue
            low = m & -m
            i = low.bit_length() - 1
            a, b = m ^ low, m & ~adj[i] & ~low
            pending = [s for s in (a, b) if s not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[m] = memo[a] + sign * x[..., i] * memo[b]
            stack.pop()
        return memo[mask]

    def full(self):
        return self(self.g.full_mask)

    def anti_neighbourhood(self, i: int) -> int:
        """Neighbours of ``i`` in the complement graph."""
        return self.g.full_mask & ~self.g.adj[i] & ~(1 << i)


def eval_Delta(g: UndirectedGraph, x, vertices: Optional[Iterable] = None):
    """Delta of the subgraph induced by ``vertices`` (all of V by default) at ``x``."""
    return CliquePolynomial(g, as_vector(g, x), -1)(g.mask(vertices))


def eval_delta(g: UndirectedGraph, y, vertices: Optional[Iterable] = None):
    """delta of the subgraph induced by ``vertices`` at ``y``; equals Delta at ``-y``."""
    return CliquePolynomial(g, as_vector(g, y), +1)(g.mask(vertices))


# -- factorizing coordinates ------------------------------------------------------

def _u_raw(dag: MoralDag, x: np.ndarray) -> np.ndarray:
    u = np.empty_like(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in reversed(dag.topo_order):
            denom = 1.0
            for j in bits(dag.children[i]):
                denom = denom * (1.0 - u[..., j])
            u[..., i] = x[..., i] / denom
    return u


def _w_raw(dag: MoralDag, y: np.ndarray) -> np.ndarray:
    w = np.empty_like(y, dtype=float)
    for i in reversed(dag.topo_order):
        denom = 1.0
        for j in bits(dag.children[i]):
            denom = denom * (1.0 + w[..., j])
        w[..., i] = y[..., i] / denom
    return w


def _unit_interior(u) -> np.ndarray:
    return np.all((u > BOUNDARY_EPS) & (u < 1.0 - BOUNDARY_EPS), axis=-1)


def u_coords(dag: MoralDag, x) -> np.ndarray:
    """Factorizing coordinates u of ``x`` for ``dag`` (children resolved first)."""
    x = as_vector(dag.graph, x)
    if np.any(~(x > 0)):
        raise OutOfDomainError("x must be strictly positive")
    u = _u_raw(dag, x)
    if not np.all(_unit_interior(u)):
        raise OutOfDomainError("x is not in M_G: some u coordinate leaves (0, 1)")
    return u


def x_from_u(dag: MoralDag, u) -> np.ndarray:
    """Inverse of :func:`u_coords`: x_i = u_i * prod over children j of (1 - u_j)."""
    u = as_vector(dag.graph, u)
    if np.any((u <= 0) | (u >= 1)):
        raise OutOfDomainError("u must lie in (0, 1)")
    x = np.array(u, dtype=float, copy=True)
    for i in range(dag.graph.n):
        for j in bits(dag.children[i]):
            x[..., i] *= 1.0 - u[..., j]
    return x


def w_coords(dag: MoralDag, y) -> np.ndarray:
    y = as_vector(dag.graph, y)
    if np.any(~(y > 0)):
        raise OutOfDomainError("y must be strictly positive")
    return _w_raw(dag, y)


def y_from_w(dag: MoralDag, w) -> np.ndarray:
    w = as_vector(dag.graph, w)
    if np.any(~(w > 0)):
        raise OutOfDomainError("w must be strictly positive")
    y = np.array(w, dtype=float, copy=True)
    for i in range(dag.graph.n):
        for j in bits(dag.children[i]):
            y[..., i] *= 1.0 + w[..., j]
    return y


def in_M_G(g: UndirectedGraph, x, dag: Optional[MoralDag] = None):
    """Membership of ``x`` in M_G, decided through the u-recursion on one moral DAG.

    Returns a bool for a single vector and a boolean array for a batch.
    """
    x = as_vector(g, x)
    dag = dag if dag is not None else canonical_dag(g)
    ok = np.all(x > 0, axis=-1) & _unit_interior(_u_raw(dag, x))
    return bool(ok) if np.ndim(ok) == 0 else ok
