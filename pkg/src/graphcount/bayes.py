"""Conjugate updating and closed-form predictive and marginal likelihoods."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .graph import GraphError, UndirectedGraph, decompose
from .models import SupportError, as_counts, in_support, log_coeff_C, log_coeff_c
from .priors import DirParams, IDirParams, log_K, log_k


class DataError(ValueError):
    """Malformed observation table."""


@dataclass(frozen=True)
class Observations:
    """Count rows sharing one vertex order (columns follow ``labels``)."""

    labels: tuple
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).reshape(-1, len(self.labels))
        if np.any(rows < 0):
            raise DataError("counts must be non-negative")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", tuple(str(v) for v in self.labels))

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    @property
    def total(self) -> np.ndarray:
        return self.rows.sum(axis=0)

    def aligned(self, g: UndirectedGraph) -> np.ndarray:
        """Rows reordered into the graph's vertex order."""
        if set(self.labels) != set(g.vertices):
            raise GraphError(f"data columns {list(self.labels)} do not match graph vertices {list(g.vertices)}")
        order = [self.labels.index(v) for v in g.vertices]
        return self.rows[:, order]

    @classmethod
    def empty(cls, labels) -> "Observations":
        return cls(tuple(labels), np.zeros((0, len(labels)), dtype=np.int64))


def read_observations(path: Union[str, Path]) -> Observations:
    """Parse a CSV whose header holds vertex labels and whose cells are integers."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError("empty CSV file") from None
        if not header or any(not h for h in header) or len(set(header)) != len(header):
            raise DataError("header must list distinct, non-empty vertex labels")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
            try:
                vals = [int(c.strip()) for c in row]
            except ValueError:
                raise DataError(f"line {lineno}: non-integer cell") from None
            if min(vals) < 0:
                raise DataError(f"line {lineno}: negative count")
            rows.append(vals)
    return Observations(tuple(header), np.array(rows, dtype=np.int64).reshape(-1, len(header)))


def write_observations(target, labels: Sequence, rows) -> None:
    """Write a header of labels then one integer row per observation to a path or text stream."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_observations(fh, labels, rows)
        return
    w = csv.writer(target, lineterminator="\n")
    w.writerow(labels)
    w.writerows(np.asarray(rows, dtype=np.int64).reshape(-1, len(labels)).tolist())


def _rows(g: UndirectedGraph, data) -> np.ndarray:
    if isinstance(data, Observations):
        return data.aligned(g)
    return as_counts(g, np.asarray(data).reshape(-1, g.n))


def posterior_update(prior: Union[DirParams, IDirParams], data, r):
    """Conjugate update (alpha + sum of rows, beta + k r)."""
    rows = _rows(prior.graph, data)
    k = rows.shape[0]
    alpha = prior.alpha + rows.sum(axis=0)
    beta = prior.beta + k * r
    if isinstance(prior, IDirParams):
        if not np.all(in_support(prior.structure, rows, r)):
            raise SupportError(f"some observation exceeds r={r} on a maximal clique")
        return IDirParams(prior.graph, alpha, beta)
    return DirParams(prior.graph, alpha, beta)


def dirnm_log_pmf(g: UndirectedGraph, alpha, beta: float, r: float, n) -> float:
    """Log predictive mass of the Dirichlet-mixed graph negative multinomial."""
    s = decompose(g)
    n = as_counts(g, n)
    prior = DirParams(g, alpha, beta)
    return float(log_coeff_C(s, n, r) + prior.log_norm - log_K(s, None, prior.alpha + n, beta + r))


def idirmult_log_pmf(g: UndirectedGraph, alpha, beta: float, r: int, n) -> float:
    """Log predictive mass of the inverted-Dirichlet-mixed graph multinomial."""
    s = decompose(g)
    n = as_counts(g, n)
    prior = IDirParams(g, alpha, beta)
    return float(log_coeff_c(s, n, r) + prior.log_norm - log_k(s, None, prior.alpha + n, beta + r))


def log_marginal_likelihood(g: UndirectedGraph, alpha, beta: float, r: float, data) -> float:
    """Log marginal likelihood of i.i.d. rows under the nm/Dir pair (the graph score)."""
    s = decompose(g)
    rows = _rows(g, data)
    if rows.shape[0] == 0:
        return 0.0
    prior = DirParams(g, alpha, beta)
    coeff = float(np.sum(log_coeff_C(s, rows, r)))
    return coeff + prior.log_norm - log_K(s, None, prior.alpha + rows.sum(axis=0), beta + rows.shape[0] * r)
