"""Brute-force oracles kept on code paths separate from the main modules.

Everything here works by exhaustive enumeration or exact rational
arithmetic, so it is meant for desk-scale inputs only.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .graph import GraphError, MoralDag, UndirectedGraph, bits, complement_clique_masks, decompose
from .models import MultParams, mult_log_pmf, mult_support, nm_log_pmf

MAX_WORD_LENGTH = 10
MAX_VECTORS = 5_000_000


class OracleScaleError(ValueError):
    """Requested enumeration is beyond desk scale."""


# -- partially commutative words --------------------------------------------------

@dataclass(frozen=True)
class TraceClass:
    normal_form: tuple
    parikh: tuple


def _commute(g: UndirectedGraph, a: int, b: int) -> bool:
    return a != b and not g.adj[a] >> b & 1


def _as_indices(g: UndirectedGraph, word) -> list:
    return [g.idx(v) for v in word]


def trace_normal_form(g: UndirectedGraph, word: Sequence) -> tuple:
    """Lexicographically least word (in vertex order) equivalent to ``word``.

    Letters that are non-adjacent in ``g`` commute. At each position we emit
    the smallest letter whose first remaining occurrence can be moved to the
    front, i.e. is preceded only by letters it commutes with.
    """
    rest = _as_indices(g, word)
    out = []
    while rest:
        best = None
        for pos, a in enumerate(rest):
            if best is not None and a >= rest[best]:
                continue
            if a in rest[:pos]:
                continue
            if all(_commute(g, a, b) for b in rest[:pos]):
                best = pos
        out.append(rest.pop(best))
    return tuple(g.vertices[i] for i in out)


def _multiset_words(counts: Sequence[int]) -> Iterator[tuple]:
    counts = list(counts)
    total = sum(counts)
    word = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                word.append(i)
                yield from rec()
                word.pop()
                counts[i] += 1

    yield from rec()


def _check_word_scale(n) -> list:
    n = [int(v) for v in n]
    if min(n, default=0) < 0:
        raise ValueError("letter counts must be non-negative")
    if sum(n) > MAX_WORD_LENGTH:
        raise OracleScaleError(f"word length {sum(n)} exceeds {MAX_WORD_LENGTH}")
    return n


def trace_classes(g: UndirectedGraph, n) -> set:
    """All classes of words with letter counts ``n`` (vertex order)."""
    n = _check_word_scale(n)
    forms = {trace_normal_form(g, [g.vertices[i] for i in w]) for w in _multiset_words(n)}
    return {TraceClass(f, tuple(n)) for f in forms}


def trace_class_count(g: UndirectedGraph, n) -> int:
    return len(trace_classes(g, n))


def trace_class_count_bfs(g: UndirectedGraph, n) -> int:
    """Same count by flood fill over swaps of adjacent commuting letters."""
    n = _check_word_scale(n)
    seen = set()
    classes = 0
    for w in _multiset_words(n):
        if w in seen:
            continue
        classes += 1
        seen.add(w)
        queue = deque([w])
        while queue:
            cur = queue.popleft()
            for k in range(len(cur) - 1):
                if _commute(g, cur[k], cur[k + 1]):
                    nxt = cur[:k] + (cur[k + 1], cur[k]) + cur[k + 2:]
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return classes


# -- enumeration of count vectors ----------------------------------------------------------

def count_vectors(dim: int, max_total: int) -> np.ndarray:
    """Every vector in N^dim with entry sum at most ``max_total``, one per row."""
    size = math.comb(max_total + dim, dim)
    if size > MAX_VECTORS:
        raise OracleScaleError(f"{size} count vectors exceed the enumeration limit")
    out = np.zeros((size, dim), dtype=np.int64)
    row = 0
    for bars in itertools.combinations(range(max_total + dim), dim):
        prev = -1
        for i, b in enumerate(bars):
            out[row, i] = b - prev - 1
            prev = b
        row += 1
    return out


def brute_pmf_sum(p, cutoff: Optional[int] = None) -> float:
    """Sum of the mass function over |n| <= cutoff (nm) or the full support (mult)."""
    if isinstance(p, MultParams):
        return float(np.exp(mult_log_pmf(p, mult_support(p.graph, p.r))).sum())
    if cutoff is None:
        raise ValueError("nm sums need a cutoff")
    return float(np.exp(nm_log_pmf(p, count_vectors(p.graph.n, cutoff))).sum())


def brute_marginal(p, subset: Sequence, n_sub: Sequence[int], cutoff: Optional[int] = None) -> float:
    """P(N_A = n_A) by summing the joint mass over completions of ``n_A``.

    For the nm model only completions with |n| <= cutoff are included.
    """
    g = p.graph
    idx = [g.idx(v) for v in subset]
    rest = [i for i in range(g.n) if i not in idx]
    if isinstance(p, MultParams):
        support = mult_support(g, p.r)
        mask = np.all(support[:, idx] == np.asarray(n_sub), axis=1)
        return float(np.exp(mult_log_pmf(p, support[mask])).sum())
    if cutoff is None:
        raise ValueError("nm marginals need a cutoff")
    budget = cutoff - int(sum(n_sub))
    if budget < 0:
        return 0.0
    tails = count_vectors(len(rest), budget)
    full = np.zeros((tails.shape[0], g.n), dtype=np.int64)
    full[:, idx] = np.asarray(n_sub)
    full[:, rest] = tails
    return float(np.exp(nm_log_pmf(p, full)).sum())


def marginal_table(p, subset: Sequence, cutoff: Optional[int] = None) -> tuple:
    """Brute-force law of N_A as a dict ``n_A -> mass`` plus the joint mass left out.

    The nm joint is enumerated over |n| <= cutoff, so the second value bounds
    the truncation error of every entry; for mult it is zero up to rounding.
    """
    g = p.graph
    idx = [g.idx(v) for v in subset]
    if isinstance(p, MultParams):
        support = mult_support(g, p.r)
        mass = np.exp(mult_log_pmf(p, support))
    else:
        if cutoff is None:
            raise ValueError("nm marginals need a cutoff")
        support = count_vectors(g.n, cutoff)
        mass = np.exp(nm_log_pmf(p, support))
    keys, inverse = np.unique(support[:, idx], axis=0, return_inverse=True)
    sums = np.bincount(inverse.ravel(), weights=mass, minlength=len(keys))
    table = {tuple(int(v) for v in k): float(m) for k, m in zip(keys, sums)}
    return table, max(0.0, 1.0 - float(mass.sum()))


# -- exact rational coefficients ---------------------------------------------------------

def rising(a, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def falling(a, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= a - j
    return out


def _n_list(g: UndirectedGraph, n) -> list:
    n = [int(v) for v in n]
    if len(n) != g.n:
        raise GraphError(f"expected {g.n} counts")
    return n


def _sum_over(n: list, mask: int) -> int:
    return sum(n[i] for i in bits(mask))


def exact_C(g: UndirectedGraph, n, r) -> Fraction:
    """C_G(n, r) as a ratio of rising factorials over cliques and separators."""
    s = decompose(g)
    n = _n_list(g, n)
    r = Fraction(r)
    num = math.prod((rising(r, _sum_over(n, c)) for c in s.maximal_cliques), start=Fraction(1))
    den = math.prod((rising(r, _sum_over(n, sep)) ** nu for sep, nu in s.separators), start=Fraction(1))
    return num / (den * math.prod(math.factorial(v) for v in n))


def exact_c(g: UndirectedGraph, n, r: int) -> Fraction:
    s = decompose(g)
    n = _n_list(g, n)
    if any(_sum_over(n, c) > r for c in s.maximal_cliques):
        return Fraction(0)
    num = math.prod((falling(r, _sum_over(n, c)) for c in s.maximal_cliques), start=Fraction(1))
    den = math.prod((falling(r, _sum_over(n, sep)) ** nu for sep, nu in s.separators), start=Fraction(1))
    return num / (den * math.prod(math.factorial(v) for v in n))


def exact_C_dag(dag: MoralDag, n, r) -> Fraction:
    """C_G(n, r) as a product of negative binomial coefficients along a moral DAG."""
    n = _n_list(dag.graph, n)
    r = Fraction(r)
    out = Fraction(1)
    for i, pa in enumerate(dag.parents):
        out *= rising(r + _sum_over(n, pa), n[i]) / math.factorial(n[i])
    return out


def _gamma_int(m) -> Fraction:
    m = Fraction(m)
    if m.denominator != 1 or m < 1:
        raise ValueError(f"exact Gamma needs a positive integer, got {m}")
    return Fraction(math.factorial(int(m) - 1))


def exact_K(g: UndirectedGraph, alpha, beta: int) -> Fraction:
    """K_G(alpha, beta) for integer arguments, clique-separator form."""
    s = decompose(g)
    a = [int(v) for v in alpha]
    num = math.prod((_gamma_int(_sum_over(a, c) + beta) for c in s.maximal_cliques), start=Fraction(1))
    den = _gamma_int(beta) ** s.components * math.prod((_gamma_int(v) for v in a), start=Fraction(1))
    den *= math.prod((_gamma_int(_sum_over(a, sep) + beta) ** nu for sep, nu in s.separators), start=Fraction(1))
    return num / den


def exact_K_dag(dag: MoralDag, alpha, beta: int) -> Fraction:
    a = [int(v) for v in alpha]
    out = Fraction(1)
    for i, pa in enumerate(dag.parents):
        p = _sum_over(a, pa)
        out *= _gamma_int(p + a[i] + beta) / (_gamma_int(p + beta) * _gamma_int(a[i]))
    return out


def exact_k(g: UndirectedGraph, alpha, beta: int) -> Fraction:
    """k_G(alpha, beta) for integer arguments, clique-separator form."""
    s = decompose(g)
    a = [int(v) for v in alpha]
    num = _gamma_int(beta) ** s.components
    num *= math.prod((_gamma_int(beta - _sum_over(a, sep)) ** nu for sep, nu in s.separators), start=Fraction(1))
    den = math.prod((_gamma_int(v) for v in a), start=Fraction(1))
    den *= math.prod((_gamma_int(beta - _sum_over(a, c)) for c in s.maximal_cliques), start=Fraction(1))
    return num / den


def exact_k_dag(dag: MoralDag, alpha, beta: int) -> Fraction:
    a = [int(v) for v in alpha]
    out = Fraction(1)
    for i, pa in enumerate(dag.parents):
        p = _sum_over(a, pa)
        out *= _gamma_int(beta - p) / (_gamma_int(beta - p - a[i]) * _gamma_int(a[i]))
    return out


# -- series, polynomials, membership -------------------------------------------------------

def series_truncation(g: UndirectedGraph, x, degree: int, r=1) -> float:
    """Partial sum over |n| <= degree of C_G(n, r) x^n; tends to Delta_G(x)^(-r)."""
    if degree > 20:
        raise OracleScaleError("degree is limited to 20")
    x = np.asarray(x, dtype=float)
    if not in_M_G_scan(g, x):
        raise ValueError("x is outside M_G; the series diverges")
    total = 0.0
    for n in count_vectors(g.n, degree):
        total += float(exact_C(g, n, r)) * float(np.prod(x ** n))
    return total


def clique_polynomial_by_cliques(g: UndirectedGraph, x, sign: int = -1, within: Optional[int] = None) -> float:
    """Delta (sign -1) or delta (sign +1) summed over cliques of the complement graph."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape[:-1])
    for c in complement_clique_masks(g, within):
        idx = list(bits(c))
        total = total + (sign ** len(idx)) * np.prod(x[..., idx], axis=-1)
    return float(total) if total.ndim == 0 else total


def in_M_G_scan(g: UndirectedGraph, x) -> bool:
    """x > 0 and Delta of every induced subgraph positive at x."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        return False
    return all(clique_polynomial_by_cliques(g, x, -1, mask) > 0 for mask in range(1, 1 << g.n))


def chordal_bruteforce(g: UndirectedGraph) -> bool:
    """True when no vertex subset of size >= 4 induces a cycle."""
    for k in range(4, g.n + 1):
        for sub in itertools.combinations(range(g.n), k):
            mask = sum(1 << i for i in sub)
            if all(bin(g.adj[i] & mask).count("1") == 2 for i in sub) and _connected(g, mask):
                return False
    return True


def _connected(g: UndirectedGraph, mask: int) -> bool:
    start = mask & -mask
    seen, frontier = start, start
    while frontier:
        nxt = 0
        for i in bits(frontier):
            nxt |= g.adj[i] & mask
        frontier = nxt & ~seen
        seen |= frontier
    return seen == mask


def bernoulli_support(g: UndirectedGraph) -> set:
    """Indicator vectors of the complement cliques: the r = 1 support of mult_G."""
    return {tuple(int(c >> i & 1) for i in range(g.n)) for c in complement_clique_masks(g)}


def letter_counts(word: Sequence, g: UndirectedGraph) -> tuple:
    c = Counter(word)
    return tuple(c.get(v, 0) for v in g.vertices)
