"""Clique polynomials and factorizing coordinates on a three-vertex chain."""
import numpy as np

from graphcount import UndirectedGraph, dag_from_arrows, enumerate_moral_dags, eval_Delta, eval_delta, in_M_G, u_coords
from graphcount.graph import complement_cliques

g = UndirectedGraph.from_edges("123", [("1", "2"), ("2", "3")])
x = np.array([0.1, 0.2, 0.3])

# the independent sets of the chain index the terms of Delta
print(sorted(sorted(c) for c in complement_cliques(g)))
print("Delta(x) =", eval_Delta(g, x))              # 1 - x1 - x2 - x3 + x1 x3 = 0.43
print("delta(1,1,1) =", eval_delta(g, [1, 1, 1]))  # 5

# each moral DAG gives its own coordinates, all with prod(1 - u) == Delta
for dag in enumerate_moral_dags(g):
    u = u_coords(dag, x)
    print(dag, np.round(u, 4), np.prod(1 - u))

fwd = dag_from_arrows(g, [("1", "2"), ("2", "3")])
print("u on 1->2->3:", u_coords(fwd, x))  # u1 = 0.1 / (1 - 0.2/0.7) = 0.14

# membership: the middle parameter must stay below (1 - x1)(1 - x3)
for x2 in (0.2, 0.24, 0.26):
    print(x2, in_M_G(g, [0.5, x2, 0.5]))

# batches work too: a grid over x2 in one call
grid = np.column_stack([np.full(5, 0.5), np.linspace(0.05, 0.3, 5), np.full(5, 0.5)])
print(eval_Delta(g, grid))
