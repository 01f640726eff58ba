"""Graph negative multinomial and graph multinomial laws: mass, sampling, marginals."""
import numpy as np

from graphcount import MultParams, NmParams, bivariate_log_pmf, clique_marginal_params, mult_sample, nm_log_pmf, nm_sample
from graphcount import path_graph
from graphcount.models import mult_log_pmf, mult_support
from graphcount.oracle import marginal_table

g = path_graph(["1", "2", "3", "4"])
p = NmParams(g, r=2.0, x=[0.1, 0.15, 0.12, 0.1])

print("P(N = 0) =", np.exp(nm_log_pmf(p, [0, 0, 0, 0])))
draws = nm_sample(p, rng=0, size=50_000)
print("sample means", draws.mean(axis=0))

# empirical vs exact mass of a few vectors
for n in ([0, 0, 0, 0], [1, 0, 0, 1], [2, 1, 0, 0]):
    print(n, np.mean(np.all(draws == n, axis=1)).round(4), np.exp(nm_log_pmf(p, n)).round(4))

# clique {2,3}: its law is a classical negative multinomial with parameters x^C
print("x^C for {2,3}:", clique_marginal_params(p, ["2", "3"]))

# end points 1 and 4 share no neighbour; compare the closed form with brute force
table, missing = marginal_table(p, ["1", "4"], cutoff=30)
print("truncated mass", missing)
for key in [(0, 0), (1, 1), (3, 0)]:
    print(key, np.exp(bivariate_log_pmf(p, "1", "4", *key)), table[key])

# the multinomial counterpart lives on a finite support
q = MultParams(g, r=2, y=[1.0, 0.5, 2.0, 1.0])
sup = mult_support(g, 2)
print(len(sup), "support points, total mass", np.exp(mult_log_pmf(q, sup)).sum())
print(mult_sample(q, rng=1, size=5))
