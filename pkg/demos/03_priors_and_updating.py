"""Graph Dirichlet priors with conjugate updating and a predictive check."""
import numpy as np

from graphcount import DirParams, NmParams, Observations, dir_sample, dirnm_log_pmf, nm_log_pmf, path_graph, posterior_update
from graphcount.priors import dir_clique_project

g = path_graph("abc")
prior = DirParams(g, alpha=[1.0, 1.0, 1.0], beta=2.0)
print("log K =", prior.log_norm)

xs = dir_sample(prior, rng=0, size=100_000)
print("prior mean of x", xs.mean(axis=0))

# on a clique the projected coordinates follow an ordinary Dirichlet
proj = dir_clique_project(prior, xs, ["a", "b"])
print("projected means", proj.mean(axis=0), "vs", np.array([1, 1]) / (2 + 2.0))

# the predictive mass is the prior average of the model mass
n = [1, 0, 2]
mc = np.mean([np.exp(nm_log_pmf(NmParams(g, 1.5, x), n)) for x in xs[:20_000]])
print("Monte Carlo", mc, "closed form", np.exp(dirnm_log_pmf(g, prior.alpha, prior.beta, 1.5, n)))

# three observations: alpha grows by the column sums, beta by k * r
data = Observations(g.vertices, [[1, 0, 2], [0, 0, 1], [2, 1, 0]])
post = posterior_update(prior, data, r=1.5)
print("posterior alpha", post.alpha, "beta", post.beta)
