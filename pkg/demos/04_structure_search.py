"""Structure search: exact posterior over decomposable graphs vs the Metropolis chain."""
import time

from graphcount import ChainConfig, NmParams, Observations, exact_posterior, nm_sample, path_graph, run_chain

truth = path_graph("abcd")
rows = nm_sample(NmParams(truth, 3, [0.25, 0.2, 0.2, 0.25]), rng=11, size=200)
data = Observations(truth.vertices, rows)

post = exact_posterior(data, r=3)
top = sorted(post.items(), key=lambda kv: -kv[1])[:5]
print("exact posterior, top five of", len(post))
for g, prob in top:
    print(f"  {prob:.4f}  {g.edges}")

t0 = time.perf_counter()
trace = run_chain(data, ChainConfig(steps=100_000, seed=3, r=3), chains=2)
print(f"chain: {time.perf_counter() - t0:.1f}s, acceptance {trace.accepted / trace.proposed:.3f}, "
      f"rejected as non-chordal {trace.proposed_nondecomposable / trace.proposed:.3f}")
for key, frac in trace.fractions()[:5]:
    print(f"  {frac:.4f}  {list(key)}")
print("planted graph first:", trace.fractions()[0][0] == truth.key())
