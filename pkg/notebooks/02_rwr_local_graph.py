"""
Random walk with restart on a target's local graph
==================================================

A tiny hand-built graph: target 0 is friends with 1 and 2; 1 knows 3 and 4,
2 knows 3.  Candidates 3 and 4 are friends of friends.  We build the local
graph, iterate the walk and compare against the exact fixed point.
"""

# %%
import numpy as np

from friendsuggest import FeatureWeights, RwrParams, Snapshot, build_local_graph, rwr_distribution, select_candidates
from friendsuggest.rwr import rwr_iterates

snap = Snapshot({(0, 1): 1, (0, 2): 1, (1, 3): 1, (1, 4): 1, (2, 3): 1})
cands = select_candidates(snap, 0, L=10, mu=1)
print("candidates:", cands.members, "mutual counts:", cands.mutual_count)

# %%
g = build_local_graph(snap, 0, cands, FeatureWeights())
print("local graph vertices:", g.vertices)
print(g.weights.toarray())

# %%
# Iterate and watch the L1 change shrink by roughly (1 - alpha) per step
prev = None
for i, r in enumerate(rwr_iterates(g, 0, RwrParams())):
    if prev is not None:
        print(f"step {i:2d}  change {np.abs(r - prev).sum():.2e}  r = {np.round(r, 4)}")
    prev = r

# %%
# Exact fixed point: r (I - (1 - alpha) P) = alpha e
W = g.weights.toarray()
P = W / W.sum(axis=1, keepdims=True)
e = np.eye(len(W))[0]
exact = np.linalg.solve((np.eye(len(W)) - 0.6 * P).T, 0.4 * e)
dist = rwr_distribution(g, 0)
print("iterated:", np.round(dist.vector, 6))
print("exact:   ", np.round(exact, 6))
print("max gap: ", np.abs(dist.vector - exact).max())
