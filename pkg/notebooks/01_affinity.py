"""
Affinity between two users
==========================

Affinity sums ``w_i * ln(S_i + 1)`` over five kinds of shared
information.  The logarithm makes each additional mutual friend worth less
than the previous one.
"""

# %%
import numpy as np

from friendsuggest import FeatureVector, FeatureWeights, affinity

w = FeatureWeights()  # 0.5 friends, 0.3 schools, 0.2 groups
print("default weights:", tuple(w))

# %%
# Diminishing returns: going from 5 to 6 mutual friends adds far more than
# going from 99 to 100.
only_friends = FeatureWeights(0.5, 0, 0, 0, 0)
for lo in (5, 99):
    gain = affinity(FeatureVector(lo + 1), only_friends) - affinity(FeatureVector(lo), only_friends)
    print(f"{lo:3d} -> {lo + 1:3d} mutual friends: +{gain:.4f}")

# %%
# The marginal gain curve, tabulated
counts = np.arange(0, 51, 10)
values = [affinity(FeatureVector(int(c)), only_friends) for c in counts]
for c, v in zip(counts, values):
    print(f"S = {c:2d}   affinity = {v:.3f}")

# %%
# A school in common is worth 0.3 * ln 2 on top of the friends term
print(affinity(FeatureVector(3, 1, 0, 0, 0), w) - affinity(FeatureVector(3), w), 0.3 * np.log(2))
