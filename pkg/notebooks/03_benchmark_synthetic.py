"""
Benchmarking on a planted-partition dataset
===========================================

Generate a small synthetic network, hold out the latest friendships and
measure how well each approach ranks them.  This runs in well under a
minute; the shipped acceptance benchmark uses the 10 000-user default.
"""

# %%
import tempfile
from pathlib import Path

from friendsuggest import SuggestionParams, SynthConfig, build_test_cohorts, generate_dataset, run_benchmark
from friendsuggest.graph import apply_user_filter, load_snapshot, snapshot_from_records, temporal_split

cfg = SynthConfig(n_users=2000, n_communities=20, seed=1)
out = Path(tempfile.mkdtemp())
print(generate_dataset(cfg, out))

# %%
full = load_snapshot(out / "edges.tsv", out / "attributes.tsv", out / "interactions.tsv")
train, future = temporal_split(list(full.edges()), cfg.boundary)
snap = snapshot_from_records(
    train,
    {(u, k): set(v) for u, k, v in full.attribute_items()},
    {(a, b): c for a, b, c in full.interaction_items()},
)
snap, eligible = apply_user_filter(snap, future, 1)
print(snap, "eligible users:", len(eligible))

# %%
cohorts = build_test_cohorts(snap, future, [("low", 3, 7, 200), ("high", 8, None, 200)], seed=0)
reports = run_benchmark(snap, cohorts, params=SuggestionParams(mu=1))

# %%
print(f"{'cohort':6s} {'approach':17s} {'mean AUC':>9s} {'P@1':>6s} {'P@10':>6s}")
for rep in reports:
    print(
        f"{rep.cohort:6s} {rep.approach:17s} {rep.mean_auc:9.4f}"
        f" {rep.precision_curve[0]:6.3f} {rep.precision_curve[9]:6.3f}"
    )
