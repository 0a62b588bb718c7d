"""Evaluation protocol: degree-stratified cohorts, precision@k, AUC,
cross-approach benchmark runs and the feature-weight sweep."""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.stats import rankdata

from .baselines import BaselineKind, CurrentApproachParams, baseline_suggest
from .features import FeatureWeights
from .graph import EdgeRecord, Snapshot
from .suggester import SuggestionList, SuggestionParams, prepare_target, score_prepared, suggest

__all__ = [
    "PROPOSED",
    "CohortSpec",
    "DegenerateAUCError",
    "EvalReport",
    "TestCohort",
    "auc",
    "build_test_cohorts",
    "precision_at_k",
    "precision_curve",
    "run_benchmark",
    "sweep_weights",
    "weight_grid",
    "write_report",
    "write_sweep_table",
]

log = logging.getLogger(__name__)

PROPOSED = "proposed"
K_MAX = 100


class CohortSpec(NamedTuple):
    name: str
    min_degree: int
    max_degree: Optional[int]  # None = unbounded
    sample_size: int


@dataclass(frozen=True)
class TestCohort:
    name: str
    users: List[int]
    truth: Dict[int, Set[int]]

    def __len__(self):
        return len(self.users)


@dataclass
class EvalReport:
    cohort: str
    approach: str
    precision_curve: np.ndarray
    auc_per_user: Dict[int, float] = field(default_factory=dict)
    mean_auc: float = float("nan")
    users_evaluated: int = 0
    auc_skipped: int = 0
    failed: int = 0


class DegenerateAUCError(ValueError):
    """AUC is undefined when a list holds no true or no false suggestions."""


# -- cohorts ------------------------------------------------------------------


def build_test_cohorts(
    snapshot: Snapshot,
    truth_edges: Iterable[EdgeRecord],
    specs: Sequence[CohortSpec],
    seed: int = 0,
) -> List[TestCohort]:
    """Sample users per degree band and attach their future friendships.

    Each spec draws `sample_size` users uniformly without replacement from
    those whose current degree lies in ``[min_degree, max_degree]``; if the
    band holds fewer users, all of them are taken.
    """
    truth_all: Dict[int, Set[int]] = defaultdict(set)
    for rec in truth_edges:
        truth_all[rec.u].add(rec.v)
        truth_all[rec.v].add(rec.u)

    rng = np.random.default_rng(seed)
    cohorts = []
    for spec in specs:
        name, lo, hi, size = CohortSpec(*spec)
        if size <= 0:
            raise ValueError(f"cohort {name}: sample_size must be > 0")
        pool = [
            u for u in sorted(snapshot.users)
            if snapshot.degree(u) >= lo and (hi is None or snapshot.degree(u) <= hi)
        ]
        if not pool:
            log.warning("cohort %s: no users with degree in [%s, %s]", name, lo, "inf" if hi is None else hi)
        if len(pool) > size:
            pool = sorted(rng.choice(pool, size=size, replace=False).tolist())
        truth = {u: truth_all.get(u, set()) - snapshot.neighbor_set(u) for u in pool}
        cohorts.append(TestCohort(name, pool, truth))
    return cohorts


# -- metrics ----------------------------------------------------------------


def precision_at_k(slist: SuggestionList, truth: Set[int], k: int) -> float:
    """Hits among the top ``min(k, len)`` suggestions divided by `k`."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for v in slist.candidates[:k] if v in truth) / k


def precision_curve(slist: SuggestionList, truth: Set[int], k_max: int = K_MAX) -> np.ndarray:
    """``P@k`` for k = 1..k_max as an array (index k-1)."""
    hits = np.zeros(k_max)
    top = slist.candidates[:k_max]
    hits[: len(top)] = [v in truth for v in top]
    return np.cumsum(hits) / np.arange(1, k_max + 1)


def auc(slist: SuggestionList, truth: Set[int]) -> float:
    """Rank-sum AUC over the whole list.

    Scores are ranked ascending (lowest score gets rank 1) with tied scores
    sharing their average rank; ``(S0 - n0(n0+1)/2) / (n0 n1)`` where S0 sums
    the ranks of true suggestions.
    """
    if not len(slist):
        raise DegenerateAUCError("empty suggestion list")
    is_true = np.array([v in truth for v in slist.candidates])
    n0 = int(is_true.sum())
    n1 = len(is_true) - n0
    if n0 == 0 or n1 == 0:
        raise DegenerateAUCError(f"need true and false suggestions, got n0={n0}, n1={n1}")
    ranks = rankdata(np.asarray(slist.scores, dtype=float), method="average")
    s0 = ranks[is_true].sum()
    return float((s0 - n0 * (n0 + 1) / 2.0) / (n0 * n1))


# -- benchmark ----------------------------------------------------------------

_worker_state: dict = {}


def _init_worker(snapshot, params, current_params):
    _worker_state.update(snapshot=snapshot, params=params, current_params=current_params)


def _task(job):
    approach, u = job
    snapshot, params = _worker_state["snapshot"], _worker_state["params"]
    try:
        if approach == PROPOSED:
            slist = suggest(snapshot, u, params)
        else:
            slist = baseline_suggest(snapshot, u, BaselineKind(approach), params, _worker_state["current_params"])
    except Exception as exc:  # one bad user never sinks the run
        return approach, u, None, repr(exc)
    return approach, u, slist, None


def _map(func, jobs, snapshot, params, current_params, threads):
    """Run `func` over `jobs` with the snapshot installed as shared worker state."""
    if threads is None or threads <= 1 or len(jobs) < 2:
        _init_worker(snapshot, params, current_params)
        try:
            return [func(job) for job in jobs]
        finally:
            _worker_state.clear()
    chunksize = max(1, len(jobs) // (threads * 8))
    with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(snapshot, params, current_params)) as pool:
        return list(pool.map(func, jobs, chunksize=chunksize))


def _report(cohort: TestCohort, approach: str, lists: Dict[int, SuggestionList], failed: int) -> EvalReport:
    curve = np.zeros(K_MAX)
    per_user = {}
    skipped = 0
    for u in sorted(lists):
        truth = cohort.truth.get(u, set())
        curve += precision_curve(lists[u], truth)
        try:
            per_user[u] = auc(lists[u], truth)
        except DegenerateAUCError:
            skipped += 1
    n = len(lists)
    if n:
        curve /= n
    mean = float(np.mean(list(per_user.values()))) if per_user else float("nan")
    return EvalReport(cohort.name, approach, curve, per_user, mean, n, skipped, failed)


def run_benchmark(
    snapshot: Snapshot,
    cohorts: Sequence[TestCohort],
    approaches: Sequence[str] = (PROPOSED, *(k.value for k in BaselineKind)),
    params: SuggestionParams = SuggestionParams(),
    current_params: CurrentApproachParams = CurrentApproachParams(),
    threads: int = 1,
) -> List[EvalReport]:
    """One :class:`EvalReport` per (cohort, approach), in input order.

    Users whose suggestion call raises are logged and left out.
    """
    approaches = [a if a == PROPOSED else BaselineKind(a).value for a in approaches]
    users = sorted({u for c in cohorts for u in c.users})
    jobs = [(a, u) for a in approaches for u in users]
    results: Dict[Tuple[str, int], Optional[SuggestionList]] = {}
    for approach, u, slist, err in _map(_task, jobs, snapshot, params, current_params, threads):
        if err is not None:
            log.warning("approach %s, user %d skipped: %s", approach, u, err)
        results[(approach, u)] = slist

    reports = []
    for cohort in cohorts:
        for a in approaches:
            lists = {u: results[(a, u)] for u in cohort.users if results.get((a, u)) is not None}
            reports.append(_report(cohort, a, lists, len(cohort.users) - len(lists)))
    return reports


# -- weight sweep ---------------------------------------------------------------


def weight_grid(step: float) -> List[Tuple[float, float, float]]:
    """Triples on the ``step`` lattice summing to 1 whose first entry is strictly largest."""
    if not step > 0:
        raise ValueError("step must be > 0")
    n = round(1.0 / step)
    if n < 1 or not math.isclose(n * step, 1.0, rel_tol=0, abs_tol=1e-9):
        return []
    grid = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = n - i - j
            if i > j and i > k:
                grid.append((round(i / n, 12), round(j / n, 12), round(k / n, 12)))
    return sorted(grid)


def _sweep_task(job):
    u, truth, grid, k = job
    snapshot, params = _worker_state["snapshot"], _worker_state["params"]
    try:
        prep = prepare_target(snapshot, u, params.L, params.mu)
    except Exception as exc:
        return u, None, repr(exc)
    base = params.feature_weights
    row = []
    for triple in grid:
        fw = FeatureWeights(*triple, base.ips, base.interactions)
        row.append(precision_at_k(score_prepared(prep, params.with_(feature_weights=fw)), truth, k))
    return u, row, None


def sweep_weights(
    snapshot: Snapshot,
    validation_cohort: TestCohort,
    step: float = 0.1,
    base_params: SuggestionParams = SuggestionParams(),
    threads: int = 1,
    k: int = 10,
) -> Tuple[FeatureWeights, List[Tuple[Tuple[float, float, float], float]]]:
    """Grid-search the friends/schools/groups weights by mean P@k on a validation cohort.

    The IP and interaction weights are taken from `base_params`.  Returns
    the best weights (ties go to the lexicographically smallest triple) and
    the full ``(triple, mean P@k)`` table in grid order.
    """
    grid = weight_grid(step)
    if not grid:
        raise ValueError(f"no weight triple on step {step} satisfies the constraint")
    jobs = [
        (u, validation_cohort.truth.get(u, set()), grid, k)
        for u in validation_cohort.users
    ]
    rows = []
    for u, row, err in _map(_sweep_task, jobs, snapshot, base_params, None, threads):
        if err is not None:
            log.warning("sweep: user %d skipped: %s", u, err)
        else:
            rows.append(row)
    means = np.mean(rows, axis=0) if rows else np.zeros(len(grid))
    table = [(triple, float(m)) for triple, m in zip(grid, means)]
    best_triple, _ = min(table, key=lambda row: (-row[1], row[0]))
    base = base_params.feature_weights
    return FeatureWeights(*best_triple, base.ips, base.interactions), table


# -- output -----------------------------------------------------------------


def write_report(path, reports: Iterable[EvalReport]) -> None:
    reports = list(reports)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("cohort,approach,k,precision\n")
        for rep in reports:
            for k, p in enumerate(rep.precision_curve, 1):
                fh.write(f"{rep.cohort},{rep.approach},{k},{p:.6f}\n")
        fh.write("cohort,approach,mean_auc,users_evaluated\n")
        for rep in reports:
            fh.write(f"{rep.cohort},{rep.approach},{rep.mean_auc:.6f},{rep.users_evaluated}\n")


def write_sweep_table(path, table) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("w_friends,w_schools,w_groups,mean_p10\n")
        for (a, b, c), p in table:
            fh.write(f"{a:.2f},{b:.2f},{c:.2f},{p:.6f}\n")
