"""Score friends-of-friends by direct affinity plus RWR proximity and rank them."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .candidates import CandidateSet, select_candidates
from .features import FeatureWeights, feature_vector
from .graph import Snapshot, UnknownUserError
from .rwr import LocalFeatures, RwrParams, local_features, rwr_distribution

__all__ = [
    "PreparedTarget",
    "SuggestionList",
    "SuggestionParams",
    "format_suggestions",
    "prepare_target",
    "proximity",
    "rank_entries",
    "score_candidate",
    "score_prepared",
    "suggest",
    "write_suggestions",
]


@dataclass(frozen=True)
class SuggestionParams:
    feature_weights: FeatureWeights = field(default_factory=FeatureWeights)
    w_direct: float = 0.4
    w_indirect: float = 0.6
    rwr: RwrParams = field(default_factory=RwrParams)
    L: Optional[int] = 10000
    mu: int = 5

    def __post_init__(self):
        if self.w_direct < 0 or self.w_indirect < 0:
            raise ValueError("w_direct and w_indirect must be >= 0")
        if not self.w_direct + self.w_indirect > 0:
            raise ValueError("w_direct + w_indirect must be > 0")

    def with_(self, **changes) -> "SuggestionParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SuggestionList:
    target: int
    entries: List[Tuple[int, float]] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def candidates(self) -> List[int]:
        return [v for v, _ in self.entries]

    @property
    def scores(self) -> List[float]:
        return [s for _, s in self.entries]


def rank_entries(target: int, scores: Dict[int, float]) -> SuggestionList:
    """Sort by score descending, ties by ascending id."""
    return SuggestionList(target, sorted(scores.items(), key=lambda kv: (-kv[1], kv[0])))


def score_candidate(aff: float, psi: float, params: SuggestionParams) -> float:
    return params.w_direct * aff + params.w_indirect * psi


@dataclass(frozen=True)
class PreparedTarget:
    """Everything about one target that does not depend on the weights.

    Lets a weight sweep rescore a user without re-enumerating candidates or
    recomputing feature vectors.
    """

    target: int
    cands: CandidateSet
    local: Optional[LocalFeatures]
    direct: np.ndarray  # feature vectors (target, candidate), one row per candidate


def prepare_target(snapshot: Snapshot, u: int, L: Optional[int], mu: int, with_features: bool = True) -> PreparedTarget:
    if u not in snapshot:
        raise UnknownUserError(u)
    cands = select_candidates(snapshot, u, L, mu)
    if not cands.members:
        return PreparedTarget(u, cands, None, np.zeros((0, 5)))
    local = local_features(snapshot, u, cands, with_features=with_features)
    if with_features:
        direct = np.array([feature_vector(snapshot, u, v) for v in cands.members], dtype=float)
    else:
        direct = np.zeros((len(cands), 5))
    return PreparedTarget(u, cands, local, direct)


def _psi(prep: PreparedTarget, weights: FeatureWeights, rwr: RwrParams) -> np.ndarray:
    if prep.local is None:
        return np.zeros(0)
    g = prep.local.graph(weights)
    dist = rwr_distribution(g, prep.target, rwr)
    return dist.vector[[g.index_of[v] for v in prep.cands.members]]


def proximity(prep: PreparedTarget, weights: FeatureWeights, rwr: RwrParams) -> Dict[int, float]:
    """RWR mass on each candidate, restarting at the target on its local graph."""
    return dict(zip(prep.cands.members, _psi(prep, weights, rwr).tolist()))


def score_prepared(prep: PreparedTarget, params: SuggestionParams) -> SuggestionList:
    psi = _psi(prep, params.feature_weights, params.rwr)
    w = np.fromiter(params.feature_weights, dtype=float, count=5)
    aff = np.log1p(prep.direct) @ w
    scores = {
        v: score_candidate(a, p, params)
        for v, a, p in zip(prep.cands.members, aff.tolist(), psi.tolist())
    }
    return rank_entries(prep.target, scores)


def suggest(snapshot: Snapshot, u: int, params: SuggestionParams = SuggestionParams()) -> SuggestionList:
    """Ranked friend suggestions for `u`.

    Candidates come from :func:`select_candidates`; each is scored by
    ``w_direct * affinity + w_indirect * psi`` where psi is its RWR mass on
    the target's local graph.
    """
    return score_prepared(prepare_target(snapshot, u, params.L, params.mu), params)


def format_suggestions(lists: Iterable[SuggestionList], top: Optional[int] = None) -> Iterable[str]:
    """Yield ``target<TAB>rank<TAB>candidate<TAB>score`` lines, lists ordered by target."""
    for sl in sorted(lists, key=lambda s: s.target):
        entries = sl.entries if top is None else sl.entries[:top]
        for rank, (v, score) in enumerate(entries, 1):
            yield f"{sl.target}\t{rank}\t{v}\t{score:.6f}"


def write_suggestions(path, lists: Iterable[SuggestionList], top: Optional[int] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in format_suggestions(lists, top):
            fh.write(line + "\n")
