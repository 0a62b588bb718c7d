"""Comparison approaches: the deployed feature-graph score, Adamic-Adar,
common neighbours and plain (unit-strength) RWR."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .candidates import friends_of_friends
from .features import FeatureWeights, adamic_adar
from .graph import AttrKind, Snapshot, UnknownUserError
from .suggester import SuggestionList, SuggestionParams, prepare_target, proximity, rank_entries

__all__ = [
    "BaselineKind",
    "CurrentApproachParams",
    "baseline_suggest",
    "current_score",
]

# upper triangle of the default edge-weight matrix: (1,2) (1,3) (1,4) (2,3) (2,4) (3,4)
_DEFAULT_E = (2.0, 1.9, 1.6, 1.8, 1.7, 1.4)
_TRIU = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


class BaselineKind(str, enum.Enum):
    CURRENT = "current"
    ADAMIC_ADAR = "adamic_adar"
    COMMON_NEIGHBORS = "common_neighbors"
    PLAIN_RWR = "plain_rwr"


def edge_matrix(upper: Tuple[float, ...]) -> np.ndarray:
    """Symmetric 4x4 matrix with zero diagonal from its six upper-triangle values."""
    if len(upper) != 6:
        raise ValueError("need exactly 6 upper-triangle values")
    e = np.zeros((4, 4))
    for (i, j), val in zip(_TRIU, upper):
        e[i, j] = e[j, i] = val
    return e


@dataclass(frozen=True)
class CurrentApproachParams:
    """Vertex weights `t` (friends, schools, companies, IPs) and edge weights `e`."""

    t: Tuple[float, float, float, float] = (1.7, 1.5, 1.4, 1.1)
    e: np.ndarray = field(default_factory=lambda: edge_matrix(_DEFAULT_E))

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        if len(self.t) != 4 or e.shape != (4, 4):
            raise ValueError("t needs 4 values and e must be 4x4")
        if any(ti < 1 for ti in self.t):
            raise ValueError("every t_i must be >= 1")
        if not np.allclose(e, e.T) or np.any(np.diag(e) != 0):
            raise ValueError("e must be symmetric with a zero diagonal")
        object.__setattr__(self, "e", e)

    @classmethod
    def from_upper(cls, t, upper) -> "CurrentApproachParams":
        return cls(tuple(t), edge_matrix(tuple(upper)))


def _turned_on(snapshot: Snapshot, u: int, v: int) -> np.ndarray:
    shares = lambda kind: bool(snapshot.attribute(u, kind) & snapshot.attribute(v, kind))
    return np.array([True, shares(AttrKind.SCHOOL), shares(AttrKind.COMPANY), shares(AttrKind.IP)])


def current_score(
    snapshot: Snapshot, u: int, v: int, params: CurrentApproachParams = CurrentApproachParams()
) -> float:
    """Feature-graph score ``n * sum_{i,j} e_ij t_i t_j`` over ordered pairs.

    Vertex 1 (mutual friends) is always on; vertices 2-4 are on when the
    pair shares a school, company or IP.  Off vertices weigh 1, off edges
    weigh 1, and `n` counts on edges among unordered pairs.
    """
    if u == v:
        raise ValueError("current_score needs two distinct users")
    on = _turned_on(snapshot, u, v)
    t = np.where(on, params.t, 1.0)
    both = np.outer(on, on)
    e = np.where(both, params.e, 1.0)
    np.fill_diagonal(e, 0.0)
    n = int(np.triu(both, k=1).sum())
    return float(n * (e * np.outer(t, t)).sum())


def baseline_suggest(
    snapshot: Snapshot,
    u: int,
    kind: BaselineKind,
    params: SuggestionParams = SuggestionParams(),
    current_params: CurrentApproachParams = CurrentApproachParams(),
) -> SuggestionList:
    """Rank candidates for `u` with one of the comparison approaches.

    Adamic-Adar, common neighbours and the current approach score every
    friend-of-friend; plain RWR runs the proposed pipeline (including the
    `L` / `mu` pruning) with unit edge strengths and ranks by proximity alone.
    """
    if u not in snapshot:
        raise UnknownUserError(u)
    kind = BaselineKind(kind)
    if kind is BaselineKind.PLAIN_RWR:
        prep = prepare_target(snapshot, u, params.L, params.mu, with_features=False)
        return rank_entries(u, proximity(prep, FeatureWeights.zeros(), params.rwr))

    fof = friends_of_friends(snapshot, u)
    if kind is BaselineKind.COMMON_NEIGHBORS:
        scores = {v: float(c) for v, c in fof.items()}
    elif kind is BaselineKind.ADAMIC_ADAR:
        scores = {v: adamic_adar(snapshot, u, v) for v in fof}
    else:
        scores = {v: current_score(snapshot, u, v, current_params) for v in fof}
    return rank_entries(u, scores)
