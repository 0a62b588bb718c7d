"""Local graph construction and Random Walk with Restart."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List

import numpy as np
from scipy import sparse

from .candidates import CandidateSet
from .features import FeatureWeights, feature_vector
from .graph import Snapshot

__all__ = [
    "LocalFeatures",
    "LocalGraph",
    "RwrDistribution",
    "RwrParams",
    "build_local_graph",
    "local_features",
    "rwr_distribution",
    "rwr_iterates",
]


@dataclass(frozen=True)
class RwrParams:
    alpha: float = 0.4
    epsilon: float = 1e-4
    max_iters: int = 50

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass(frozen=True)
class LocalGraph:
    vertices: List[int]
    index_of: Dict[int, int]
    weights: sparse.csr_matrix

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_edges(cls, vertices, strengths: Dict) -> "LocalGraph":
        """Build from an ordered vertex list and ``{(v, w): strength}`` (symmetrized)."""
        vertices = list(vertices)
        index_of = {v: i for i, v in enumerate(vertices)}
        rows, cols, vals = [], [], []
        for (v, w), c in strengths.items():
            if c <= 0:
                raise ValueError(f"edge strength must be > 0, got {c} on ({v}, {w})")
            i, j = index_of[v], index_of[w]
            rows += [i, j]
            cols += [j, i]
            vals += [c, c]
        n = len(vertices)
        W = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=float)
        return cls(vertices, index_of, W)


@dataclass(frozen=True)
class RwrDistribution:
    vertices: List[int]
    vector: np.ndarray
    iterations: int
    converged: bool

    @property
    def r(self) -> Dict[int, float]:
        return dict(zip(self.vertices, self.vector.tolist()))

    def __getitem__(self, v) -> float:
        return float(self.vector[self.vertices.index(v)])


@dataclass(frozen=True)
class LocalFeatures:
    """Weight-independent part of a local graph: vertices, edges and their feature vectors."""

    vertices: List[int]
    index_of: Dict[int, int]
    rows: np.ndarray
    cols: np.ndarray
    features: np.ndarray  # (n_edges, 5)

    def graph(self, weights: FeatureWeights) -> LocalGraph:
        n = len(self.vertices)
        w = np.fromiter(weights, dtype=float, count=5)
        if w.any():
            strength = 1.0 + np.log1p(self.features) @ w
        else:
            strength = np.ones(len(self.rows))
        i = np.concatenate([self.rows, self.cols])
        j = np.concatenate([self.cols, self.rows])
        W = sparse.csr_matrix((np.concatenate([strength, strength]), (i, j)), shape=(n, n))
        return LocalGraph(self.vertices, self.index_of, W)


def local_features(snapshot: Snapshot, u: int, cands: CandidateSet, with_features: bool = True) -> LocalFeatures:
    """Vertices ``{u} | N_u | C_u`` and every friendship among them.

    With ``with_features=False`` the feature matrix is left at zero, which
    is all a unit-strength graph needs.
    """
    if cands.target != u:
        raise ValueError(f"candidate set targets {cands.target}, not {u}")
    vertices = [u, *snapshot.neighbors(u)]
    seen = set(vertices)
    vertices += [c for c in cands.members if c not in seen]
    index_of = {v: i for i, v in enumerate(vertices)}

    rows, cols, feats = [], [], []
    for v in vertices:
        for w in snapshot.neighbors(v):
            if w > v and w in index_of:
                rows.append(index_of[v])
                cols.append(index_of[w])
                if with_features:
                    feats.append(feature_vector(snapshot, v, w))
    return LocalFeatures(
        vertices,
        index_of,
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(feats, dtype=float).reshape(-1, 5) if with_features else np.zeros((len(rows), 5)),
    )


def build_local_graph(
    snapshot: Snapshot, u: int, cands: CandidateSet, weights: FeatureWeights
) -> LocalGraph:
    """Induced subgraph on ``{u} | N_u | C_u`` with strength ``1 + affinity`` per friendship."""
    return local_features(snapshot, u, cands, with_features=any(weights)).graph(weights)


def rwr_iterates(g: LocalGraph, u: int, params: RwrParams = RwrParams()) -> Iterator[np.ndarray]:
    """Yield ``r(0) = e, r(1), ...`` until the L1 change drops below epsilon or max_iters is hit.

    The transition matrix normalizes each row of strengths; rows without
    edges send their mass back to `u`.
    """
    n = g.n_vertices
    src = g.index_of[u]
    alpha = params.alpha
    W = g.weights
    WT = W.T.tocsr()
    out_strength = np.asarray(W.sum(axis=1)).ravel()
    dangling = out_strength == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / out_strength[~dangling]

    r = np.zeros(n)
    r[src] = 1.0
    yield r
    for _ in range(int(params.max_iters)):
        nxt = (1.0 - alpha) * (WT @ (r * inv))
        nxt[src] += (1.0 - alpha) * r[dangling].sum() + alpha
        change = np.abs(nxt - r).sum()
        r = nxt
        yield r
        if change < params.epsilon:
            return


def rwr_distribution(g: LocalGraph, u: int, params: RwrParams = RwrParams()) -> RwrDistribution:
    """Restart-at-`u` stationary distribution over the local graph's vertices."""
    steps = -1
    prev = None
    for steps, r in enumerate(rwr_iterates(g, u, params)):
        change = np.inf if prev is None else np.abs(r - prev).sum()
        prev = r
    return RwrDistribution(list(g.vertices), prev, steps, bool(change < params.epsilon))
