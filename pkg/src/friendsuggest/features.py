"""Pairwise mutual-information features and the affinity score."""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import NamedTuple

from .graph import AttrKind, Snapshot, UnknownUserError

__all__ = ["FeatureVector", "FeatureWeights", "adamic_adar", "affinity", "feature_vector"]


class FeatureVector(NamedTuple):
    mutual_friends: int = 0
    mutual_schools: int = 0
    mutual_groups: int = 0
    mutual_ips: int = 0
    mutual_interactions: int = 0


@dataclass(frozen=True)
class FeatureWeights:
    """One non-negative weight per :class:`FeatureVector` field, same order."""

    friends: float = 0.5
    schools: float = 0.3
    groups: float = 0.2
    ips: float = 0.0
    interactions: float = 0.0

    def __post_init__(self):
        for name, w in zip(FeatureVector._fields, astuple(self)):
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"weight for {name} must be finite and >= 0, got {w}")

    def __iter__(self):
        return iter(astuple(self))

    @classmethod
    def zeros(cls) -> "FeatureWeights":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)

    def scaled(self, c: float) -> "FeatureWeights":
        return FeatureWeights(*(c * w for w in self))


def _check_users(snapshot: Snapshot, u: int, v: int) -> None:
    for x in (u, v):
        if x not in snapshot:
            raise UnknownUserError(x)
    if u == v:
        raise ValueError("features are defined for distinct users only")


def feature_vector(snapshot: Snapshot, u: int, v: int) -> FeatureVector:
    """Counts of mutual friends, schools, groups, IPs and the interaction count."""
    _check_users(snapshot, u, v)
    return FeatureVector(
        len(snapshot.neighbor_set(u) & snapshot.neighbor_set(v)),
        len(snapshot.attribute(u, AttrKind.SCHOOL) & snapshot.attribute(v, AttrKind.SCHOOL)),
        len(snapshot.attribute(u, AttrKind.GROUP) & snapshot.attribute(v, AttrKind.GROUP)),
        len(snapshot.attribute(u, AttrKind.IP) & snapshot.attribute(v, AttrKind.IP)),
        snapshot.interaction(u, v),
    )


def adamic_adar(snapshot: Snapshot, u: int, v: int) -> float:
    """Sum of ``1 / ln(deg(z))`` over the common neighbours ``z`` of `u` and `v`.

    A common neighbour is adjacent to both users, so its degree is at least 2
    and every term is finite.
    """
    _check_users(snapshot, u, v)
    common = snapshot.neighbor_set(u) & snapshot.neighbor_set(v)
    return sum(1.0 / math.log(snapshot.degree(z)) for z in sorted(common))


def affinity(fv: FeatureVector, weights: FeatureWeights) -> float:
    """``sum_i w_i * ln(S_i + 1)`` with the natural logarithm."""
    return sum((w * math.log1p(s) for w, s in zip(weights, fv) if w), 0.0)
