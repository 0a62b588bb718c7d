"""Friends-of-friends candidate selection."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .graph import Snapshot

__all__ = ["CandidateSet", "friends_of_friends", "select_candidates"]


@dataclass(frozen=True)
class CandidateSet:
    target: int
    members: List[int] = field(default_factory=list)
    mutual_count: Dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def friends_of_friends(snapshot: Snapshot, u: int) -> Dict[int, int]:
    """Map every user at distance exactly two from `u` to its mutual-friend count.

    Counting how often each vertex shows up across the friends' adjacency
    lists gives ``|N_u & N_v|`` directly, without per-pair intersections.
    """
    friends = snapshot.neighbor_set(u)
    counts: Counter = Counter()
    for f in snapshot.neighbors(u):
        counts.update(snapshot.neighbors(f))
    counts.pop(u, None)
    for f in friends:
        counts.pop(f, None)
    return dict(counts)


def select_candidates(snapshot: Snapshot, u: int, L: Optional[int] = 10000, mu: int = 5) -> CandidateSet:
    """Pick at most `L` friends-of-friends sharing at least `mu` friends with `u`.

    Candidates are ordered by mutual-friend count, descending, with ties
    broken by ascending id.  ``L=None`` means no cap.
    """
    if L is not None and L < 0:
        raise ValueError("L must be >= 0")
    if mu < 1:
        raise ValueError("mu must be >= 1")
    counts = friends_of_friends(snapshot, u)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    members = []
    for v, c in ranked:
        # sorted descending, so nothing later can reach mu either
        if c < mu or (L is not None and len(members) >= L):
            break
        members.append(v)
    return CandidateSet(u, members, {v: counts[v] for v in members})
