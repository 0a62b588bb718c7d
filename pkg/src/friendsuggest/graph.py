"""Network snapshots: loading, validation, temporal splitting and filtering.

A :class:`Snapshot` holds an undirected friendship graph (each friendship is
stored once under an ordered ``(min, max)`` key and exposed in both
directions), edge timestamps, per-user attribute sets and pairwise
interaction counts.  Snapshots are immutable once built and may be shared by
any number of readers.
"""
from __future__ import annotations

import enum
import os
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Set, Tuple

__all__ = [
    "AttrKind",
    "EdgeRecord",
    "Snapshot",
    "SnapshotFormatError",
    "UnknownUserError",
    "apply_user_filter",
    "load_snapshot",
    "neighborhood",
    "read_attributes",
    "read_edges",
    "read_interactions",
    "snapshot_from_records",
    "temporal_split",
    "write_snapshot",
]

Pair = Tuple[int, int]


class AttrKind(str, enum.Enum):
    SCHOOL = "school"
    GROUP = "group"
    IP = "ip"
    COMPANY = "company"


class EdgeRecord(NamedTuple):
    u: int
    v: int
    t: int


class SnapshotFormatError(ValueError):
    """Raised for malformed input files; carries the offending line number."""

    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {message}")


class UnknownUserError(KeyError):
    pass


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


class Snapshot:
    """Immutable symmetric friendship graph with attributes and interactions.

    Parameters
    ----------
    edge_time : mapping
        ``(u, v) -> timestamp``.  Either orientation is accepted; a pair given
        twice keeps the earliest timestamp.
    users : iterable of int, optional
        Extra (possibly isolated) users.  Edge endpoints are always users.
    attributes : mapping, optional
        ``(user, AttrKind) -> iterable of value ids``.
    interactions : mapping, optional
        ``(u, v) -> count``, unordered; both orientations are summed.
    """

    __slots__ = ("_edge_time", "_adj", "_adj_sets", "_attributes", "_interactions", "_users")

    def __init__(
        self,
        edge_time: Mapping[Pair, int] = None,
        users: Iterable[int] = (),
        attributes: Mapping[Tuple[int, AttrKind], Iterable[int]] = None,
        interactions: Mapping[Pair, int] = None,
    ):
        times: Dict[Pair, int] = {}
        for (u, v), t in (edge_time or {}).items():
            if u == v:
                raise ValueError(f"self-loop on user {u}")
            if u < 0 or v < 0:
                raise ValueError(f"negative user id in edge ({u}, {v})")
            key = _pair(int(u), int(v))
            t = int(t)
            if key not in times or t < times[key]:
                times[key] = t

        adj: Dict[int, List[int]] = defaultdict(list)
        for a, b in times:
            adj[a].append(b)
            adj[b].append(a)
        all_users = set(adj)
        all_users.update(int(u) for u in users)

        attrs: Dict[Tuple[int, AttrKind], FrozenSet[int]] = {}
        for (u, kind), values in (attributes or {}).items():
            kind = AttrKind(kind)
            values = frozenset(int(x) for x in values)
            if values:
                attrs[(int(u), kind)] = values
                all_users.add(int(u))

        inter: Dict[Pair, int] = defaultdict(int)
        for (u, v), count in (interactions or {}).items():
            if count < 0:
                raise ValueError(f"negative interaction count for ({u}, {v})")
            if u != v and count:
                inter[_pair(int(u), int(v))] += int(count)

        self._edge_time = times
        self._users = frozenset(all_users)
        self._adj = {u: tuple(sorted(adj.get(u, ()))) for u in sorted(all_users)}
        self._adj_sets = {u: frozenset(nb) for u, nb in self._adj.items()}
        self._attributes = attrs
        self._interactions = dict(inter)

    # -- read access --------------------------------------------------------

    @property
    def users(self) -> FrozenSet[int]:
        return self._users

    @property
    def n_users(self) -> int:
        return len(self._users)

    @property
    def n_edges(self) -> int:
        """Number of undirected friendships."""
        return len(self._edge_time)

    def __contains__(self, u) -> bool:
        return u in self._users

    def __repr__(self):
        return f"Snapshot(n_users={self.n_users}, n_edges={self.n_edges})"

    def neighbors(self, u: int) -> Tuple[int, ...]:
        """Friends of `u` in ascending id order."""
        try:
            return self._adj[u]
        except KeyError:
            raise UnknownUserError(u) from None

    def neighbor_set(self, u: int) -> FrozenSet[int]:
        try:
            return self._adj_sets[u]
        except KeyError:
            raise UnknownUserError(u) from None

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def has_edge(self, u: int, v: int) -> bool:
        return _pair(u, v) in self._edge_time

    def edge_time(self, u: int, v: int) -> int:
        return self._edge_time[_pair(u, v)]

    def edges(self) -> Iterator[EdgeRecord]:
        """Each friendship once, as ``(min, max, t)``, in sorted order."""
        for (a, b) in sorted(self._edge_time):
            yield EdgeRecord(a, b, self._edge_time[(a, b)])

    def attribute(self, u: int, kind: AttrKind) -> FrozenSet[int]:
        return self._attributes.get((u, kind), frozenset())

    def attribute_items(self) -> Iterator[Tuple[int, AttrKind, FrozenSet[int]]]:
        for (u, kind) in sorted(self._attributes, key=lambda k: (k[0], k[1].value)):
            yield u, kind, self._attributes[(u, kind)]

    def interaction(self, u: int, v: int) -> int:
        return self._interactions.get(_pair(u, v), 0)

    def interaction_items(self) -> Iterator[Tuple[int, int, int]]:
        for (a, b) in sorted(self._interactions):
            yield a, b, self._interactions[(a, b)]

    def subgraph(self, keep: Iterable[int], drop_pairs: Iterable[Pair] = ()) -> "Snapshot":
        """Restrict to the users in `keep`, also deleting the friendships in `drop_pairs`."""
        keep = frozenset(keep) & self._users
        dropped = {_pair(u, v) for u, v in drop_pairs}
        edges = {
            key: t
            for key, t in self._edge_time.items()
            if key[0] in keep and key[1] in keep and key not in dropped
        }
        attrs = {key: vals for key, vals in self._attributes.items() if key[0] in keep}
        inter = {
            key: c for key, c in self._interactions.items() if key[0] in keep and key[1] in keep
        }
        return Snapshot(edges, users=keep, attributes=attrs, interactions=inter)


def neighborhood(snapshot: Snapshot, u: int) -> Tuple[int, ...]:
    """Return the friends of `u` in ascending id order; raises for unknown users."""
    return snapshot.neighbors(u)


def snapshot_from_records(
    records: Iterable[EdgeRecord],
    attributes: Mapping = None,
    interactions: Mapping = None,
    users: Iterable[int] = (),
) -> Snapshot:
    times: Dict[Pair, int] = {}
    for rec in records:
        key = _pair(rec.u, rec.v)
        if key not in times or rec.t < times[key]:
            times[key] = rec.t
    return Snapshot(times, users=users, attributes=attributes, interactions=interactions)


# -- file formats -----------------------------------------------------------


def _records(path) -> Iterator[Tuple[int, List[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def _int_field(path, lineno, text, what, minimum=0) -> int:
    try:
        value = int(text)
    except ValueError:
        raise SnapshotFormatError(path, lineno, f"{what} is not an integer: {text!r}") from None
    if value < minimum:
        raise SnapshotFormatError(path, lineno, f"{what} must be >= {minimum}, got {value}")
    return value


def read_edges(path) -> List[EdgeRecord]:
    """Read ``u<TAB>v<TAB>timestamp`` lines in file order."""
    out = []
    for lineno, fields in _records(path):
        if len(fields) != 3:
            raise SnapshotFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
        u = _int_field(path, lineno, fields[0], "user id")
        v = _int_field(path, lineno, fields[1], "user id")
        t = _int_field(path, lineno, fields[2], "timestamp", minimum=-(2**63))
        if u == v:
            raise SnapshotFormatError(path, lineno, f"self-loop on user {u}")
        out.append(EdgeRecord(u, v, t))
    return out


def read_attributes(path) -> Dict[Tuple[int, AttrKind], Set[int]]:
    attrs: Dict[Tuple[int, AttrKind], Set[int]] = defaultdict(set)
    for lineno, fields in _records(path):
        if len(fields) != 3:
            raise SnapshotFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
        u = _int_field(path, lineno, fields[0], "user id")
        try:
            kind = AttrKind(fields[1].strip())
        except ValueError:
            raise SnapshotFormatError(path, lineno, f"unknown attribute kind {fields[1]!r}") from None
        attrs[(u, kind)].add(_int_field(path, lineno, fields[2], "value id"))
    return dict(attrs)


def read_interactions(path) -> Dict[Pair, int]:
    counts: Dict[Pair, int] = defaultdict(int)
    for lineno, fields in _records(path):
        if len(fields) != 3:
            raise SnapshotFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
        u = _int_field(path, lineno, fields[0], "user id")
        v = _int_field(path, lineno, fields[1], "user id")
        if u == v:
            raise SnapshotFormatError(path, lineno, f"self-interaction on user {u}")
        counts[_pair(u, v)] += _int_field(path, lineno, fields[2], "count")
    return dict(counts)


def load_snapshot(edges_path, attrs_path=None, interactions_path=None) -> Snapshot:
    """Load a snapshot from the tab-separated edge, attribute and interaction files.

    Optional paths that are ``None`` yield empty attribute / interaction maps.
    Malformed lines raise :class:`SnapshotFormatError` with the line number.
    """
    records = read_edges(edges_path)
    attrs = read_attributes(attrs_path) if attrs_path is not None else {}
    inter = read_interactions(interactions_path) if interactions_path is not None else {}
    return snapshot_from_records(records, attrs, inter)


def write_snapshot(snapshot: Snapshot, edges_path, attrs_path=None, interactions_path=None) -> None:
    """Serialize `snapshot` in the formats read by :func:`load_snapshot`."""
    with open(edges_path, "w", encoding="utf-8") as fh:
        for rec in snapshot.edges():
            fh.write(f"{rec.u}\t{rec.v}\t{rec.t}\n")
    if attrs_path is not None:
        with open(attrs_path, "w", encoding="utf-8") as fh:
            for u, kind, values in snapshot.attribute_items():
                for value in sorted(values):
                    fh.write(f"{u}\t{kind.value}\t{value}\n")
    if interactions_path is not None:
        with open(interactions_path, "w", encoding="utf-8") as fh:
            for a, b, count in snapshot.interaction_items():
                fh.write(f"{a}\t{b}\t{count}\n")


# -- protocol helpers -------------------------------------------------------


def temporal_split(edges: Iterable[EdgeRecord], boundary: int) -> Tuple[List[EdgeRecord], List[EdgeRecord]]:
    """Partition `edges` into ``t <= boundary`` (train) and ``t > boundary`` (test)."""
    train, test = [], []
    for rec in edges:
        (train if rec.t <= boundary else test).append(rec)
    return train, test


def apply_user_filter(
    snapshot: Snapshot, new_edges: Iterable[EdgeRecord], min_new: int
) -> Tuple[Snapshot, Set[int]]:
    """Keep active users and strip in-period friendships from the snapshot.

    Users with at least `min_new` incident edges in `new_edges` are eligible.
    The filtered snapshot keeps only eligible users and drops every
    friendship that also appears in `new_edges`.  Counting happens before
    any removal.
    """
    if min_new < 0:
        raise ValueError("min_new must be >= 0")
    new_edges = list(new_edges)
    counts: Dict[int, int] = defaultdict(int)
    new_pairs = set()
    for rec in new_edges:
        key = _pair(rec.u, rec.v)
        if key in new_pairs:
            continue
        new_pairs.add(key)
        counts[rec.u] += 1
        counts[rec.v] += 1
    if min_new == 0:
        eligible = set(snapshot.users) | set(counts)
    else:
        eligible = {u for u, c in counts.items() if c >= min_new}
    return snapshot.subgraph(eligible, drop_pairs=new_pairs), eligible
