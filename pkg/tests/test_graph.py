import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from friendsuggest.graph import (
    AttrKind,
    EdgeRecord,
    Snapshot,
    SnapshotFormatError,
    UnknownUserError,
    apply_user_filter,
    load_snapshot,
    neighborhood,
    snapshot_from_records,
    temporal_split,
    write_snapshot,
)

from _graphs import random_snapshot


class TestLoadSnapshot:
    def test_empty_file(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", []))
        assert snap.n_users == 0
        assert snap.n_edges == 0

    def test_single_edge_is_symmetric(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["1\t2\t100"]))
        assert neighborhood(snap, 1) == (2,)
        assert neighborhood(snap, 2) == (1,)
        assert snap.edge_time(1, 2) == snap.edge_time(2, 1) == 100

    def test_reverse_duplicate_stored_once(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["1\t2\t100", "2\t1\t100", "2\t3\t150"]))
        assert snap.n_users == 3
        assert snap.n_edges == 2
        assert list(snap.edges()) == [EdgeRecord(1, 2, 100), EdgeRecord(2, 3, 150)]

    def test_duplicates_keep_earliest_time(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["4\t5\t300", "5\t4\t200", "4\t5\t250"]))
        assert snap.edge_time(4, 5) == 200

    def test_comments_and_blank_lines(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["# header", "", "1\t2\t5"]))
        assert snap.n_edges == 1

    def test_deterministic_neighbor_order(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["9\t3\t1", "9\t1\t1", "2\t9\t1"]))
        assert neighborhood(snap, 9) == (1, 2, 3)

    def test_optional_files_missing(self, write_lines):
        snap = load_snapshot(write_lines("edges.tsv", ["1\t2\t5"]), None, None)
        assert snap.attribute(1, AttrKind.SCHOOL) == frozenset()
        assert snap.interaction(1, 2) == 0

    def test_attributes_and_interactions(self, write_lines):
        snap = load_snapshot(
            write_lines("edges.tsv", ["1\t2\t5"]),
            write_lines("attrs.tsv", ["1\tschool\t7", "1\tschool\t8", "2\tip\t3"]),
            write_lines("inter.tsv", ["1\t2\t4", "2\t1\t3"]),
        )
        assert snap.attribute(1, AttrKind.SCHOOL) == {7, 8}
        assert snap.attribute(2, AttrKind.IP) == {3}
        assert snap.interaction(2, 1) == 7

    @pytest.mark.parametrize(
        "line, lineno",
        [("1\t2", 2), ("1\tx\t5", 2), ("3\t3\t5", 2), ("1\t2\t5\t9", 2), ("-1\t2\t5", 2)],
    )
    def test_malformed_edge_lines_report_line_number(self, write_lines, line, lineno):
        path = write_lines("edges.tsv", ["1\t2\t5", line])
        with pytest.raises(SnapshotFormatError) as err:
            load_snapshot(path)
        assert err.value.lineno == lineno

    def test_unknown_attribute_kind(self, write_lines):
        edges = write_lines("edges.tsv", ["1\t2\t5"])
        attrs = write_lines("attrs.tsv", ["1\tschool\t1", "2\thobby\t1"])
        with pytest.raises(SnapshotFormatError, match="unknown attribute kind") as err:
            load_snapshot(edges, attrs)
        assert err.value.lineno == 2

    def test_negative_interaction_count(self, write_lines):
        edges = write_lines("edges.tsv", ["1\t2\t5"])
        with pytest.raises(SnapshotFormatError):
            load_snapshot(edges, None, write_lines("inter.tsv", ["1\t2\t-1"]))

    def test_round_trip(self, tmp_path):
        snap = random_snapshot(3)
        paths = [tmp_path / name for name in ("e.tsv", "a.tsv", "i.tsv")]
        write_snapshot(snap, *paths)
        again = load_snapshot(*paths)
        write_snapshot(again, *[p.with_suffix(".2") for p in paths])
        for p in paths:
            assert p.read_bytes() == p.with_suffix(".2").read_bytes()
        assert list(again.edges()) == list(snap.edges())


class TestSnapshot:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Snapshot({(1, 1): 0})

    def test_unknown_user(self):
        with pytest.raises(UnknownUserError):
            neighborhood(Snapshot({(1, 2): 0}), 99)

    def test_isolated_user(self):
        assert neighborhood(Snapshot({}, users=[4]), 4) == ()

    def test_two_node_graph(self):
        assert neighborhood(Snapshot({(7, 8): 0}), 7) == (8,)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_symmetry(self, seed):
        snap = random_snapshot(seed, n=25, p=0.2)
        for u in snap.users:
            assert u not in snap.neighbor_set(u)
            for v in snap.neighbors(u):
                assert u in snap.neighbor_set(v)
                assert snap.edge_time(u, v) == snap.edge_time(v, u)


class TestTemporalSplit:
    def test_boundary_is_inclusive_for_train(self):
        edges = [EdgeRecord(1, 2, 10), EdgeRecord(3, 4, 20)]
        assert temporal_split(edges, 10) == ([EdgeRecord(1, 2, 10)], [EdgeRecord(3, 4, 20)])

    def test_boundary_extremes(self):
        edges = [EdgeRecord(1, 2, 10), EdgeRecord(3, 4, 20)]
        assert temporal_split(edges, 0) == ([], edges)
        assert temporal_split(edges, 99) == (edges, [])

    @given(
        st.lists(st.tuples(st.integers(0, 50), st.integers(51, 100), st.integers(-100, 100)), max_size=40),
        st.integers(-150, 150),
    )
    def test_partition(self, raw, boundary):
        edges = [EdgeRecord(*r) for r in raw]
        train, test = temporal_split(edges, boundary)
        assert len(train) + len(test) == len(edges)
        assert sorted(train + test) == sorted(edges)
        assert all(r.t <= boundary for r in train) and all(r.t > boundary for r in test)


class TestUserFilter:
    def _snap(self):
        # triangle a=1, b=2, c=3 plus a pendant d=4 on a
        return Snapshot({(1, 2): 1, (2, 3): 1, (1, 3): 1, (1, 4): 1})

    def test_no_op(self):
        snap = self._snap()
        new = [EdgeRecord(1, 5, 9), EdgeRecord(2, 6, 9), EdgeRecord(3, 7, 9), EdgeRecord(4, 8, 9)]
        filtered, eligible = apply_user_filter(snap, new, 1)
        assert {1, 2, 3, 4} <= eligible
        assert list(filtered.edges()) == list(snap.edges())
        assert filtered.users == snap.users

    def test_threshold_zero(self):
        snap = self._snap()
        _, eligible = apply_user_filter(snap, [EdgeRecord(1, 9, 5)], 0)
        assert eligible == {1, 2, 3, 4, 9}

    def test_drops_inactive_user(self):
        snap = Snapshot({(1, 2): 1, (2, 3): 1, (1, 3): 1})
        new = [EdgeRecord(1, 2, 5), EdgeRecord(1, 8, 5), EdgeRecord(2, 9, 5)]
        filtered, eligible = apply_user_filter(snap, new, 1)
        assert 3 not in eligible
        assert filtered.users == {1, 2}
        # (1, 2) is itself a new friendship, so it is stripped too
        assert filtered.neighbors(1) == () and filtered.neighbors(2) == ()

    def test_counts_before_removal(self):
        # user 4 has one new edge, which also duplicates its only old edge
        snap = self._snap()
        new = [EdgeRecord(1, 4, 5), EdgeRecord(1, 2, 5), EdgeRecord(2, 3, 5), EdgeRecord(3, 9, 5)]
        filtered, eligible = apply_user_filter(snap, new, 1)
        assert 4 in eligible
        assert not filtered.has_edge(1, 4)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(0, 3))
    def test_filter_properties(self, seed, min_new):
        snap = random_snapshot(seed, n=30, p=0.15)
        new = [EdgeRecord(r.u, r.v, r.t) for i, r in enumerate(random_snapshot(seed + 1, n=30, p=0.1).edges())]
        filtered, eligible = apply_user_filter(snap, new, min_new)
        new_pairs = {(min(r.u, r.v), max(r.u, r.v)) for r in new}
        assert filtered.users <= eligible
        for u in filtered.users:
            for v in filtered.neighbors(u):
                assert v in eligible
                assert (min(u, v), max(u, v)) not in new_pairs
                assert u in filtered.neighbor_set(v)

    def test_rejects_negative_threshold(self):
        with pytest.raises(ValueError):
            apply_user_filter(self._snap(), [], -1)


def test_snapshot_from_records_keeps_earliest():
    snap = snapshot_from_records([EdgeRecord(1, 2, 9), EdgeRecord(2, 1, 3)])
    assert snap.edge_time(1, 2) == 3
