"""Command-line entry point: ``friendsuggest {generate,suggest,benchmark,sweep,validate}``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .baselines import baseline_suggest
from .config import ConfigError, RunConfig, read_config_file
from .evaluation import PROPOSED, build_test_cohorts, run_benchmark, sweep_weights, write_report, write_sweep_table
from .graph import (
    SnapshotFormatError,
    UnknownUserError,
    apply_user_filter,
    read_attributes,
    read_edges,
    read_interactions,
    snapshot_from_records,
    temporal_split,
)
from .suggester import format_suggestions, suggest
from .synthgen import DATA_FILES, SynthConfig, generate_dataset, read_meta

log = logging.getLogger("friendsuggest")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- data directory -----------------------------------------------------------


class Dataset:
    """The files of a data directory, parsed once."""

    def __init__(self, directory):
        d = Path(directory)
        if not (d / DATA_FILES["edges"]).is_file():
            raise DataError(f"{d}: no {DATA_FILES['edges']}")
        self.records = read_edges(d / DATA_FILES["edges"])
        attrs = d / DATA_FILES["attributes"]
        inter = d / DATA_FILES["interactions"]
        self.attributes = read_attributes(attrs) if attrs.is_file() else {}
        self.interactions = read_interactions(inter) if inter.is_file() else {}
        meta = d / DATA_FILES["meta"]
        self.meta = read_meta(meta) if meta.is_file() else {}

    def split_keys(self) -> Dict[str, str]:
        return {k: self.meta[k] for k in ("boundary", "validation_boundary") if k in self.meta}


def _config(args, dataset: Optional[Dataset] = None) -> RunConfig:
    layers = [dataset.split_keys() if dataset else None]
    if getattr(args, "config", None):
        layers.append(read_config_file(args.config))
    overrides = {}
    for item in getattr(args, "set", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    for key in ("seed", "mu", "L", "boundary", "min_new"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = str(value)
    cfg = RunConfig.layered(*layers)
    try:
        cfg.update(overrides)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _split(dataset: Dataset, cfg: RunConfig):
    boundary = cfg.optional_int("boundary")
    if boundary is None:
        raise DataError("no split boundary: set 'boundary' in the config or the data directory's meta file")
    train, future = temporal_split(dataset.records, boundary)
    snapshot = snapshot_from_records(train, dataset.attributes, dataset.interactions)
    vb = cfg.optional_int("validation_boundary")
    if vb is None:
        validation, test = future, future
    else:
        validation = [r for r in future if r.t <= vb]
        test = [r for r in future if r.t > vb]
    return snapshot, future, validation, test


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# -- subcommands --------------------------------------------------------------


def cmd_generate(args) -> int:
    values = {f.name: getattr(args, f.name) for f in fields(SynthConfig) if getattr(args, f.name) is not None}
    try:
        cfg = SynthConfig(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        summary = generate_dataset(cfg, args.out)
    except OSError as exc:
        raise DataError(str(exc)) from None
    for key, value in summary.items():
        print(f"{key}\t{value}")
    return EXIT_OK


def cmd_suggest(args) -> int:
    dataset = Dataset(args.data)
    cfg = _config(args, dataset)
    params = cfg.suggestion_params()
    if cfg.optional_int("boundary") is None:
        snapshot = snapshot_from_records(dataset.records, dataset.attributes, dataset.interactions)
    else:
        snapshot = _split(dataset, cfg)[0]
    lists = []
    for u in args.user:
        try:
            if args.approach == PROPOSED:
                lists.append(suggest(snapshot, u, params))
            else:
                lists.append(baseline_suggest(snapshot, u, args.approach, params, cfg.current_params()))
        except UnknownUserError:
            raise DataError(f"user {u} is not in the snapshot") from None
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for line in format_suggestions(lists, args.top):
            out.write(line + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _prepared(args):
    dataset = Dataset(args.data)
    cfg = _config(args, dataset)
    snapshot, future, validation, test = _split(dataset, cfg)
    filtered, eligible = apply_user_filter(snapshot, future, cfg.min_new)
    log.info("snapshot %s filtered to %s (%d eligible users)", snapshot, filtered, len(eligible))
    return cfg, filtered, validation, test


def cmd_benchmark(args) -> int:
    cfg, snapshot, _, test = _prepared(args)
    cohorts = build_test_cohorts(snapshot, test, cfg.cohort_specs(), cfg.seed)
    reports = run_benchmark(
        snapshot, cohorts, cfg.approaches, cfg.suggestion_params(), cfg.current_params(), _threads(args)
    )
    write_report(args.out, reports)
    for rep in reports:
        print(
            f"{rep.cohort}\t{rep.approach}\tusers={rep.users_evaluated}\tauc_users={len(rep.auc_per_user)}"
            f"\tmean_auc={rep.mean_auc:.4f}\tP@10={rep.precision_curve[9]:.4f}"
        )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg, snapshot, validation, _ = _prepared(args)
    cohorts = build_test_cohorts(snapshot, validation, cfg.cohort_specs(), cfg.seed)
    if not cohorts:
        raise UsageError("no cohorts configured")
    names = [c.name for c in cohorts]
    name = args.cohort or names[0]
    if name not in names:
        raise UsageError(f"unknown cohort {name!r}; configured: {', '.join(names)}")
    cohort = cohorts[names.index(name)]
    try:
        best, table = sweep_weights(snapshot, cohort, cfg.sweep_step, cfg.suggestion_params(), _threads(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_sweep_table(args.out, table)
    print(f"best\tw_friends={best.friends:.2f}\tw_schools={best.schools:.2f}\tw_groups={best.groups:.2f}")
    return EXIT_OK


def validate_dataset(dataset: Dataset) -> List[str]:
    """Invariant violations in an already-parsed data directory."""
    problems = []
    snapshot = snapshot_from_records(dataset.records, dataset.attributes, dataset.interactions)
    for u in sorted(snapshot.users):
        nbrs = snapshot.neighbors(u)
        if u in nbrs:
            problems.append(f"self-loop on user {u}")
        for v in nbrs:
            if u not in snapshot.neighbor_set(v):
                problems.append(f"asymmetric friendship {u} -> {v}")
            elif snapshot.edge_time(u, v) != snapshot.edge_time(v, u):
                problems.append(f"asymmetric timestamp on ({u}, {v})")
    for a, b, _ in snapshot.interaction_items():
        for x in (a, b):
            if x not in snapshot:
                problems.append(f"interaction references unknown user {x}")
    for key in ("boundary", "validation_boundary"):
        if key in dataset.meta:
            try:
                int(dataset.meta[key])
            except ValueError:
                problems.append(f"meta: {key} is not an integer: {dataset.meta[key]!r}")
    return problems


def cmd_validate(args) -> int:
    dataset = Dataset(args.data)
    problems = validate_dataset(dataset)
    users = {r.u for r in dataset.records} | {r.v for r in dataset.records}
    print(f"edge records\t{len(dataset.records)}\nusers with edges\t{len(users)}")
    for p in problems:
        print(f"violation\t{p}")
    print(f"violations\t{len(problems)}")
    return EXIT_OK if not problems else EXIT_DATA


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="friendsuggest", description="Friend suggestion engine and link-prediction benchmark.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, data=True):
        if data:
            p.add_argument("--data", required=True, help="directory holding edges.tsv [attributes.tsv interactions.tsv meta]")
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key (repeatable)")
        p.add_argument("--seed", type=int)
        p.add_argument("--mu", type=int)
        p.add_argument("--L", dest="L", help="candidate cap; 'inf' for none")
        p.add_argument("--boundary", type=int, help="last training timestamp")
        p.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")

    g = sub.add_parser("generate", help="write a seeded synthetic dataset")
    g.add_argument("--out", required=True, help="output directory")
    for f in fields(SynthConfig):
        g.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=type(f.default), default=None)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("suggest", help="print ranked suggestions for users")
    common(s)
    s.add_argument("--user", type=int, action="append", required=True, help="target user id (repeatable)")
    s.add_argument(
        "--approach", default=PROPOSED,
        choices=[PROPOSED, "current", "adamic_adar", "common_neighbors", "plain_rwr"],
    )
    s.add_argument("--top", type=int, default=None, help="rows per user")
    s.add_argument("--out", help="write here instead of stdout")
    s.set_defaults(func=cmd_suggest)

    b = sub.add_parser("benchmark", help="precision@k / AUC report over degree cohorts")
    common(b)
    b.add_argument("--min-new", dest="min_new", type=int, help="minimum new friendships per kept user")
    b.add_argument("--out", required=True, help="report CSV path")
    b.set_defaults(func=cmd_benchmark)

    w = sub.add_parser("sweep", help="grid-search feature weights by validation P@10")
    common(w)
    w.add_argument("--min-new", dest="min_new", type=int)
    w.add_argument("--cohort", help="cohort name to validate on (default: first configured)")
    w.add_argument("--out", required=True, help="sweep table CSV path")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate", help="load a data directory and report invariant violations")
    v.add_argument("--data", required=True)
    v.set_defaults(func=cmd_validate)
    return parser


def run_command(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DataError, SnapshotFormatError, ConfigError, OSError) as exc:
        print(f"friendsuggest: {exc}", file=sys.stderr)
        return EXIT_DATA


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
