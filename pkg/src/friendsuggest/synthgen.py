"""Seeded planted-partition datasets in the snapshot file formats."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict

import numpy as np

from .graph import AttrKind

__all__ = ["SynthConfig", "community_of", "generate_dataset", "read_meta", "DATA_FILES"]

DATA_FILES = {"edges": "edges.tsv", "attributes": "attributes.tsv", "interactions": "interactions.tsv", "meta": "meta"}


@dataclass(frozen=True)
class SynthConfig:
    n_users: int = 10000
    n_communities: int = 50
    p_in: float = 0.1
    p_out: float = 0.0002
    schools_per_community: int = 3
    groups_per_community: int = 6
    ip_pool_per_community: int = 8
    companies_per_community: int = 4
    interaction_rate: float = 2.0
    future_fraction: float = 0.3
    attr_noise: float = 0.1
    t_start: int = 1_000_000_000
    t_end: int = 1_010_000_000
    seed: int = 42

    def __post_init__(self):
        if self.n_users < 0 or self.n_communities < 1:
            raise ValueError("need n_users >= 0 and n_communities >= 1")
        for name in ("p_in", "p_out", "attr_noise"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not self.p_in > self.p_out:
            raise ValueError("p_in must exceed p_out")
        if not 0.0 < self.future_fraction < 1.0:
            raise ValueError("future_fraction must lie in (0, 1)")
        if self.t_end <= self.t_start:
            raise ValueError("t_end must be after t_start")

    @property
    def boundary(self) -> int:
        """Last training timestamp; later edges are future friendships."""
        return self.t_start + int(round((1.0 - self.future_fraction) * (self.t_end - self.t_start)))

    @property
    def validation_boundary(self) -> int:
        """Splits the future window in half: validation period, then test period."""
        return self.boundary + (self.t_end - self.boundary) // 2


def community_of(cfg: SynthConfig) -> np.ndarray:
    """Community label per user id; contiguous, near-equal blocks."""
    return np.repeat(
        np.arange(cfg.n_communities),
        [len(b) for b in np.array_split(np.arange(cfg.n_users), cfg.n_communities)],
    )


def _sample_pairs(rng, m: int, p: float) -> np.ndarray:
    k = rng.binomial(m, p) if m else 0
    return np.sort(rng.choice(m, size=k, replace=False)) if k else np.empty(0, dtype=np.int64)


def _edges(cfg: SynthConfig, rng) -> np.ndarray:
    blocks = np.array_split(np.arange(cfg.n_users), cfg.n_communities)
    out = []
    for a, block in enumerate(blocks):
        s = len(block)
        if s > 1:
            iu, ju = np.triu_indices(s, 1)
            idx = _sample_pairs(rng, len(iu), cfg.p_in)
            out.append(np.column_stack([block[iu[idx]], block[ju[idx]]]))
        for other in blocks[a + 1:]:
            idx = _sample_pairs(rng, s * len(other), cfg.p_out)
            out.append(np.column_stack([block[idx // len(other)], other[idx % len(other)]]))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def _attributes(cfg: SynthConfig, rng, comm: np.ndarray):
    pools = [
        (AttrKind.SCHOOL, cfg.schools_per_community, (1, 2)),
        (AttrKind.GROUP, cfg.groups_per_community, (0, 3)),
        (AttrKind.IP, cfg.ip_pool_per_community, (1, 2)),
        (AttrKind.COMPANY, cfg.companies_per_community, (0, 1)),
    ]
    rows = []
    for u in range(cfg.n_users):
        for kind, pool, (lo, hi) in pools:
            if pool <= 0:
                continue
            for _ in range(rng.integers(lo, hi + 1)):
                c = comm[u]
                if rng.random() < cfg.attr_noise:
                    c = rng.integers(cfg.n_communities)
                rows.append((u, kind.value, int(c) * pool + int(rng.integers(pool))))
    return sorted(set(rows), key=lambda r: (r[0], r[1], r[2]))


def generate_dataset(cfg: SynthConfig, out_dir) -> Dict[str, int]:
    """Write ``edges.tsv``, ``attributes.tsv``, ``interactions.tsv`` and ``meta`` to `out_dir`.

    Output is a deterministic function of `cfg`.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"{out} is not writable")
    rng = np.random.default_rng(cfg.seed)
    comm = community_of(cfg)

    edges = _edges(cfg, rng)
    times = rng.integers(cfg.t_start, cfg.t_end, size=len(edges), endpoint=True)
    order = np.lexsort((edges[:, 1], edges[:, 0], times)) if len(edges) else np.empty(0, dtype=np.int64)
    edges, times = edges[order], times[order]
    attrs = _attributes(cfg, rng, comm)
    counts = rng.poisson(cfg.interaction_rate, size=len(edges))
    # only pre-boundary friendships have interacted; a count on a future pair would leak it
    counts[times > cfg.boundary] = 0

    with open(out / DATA_FILES["edges"], "w", encoding="utf-8") as fh:
        fh.write("".join(f"{u}\t{v}\t{t}\n" for (u, v), t in zip(edges.tolist(), times.tolist())))
    with open(out / DATA_FILES["attributes"], "w", encoding="utf-8") as fh:
        fh.write("".join(f"{u}\t{k}\t{x}\n" for u, k, x in attrs))
    n_inter = 0
    with open(out / DATA_FILES["interactions"], "w", encoding="utf-8") as fh:
        for (u, v), c in sorted(zip(map(tuple, edges.tolist()), counts.tolist())):
            if c > 0:
                fh.write(f"{u}\t{v}\t{c}\n")
                n_inter += 1
    with open(out / DATA_FILES["meta"], "w", encoding="utf-8") as fh:
        for f in fields(cfg):
            fh.write(f"{f.name} = {getattr(cfg, f.name)}\n")
        fh.write(f"boundary = {cfg.boundary}\n")
        fh.write(f"validation_boundary = {cfg.validation_boundary}\n")

    n_future = int((times > cfg.boundary).sum())
    return {
        "users": cfg.n_users,
        "edges": len(edges),
        "train_edges": len(edges) - n_future,
        "future_edges": n_future,
        "attributes": len(attrs),
        "interactions": n_inter,
    }


def read_meta(path) -> Dict[str, str]:
    """Parse a ``key = value`` meta file into strings."""
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                key, _, value = line.partition("=")
                meta[key.strip()] = value.strip()
    return meta
