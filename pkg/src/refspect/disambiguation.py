"""Detection and correction of cited-reference variants.

Two references match when the weighted average (2:1) of the Levenshtein
similarities of their first authors' last names and their source titles
reaches the configured threshold, and any required attributes (volume, page,
DOI) agree exactly.  Matching is blocked by publication year; connected
components of the match relation become clusters.  Sub-clusters can then be
reshaped by exact-attribute refinement and by the manual Same / Different /
Extract actions, and finally merged with occurrence counts conserved.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import ClassVar, Iterable, Sequence

from .dataset import (
    CitedReference,
    Dataset,
    UnknownReferenceError,
    recompute_statistics,
)
from .wos import ParsedCR

__all__ = [
    "SimilarityConfig",
    "Partition",
    "levenshtein_distance",
    "similarity",
    "pair_score",
    "matches",
    "cluster",
    "refine_by_attributes",
    "apply_partition",
    "identity_partition",
    "merge",
]

BLOCK_SIZE_WARNING = 10_000


def levenshtein_distance(s1: str, s2: str) -> int:
    """Minimal number of single-character insertions, deletions and
    substitutions turning s1 into s2."""
    if s1 == s2:
        return 0
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    if not s2:
        return len(s1)
    previous = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1, start=1):
        current = [i]
        append = current.append
        for j, c2 in enumerate(s2, start=1):
            if c1 == c2:
                append(previous[j - 1])
            else:
                append(1 + min(previous[j - 1], previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def similarity(s1: str, s2: str) -> float:
    """Levenshtein similarity 1 - LD/max(|s1|,|s2|); 1.0 for equal strings
    (including two empty ones), 0.0 for totally different ones."""
    if s1 == s2:
        return 1.0
    return 1.0 - levenshtein_distance(s1, s2) / max(len(s1), len(s2))


def _normalize(s: str) -> str:
    # comparisons are case-insensitive with whitespace runs collapsed
    return " ".join(s.lower().split())


@lru_cache(maxsize=1 << 16)
def _cached_similarity(a: str, b: str) -> float:
    return similarity(a, b)


def _sim(a: str, b: str) -> float:
    if a > b:
        a, b = b, a
    return _cached_similarity(a, b)


@dataclass(frozen=True)
class SimilarityConfig:
    """Matching configuration: threshold plus exact-attribute requirements.

    The threshold lives on the slider scale [0.5, 1.0]; last-name and
    source-title similarities are always combined 2:1.
    """

    threshold: float = 0.75
    require_volume: bool = False
    require_page: bool = False
    require_doi: bool = False

    WEIGHT_LAST_NAME: ClassVar[int] = 2
    WEIGHT_SOURCE_TITLE: ClassVar[int] = 1

    def __post_init__(self):
        if not 0.5 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0.5, 1.0]")

    @property
    def required_attributes(self) -> tuple[str, ...]:
        names = []
        if self.require_volume:
            names.append("volume")
        if self.require_page:
            names.append("page")
        if self.require_doi:
            names.append("doi")
        return tuple(names)


def pair_score(a: ParsedCR, b: ParsedCR, cfg: SimilarityConfig = SimilarityConfig()) -> float:
    """Weighted 2:1 average of last-name and source-title similarity."""
    sim_name = _sim(_normalize(a.last_name), _normalize(b.last_name))
    sim_title = _sim(_normalize(a.source_title), _normalize(b.source_title))
    return (
        cfg.WEIGHT_LAST_NAME * sim_name + cfg.WEIGHT_SOURCE_TITLE * sim_title
    ) / (cfg.WEIGHT_LAST_NAME + cfg.WEIGHT_SOURCE_TITLE)


def _attributes_equal(a: ParsedCR, b: ParsedCR, cfg: SimilarityConfig) -> bool:
    # both-absent counts as equal, absent vs present does not
    return all(
        getattr(a, name) == getattr(b, name) for name in cfg.required_attributes
    )


def matches(a: ParsedCR, b: ParsedCR, cfg: SimilarityConfig = SimilarityConfig()) -> bool:
    """Whether two references count as variants of the same work."""
    return _attributes_equal(a, b, cfg) and pair_score(a, b, cfg) >= cfg.threshold


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # deterministic: smaller root wins
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return [sorted(group) for root, group in sorted(groups.items())]


class Partition:
    """Cluster state: reference id -> (main, sub), plus the manual-edit
    undo stack and the never-reused sub-id counter."""

    def __init__(self, membership: dict[int, tuple[int, int]], next_sub_id: int):
        self.membership = membership
        self.undo_stack: list[list[tuple[int, int, int]]] = []
        self.next_sub_id = next_sub_id

    def copy(self) -> "Partition":
        clone = Partition(dict(self.membership), self.next_sub_id)
        clone.undo_stack = [list(entry) for entry in self.undo_stack]
        return clone

    def _fresh_sub(self) -> int:
        sub = self.next_sub_id
        self.next_sub_id += 1
        return sub

    def _check_ids(self, ids: Sequence[int]) -> None:
        if not ids:
            raise ValueError("no reference ids given")
        for ref_id in ids:
            if ref_id not in self.membership:
                raise UnknownReferenceError(ref_id)

    def _push_undo(self, ids: Sequence[int]) -> None:
        self.undo_stack.append(
            [(ref_id, *self.membership[ref_id]) for ref_id in ids]
        )

    def same(self, ids: Sequence[int]) -> None:
        """Give all marked references the sub-cluster of the first one.

        May span publication years and main clusters; every marked
        reference is moved into the first one's main cluster.
        """
        self._check_ids(ids)
        self._push_undo(ids)
        target = self.membership[ids[0]]
        for ref_id in ids:
            self.membership[ref_id] = target

    def different(self, ids: Sequence[int]) -> None:
        """Give every marked reference its own fresh sub-cluster."""
        self._check_ids(ids)
        self._push_undo(ids)
        for ref_id in ids:
            main, _ = self.membership[ref_id]
            self.membership[ref_id] = (main, self._fresh_sub())

    def extract(self, ids: Sequence[int]) -> None:
        """Move the marked references together into one fresh sub-cluster.

        Unmarked members of their former sub-clusters stay behind.  Marked
        references from different main clusters get one fresh sub-cluster
        per main, so sub-clusters keep refining mains.
        """
        self._check_ids(ids)
        self._push_undo(ids)
        fresh_by_main: dict[int, int] = {}
        for ref_id in ids:
            main, _ = self.membership[ref_id]
            if main not in fresh_by_main:
                fresh_by_main[main] = self._fresh_sub()
            self.membership[ref_id] = (main, fresh_by_main[main])

    def undo(self) -> bool:
        """Reverse the most recent manual action; False when there is
        nothing to undo.  Sub-id counters are not rolled back."""
        if not self.undo_stack:
            return False
        for ref_id, main, sub in self.undo_stack.pop():
            self.membership[ref_id] = (main, sub)
        return True

    def subclusters(self) -> dict[tuple[int, int], list[int]]:
        groups: dict[tuple[int, int], list[int]] = {}
        for ref_id, key in self.membership.items():
            groups.setdefault(key, []).append(ref_id)
        for members in groups.values():
            members.sort()
        return groups


def _match_key(ref: CitedReference, cfg: SimilarityConfig) -> tuple:
    p = ref.parsed
    key = [_normalize(p.last_name), _normalize(p.source_title)]
    key.extend(getattr(p, name) for name in cfg.required_attributes)
    return tuple(key)


def _components(refs: list[CitedReference], cfg: SimilarityConfig) -> list[list[int]]:
    """Connected components (lists of reference ids) of the match relation."""
    uf = _UnionFind(r.id for r in refs)
    # references with identical match keys always match; score the rest per
    # distinct key pair
    by_key: dict[tuple, list[CitedReference]] = {}
    for ref in refs:
        by_key.setdefault(_match_key(ref, cfg), []).append(ref)
    # deterministic order; attribute values may be None, so sort by the
    # first reference carrying each key
    keys = sorted(by_key, key=lambda k: by_key[k][0].id)
    for members in by_key.values():
        first = members[0]
        for other in members[1:]:
            uf.union(first.id, other.id)

    weight_sum = cfg.WEIGHT_LAST_NAME + cfg.WEIGHT_SOURCE_TITLE
    best_title = cfg.WEIGHT_SOURCE_TITLE  # title similarity can add at most 1
    for i, key_a in enumerate(keys):
        rep_a = by_key[key_a][0]
        name_a, title_a = key_a[0], key_a[1]
        for key_b in keys[i + 1 :]:
            if key_a[2:] != key_b[2:]:
                continue
            rep_b = by_key[key_b][0]
            sim_name = _sim(name_a, key_b[0])
            if (cfg.WEIGHT_LAST_NAME * sim_name + best_title) / weight_sum < cfg.threshold:
                continue
            sim_title = _sim(title_a, key_b[1])
            score = (
                cfg.WEIGHT_LAST_NAME * sim_name + cfg.WEIGHT_SOURCE_TITLE * sim_title
            ) / weight_sum
            if score >= cfg.threshold:
                uf.union(rep_a.id, rep_b.id)
    return uf.components()


def cluster(ds: Dataset, cfg: SimilarityConfig = SimilarityConfig()) -> Partition:
    """Automatic clustering: within each publication year, connected
    components of the match relation become clusters.

    Every component receives a fresh main id and a fresh sub id from
    independent counters; the undo stack starts empty.
    """
    blocks: dict[int | None, list[CitedReference]] = {}
    for ref in ds.references:
        blocks.setdefault(ref.year, []).append(ref)

    membership: dict[int, tuple[int, int]] = {}
    next_main = 1
    next_sub = 1
    for year in sorted(blocks, key=lambda y: (y is None, y if y is not None else 0)):
        refs = blocks[year]
        if len(refs) > BLOCK_SIZE_WARNING:
            warnings.warn(
                f"{len(refs)} references share publication year {year}; "
                "pairwise matching is quadratic, consider restricting the "
                "dataset to the years of interest",
                stacklevel=2,
            )
        for component in _components(refs, cfg):
            for ref_id in component:
                membership[ref_id] = (next_main, next_sub)
            next_main += 1
            next_sub += 1
    return Partition(membership, next_sub)


def refine_by_attributes(
    ds: Dataset, partition: Partition, cfg: SimilarityConfig
) -> Partition:
    """Split sub-clusters whose members disagree on the required attributes.

    Each existing sub-cluster is re-partitioned into connected components of
    the match relation under ``cfg``; the component holding the group's
    lowest reference id keeps the sub id, the rest draw fresh ids from the
    global counter.  Affects the whole dataset; with no attribute enabled
    the partition is returned unchanged.  Not undoable: the returned
    partition starts a fresh undo stack.
    """
    refined = Partition(dict(partition.membership), partition.next_sub_id)
    if not cfg.required_attributes:
        return refined
    refs_by_id = {r.id: r for r in ds.references}
    for (main, sub), member_ids in sorted(refined.subclusters().items()):
        if len(member_ids) < 2:
            continue
        members = [refs_by_id[i] for i in member_ids]
        components = _components(members, cfg)
        if len(components) == 1:
            continue
        for index, component in enumerate(components):
            new_sub = sub if index == 0 else refined._fresh_sub()
            for ref_id in component:
                refined.membership[ref_id] = (main, new_sub)
    return refined


def identity_partition(ds: Dataset, next_sub_id: int | None = None) -> Partition:
    """Partition mirroring the cluster ids already stored on the dataset."""
    membership = {r.id: (r.cluster_main, r.cluster_sub) for r in ds.references}
    if next_sub_id is None:
        next_sub_id = max((r.cluster_sub for r in ds.references), default=0) + 1
    return Partition(membership, next_sub_id)


def apply_partition(ds: Dataset, partition: Partition) -> Dataset:
    """Copy the partition's cluster assignments onto the dataset rows."""
    references = []
    for ref in ds.references:
        try:
            main, sub = partition.membership[ref.id]
        except KeyError:
            raise UnknownReferenceError(ref.id) from None
        references.append(replace(ref, cluster_main=main, cluster_sub=sub))
    return recompute_statistics(Dataset(ds.publications, references, {}))


def merge(ds: Dataset, partition: Partition) -> Dataset:
    """Collapse every sub-cluster to its representative.

    The representative is the variant with the highest occurrence count
    (ties broken by the smallest id); it absorbs the members' counts, so the
    dataset total is conserved.  Merging an already merged dataset is the
    identity.
    """
    groups: dict[tuple[int, int], list[CitedReference]] = {}
    for ref in ds.references:
        try:
            groups.setdefault(partition.membership[ref.id], []).append(ref)
        except KeyError:
            raise UnknownReferenceError(ref.id) from None

    merged = []
    for (main, sub), members in groups.items():
        representative = min(members, key=lambda r: (-r.n_cr, r.id))
        merged.append(
            replace(
                representative,
                n_cr=sum(r.n_cr for r in members),
                cluster_main=main,
                cluster_sub=sub,
            )
        )
    merged.sort(key=lambda r: r.id)
    return recompute_statistics(Dataset(ds.publications, merged, {}))
