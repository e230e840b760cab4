"""Exact H-tilings: exact-cover search, maximum tilings, and the pattern solver.

The search works on the deduplicated copy list from :mod:`mptile.copies`.
Besides fail-first branching it prunes with

* the fractional LP optimum over the copy list (root only),
* profile relaxations: for a vertex partition into independent sets (the
  host classes, and the rows of a block construction) every copy meets the
  parts in one of finitely many count vectors, so the uncovered counts must
  be a non-negative integer combination of the vectors seen among the copies.

Outcomes are three-valued; an exhausted budget is never reported as "none".
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .copies import DEFAULT_COPY_CAP, HCopy, enumerate_H_copies
from .errors import ContractError
from .fractional import max_fractional_H_tiling
from .graph import BlockStructure, Graph, MultipartiteGraph
from .params import chromatic_profile, colouring_class_vectors, greedy_clique, _search_order
from .rational import floor_fraction

DEFAULT_BUDGET = 200_000


class Status(str, enum.Enum):
    FOUND = "found"
    NONE = "none"
    UNKNOWN = "unknown"


@dataclass
class Tiling:
    copies: list[HCopy]

    def __len__(self) -> int:
        return len(self.copies)

    @property
    def covered(self) -> int:
        return sum(len(c.image) for c in self.copies)

    def to_json(self) -> list[list[int]]:
        return [list(c.image) for c in self.copies]


@dataclass
class TilingResult:
    status: Status
    tiling: Tiling | None
    nodes: int

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "tiling": self.tiling.to_json() if self.tiling else [],
            "nodes": self.nodes,
        }


@dataclass
class MaxTilingResult:
    tiling: Tiling
    optimal: bool
    nodes: int
    upper_bound: int

    def to_json(self) -> dict:
        return {
            "status": "optimal" if self.optimal else "unknown",
            "size": len(self.tiling),
            "upper_bound": self.upper_bound,
            "tiling": self.tiling.to_json(),
            "nodes": self.nodes,
        }


@dataclass
class PatternSolution:
    patterns: frozenset[tuple[int, ...]]
    counts: dict[tuple[int, ...], int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "status": "found",
            "patterns": [list(p) for p in sorted(self.patterns)],
            "counts": [{"pattern": list(p), "count": c} for p, c in sorted(self.counts.items())],
        }


def verify_tiling(G, H: Graph, tiling: Tiling, perfect: bool = False) -> bool:
    """Disjoint images, each witness an injective homomorphism onto its image."""
    used: set[int] = set()
    for c in tiling.copies:
        if len(c.witness) != H.vertex_count or len(set(c.witness)) != H.vertex_count:
            return False
        if tuple(sorted(c.witness)) != tuple(c.image):
            return False
        if any(not 0 <= v < G.vertex_count for v in c.witness):
            return False
        if any(not G.has_edge(c.witness[u], c.witness[v]) for u, v in H.edges):
            return False
        if used & set(c.image):
            return False
        used |= set(c.image)
    return len(used) == G.vertex_count if perfect else True


# ---------------------------------------------------------------------------
# profile relaxation


class _Profiles:
    """Integer-combination feasibility over count vectors of one vertex partition."""

    def __init__(self, part_of: Sequence[int], parts: int, images: Sequence[Sequence[int]]):
        self.part_of = np.array(part_of, dtype=np.int64)
        self.parts = parts
        vecs = set()
        for img in images:
            v = [0] * parts
            for x in img:
                v[part_of[x]] += 1
            vecs.add(tuple(v))
        self.vectors = sorted(vecs, reverse=True)
        self.representable = lru_cache(maxsize=None)(self._representable)
        self.max_pack = lru_cache(maxsize=None)(self._max_pack)

    def counts(self, vertex_flags: np.ndarray) -> tuple[int, ...]:
        return tuple(np.bincount(self.part_of[vertex_flags], minlength=self.parts).tolist())

    def _representable(self, vec: tuple[int, ...], start: int = 0) -> bool:
        if not any(vec):
            return True
        for k in range(start, len(self.vectors)):
            p = self.vectors[k]
            if all(x >= y for x, y in zip(vec, p)):
                if self.representable(tuple(x - y for x, y in zip(vec, p)), k):
                    return True
        return False

    def _max_pack(self, vec: tuple[int, ...], start: int = 0) -> int:
        best = 0
        for k in range(start, len(self.vectors)):
            p = self.vectors[k]
            if all(x >= y for x, y in zip(vec, p)):
                best = max(best, 1 + self.max_pack(tuple(x - y for x, y in zip(vec, p)), k))
        return best


def _partitions(G, blocks: BlockStructure | None):
    out = []
    if isinstance(G, MultipartiteGraph):
        out.append((G.class_of, G.r))
    if blocks is not None:
        out.append(([m[1] for m in blocks.membership], blocks.r))
    return out


class _BudgetExhausted(Exception):
    pass


class _Search:
    def __init__(self, G, H: Graph, copies: Sequence[HCopy], budget: int, blocks, use_profiles: bool,
                 time_limit: float | None):
        self.G = G
        self.h = H.vertex_count
        self.N = G.vertex_count
        self.copies = list(copies)
        n_img = len(self.copies)
        words = max(1, (self.N + 63) // 64)
        self.words = words
        self.masks = np.zeros((n_img, words), dtype=np.uint64)
        self.member = np.zeros((n_img, self.N), dtype=bool)
        for k, c in enumerate(self.copies):
            for v in c.image:
                self.masks[k, v // 64] |= np.uint64(1 << (v % 64))
                self.member[k, v] = True
        self.budget = budget
        self.nodes = 0
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.profiles = [_Profiles(p, k, [c.image for c in self.copies])
                         for p, k in _partitions(G, blocks)] if use_profiles else []

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExhausted

    def disjoint_from(self, alive: np.ndarray, k: int) -> np.ndarray:
        rows = self.masks[alive]
        return alive[~np.any(rows & self.masks[k], axis=1)]

    # perfect tilings ------------------------------------------------------

    def perfect(self, uncovered: np.ndarray, alive: np.ndarray, chosen: list[int]) -> bool:
        self.tick()
        if not uncovered.any():
            return True
        for prof in self.profiles:
            if not prof.representable(prof.counts(uncovered)):
                return False
        cnt = self.member[alive].sum(axis=0)
        cnt[~uncovered] = np.iinfo(cnt.dtype).max
        v = int(np.argmin(cnt))
        if cnt[v] == 0:
            return False
        for k in alive[self.member[alive, v]]:
            k = int(k)
            chosen.append(k)
            nxt = uncovered & ~self.member[k]
            if self.perfect(nxt, self.disjoint_from(alive, k), chosen):
                return True
            chosen.pop()
        return False

    # maximum tilings ------------------------------------------------------

    def upper(self, uncovered: np.ndarray, alive: np.ndarray) -> int:
        coverable = uncovered & self.member[alive].any(axis=0)
        bound = int(coverable.sum()) // self.h
        for prof in self.profiles:
            bound = min(bound, prof.max_pack(prof.counts(coverable)))
        return bound

    def maximum(self, uncovered, alive, chosen: list[int]):
        self.tick()
        if len(chosen) > len(self.best):
            self.best = list(chosen)
            if len(self.best) >= self.cap:
                return True
        if len(chosen) + self.upper(uncovered, alive) <= len(self.best):
            return False
        cnt = self.member[alive].sum(axis=0)
        cnt[~uncovered | (cnt == 0)] = np.iinfo(cnt.dtype).max
        v = int(np.argmin(cnt))
        if cnt[v] == np.iinfo(cnt.dtype).max:
            return False
        for k in alive[self.member[alive, v]]:
            k = int(k)
            chosen.append(k)
            if self.maximum(uncovered & ~self.member[k], self.disjoint_from(alive, k), chosen):
                return True
            chosen.pop()
        # leave v uncovered
        nxt = uncovered.copy()
        nxt[v] = False
        return self.maximum(nxt, alive[~self.member[alive, v]], chosen)


def perfect_H_tiling(G, H: Graph, budget: int = DEFAULT_BUDGET, *, blocks: BlockStructure | None = None,
                     copies: Sequence[HCopy] | None = None, use_lp: bool = True, use_profiles: bool = True,
                     time_limit: float | None = None, copy_cap: int = DEFAULT_COPY_CAP) -> TilingResult:
    """Decide whether G has a perfect H-tiling by exhaustive exact-cover search."""
    h = H.vertex_count
    if h == 0 or G.vertex_count % h:
        return TilingResult(Status.NONE, None, 0)
    if copies is None:
        copies = enumerate_H_copies(G, H, copy_cap)
    target = G.vertex_count // h
    if use_lp and max_fractional_H_tiling(G, [c.image for c in copies]) < target:
        return TilingResult(Status.NONE, None, 0)
    search = _Search(G, H, copies, budget, blocks, use_profiles, time_limit)
    chosen: list[int] = []
    try:
        found = search.perfect(np.ones(G.vertex_count, dtype=bool), np.arange(len(copies)), chosen)
    except _BudgetExhausted:
        return TilingResult(Status.UNKNOWN, None, search.nodes)
    if not found:
        return TilingResult(Status.NONE, None, search.nodes)
    tiling = Tiling([search.copies[k] for k in chosen])
    if not verify_tiling(G, H, tiling, perfect=True):
        raise AssertionError("search produced an invalid tiling")
    return TilingResult(Status.FOUND, tiling, search.nodes)


def max_H_tiling(G, H: Graph, budget: int = DEFAULT_BUDGET, *, blocks: BlockStructure | None = None,
                 copies: Sequence[HCopy] | None = None, use_lp: bool = True, use_profiles: bool = True,
                 time_limit: float | None = None, copy_cap: int = DEFAULT_COPY_CAP) -> MaxTilingResult:
    """Largest H-tiling found; ``optimal`` once the search closes the bound gap."""
    h = H.vertex_count
    if copies is None:
        copies = enumerate_H_copies(G, H, copy_cap) if h else []
    if not copies:
        return MaxTilingResult(Tiling([]), True, 0, 0)
    cap = G.vertex_count // h
    if use_lp:
        cap = min(cap, floor_fraction(max_fractional_H_tiling(G, [c.image for c in copies])))
    if blocks is not None:
        cap = min(cap, row_tiling_upper_bound(blocks, H))
    search = _Search(G, H, copies, budget, blocks, use_profiles, time_limit)
    search.best = []
    search.cap = cap
    optimal = True
    try:
        search.maximum(np.ones(G.vertex_count, dtype=bool), np.arange(len(copies)), [])
    except _BudgetExhausted:
        optimal = len(search.best) >= cap
    tiling = Tiling([search.copies[k] for k in search.best])
    if not verify_tiling(G, H, tiling):
        raise AssertionError("search produced an invalid tiling")
    return MaxTilingResult(tiling, optimal, search.nodes, len(tiling) if optimal else cap)


def row_tiling_upper_bound(B: BlockStructure, H: Graph) -> int:
    """floor(min row size / (sigma(H) h)): every copy puts >= sigma h vertices in each row."""
    prof = chromatic_profile(H)
    per_row = prof.sigma * prof.h
    if per_row < 1:
        raise ContractError("sigma(H) h must be at least 1")
    return floor_fraction(Fraction(min(B.row_sizes)) / per_row)


# ---------------------------------------------------------------------------
# complete multipartite hosts


def pattern_tiling_complete_multipartite(sizes: Sequence[int], H: Graph) -> PatternSolution | None:
    """Integer feasibility of ``sizes`` as a sum of colouring class-size vectors of H.

    Depth-first over patterns in increasing lexicographic order, trying the
    largest count first; failures are memoised.  Returns ``None`` when no
    combination exists.
    """
    sizes = tuple(int(s) for s in sizes)
    h = H.vertex_count
    if h == 0 or sum(sizes) % h:
        return None
    patterns = colouring_class_vectors(H, len(sizes))
    ordered = sorted(patterns)
    failed: set[tuple[int, tuple[int, ...]]] = set()
    counts: list[int] = [0] * len(ordered)

    def go(i: int, rem: tuple[int, ...]) -> bool:
        if not any(rem):
            return True
        if i == len(ordered) or (i, rem) in failed:
            return False
        p = ordered[i]
        most = min((x // y for x, y in zip(rem, p) if y), default=0)
        for c in range(most, -1, -1):
            counts[i] = c
            if go(i + 1, tuple(x - c * y for x, y in zip(rem, p))):
                return True
        counts[i] = 0
        failed.add((i, rem))
        return False

    if not go(0, sizes):
        return None
    return PatternSolution(frozenset(patterns), {p: c for p, c in zip(ordered, counts) if c})


def colouring_with_sizes(H: Graph, sizes: Sequence[int]) -> tuple[int, ...] | None:
    """A proper colouring of H whose class c has exactly ``sizes[c]`` vertices."""
    k = len(sizes)
    order = _search_order(H, greedy_clique(H))
    pos = {v: i for i, v in enumerate(order)}
    colour = [-1] * H.vertex_count
    left = list(sizes)

    def go(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {colour[u] for u in H.neighbours(v) if pos[u] < i}
        for c in range(k):
            if left[c] and c not in taken:
                colour[v] = c
                left[c] -= 1
                if go(i + 1):
                    return True
                left[c] += 1
        colour[v] = -1
        return False

    return tuple(colour) if go(0) else None


def pattern_solution_to_tiling(sol: PatternSolution, sizes: Sequence[int], H: Graph) -> tuple[MultipartiteGraph, Tiling]:
    """Realise a pattern solution on the complete multipartite host by greedy slot filling."""
    G = MultipartiteGraph.complete(sizes)
    nxt = [0] * len(sizes)
    copies = []
    for p, c in sorted(sol.counts.items()):
        colour = colouring_with_sizes(H, p)
        for _ in range(c):
            slots = []
            for cls, need in enumerate(p):
                slots.append(list(G.classes[cls][nxt[cls]:nxt[cls] + need]))
                nxt[cls] += need
            witness = [slots[colour[v]].pop() for v in range(H.vertex_count)]
            copies.append(HCopy(tuple(sorted(witness)), tuple(witness)))
    return G, Tiling(copies)
