"""Copies of a pattern graph H inside a host, one per vertex set."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ResourceError
from .graph import Graph, MultipartiteGraph, iter_bits, popcount
from .params import _search_order

DEFAULT_COPY_CAP = 1_000_000


@dataclass(frozen=True)
class HCopy:
    image: tuple[int, ...]  # sorted vertex set
    witness: tuple[int, ...]  # witness[i] is the host vertex hosting H-vertex i

    @property
    def mask(self) -> int:
        m = 0
        for v in self.image:
            m |= 1 << v
        return m


def independence_number(H: Graph) -> int:
    best = 0

    def go(cand: int, size: int):
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if not cand:
            best = max(best, size)
            return
        v = cand.bit_length() - 1
        go(cand & ~H.adj[v] & ~(1 << v), size + 1)
        go(cand & ~(1 << v), size)

    go((1 << H.vertex_count) - 1, 0)
    return best


class _Embedder:
    """Backtracking search for an embedding of H into a vertex subset of a host."""

    def __init__(self, H: Graph):
        self.H = H
        start = max(range(H.vertex_count), key=lambda v: (H.degree(v), -v)) if H.vertex_count else 0
        self.order = _search_order(H, [start] if H.vertex_count else [])
        pos = {v: i for i, v in enumerate(self.order)}
        self.back = [[pos[u] for u in iter_bits(H.adj[v]) if pos[u] < pos[v]] for v in self.order]
        self.degs = [H.degree(v) for v in self.order]
        self.sorted_degs = sorted(self.degs, reverse=True)
        self.edge_count = len(H.edges)
        self.connected = H.is_connected()

    def embed(self, adj: tuple[int, ...], S: int) -> tuple[int, ...] | None:
        h = len(self.order)
        verts = list(iter_bits(S))
        local_deg = {v: popcount(adj[v] & S) for v in verts}
        if sum(local_deg.values()) < 2 * self.edge_count:
            return None
        if any(g < d for g, d in zip(sorted(local_deg.values(), reverse=True), self.sorted_degs)):
            return None
        img = [0] * h
        degs, back = self.degs, self.back

        def go(i: int, used: int) -> bool:
            if i == h:
                return True
            cand = S & ~used
            for p in back[i]:
                cand &= adj[img[p]]
            for v in iter_bits(cand):
                if local_deg[v] >= degs[i]:
                    img[i] = v
                    if go(i + 1, used | 1 << v):
                        return True
            return False

        if not go(0, 0):
            return None
        witness = [0] * h
        for i, hv in enumerate(self.order):
            witness[hv] = img[i]
        return tuple(witness)


def _connected_within(adj, S: int) -> bool:
    start = S & -S
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= S & ~seen
        seen |= nxt
        frontier = nxt
    return seen == S


def enumerate_H_copies(G, H: Graph, cap: int = DEFAULT_COPY_CAP) -> list[HCopy]:
    """Every h-vertex subset of G that hosts a copy of H, once, in lexicographic order.

    For multipartite hosts each class can meet a copy in at most alpha(H)
    vertices, which bounds the subsets tried.
    """
    h = H.vertex_count
    N = G.vertex_count
    if h == 0 or h > N:
        return []
    emb = _Embedder(H)
    adj = G.adj
    out: list[HCopy] = []
    if isinstance(G, MultipartiteGraph):
        class_of = G.class_of
        limit = independence_number(H)
    else:
        class_of = [0] * N
        limit = h
    per_class = [0] * (max(class_of) + 1)
    chosen: list[int] = []
    full = (1 << h) - 1
    # embedding outcome keyed by the induced adjacency in local (sorted) indices
    cache: dict[tuple[int, ...], tuple[int, ...] | None] = {}

    def leaf():
        local = tuple(sum(1 << j for j, w in enumerate(chosen) if adj[u] >> w & 1) for u in chosen)
        if local in cache:
            w = cache[local]
        else:
            w = None
            if not emb.connected or _connected_within(local, full):
                w = emb.embed(local, full)
            cache[local] = w
        if w is not None:
            out.append(HCopy(tuple(chosen), tuple(chosen[i] for i in w)))
            if len(out) > cap:
                raise ResourceError(f"more than {cap} copies of H; use a smaller host or raise the cap")

    def go(start: int):
        if len(chosen) == h:
            leaf()
            return
        need = h - len(chosen)
        for v in range(start, N - need + 1):
            c = class_of[v]
            if per_class[c] == limit:
                continue
            per_class[c] += 1
            chosen.append(v)
            go(v + 1)
            chosen.pop()
            per_class[c] -= 1

    go(0)
    return out


def count_H_subgraphs(G, H: Graph) -> int:
    """Number of distinct edge sets of G forming a copy of H (no image dedup).

    Exhaustive over injective maps; intended for tiny hosts only.
    """
    seen = set()
    hedges = list(H.edges)
    for image in itertools.permutations(range(G.vertex_count), H.vertex_count):
        if all(G.has_edge(image[u], image[v]) for u, v in hedges):
            seen.add(frozenset(frozenset((image[u], image[v])) for u, v in hedges))
    return len(seen)
