"""Chromatic profile of a pattern graph H.

Everything ratio-valued is a ``Fraction``.  ``gcd`` is ``math.inf`` when every
chi(H)-colouring of H is equitable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterator

from .errors import ContractError
from .graph import Graph, iter_bits, popcount
from .rational import format_rational

MAX_PROFILE_VERTICES = 16


@dataclass(frozen=True)
class Colouring:
    class_sizes: tuple[int, ...]
    assignment: tuple[int, ...]


@dataclass(frozen=True)
class ChromaticProfile:
    h: int
    r: int
    size_multisets: frozenset[tuple[int, ...]]
    difference_set: frozenset[int]
    gcd: int | float
    sigma: Fraction
    chi_cr: Fraction
    chi_star: Fraction
    a: Fraction
    b: Fraction

    @property
    def patterns(self) -> frozenset[tuple[int, ...]]:
        """Labelled class-size vectors: every permutation of every multiset."""
        return frozenset(p for m in self.size_multisets for p in itertools.permutations(m))

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "r": self.r,
            "size_multisets": [list(m) for m in sorted(self.size_multisets)],
            "difference_set": sorted(self.difference_set),
            "gcd": format_rational(self.gcd),
            "sigma": format_rational(self.sigma),
            "chi_cr": format_rational(self.chi_cr),
            "chi_star": format_rational(self.chi_star),
            "a": format_rational(self.a),
            "b": format_rational(self.b),
        }


def greedy_clique(H: Graph) -> list[int]:
    """A maximal clique grown greedily from the highest-degree vertex."""
    if H.vertex_count == 0:
        return []
    order = sorted(range(H.vertex_count), key=lambda v: (-H.degree(v), v))
    clique: list[int] = []
    cand = (1 << H.vertex_count) - 1
    for v in order:
        if cand >> v & 1:
            clique.append(v)
            cand &= H.adj[v]
    return clique


def _search_order(H: Graph, start: list[int]) -> list[int]:
    # start vertices first, then repeatedly the vertex with most placed neighbours
    order = list(start)
    placed = 0
    for v in order:
        placed |= 1 << v
    rest = set(range(H.vertex_count)) - set(order)
    while rest:
        v = max(rest, key=lambda u: (popcount(H.adj[u] & placed), H.degree(u), -u))
        order.append(v)
        placed |= 1 << v
        rest.discard(v)
    return order


def _k_colourable(H: Graph, k: int, order: list[int]) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    colour = [-1] * H.vertex_count
    earlier = [[u for u in iter_bits(H.adj[v]) if pos[u] < pos[v]] for v in order]

    def go(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {colour[u] for u in earlier[i]}
        for c in range(min(used + 1, k)):
            if c not in taken:
                colour[v] = c
                if go(i + 1, max(used, c + 1)):
                    return True
        colour[v] = -1
        return False

    return go(0, 0)


def chromatic_number(H: Graph) -> int:
    if H.vertex_count == 0:
        raise ContractError("chromatic number of the empty graph is undefined here")
    clique = greedy_clique(H)
    order = _search_order(H, clique)
    k = max(1, len(clique))
    while not _k_colourable(H, k, order):
        k += 1
    return k


def enumerate_r_colourings(H: Graph, r: int) -> Iterator[Colouring]:
    """Every proper colouring of H with colours 0..r-1, in a fixed order.

    Canonical colourings (greedy clique coloured 0..q-1, further colours in
    order of first use) are found by backtracking and then expanded over all
    r! relabellings.  When r = chi(H) every colouring uses all r colours, so
    this visits each labelled colouring exactly once.
    """
    h = H.vertex_count
    clique = greedy_clique(H)
    if len(clique) > r:
        return
    order = _search_order(H, clique)
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[u for u in iter_bits(H.adj[v]) if pos[u] < pos[v]] for v in order]
    q = len(clique)
    colour = [-1] * h
    perms = list(itertools.permutations(range(r)))

    def go(i: int, used: int):
        if i == h:
            yield tuple(colour)
            return
        v = order[i]
        if i < q:
            colour[v] = i
            yield from go(i + 1, i + 1)
            return
        taken = {colour[u] for u in earlier[i]}
        for c in range(min(used + 1, r)):
            if c not in taken:
                colour[v] = c
                yield from go(i + 1, max(used, c + 1))
        colour[v] = -1

    for canon in go(0, 0):
        if len(set(canon)) < r:
            # uses fewer colours; relabellings would repeat, enumerate them directly
            seen = set()
            for p in perms:
                assignment = tuple(p[c] for c in canon)
                if assignment not in seen:
                    seen.add(assignment)
                    yield _colouring(assignment, r)
            continue
        for p in perms:
            yield _colouring(tuple(p[c] for c in canon), r)


def _colouring(assignment: tuple[int, ...], r: int) -> Colouring:
    sizes = [0] * r
    for c in assignment:
        sizes[c] += 1
    return Colouring(tuple(sizes), assignment)


def colouring_class_vectors(H: Graph, k: int) -> frozenset[tuple[int, ...]]:
    """Set of labelled class-size vectors over all proper k-colourings of H.

    Dynamic programme over a vertex order, keeping only the colours of vertices
    that still have unplaced neighbours.  Empty classes are allowed, so for
    k > chi(H) vectors may contain zeros.
    """
    h = H.vertex_count
    clique = greedy_clique(H)
    if len(clique) > k:
        return frozenset()
    order = _search_order(H, clique)
    pos = {v: i for i, v in enumerate(order)}
    last_nbr = [max([pos[u] for u in iter_bits(H.adj[v])], default=-1) for v in range(h)]

    active: list[int] = []
    states: set[tuple[tuple[int, ...], tuple[int, ...]]] = {((), (0,) * k)}
    for i, v in enumerate(order):
        nbr_slots = [s for s, u in enumerate(active) if H.has_edge(u, v)]
        allowed = (i,) if i < len(clique) else range(k)
        new_states = set()
        for cols, counts in states:
            taken = {cols[s] for s in nbr_slots}
            for c in allowed:
                if c in taken:
                    continue
                nc = list(counts)
                nc[c] += 1
                new_states.add((cols + (c,), tuple(nc)))
        active.append(v)
        keep = [s for s, u in enumerate(active) if last_nbr[u] > i]
        active = [active[s] for s in keep]
        states = {(tuple(cols[s] for s in keep), counts) for cols, counts in new_states}
    vectors = {counts for _, counts in states}
    return frozenset(tuple(vec[p] for p in perm) for vec in vectors for perm in itertools.permutations(range(k)))


def chromatic_profile(H: Graph) -> ChromaticProfile:
    h = H.vertex_count
    if h == 0:
        raise ContractError("H must have at least one vertex")
    if h > MAX_PROFILE_VERTICES:
        raise ContractError(f"profile computation is capped at {MAX_PROFILE_VERTICES} vertices, H has {h}")
    r = chromatic_number(H)
    if r < 2:
        raise ContractError("H has no edges; the profile needs chi(H) >= 2")
    vectors = colouring_class_vectors(H, r)
    multisets = frozenset(tuple(sorted(v)) for v in vectors)
    diffs = frozenset(x - y for v in vectors for x in v for y in v)
    positive = {abs(d) for d in diffs if d}
    g = reduce(math.gcd, positive) if positive else math.inf
    sigma = Fraction(min(min(v) for v in vectors), h)
    chi_cr = Fraction(r - 1) / (1 - sigma)
    chi_star = chi_cr if g == 1 else Fraction(r)
    a = sigma * h
    b = (1 - sigma) * h / (r - 1)
    return ChromaticProfile(h, r, multisets, diffs, g, sigma, chi_cr, chi_star, a, b)
