"""Host-graph generators: block constructions, U(H), dummy augmentation, random hosts."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import ContractError
from .graph import BlockStructure, Graph, MultipartiteGraph, block_structure_for
from .params import chromatic_profile
from .rational import ceil_fraction

Family = Literal["custom", "gcd_obstruction", "sigma_obstruction"]


@dataclass(frozen=True)
class ConstructionSpec:
    r: int
    n: int
    block_sizes: tuple[tuple[int, ...], ...]  # [column][row]
    family: Family = "custom"

    def __post_init__(self):
        if len(self.block_sizes) != self.r or any(len(col) != self.r for col in self.block_sizes):
            raise ContractError(f"block_sizes must be {self.r}x{self.r}")
        for i, col in enumerate(self.block_sizes):
            if any(x < 0 for x in col):
                raise ContractError(f"column {i} has a negative block size")
            if sum(col) != self.n:
                raise ContractError(f"column {i} sums to {sum(col)}, expected n={self.n}")

    @property
    def row_sizes(self) -> tuple[int, ...]:
        return tuple(sum(col[j] for col in self.block_sizes) for j in range(self.r))


def build_block_construction(spec: ConstructionSpec) -> tuple[MultipartiteGraph, BlockStructure]:
    """Vertices adjacent exactly when they differ in both row and column."""
    B = block_structure_for(spec.block_sizes, spec.r)
    mem = B.membership
    N = len(mem)
    edges = set()
    for u in range(N):
        cu, ru = mem[u]
        for v in range(u + 1, N):
            cv, rv = mem[v]
            if cu != cv and ru != rv:
                edges.add((u, v))
    classes = tuple(tuple(v for v in range(N) if mem[v][0] == i) for i in range(spec.r))
    return MultipartiteGraph(spec.r, classes, frozenset(edges)), B


def _split_evenly(total: int, parts: int) -> list[int]:
    # extra units go to the lowest indices
    q, t = divmod(total, parts)
    return [q + 1 if k < t else q for k in range(parts)]


def _require_r(H: Graph):
    prof = chromatic_profile(H)
    if prof.r < 3:
        raise ContractError(f"chi(H) = {prof.r}; the constructions need chi(H) >= 3")
    return prof


def gcd_lower_bound_spec(H: Graph, n: int) -> ConstructionSpec:
    """Blocks with |V^1| - |V^2| = 1, so no perfect H-tiling when gcd(H) > 1."""
    prof = _require_r(H)
    if prof.gcd == 1 or math.isinf(prof.gcd):
        raise ContractError(f"gcd(H) = {prof.gcd}; this family needs a finite gcd > 1")
    return gcd_blocks(prof.r, n)


def gcd_blocks(r: int, n: int) -> ConstructionSpec:
    q, t = divmod(n, r)
    if t == 0:
        if q < 1:
            raise ContractError("n must be positive")
        blocks = [[q] * r for _ in range(r)]
        blocks[0][0] = q + 1
        blocks[0][2] = q - 1
    else:
        # each column holds t cells of size q+1; row targets (t+1, t, ..., t, t-1)
        demand = [t] * r
        demand[0] += 1
        demand[-1] -= 1
        blocks = []
        for _ in range(r):
            rows = sorted(range(r), key=lambda j: (-demand[j], j))[:t]
            for j in rows:
                demand[j] -= 1
            blocks.append([q + 1 if j in rows else q for j in range(r)])
        assert not any(demand)
    return ConstructionSpec(r, n, tuple(tuple(c) for c in blocks), "gcd_obstruction")


def sigma_lower_bound_spec(H: Graph, n: int) -> ConstructionSpec:
    """Row 1 of every column gets ceil(sigma n) - 1 vertices; the rest split evenly."""
    prof = _require_r(H)
    if prof.gcd != 1:
        raise ContractError(f"gcd(H) = {prof.gcd}; this family needs gcd(H) = 1")
    first = ceil_fraction(prof.sigma * n) - 1
    if first < 0:
        raise ContractError("ceil(sigma n) must be at least 1")
    col = [first] + _split_evenly(n - first, prof.r - 1)
    return ConstructionSpec(prof.r, n, tuple(tuple(col) for _ in range(prof.r)), "sigma_obstruction")


def build_U(H: Graph, s: int) -> tuple[int, ...]:
    prof = _require_r(H)
    if prof.gcd != 1:
        raise ContractError(f"gcd(H) = {prof.gcd}; U(H) is defined for gcd(H) = 1")
    if s < 1:
        raise ContractError("s must be positive")
    base = s * prof.r * prof.h
    return (base + 1,) + (base,) * (prof.r - 2) + (base - 1,)


def find_min_s_for_U(H: Graph, s_max: int):
    """Smallest s <= s_max whose U(H) sizes are pattern-feasible, with the solution.

    Returns ``(s, PatternSolution)`` or ``None``.
    """
    from .tiling import pattern_tiling_complete_multipartite

    _require_r(H)
    for s in range(1, s_max + 1):
        sol = pattern_tiling_complete_multipartite(build_U(H, s), H)
        if sol is not None:
            return s, sol
    return None


def augment_with_dummies(G: MultipartiteGraph, m: int) -> MultipartiteGraph:
    """Add m vertices to each class, adjacent to everything outside their class."""
    if m < 0:
        raise ContractError("m must be non-negative")
    if not G.balanced():
        raise ContractError("dummy augmentation expects a balanced host")
    if m == 0:
        return G
    N = G.vertex_count
    new = [list(range(N + i * m, N + (i + 1) * m)) for i in range(G.r)]
    classes = tuple(tuple(cls) + tuple(extra) for cls, extra in zip(G.classes, new))
    edges = set(G.edges)
    total = N + G.r * m
    class_of = list(G.class_of) + [i for i in range(G.r) for _ in range(m)]
    for i, extra in enumerate(new):
        for d in extra:
            for v in range(total):
                if class_of[v] != i and v != d:
                    edges.add((min(d, v), max(d, v)))
    dummies = frozenset(G.dummies) | frozenset(v for extra in new for v in extra)
    return MultipartiteGraph(G.r, classes, frozenset(edges), dummies)


def random_partite_graph(r: int, n: int, delta_target: int, seed, p_extra: float = 0.3) -> MultipartiteGraph:
    """Balanced r-partite host with min multipartite degree >= delta_target.

    Each pair of classes gets a delta_target-regular bipartite graph (a
    randomly relabelled circulant) plus independent extra edges with
    probability ``p_extra``.
    """
    if not 0 <= delta_target <= n:
        raise ContractError(f"delta_target {delta_target} is not in 0..{n}")
    rng = random.Random(seed)
    classes = [list(range(i * n, (i + 1) * n)) for i in range(r)]
    edges = set()
    for i in range(r):
        for j in range(i + 1, r):
            left = classes[i][:]
            right = classes[j][:]
            rng.shuffle(left)
            rng.shuffle(right)
            for k in range(n):
                for t in range(delta_target):
                    edges.add((left[k], right[(k + t) % n]))
            for u in classes[i]:
                for v in classes[j]:
                    if rng.random() < p_extra:
                        edges.add((u, v))
    return MultipartiteGraph(r, tuple(tuple(c) for c in classes), frozenset(edges))
