"""Perfect (a, b)-weighted fractional K_r-tilings and their Farkas certificates.

A rooted clique is a transversal K_r of an r-partite host with one vertex
marked as root.  Its weighted characteristic vector has ``a`` at the root and
``b`` at the other r-1 vertices.  The solver decides whether the all-ones
vector lies in the cone of these vectors; it answers with either explicit
weights or a vertex vector x separating 1 from the cone.  Both answers are
re-checked by verifiers that enumerate cliques on their own, by brute force
over class transversals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, ResourceError
from .graph import MultipartiteGraph, iter_bits
from .lp import solve_equality_feasibility, solve_packing
from .rational import format_rational

DEFAULT_COLUMN_CAP = 2_000_000


@dataclass(frozen=True)
class WeightedRootedClique:
    vertices: tuple[int, ...]  # sorted
    root: int
    a: Fraction
    b: Fraction

    def coefficient(self, v: int) -> Fraction:
        if v == self.root:
            return self.a
        return self.b if v in self.vertices else Fraction(0)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "root": self.root}


@dataclass
class FractionalTiling:
    weights: dict[WeightedRootedClique, Fraction]
    perfect: bool
    pivots: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "status": "feasible",
            "weights": [
                {**K.to_json(), "weight": format_rational(w)}
                for K, w in sorted(self.weights.items(), key=lambda kv: (kv[0].vertices, kv[0].root))
            ],
        }


@dataclass
class FarkasCertificate:
    x: tuple[Fraction, ...]
    pivots: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {"status": "infeasible", "certificate": [format_rational(v) for v in self.x]}


def transversal_cliques(G: MultipartiteGraph) -> Iterable[tuple[int, ...]]:
    """Every K_r of G, one vertex per class, listed in class order."""
    r = G.r
    masks = G.class_masks
    adj = G.adj
    chosen: list[int] = []

    def extend(level: int, cand: int):
        if level == r:
            yield tuple(chosen)
            return
        for v in iter_bits(cand & masks[level]):
            chosen.append(v)
            yield from extend(level + 1, cand & adj[v])
            chosen.pop()

    yield from extend(0, (1 << G.vertex_count) - 1)


def enumerate_rooted_cliques(G: MultipartiteGraph, a, b) -> list[WeightedRootedClique]:
    a, b = Fraction(a), Fraction(b)
    out = []
    for clique in transversal_cliques(G):
        verts = tuple(sorted(clique))
        roots = verts[:1] if a == b else verts
        out.extend(WeightedRootedClique(verts, root, a, b) for root in roots)
    return out


def _column_arrays(G: MultipartiteGraph, a: Fraction, b: Fraction, cap: int):
    # rows of idx are rooted cliques with the root in position 0
    rows: list[tuple[int, ...]] = []
    r = G.r
    for clique in transversal_cliques(G):
        if a == b:
            rows.append(tuple(sorted(clique)))
        else:
            for p in range(r):
                rows.append((clique[p],) + clique[:p] + clique[p + 1:])
        if len(rows) > cap:
            raise ResourceError(f"more than {cap} rooted cliques; use a smaller host or raise the column cap")
    idx = np.array(rows, dtype=np.int64).reshape(len(rows), r)
    return idx, [a] + [b] * (r - 1)


def solve_perfect_weighted_tiling(G: MultipartiteGraph, a, b, column_cap: int = DEFAULT_COLUMN_CAP):
    """Return a perfect FractionalTiling, or a FarkasCertificate if none exists."""
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise ContractError("weights a and b must be positive")
    idx, coef = _column_arrays(G, a, b, column_cap)
    res = solve_equality_feasibility(idx, coef, G.vertex_count)
    if res.feasible:
        weights = {}
        for j, w in res.weights.items():
            row = [int(v) for v in idx[j]]
            weights[WeightedRootedClique(tuple(sorted(row)), row[0], a, b)] = w
        return FractionalTiling(weights, True, res.pivots)
    return FarkasCertificate(_normalise(res.duals), res.pivots)


def _normalise(x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # positive rescaling to coprime integers; both Farkas conditions are scale-free
    from math import gcd, lcm

    den = lcm(*(v.denominator for v in x)) if x else 1
    ints = [int(v * den) for v in x]
    g = gcd(*ints) if any(ints) else 1
    return tuple(Fraction(v // g) for v in ints)


def _brute_force_cliques(G: MultipartiteGraph) -> Iterable[tuple[int, ...]]:
    for combo in itertools.product(*G.classes):
        if all(G.has_edge(u, v) for u, v in itertools.combinations(combo, 2)):
            yield combo


def vertex_loads(G: MultipartiteGraph, a, b, weights: dict) -> list[Fraction] | None:
    a, b = Fraction(a), Fraction(b)
    load = [Fraction(0)] * G.vertex_count
    for K, w in weights.items():
        verts = tuple(sorted(K.vertices))
        if len(verts) != G.r or len({G.class_of[v] for v in verts}) != G.r:
            return None
        if K.root not in verts or any(not G.has_edge(u, v) for u, v in itertools.combinations(verts, 2)):
            return None
        if a == b and K.root != verts[0]:
            return None
        for v in verts:
            load[v] += w * (a if v == K.root else b)
    return load


def verify_fractional_tiling(G: MultipartiteGraph, a, b, T: FractionalTiling) -> bool:
    if any(w < 0 for w in T.weights.values()):
        return False
    load = vertex_loads(G, a, b, T.weights)
    if load is None:
        return False
    if T.perfect:
        return all(x == 1 for x in load)
    return all(x <= 1 for x in load)


def verify_farkas_certificate(G: MultipartiteGraph, a, b, cert: FarkasCertificate) -> bool:
    a, b = Fraction(a), Fraction(b)
    x = cert.x
    if len(x) != G.vertex_count or sum(x) <= 0:
        return False
    for combo in _brute_force_cliques(G):
        s = sum(x[v] for v in combo)
        top = max(x[v] for v in combo)
        low = min(x[v] for v in combo)
        # best root choice maximises the weighted dot product
        root_val = top if a >= b else low
        if b * s + (a - b) * root_val > 0:
            return False
    return True


def max_fractional_H_tiling(G, copies: Sequence[Iterable[int]]) -> Fraction:
    """Exact optimum of the fractional H-tiling packing LP over ``copies``."""
    copies = [sorted(c) for c in copies]
    if not copies:
        return Fraction(0)
    idx = np.array(copies, dtype=np.int64)
    res = solve_packing(idx, [Fraction(1)] * idx.shape[1], G.vertex_count)
    return res.objective


def blow_down_weights(G: MultipartiteGraph, m: int, tiling: FractionalTiling) -> FractionalTiling:
    """Map a tiling of blow_up(G, m) back to G.

    A rooted copy in G receives the total weight of the m^r rooted copies
    lying over it, divided by m.
    """
    acc: dict[tuple[tuple[int, ...], int], Fraction] = {}
    a = b = None
    for K, w in tiling.weights.items():
        a, b = K.a, K.b
        verts = tuple(sorted(v // m for v in K.vertices))
        key = (verts, K.root // m if a != b else verts[0])
        acc[key] = acc.get(key, Fraction(0)) + w
    weights = {WeightedRootedClique(v, root, a, b): w / m for (v, root), w in acc.items()}
    return FractionalTiling(weights, tiling.perfect)
