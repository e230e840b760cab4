"""Graph and multipartite-graph data model.

Vertices are dense 0-based integers.  Adjacency is kept twice: as a frozen
edge set (for serialization and equality) and as a tuple of Python-int
bitmasks, one per vertex, which is what the clique and copy enumerators
intersect.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, GraphFormatError


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _adjacency(n: int, edges: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return tuple(adj)


def popcount(x: int) -> int:
    return bin(x).count("1")


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = frozenset(_norm_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphFormatError(f"edge ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adj", _adjacency(self.vertex_count, edges))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(_norm_edge(int(u), int(v)) for u, v in edges))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.vertex_count):
            if seen >> s & 1:
                continue
            comp = 1 << s
            frontier = comp
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            comps.append(list(iter_bits(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components()) == 1

    def to_json(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in sorted(self.edges)]}


@dataclass(frozen=True)
class MultipartiteGraph:
    """r-partite host graph with explicit vertex classes.

    ``dummies`` marks vertices added by :func:`mptile.constructions.augment_with_dummies`;
    it is metadata only and takes no part in equality.
    """

    r: int
    classes: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    dummies: frozenset[int] = field(default=frozenset(), compare=False)
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)
    class_of: tuple[int, ...] = field(init=False, repr=False, compare=False)
    class_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r < 2:
            raise GraphFormatError(f"r must be at least 2, got {self.r}")
        classes = tuple(tuple(sorted(c)) for c in self.classes)
        if len(classes) != self.r:
            raise GraphFormatError(f"expected {self.r} classes, got {len(classes)}")
        total = sum(len(c) for c in classes)
        class_of = [-1] * total
        for i, cls in enumerate(classes):
            for v in cls:
                if not 0 <= v < total:
                    raise GraphFormatError(f"classes[{i}]: vertex {v} outside 0..{total - 1}")
                if class_of[v] != -1:
                    raise GraphFormatError(f"classes[{i}]: vertex {v} already in class {class_of[v]}")
                class_of[v] = i
        edges = frozenset(_norm_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < total and 0 <= v < total):
                raise GraphFormatError(f"edge ({u}, {v}) has an endpoint outside 0..{total - 1}")
            if class_of[u] == class_of[v]:
                raise GraphFormatError(f"edge ({u}, {v}) lies inside class {class_of[u]}")
        masks = []
        for cls in classes:
            m = 0
            for v in cls:
                m |= 1 << v
            masks.append(m)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "dummies", frozenset(self.dummies))
        object.__setattr__(self, "adj", _adjacency(total, edges))
        object.__setattr__(self, "class_of", tuple(class_of))
        object.__setattr__(self, "class_masks", tuple(masks))

    @property
    def vertex_count(self) -> int:
        return len(self.class_of)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def n(self) -> int:
        """Common class size; only meaningful when balanced."""
        if not self.balanced():
            raise ContractError("graph is not balanced")
        return len(self.classes[0])

    def balanced(self) -> bool:
        return len(set(self.class_sizes)) == 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def as_graph(self) -> Graph:
        return Graph(self.vertex_count, self.edges)

    def to_json(self) -> dict:
        doc = {
            "r": self.r,
            "classes": [list(c) for c in self.classes],
            "edges": [list(e) for e in sorted(self.edges)],
        }
        if self.dummies:
            doc["dummies"] = sorted(self.dummies)
        return doc

    @classmethod
    def complete(cls, sizes: Sequence[int]) -> "MultipartiteGraph":
        """Complete multipartite graph with the given class sizes."""
        classes = []
        start = 0
        for s in sizes:
            classes.append(tuple(range(start, start + s)))
            start += s
        edges = set()
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                for u in classes[i]:
                    for v in classes[j]:
                        edges.add((u, v))
        return cls(len(sizes), tuple(classes), frozenset(edges))


@dataclass(frozen=True)
class BlockStructure:
    """r x r block layout of a row/column construction.

    ``block_sizes[i][j]`` is the size of the block in column i (a vertex class)
    and row j.  ``membership[v]`` is the (column, row) pair of vertex v.
    """

    r: int
    block_sizes: tuple[tuple[int, ...], ...]
    membership: tuple[tuple[int, int], ...]

    @property
    def row_sizes(self) -> tuple[int, ...]:
        return tuple(sum(self.block_sizes[i][j] for i in range(self.r)) for j in range(self.r))

    @property
    def column_sizes(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.block_sizes)

    def row_of(self, v: int) -> int:
        return self.membership[v][1]

    def rows(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.r)]
        for v, (_, j) in enumerate(self.membership):
            out[j].append(v)
        return out

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.block_sizes]


# ---------------------------------------------------------------------------
# Ingestion


def _load(text_or_doc) -> dict:
    if isinstance(text_or_doc, dict):
        return text_or_doc
    try:
        doc = json.loads(text_or_doc)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("top level: expected a JSON object")
    return doc


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _edge_list(doc: dict) -> list[tuple[int, int]]:
    raw = doc.get("edges")
    if not isinstance(raw, list):
        raise GraphFormatError("edges: expected a list of [u, v] pairs")
    out = []
    for k, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != 2:
            raise GraphFormatError(f"edges[{k}]: expected a pair [u, v], got {e!r}")
        u, v = _int(e[0], f"edges[{k}][0]"), _int(e[1], f"edges[{k}][1]")
        if u == v:
            raise GraphFormatError(f"edges[{k}]: self-loop at vertex {u}")
        out.append((u, v))
    return out


_MULTIPARTITE_KEYS = {"r", "classes", "edges", "dummies", "sidecar"}
_GRAPH_KEYS = {"n", "edges"}


def parse_multipartite(text) -> MultipartiteGraph:
    """Parse and validate a multipartite graph document.

    Vertex labels may be arbitrary distinct integers; they are renumbered to
    0..N-1 in increasing label order.
    """
    doc = _load(text)
    unknown = set(doc) - _MULTIPARTITE_KEYS
    if unknown:
        raise GraphFormatError(f"top level: unknown keys {sorted(unknown)}")
    if "r" not in doc:
        raise GraphFormatError("r: missing")
    r = _int(doc["r"], "r")
    if r < 2:
        raise GraphFormatError(f"r: must be at least 2, got {r}")
    classes = doc.get("classes")
    if not isinstance(classes, list) or len(classes) != r:
        raise GraphFormatError(f"classes: expected a list of {r} vertex lists")
    owner: dict[int, int] = {}
    for i, cls in enumerate(classes):
        if not isinstance(cls, list):
            raise GraphFormatError(f"classes[{i}]: expected a list of vertices")
        for k, v in enumerate(cls):
            v = _int(v, f"classes[{i}][{k}]")
            if v in owner:
                raise GraphFormatError(f"classes[{i}][{k}]: vertex {v} already listed in class {owner[v]}")
            owner[v] = i
    relabel = {v: idx for idx, v in enumerate(sorted(owner))}
    edges = []
    for k, (u, v) in enumerate(_edge_list(doc)):
        for end in (u, v):
            if end not in owner:
                raise GraphFormatError(f"edges[{k}]: vertex {end} is not in any class")
        if owner[u] == owner[v]:
            raise GraphFormatError(f"edges[{k}]: edge ({u}, {v}) lies inside class {owner[u]}")
        edges.append(_norm_edge(relabel[u], relabel[v]))
    dummies = doc.get("dummies", [])
    if not isinstance(dummies, list) or any(d not in owner for d in dummies):
        raise GraphFormatError("dummies: expected a list of known vertices")
    new_classes = tuple(tuple(sorted(relabel[v] for v in cls)) for cls in classes)
    return MultipartiteGraph(r, new_classes, frozenset(edges), frozenset(relabel[d] for d in dummies))


def parse_graph(text) -> Graph:
    """Parse a plain graph document ``{"n": int, "edges": [[u, v], ...]}``."""
    doc = _load(text)
    unknown = set(doc) - _GRAPH_KEYS
    if unknown:
        raise GraphFormatError(f"top level: unknown keys {sorted(unknown)}")
    if "n" not in doc:
        raise GraphFormatError("n: missing")
    n = _int(doc["n"], "n")
    if n < 0:
        raise GraphFormatError(f"n: must be non-negative, got {n}")
    edges = _edge_list(doc)
    for k, (u, v) in enumerate(edges):
        for end in (u, v):
            if not 0 <= end < n:
                raise GraphFormatError(f"edges[{k}]: vertex {end} outside 0..{n - 1}")
    return Graph.from_edges(n, edges)


def parse_block_structure(doc: dict, G: MultipartiteGraph) -> BlockStructure | None:
    """Recover the block layout from a ``sidecar`` entry, if present."""
    side = doc.get("sidecar") if isinstance(doc, dict) else None
    if not side or side.get("blocks") is None:
        return None
    blocks = tuple(tuple(int(x) for x in row) for row in side["blocks"])
    return block_structure_for(blocks, G.r)


def block_structure_for(blocks: Sequence[Sequence[int]], r: int) -> BlockStructure:
    """Block structure with vertices numbered column by column, rows in order."""
    membership = []
    for i in range(r):
        for j in range(r):
            membership.extend([(i, j)] * blocks[i][j])
    return BlockStructure(r, tuple(tuple(row) for row in blocks), tuple(membership))


# ---------------------------------------------------------------------------
# Degree computations and transforms


def min_multipartite_degree(G: MultipartiteGraph) -> int:
    """Least number of neighbours any vertex of one class has in another class."""
    for i, cls in enumerate(G.classes):
        if not cls:
            raise ContractError(f"class {i} is empty")
    best = None
    for v in range(G.vertex_count):
        own = G.class_of[v]
        for j, mask in enumerate(G.class_masks):
            if j == own:
                continue
            d = popcount(G.adj[v] & mask)
            if best is None or d < best:
                best = d
                if best == 0:
                    return 0
    return best


def blow_up(G: MultipartiteGraph, m: int) -> MultipartiteGraph:
    """m-fold blow-up: vertex v becomes v*m .. v*m+m-1, edges become K_{m,m}."""
    if m < 1:
        raise ContractError(f"blow-up factor must be positive, got {m}")
    classes = tuple(tuple(v * m + t for v in cls for t in range(m)) for cls in G.classes)
    edges = set()
    for u, v in G.edges:
        for s in range(m):
            for t in range(m):
                edges.add((u * m + s, v * m + t))
    return MultipartiteGraph(G.r, classes, frozenset(edges))
