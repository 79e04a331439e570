"""Finite hypergraphs and Berge geometry.

Vertices are 0-based ints [0, N). Edges are sorted tuples of distinct
vertices with arity >= 2; edge ids are positions in the edge list.
Instances are immutable; all operations are pure.

Berge conventions: a path of length L alternates L+1 distinct vertices
and L distinct edges with consecutive vertex pairs contained in the
connecting edge; distance is the minimum path length (0 for a vertex to
itself, inf across components); a cycle is the closed variant with
length >= 2, so two edges sharing two vertices already form one.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"vertex count must be a positive int, got {self.n!r}")
        seen = set()
        for eid, e in enumerate(self.edges):
            if len(e) < 2:
                raise ValidationError(f"edge {eid} has arity {len(e)} < 2")
            if list(e) != sorted(set(e)):
                raise ValidationError(f"edge {eid} must be sorted distinct vertices, got {e}")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValidationError(f"edge {eid} has vertex outside [0, {self.n})")
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def max_arity(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    @cached_property
    def _incident(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in range(self.n)]
        for eid, e in enumerate(self.edges):
            for v in e:
                inc[v].append(eid)
        return tuple(tuple(x) for x in inc)

    def incident(self, v: int) -> tuple[int, ...]:
        """Edge ids containing vertex v."""
        return self._incident[v]


def hypergraph(n: int, edges) -> Hypergraph:
    """Build a validated hypergraph; edges may be any iterables of ints.

    Vertex order within an edge is free, repeats are not: an edge is a
    set, and silently deduplicating would change the arity."""
    canon = tuple(tuple(sorted(map(int, e))) for e in edges)
    return Hypergraph(int(n), canon)


@dataclass(frozen=True)
class MultiIndex:
    """Sparse multi-index over edge ids: degrees maps edge id -> n_e >= 1."""

    degrees: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = -1
        for eid, d in self.degrees:
            if eid <= prev:
                raise ValidationError("multi-index entries must be sorted by edge id")
            if d < 1:
                raise ValidationError(f"multi-index degree for edge {eid} must be >= 1, got {d}")
            prev = eid

    @property
    def total_degree(self) -> int:
        return sum(d for _, d in self.degrees)

    @property
    def support(self) -> tuple[int, ...]:
        """E(n): edge ids with n_e > 0."""
        return tuple(eid for eid, _ in self.degrees)

    @property
    def odd_support(self) -> tuple[int, ...]:
        return tuple(eid for eid, d in self.degrees if d % 2 == 1)

    def degree(self, eid: int) -> int:
        for e, d in self.degrees:
            if e == eid:
                return d
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.degrees)


def multi_index(degrees) -> MultiIndex:
    """Build from a mapping or iterable of (edge_id, degree); zeros dropped."""
    items = degrees.items() if hasattr(degrees, "items") else degrees
    kept = sorted((int(e), int(d)) for e, d in items if int(d) != 0)
    return MultiIndex(tuple(kept))


def _check_vertex(g: Hypergraph, v: int):
    if not (0 <= v < g.n):
        raise ValidationError(f"vertex {v} outside [0, {g.n})")


def _resolve_edges(g: Hypergraph, edge_ids) -> list[int]:
    if edge_ids is None:
        return list(range(g.n_edges))
    out = []
    for eid in edge_ids:
        eid = int(eid)
        if not (0 <= eid < g.n_edges):
            raise ValidationError(f"edge id {eid} outside [0, {g.n_edges})")
        out.append(eid)
    if len(set(out)) != len(out):
        raise ValidationError("edge id subset contains duplicates")
    return out


def _bfs_layers(g: Hypergraph, root: int, edge_ids=None, max_depth=None):
    """Vertex distances from root through the allowed edges.

    A shortest vertex walk through edges automatically has distinct
    vertices and edges, so this is exactly the Berge distance.
    """
    allowed = None if edge_ids is None else set(_resolve_edges(g, edge_ids))
    dist = {root: 0}
    frontier = deque([root])
    edge_seen = set()
    d = 0
    while frontier and (max_depth is None or d < max_depth):
        d += 1
        nxt = deque()
        for _ in range(len(frontier)):
            v = frontier.popleft()
            for eid in g.incident(v):
                if eid in edge_seen or (allowed is not None and eid not in allowed):
                    continue
                edge_seen.add(eid)
                for u in g.edges[eid]:
                    if u not in dist:
                        dist[u] = d
                        nxt.append(u)
        frontier = nxt
    return dist


def berge_distance(g: Hypergraph, u: int, v: int, edge_ids=None) -> float:
    """Minimum Berge path length; 0 if u == v, inf if disconnected."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return 0
    dist = _bfs_layers(g, u, edge_ids)
    return dist.get(v, math.inf)


def ball(g: Hypergraph, v: int, r: int, edge_ids=None) -> frozenset[int]:
    """B_r(v): vertices within Berge distance r."""
    _check_vertex(g, v)
    if r < 0:
        raise ValidationError(f"radius must be >= 0, got {r}")
    return frozenset(_bfs_layers(g, v, edge_ids, max_depth=r))


def ball_sizes(g: Hypergraph, v: int) -> list[int]:
    """|B_r(v)| for r = 0, 1, ... up to the eccentricity of v."""
    _check_vertex(g, v)
    dist = _bfs_layers(g, v)
    ecc = max(dist.values())
    counts = [0] * (ecc + 1)
    for d in dist.values():
        counts[d] += 1
    out = []
    total = 0
    for c in counts:
        total += c
        out.append(total)
    return out


def has_berge_cycle(g: Hypergraph, edge_ids=None) -> bool:
    """Union-find on the vertex-edge incidence graph; cycle iff a union
    joins two already-connected nodes."""
    ids = _resolve_edges(g, edge_ids)
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    for eid in ids:
        enode = ("e", eid)
        for v in g.edges[eid]:
            rv, re = find(("v", v)), find(enode)
            if rv == re:
                return True
            parent[rv] = re
    return False


def interior_edges(g: Hypergraph, vertices) -> tuple[int, ...]:
    """Edges with all vertices inside the given set."""
    vs = set(vertices)
    return tuple(eid for eid, e in enumerate(g.edges) if vs.issuperset(e))


def boundary_edges(g: Hypergraph, vertices) -> tuple[int, ...]:
    """Edges straddling the set: some but not all vertices inside."""
    vs = set(vertices)
    out = []
    for eid, e in enumerate(g.edges):
        k = sum(1 for v in e if v in vs)
        if 0 < k < len(e):
            out.append(eid)
    return tuple(out)


def ball_is_hypertree(g: Hypergraph, v: int, r: int) -> bool:
    """Whether the depth-r ball around v, with its interior edges, is a
    hypertree. Connectivity holds by construction, so this reduces to
    the absence of a Berge cycle among interior edges."""
    b = ball(g, v, r)
    return not has_berge_cycle(g, interior_edges(g, b))


def is_hypertree(g: Hypergraph, edge_ids=None) -> bool:
    """Connected on the touched vertex set and Berge-acyclic."""
    ids = _resolve_edges(g, edge_ids)
    touched = set()
    for eid in ids:
        touched.update(g.edges[eid])
    if touched:
        root = next(iter(touched))
        reach = _bfs_layers(g, root, ids)
        if not touched.issubset(reach):
            return False
    return not has_berge_cycle(g, ids)


def vertex_support(g: Hypergraph, n: MultiIndex) -> frozenset[int]:
    """V(n): vertices covered by edges in the support of n."""
    out = set()
    for eid in n.support:
        if not (0 <= eid < g.n_edges):
            raise ValidationError(f"multi-index edge id {eid} outside [0, {g.n_edges})")
        out.update(g.edges[eid])
    return frozenset(out)


def sub_hypergraph(g: Hypergraph, edge_ids) -> tuple[Hypergraph, tuple[int, ...]]:
    """Sub-hypergraph on the same vertex set keeping the given edges.

    Returns (sub, orig_ids); edge i of sub is edge orig_ids[i] of g.
    """
    ids = _resolve_edges(g, edge_ids)
    return Hypergraph(g.n, tuple(g.edges[eid] for eid in ids)), tuple(ids)


def component(g: Hypergraph, v: int, edge_ids=None) -> frozenset[int]:
    """C(v): vertex set of the connected component of v through the
    allowed edges; {v} if v meets none of them."""
    _check_vertex(g, v)
    return frozenset(_bfs_layers(g, v, edge_ids))


def connected_in(g: Hypergraph, u: int, v: int, edge_ids=None) -> bool:
    return berge_distance(g, u, v, edge_ids) != math.inf


def to_text(g: Hypergraph) -> str:
    """Text format: first line 'N max_arity', one line of sorted vertex
    ids per edge. Round-trips exactly."""
    lines = [f"{g.n} {g.max_arity}"]
    for e in g.edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty hypergraph text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValidationError(f"header must be 'N max_arity', got {lines[0]!r}")
    try:
        n, delta = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValidationError(f"non-integer header {lines[0]!r}") from exc
    edges = []
    for ln in lines[1:]:
        try:
            e = tuple(int(tok) for tok in ln.split())
        except ValueError as exc:
            raise ValidationError(f"non-integer vertex id in line {ln!r}") from exc
        edges.append(e)
    g = Hypergraph(n, tuple(edges))
    if g.max_arity != delta:
        raise ValidationError(f"header arity {delta} but edges have max arity {g.max_arity}")
    return g


def save(g: Hypergraph, path) -> None:
    Path(path).write_text(to_text(g))


def load(path) -> Hypergraph:
    return from_text(Path(path).read_text())
