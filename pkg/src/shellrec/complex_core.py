"""Abstract triangulations, closed-surface checks and isomorphism.

A :class:`Triangulation` is nothing more than an ordered list of
3-element vertex sets.  The order matters: it fixes the row order of the
intersection matrix and the indices used by triangle bijections.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Hashable, Iterable, NamedTuple

from .errors import DuplicateTriangle, LinkNotCycle, MalformedTriangle, UnknownVertex

VertexId = Hashable
Triangle = tuple  # sorted 3-tuple of vertex ids
Edge = tuple  # sorted 2-tuple of vertex ids


class Triangulation:
    """Immutable pure 2-dimensional simplicial complex.

    Triangles are stored as sorted 3-tuples in the order given.  Duplicate
    triangles and degenerate triangles are rejected rather than merged.
    """

    __slots__ = ("triangles", "_vertices", "_edges", "_star", "_hash")

    def __init__(self, triangles: Iterable[Iterable[VertexId]]):
        tris = []
        seen = set()
        for raw in triangles:
            raw = tuple(raw)
            if len(raw) != 3 or len(set(raw)) != 3:
                raise MalformedTriangle(f"triangle {raw!r} does not have 3 distinct vertices")
            t = tuple(sorted(raw))
            if t in seen:
                raise DuplicateTriangle(f"triangle {t!r} appears twice")
            seen.add(t)
            tris.append(t)
        self.triangles: tuple[Triangle, ...] = tuple(tris)
        star = defaultdict(list)
        edges: dict[Edge, int] = defaultdict(int)
        for i, t in enumerate(self.triangles):
            for v in t:
                star[v].append(i)
            for e in combinations(t, 2):
                edges[e] += 1
        self._star = dict(star)
        self._edges = dict(edges)
        self._vertices = tuple(sorted(self._star))
        self._hash = None

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> dict[Edge, int]:
        """Each distinct edge with the number of triangles containing it."""
        return dict(self._edges)

    def triangles_at(self, v: VertexId) -> list[int]:
        """Indices of all triangles containing ``v``, ascending."""
        try:
            return list(self._star[v])
        except KeyError:
            raise UnknownVertex(v) from None

    def __len__(self) -> int:
        return len(self.triangles)

    def __iter__(self):
        return iter(self.triangles)

    def __getitem__(self, i: int) -> Triangle:
        return self.triangles[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.triangles == other.triangles

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.triangles)
        return self._hash

    def __repr__(self) -> str:
        return f"Triangulation({[list(t) for t in self.triangles]!r})"

    def relabel(self, mapping) -> "Triangulation":
        """Apply a vertex map (dict or callable) triangle by triangle."""
        get = mapping.__getitem__ if hasattr(mapping, "__getitem__") else mapping
        return Triangulation([get(v) for v in t] for t in self.triangles)

    def reorder(self, order: Iterable[int]) -> "Triangulation":
        """Return the complex with triangle ``k`` taken from index ``order[k]``."""
        return Triangulation(self.triangles[i] for i in order)

    # -- JSON -----------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {"triangles": [[str(v) for v in t] for t in self.triangles]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, data: Any) -> "Triangulation":
        if not isinstance(data, dict) or not isinstance(data.get("triangles"), list):
            raise MalformedTriangle('expected an object with a "triangles" array')
        for k, t in enumerate(data["triangles"]):
            if not isinstance(t, list) or not all(isinstance(v, str) for v in t):
                raise MalformedTriangle(f"triangles[{k}] must be an array of vertex-id strings")
        return cls(data["triangles"])

    @classmethod
    def from_json(cls, text: str) -> "Triangulation":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SurfaceReport:
    is_closed_surface: bool
    is_connected: bool
    every_edge_in_two_triangles: bool
    all_links_single_cycles: bool
    euler_characteristic: int
    orientable: bool
    n_vertices: int
    n_edges: int
    n_triangles: int

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


class Star(NamedTuple):
    """Triangles around a vertex, consecutive ones sharing an edge through it."""

    triangles: tuple[int, ...]
    closed: bool


def euler_characteristic(S: Triangulation) -> int:
    return len(S.vertices) - len(S.edges) + len(S)


def _link_adjacency(S: Triangulation, v: VertexId) -> dict[VertexId, list[VertexId]]:
    adj: dict[VertexId, list[VertexId]] = defaultdict(list)
    for i in S.triangles_at(v):
        a, b = (u for u in S[i] if u != v)
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _link_is_cycle(S: Triangulation, v: VertexId) -> bool:
    adj = _link_adjacency(S, v)
    if any(len(nb) != 2 for nb in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    todo = [start]
    while todo:
        for w in adj[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(adj)


def dual_adjacency(S: Triangulation) -> list[list[int]]:
    """Shared-edge adjacency between triangle indices."""
    by_edge = defaultdict(list)
    for i, t in enumerate(S.triangles):
        for e in combinations(t, 2):
            by_edge[e].append(i)
    adj: list[list[int]] = [[] for _ in S.triangles]
    for owners in by_edge.values():
        for i, j in combinations(owners, 2):
            adj[i].append(j)
            adj[j].append(i)
    return [sorted(a) for a in adj]


def _is_connected(S: Triangulation) -> bool:
    if not S.triangles:
        return False
    adj = dual_adjacency(S)
    seen = {0}
    todo = [0]
    while todo:
        for j in adj[todo.pop()]:
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return len(seen) == len(S)


def _orientable(S: Triangulation) -> bool:
    """Try to orient every triangle coherently across shared edges.

    Only meaningful when no edge lies in more than two triangles.
    """
    by_edge = defaultdict(list)
    for i, t in enumerate(S.triangles):
        for e in combinations(t, 2):
            by_edge[e].append(i)
    if any(len(o) > 2 for o in by_edge.values()):
        return False

    def directed(order, e):
        # +1 if the cyclic order traverses e = (u, w) as u -> w
        k = order.index(e[0])
        return 1 if order[(k + 1) % 3] == e[1] else -1

    orient: dict[int, tuple] = {}
    for root in range(len(S)):
        if root in orient:
            continue
        orient[root] = S[root]
        todo = deque([root])
        while todo:
            i = todo.popleft()
            for e in combinations(S[i], 2):
                for j in by_edge[e]:
                    if j == i:
                        continue
                    want = -directed(orient[i], e)
                    if j in orient:
                        if directed(orient[j], e) != want:
                            return False
                    else:
                        t = S[j]
                        orient[j] = t if directed(t, e) == want else (t[0], t[2], t[1])
                        todo.append(j)
    return True


def validate_surface(S: Triangulation) -> SurfaceReport:
    """Check the closed connected surface hypotheses for ``S``."""
    if not S.triangles:
        raise MalformedTriangle("empty triangulation")
    edges = S.edges
    two = all(c == 2 for c in edges.values())
    links = all(_link_is_cycle(S, v) for v in S.vertices)
    conn = _is_connected(S)
    closed = two and links and conn
    return SurfaceReport(
        is_closed_surface=closed,
        is_connected=conn,
        every_edge_in_two_triangles=two,
        all_links_single_cycles=links,
        euler_characteristic=euler_characteristic(S),
        orientable=_orientable(S),
        n_vertices=len(S.vertices),
        n_edges=len(edges),
        n_triangles=len(S),
    )


def vertex_star(S: Triangulation, v: VertexId) -> Star:
    """Order the triangles at ``v`` so that consecutive ones share an edge.

    A cyclic star starts at its lowest triangle index and proceeds towards
    the lower-indexed neighbour.  An open star (boundary vertex) runs from
    the lower-indexed end.  Anything that is not a single path or cycle
    raises :class:`LinkNotCycle`.
    """
    star = S.triangles_at(v)
    adj = _link_adjacency(S, v)
    if any(len(nb) > 2 for nb in adj.values()):
        raise LinkNotCycle(f"link of {v!r} branches")
    # triangle neighbours through an edge {v, w}
    via: dict[VertexId, list[int]] = defaultdict(list)
    for i in star:
        for w in S[i]:
            if w != v:
                via[w].append(i)
    nbrs: dict[int, list[int]] = {i: [] for i in star}
    for owners in via.values():
        if len(owners) == 2:
            i, j = owners
            nbrs[i].append(j)
            nbrs[j].append(i)
    ends = sorted(i for i in star if len(nbrs[i]) < 2)
    closed = not ends
    start = ends[0] if ends else star[0]
    order = [start]
    prev, cur = None, start
    while True:
        cand = sorted(j for j in nbrs[cur] if j != prev)
        if not cand or cand[0] == start:
            break
        prev, cur = cur, cand[0]
        order.append(cur)
    if len(order) != len(star):
        raise LinkNotCycle(f"link of {v!r} is disconnected")
    return Star(tuple(order), closed)


# -- canonical form ----------------------------------------------------


def _refine(cells: list[list[int]], incident: list[list[tuple[int, int]]]) -> list[list[int]]:
    """Split cells by the colour multiset of each vertex's opposite edges."""
    while True:
        colour = {}
        for k, cell in enumerate(cells):
            for v in cell:
                colour[v] = k
        new: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            groups: dict[tuple, list[int]] = defaultdict(list)
            for v in cell:
                sig = tuple(sorted(
                    (colour[a], colour[b]) if colour[a] <= colour[b] else (colour[b], colour[a])
                    for a, b in incident[v]
                ))
                groups[sig].append(v)
            for key in sorted(groups):
                new.append(groups[key])
        if len(new) == len(cells):
            return new
        cells = new


def canonical_labeling(S: Triangulation) -> tuple[bytes, tuple]:
    """Return ``(code, order)`` where ``order[k]`` is the vertex given label k.

    Individualisation-refinement: vertices are first partitioned by degree
    and iterated neighbourhood colours; the search branches on the first
    smallest non-trivial cell and keeps the lexicographically smallest
    relabelled, sorted triangle list over all leaves.
    """
    verts = S.vertices
    index = {v: k for k, v in enumerate(verts)}
    tris = [tuple(index[v] for v in t) for t in S.triangles]
    incident: list[list[tuple[int, int]]] = [[] for _ in verts]
    for a, b, c in tris:
        incident[a].append((b, c))
        incident[b].append((a, c))
        incident[c].append((a, b))

    best: list = [None, None]

    def leaf(cells):
        pos = [0] * len(verts)
        for k, cell in enumerate(cells):
            pos[cell[0]] = k
        code = tuple(sorted(tuple(sorted((pos[a], pos[b], pos[c]))) for a, b, c in tris))
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = [cell[0] for cell in cells]

    def search(cells):
        cells = _refine(cells, incident)
        sizes = [len(c) for c in cells]
        if max(sizes) == 1:
            leaf(cells)
            return
        target = min(s for s in sizes if s > 1)
        k = sizes.index(target)
        for v in cells[k]:
            rest = [u for u in cells[k] if u != v]
            search(cells[:k] + [[v], rest] + cells[k + 1:])

    if verts:
        search([list(range(len(verts)))])
    code = best[0] or ()
    text = f"{len(verts)}:" + ";".join(f"{a},{b},{c}" for a, b, c in code)
    order = tuple(verts[k] for k in (best[1] or ()))
    return text.encode("ascii"), order


def canonical_code(S: Triangulation) -> bytes:
    """Relabelling-invariant byte string; equal iff the complexes are isomorphic."""
    return canonical_labeling(S)[0]


def is_isomorphic(S: Triangulation, S2: Triangulation) -> dict | None:
    """Vertex bijection ``g`` with ``g(T) = T'`` as sets, or ``None``."""
    if len(S) != len(S2) or len(S.vertices) != len(S2.vertices):
        return None
    code1, order1 = canonical_labeling(S)
    code2, order2 = canonical_labeling(S2)
    if code1 != code2:
        return None
    g = dict(zip(order1, order2))
    assert set(S.relabel(g).triangles) == set(S2.triangles)
    return g


def vertex_degrees(S: Triangulation) -> dict[VertexId, int]:
    """Number of triangles at each vertex."""
    return {v: len(S.triangles_at(v)) for v in S.vertices}
