"""Intersection matrices and intersection-preserving triangle bijections."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Any, Sequence

from .complex_core import Triangulation
from .errors import MalformedMatrix, NotIntersectionPreserving, SizeMismatch

TriangleBijection = tuple  # position i holds f(i)


@dataclass(frozen=True)
class IntersectionMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise MalformedMatrix(f"row {i} has {len(r)} entries, expected {n}")
            if r[i] != 3:
                raise MalformedMatrix(f"diagonal entry ({i},{i}) is {r[i]}, expected 3")
            for j, x in enumerate(r):
                if j != i and x not in (0, 1, 2):
                    raise MalformedMatrix(f"entry ({i},{j}) = {x} is outside 0..2")
                if rows[j][i] != x:
                    raise MalformedMatrix(f"not symmetric at ({i},{j})")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_profile(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(self.entries[i]))

    def permuted(self, order: Sequence[int]) -> "IntersectionMatrix":
        """Simultaneous row/column permutation: new row k is old row order[k]."""
        return IntersectionMatrix(tuple(tuple(self.entries[i][j] for j in order) for i in order))

    # -- I/O -------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "entries": [list(r) for r in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        return "".join(",".join(str(x) for x in r) + "\n" for r in self.entries)

    @classmethod
    def from_dict(cls, data: Any) -> "IntersectionMatrix":
        if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
            raise MalformedMatrix('expected an object with "n" and "entries"')
        entries = data["entries"]
        if data.get("n") != len(entries):
            raise MalformedMatrix(f'"n" is {data.get("n")!r} but there are {len(entries)} rows')
        for i, r in enumerate(entries):
            if not isinstance(r, list) or not all(isinstance(x, int) for x in r):
                raise MalformedMatrix(f"entries[{i}] must be an array of integers")
        return cls(tuple(tuple(r) for r in entries))

    @classmethod
    def from_json(cls, text: str) -> "IntersectionMatrix":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_csv(cls, text: str) -> "IntersectionMatrix":
        rows = []
        for lineno, rec in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                rows.append(tuple(int(c) for c in rec))
            except ValueError:
                raise MalformedMatrix(f"line {lineno}: non-integer entry in {rec!r}") from None
        return cls(tuple(rows))


def intersection_matrix(S: Triangulation) -> IntersectionMatrix:
    sets = [frozenset(t) for t in S.triangles]
    return IntersectionMatrix(tuple(tuple(len(a & b) for b in sets) for a in sets))


def _as_matrix(X) -> IntersectionMatrix:
    return X if isinstance(X, IntersectionMatrix) else intersection_matrix(X)


def _check_bijection(f: Sequence[int], n: int) -> None:
    if len(f) != n:
        raise SizeMismatch(f"map has {len(f)} entries for {n} triangles")
    if sorted(f) != list(range(n)):
        raise ValueError("triangle map is not a bijection")


def same_intersection_matrix(S, S2, f: Sequence[int]) -> bool:
    """True iff ``M'[f(i)][f(j)] == M[i][j]`` for all i, j."""
    M, M2 = _as_matrix(S), _as_matrix(S2)
    if M.n != M2.n:
        raise SizeMismatch(f"{M.n} triangles vs {M2.n}")
    _check_bijection(f, M.n)
    a, b = M.entries, M2.entries
    return all(a[i][j] == b[f[i]][f[j]] for i in range(M.n) for j in range(i + 1, M.n))


def _joint_refinement(a, b) -> tuple[list[int], list[int]] | None:
    """Colour the rows of both matrices by iterated neighbourhood refinement.

    Starts from the sorted multiset of each row; a colour class is split by
    the multiset of (entry, neighbour colour) pairs until stable.  Returns
    ``None`` as soon as the two colour histograms disagree.
    """
    n = len(a)
    ca = [tuple(sorted(r)) for r in a]
    cb = [tuple(sorted(r)) for r in b]
    classes = -1
    while True:
        table = {s: k for k, s in enumerate(sorted(set(ca) | set(cb)))}
        ca = [table[s] for s in ca]
        cb = [table[s] for s in cb]
        if Counter(ca) != Counter(cb):
            return None
        if len(table) == classes:
            return ca, cb
        classes = len(table)
        ca = [(ca[i], tuple(sorted((a[i][j], ca[j]) for j in range(n) if j != i))) for i in range(n)]
        cb = [(cb[i], tuple(sorted((b[i][j], cb[j]) for j in range(n) if j != i))) for i in range(n)]


def _search_order(a, colour: list[int]) -> list[int]:
    """Rarest colour class first, then grow along shared edges."""
    n = len(a)
    size = Counter(colour)
    rarity = lambda i: (size[colour[i]], colour[i], i)  # noqa: E731
    order = [min(range(n), key=rarity)]
    placed = set(order)
    while len(order) < n:
        best = min(
            (i for i in range(n) if i not in placed),
            key=lambda i: (-sum(a[i][j] == 2 for j in order), rarity(i)),
        )
        order.append(best)
        placed.add(best)
    return order


def find_intersection_preserving_maps(S, S2, limit: int | None = None) -> list[TriangleBijection]:
    """All (or the first ``limit``) intersection-preserving bijections.

    Either argument may be a :class:`Triangulation` or an
    :class:`IntersectionMatrix`.  The result is sorted lexicographically.
    """
    M, M2 = _as_matrix(S), _as_matrix(S2)
    if M.n != M2.n or M.n == 0:
        return []
    a, b = M.entries, M2.entries
    refined = _joint_refinement(a, b)
    if refined is None:
        return []
    ca, cb = refined
    n = M.n
    targets: dict[int, list[int]] = defaultdict(list)
    for j in range(n):
        targets[cb[j]].append(j)
    order = _search_order(a, ca)
    f = [-1] * n
    used = [False] * n
    found: list[TriangleBijection] = []

    def extend(depth: int) -> bool:
        if depth == n:
            found.append(tuple(f))
            return limit is not None and len(found) >= limit
        i = order[depth]
        row = a[i]
        for j in targets[ca[i]]:
            if used[j]:
                continue
            row2 = b[j]
            if all(row[k] == row2[f[k]] for k in order[:depth]):
                f[i] = j
                used[j] = True
                stop = extend(depth + 1)
                used[j] = False
                f[i] = -1
                if stop:
                    return True
        return False

    if limit is None or limit > 0:
        extend(0)
    return sorted(found)


def is_induced(f: Sequence[int], S: Triangulation, S2: Triangulation) -> dict | None:
    """Vertex bijection ``g`` with ``g(t_i) = t'_{f(i)}`` for all i, or ``None``.

    A vertex v must go to a vertex whose set of incident triangles is
    exactly the image of v's incident triangles; vertices with identical
    incidence sets are interchangeable and are paired in sorted order.
    """
    if not same_intersection_matrix(S, S2, f):
        raise NotIntersectionPreserving("the triangle map does not preserve intersections")
    if len(S.vertices) != len(S2.vertices):
        return None
    by_star: dict[frozenset, list] = defaultdict(list)
    for w in S2.vertices:
        by_star[frozenset(S2.triangles_at(w))].append(w)
    wanted: dict[frozenset, list] = defaultdict(list)
    for v in S.vertices:
        wanted[frozenset(f[i] for i in S.triangles_at(v))].append(v)
    g = {}
    for key, vs in wanted.items():
        ws = by_star.get(key, [])
        if len(ws) != len(vs):
            return None
        g.update(zip(sorted(vs), sorted(ws)))
    if any(tuple(sorted(g[v] for v in t)) != S2[f[i]] for i, t in enumerate(S.triangles)):
        return None
    return g


def identity_map(n: int) -> TriangleBijection:
    return tuple(range(n))


def compose(f: Sequence[int], g: Sequence[int]) -> TriangleBijection:
    """``(f o g)(i) = f[g[i]]``."""
    return tuple(f[g[i]] for i in range(len(g)))


def bijection_to_json(f: Sequence[int]) -> str:
    return json.dumps(list(f)) + "\n"


def bijection_from_json(text: str) -> TriangleBijection:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
        raise ValueError("a triangle map must be a JSON array of integers")
    return tuple(data)
