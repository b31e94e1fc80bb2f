"""Extending intersection-preserving maps, and matrix-to-triangulation search."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

from .complex_core import Triangulation, canonical_code, validate_surface
from .errors import (
    InternalContradiction,
    NotClosedSurface,
    NotIntersectionPreserving,
    NotRealizable,
    Unclassifiable,
)
from .intersection import (
    IntersectionMatrix,
    find_intersection_preserving_maps,
    identity_map,
    is_induced,
    same_intersection_matrix,
)
from .shells import (
    MOBIUS5,
    MOBIUS6,
    Shell,
    ShellClass,
    classify_shell,
    realize_shell_class,
    shell_around_vertex,
)

HALF_ICOSAHEDRON = "half-icosahedron"
HALF_CUBE = "half-cube"

# pairs of r'-triangles that must share an edge around a six-triangle band
_HALF_CUBE_PAIRS = ((0, 1), (1, 4), (4, 5), (5, 2), (2, 3), (3, 0))


@dataclass(frozen=True)
class MobiusWitness:
    vertex: Any
    shell: tuple[int, ...]  # star of the vertex in S, in shell order
    image: tuple[int, ...]  # f(shell), re-indexed to line up with the template
    r: tuple[int, ...]  # f^-1(r'_i)
    r_prime: tuple[int, ...]  # triangle across the free edge of image[i]
    shell_class: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertex": str(self.vertex),
            "shell": list(self.shell),
            "image": list(self.image),
            "r": list(self.r),
            "r_prime": list(self.r_prime),
            "shell_class": self.shell_class,
        }


@dataclass(frozen=True)
class ExtendResult:
    result: str  # "extends" | "exceptional"
    vertex_map: dict | None = None
    kind: str | None = None
    witness: MobiusWitness | None = None

    @property
    def extends(self) -> bool:
        return self.result == "extends"

    def to_dict(self) -> dict[str, Any]:
        if self.extends:
            return {
                "result": "extends",
                "vertex_map": {str(k): str(v) for k, v in sorted(self.vertex_map.items())},
            }
        return {
            "result": "exceptional",
            "kind": self.kind,
            "witness_vertex": str(self.witness.vertex),
            "witness": self.witness.to_dict(),
        }


def _require_closed(S: Triangulation, name: str) -> None:
    if not validate_surface(S).is_closed_surface:
        raise NotClosedSurface(f"{name} is not a closed connected surface")


def _align(S2: Triangulation, image: Sequence[int], template: Triangulation) -> tuple[int, ...] | None:
    """Re-index the image shell (rotation/reflection) so it matches the template."""
    n = len(image)
    ident = identity_map(n)
    for start in range(n):
        for step in (1, -1):
            seq = tuple(image[(start + step * k) % n] for k in range(n))
            if is_induced(ident, template, S2.reorder(seq)) is not None:
                return seq
    return None


def _free_edge_neighbours(S2: Triangulation, seq: Sequence[int]) -> list[int]:
    """For each band triangle, the other triangle on its unshared edge."""
    n = len(seq)
    out = []
    for k, i in enumerate(seq):
        t = set(S2[i])
        shared = {frozenset(t & set(S2[seq[(k + d) % n]])) for d in (1, -1)}
        free = [e for e in combinations(sorted(t), 2) if frozenset(e) not in shared]
        if len(free) != 1:
            raise InternalContradiction(f"band triangle {i} has {len(free)} free edges")
        owners = [j for j in S2.triangles_at(free[0][0]) if j != i and free[0][1] in S2[j]]
        if len(owners) != 1:
            raise InternalContradiction(f"free edge {free[0]} is not shared by exactly two triangles")
        out.append(owners[0])
    return out


def _meet(S: Triangulation, i: int, j: int) -> int:
    return len(set(S[i]) & set(S[j]))


def _mobius_case(f, S, S2, v, shell: Shell, image: tuple[int, ...], cls: ShellClass) -> ExtendResult:
    from .corpus import catalog

    seq = _align(S2, image, realize_shell_class(cls))
    if seq is None:
        raise InternalContradiction(f"image of the star of {v!r} does not line up with {cls}")
    r_prime = _free_edge_neighbours(S2, seq)
    inverse = {j: i for i, j in enumerate(f)}
    r = [inverse[j] for j in r_prime]
    n = len(seq)
    if cls == MOBIUS5:
        kind, name = HALF_ICOSAHEDRON, "half_icosahedron"
        pairs = [(k, (k + 2) % n) for k in range(n)]
        size = 10
    else:
        kind, name = HALF_CUBE, "half_cube"
        pairs = list(_HALF_CUBE_PAIRS)
        size = 12
    for p, q in pairs:
        if _meet(S2, r_prime[p], r_prime[q]) != 2 or _meet(S, r[p], r[q]) != 2:
            raise InternalContradiction(f"r-triangles {p} and {q} do not share an edge ({cls})")
    pre_image = [inverse[j] for j in seq]
    if len(set(r) | set(pre_image)) != size or len(S) != size:
        raise InternalContradiction(f"{cls} band and its neighbours do not exhaust the surface")
    expected = canonical_code(catalog(name).triangulation)
    if canonical_code(S) != expected or canonical_code(S2) != expected:
        raise InternalContradiction(f"{cls} witness found but the surfaces are not the {kind}")
    witness = MobiusWitness(v, shell.triangles, seq, tuple(r), tuple(r_prime), str(cls))
    return ExtendResult("exceptional", kind=kind, witness=witness)


def extend_map(f: Sequence[int], S: Triangulation, S2: Triangulation) -> ExtendResult:
    """Extend ``f`` to a vertex isomorphism, or certify an exceptional surface.

    Each vertex v is sent to the common vertex of the images of the
    triangles around it.  That works whenever every image star is again a
    disk; the first vertex (in ascending order) whose image is a Moebius
    band instead is analysed through the triangles across the band's free
    edges.
    """
    _require_closed(S, "source")
    _require_closed(S2, "target")
    f = tuple(f)
    if not same_intersection_matrix(S, S2, f):
        raise NotIntersectionPreserving("the triangle map does not preserve intersections")
    h = {}
    for v in S.vertices:
        shell = shell_around_vertex(S, v)
        image = tuple(f[i] for i in shell.triangles)
        try:
            cls = classify_shell(S2, Shell(image, True))
        except Unclassifiable as exc:
            raise InternalContradiction(f"image of the star of {v!r}: {exc}") from None
        if cls.kind != "disk":
            return _mobius_case(f, S, S2, v, shell, image, cls)
        common = set.intersection(*(set(S2[j]) for j in image))
        if len(common) != 1:
            raise InternalContradiction(f"image of the disk around {v!r} has no single centre")
        h[v] = common.pop()
    if len(set(h.values())) != len(h) or len(h) != len(S2.vertices):
        raise InternalContradiction("vertex map is not a bijection")
    for i, t in enumerate(S.triangles):
        if tuple(sorted(h[u] for u in t)) != S2[f[i]]:
            raise InternalContradiction(f"vertex map does not send triangle {i} onto {f[i]}")
    return ExtendResult("extends", vertex_map=h)


def exceptional_codes() -> dict[bytes, str]:
    from .corpus import catalog

    return {
        canonical_code(catalog("half_icosahedron").triangulation): HALF_ICOSAHEDRON,
        canonical_code(catalog("half_cube").triangulation): HALF_CUBE,
    }


def verify_theorem2(S: Triangulation, S2: Triangulation, budget: int | None = None) -> dict[str, Any]:
    """Run every intersection-preserving map (up to ``budget``) through extend_map."""
    maps = find_intersection_preserving_maps(S, S2, limit=budget)
    special = exceptional_codes()
    codes = (canonical_code(S), canonical_code(S2))
    rows = []
    n_ext = 0
    kinds = set()
    consistent = True
    for f in maps:
        res = extend_map(f, S, S2)
        induced = is_induced(f, S, S2) is not None
        consistent &= induced == res.extends
        if res.extends:
            n_ext += 1
        else:
            kinds.add(res.kind)
        rows.append({"map": list(f), **res.to_dict()})
    non_ext = len(maps) - n_ext
    dichotomy = non_ext == 0 or (
        codes[0] == codes[1] and codes[0] in special and kinds == {special[codes[0]]}
    )
    return {
        "n_maps": len(maps),
        "n_extends": n_ext,
        "n_exceptional": non_ext,
        "exceptional_kinds": sorted(kinds),
        "dichotomy_holds": bool(dichotomy and consistent),
        "maps": rows,
    }


# -- reconstruction ---------------------------------------------------------


@dataclass
class Reconstruction:
    triangulation: Triangulation
    ambiguous_boundary: bool
    closed_surface: bool
    realization_classes: int
    exhausted: bool  # the search finished within its budget
    codes: list[bytes] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.triangulation.to_dict(),
            "ambiguous_boundary": self.ambiguous_boundary,
            "closed_surface": self.closed_surface,
            "realization_classes": self.realization_classes,
            "search_complete": self.exhausted,
        }


def _placement_order(a) -> list[tuple[int, int | None]]:
    """Breadth-first over shared edges; each entry names an already placed neighbour."""
    n = len(a)
    order: list[tuple[int, int | None]] = []
    placed: set[int] = set()
    for root in range(n):
        if root in placed:
            continue
        order.append((root, None))
        placed.add(root)
        head = len(order) - 1
        while head < len(order):
            i = order[head][0]
            head += 1
            for j in range(n):
                if j not in placed and a[i][j] == 2:
                    order.append((j, i))
                    placed.add(j)
    return order


def realizations(M: IntersectionMatrix, max_nodes: int = 500_000):
    """Yield labelled realisations of ``M`` (vertex labels are integers).

    The first triangle is fixed to {0, 1, 2} and the first edge-neighbour
    placed is fixed to contain {0, 1}; new vertices are introduced in
    increasing order.  Stops silently after ``max_nodes`` search nodes;
    the generator's return value says whether the search completed.
    """
    a = M.entries
    n = M.n
    order = _placement_order(a)
    chosen: list[frozenset | None] = [None] * n
    placed: list[int] = []
    budget = [max_nodes]

    def candidates(i: int, anchor: int | None, m: int):
        if not placed:
            yield frozenset((0, 1, 2))
            return
        if anchor is None:
            for t in combinations(range(m + 3), 3):
                fresh = [u for u in t if u >= m]
                if fresh == list(range(m, m + len(fresh))):
                    yield frozenset(t)
            return
        base = chosen[anchor]
        edges = combinations(sorted(base), 2)
        if len(placed) == 1:
            edges = [(0, 1)]
        for e in edges:
            for z in range(m + 1):
                if z not in base:
                    yield frozenset((*e, z))

    def extend(depth: int, m: int):
        if depth == n:
            yield Triangulation(tuple(sorted(s)) for s in chosen)
            return
        i, anchor = order[depth]
        row = a[i]
        for cand in candidates(i, anchor, m):
            budget[0] -= 1
            if budget[0] < 0:
                return
            if all(len(cand & chosen[j]) == row[j] for j in placed):
                chosen[i] = cand
                placed.append(i)
                yield from extend(depth + 1, max(m, max(cand) + 1))
                placed.pop()
                chosen[i] = None

    yield from extend(0, 0)
    return budget[0] >= 0


def reconstruct_from_matrix(M: IntersectionMatrix, max_nodes: int = 500_000) -> Reconstruction:
    """Find a triangulation whose intersection matrix is exactly ``M``.

    Realisations are collected up to isomorphism.  When exactly one of them
    is a closed surface it is returned (two closed surfaces never share a
    matrix).  Otherwise, if several non-isomorphic realisations exist, the
    first one found is returned with ``ambiguous_boundary`` set.
    """
    gen = realizations(M, max_nodes)
    classes: dict[bytes, Triangulation] = {}
    complete = False
    while True:
        try:
            T = next(gen)
        except StopIteration as stop:
            complete = bool(stop.value)
            break
        classes.setdefault(canonical_code(T), T)
    if not classes:
        raise NotRealizable(
            "no triangulation has this intersection matrix"
            if complete else "search budget exhausted before any realisation was found"
        )
    found = list(classes.values())
    closed = [T for T in found if validate_surface(T).is_closed_surface]
    if len(closed) == 1:
        pick, ambiguous = closed[0], False
    else:
        pick, ambiguous = found[0], len(found) > 1
    return Reconstruction(
        triangulation=pick,
        ambiguous_boundary=ambiguous,
        closed_surface=pick in closed,
        realization_classes=len(found),
        exhausted=complete,
        codes=list(classes),
    )
