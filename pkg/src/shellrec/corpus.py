"""Named triangulations, the exceptional self-maps, and the closed-surface enumerator."""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Iterator

from .complex_core import (
    Triangulation,
    canonical_code,
    canonical_labeling,
    is_isomorphic,
    validate_surface,
    vertex_degrees,
)
from .errors import UnknownName
from .intersection import find_intersection_preserving_maps, is_induced
from .shells import Disk, MOBIUS5, MOBIUS6, realize_shell_class

log = logging.getLogger(__name__)

SURFACE_FILTERS = ("all", "sphere", "projective_plane", "torus", "klein_bottle")
FIXED_NAMES = (
    "tetrahedron",
    "octahedron",
    "torus_7",
    "half_icosahedron",
    "half_cube",
    "mobius5",
    "mobius6",
)
EXCEPTIONAL_SURFACES = {"half-icosahedron": "half_icosahedron", "half-cube": "half_cube"}


def fixture_dir() -> Path:
    override = os.environ.get("SHELLREC_FIXTURES")
    return Path(override) if override else Path(__file__).parent / "fixtures"


# -- constructions ----------------------------------------------------------


def _antipodal_classes(points):
    """Label antipodal pairs 0..k-1 in order of first appearance."""
    label = {}
    nxt = 0
    for p in points:
        q = tuple(-x for x in p)
        if q in label:
            label[p] = label[q]
        else:
            label[p] = nxt
            nxt += 1
    return label


def half_icosahedron() -> Triangulation:
    """Antipodal quotient of the icosahedron."""
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0.0, s1 * 1.0, s2 * phi), (s1 * 1.0, s2 * phi, 0.0), (s2 * phi, 0.0, s1 * 1.0)]
    pts.sort(key=lambda p: tuple(-x for x in p))

    def adjacent(p, q):
        return abs(math.dist(p, q) - 2.0) < 1e-9

    faces = [t for t in combinations(pts, 3) if all(adjacent(p, q) for p, q in combinations(t, 2))]
    label = _antipodal_classes(pts)
    tris = sorted({tuple(sorted(label[p] for p in t)) for t in faces})
    return Triangulation(tris)


def half_cube() -> Triangulation:
    """Antipodal quotient of the cube with a centre vertex in each square."""
    corners = sorted(
        ((x, y, z) for x in (1, -1) for y in (1, -1) for z in (1, -1)),
        key=lambda p: tuple(-c for c in p),
    )
    label = _antipodal_classes(corners)
    tris = []
    for axis in range(3):
        face = [p for p in corners if p[axis] == 1]
        u, w = [k for k in range(3) if k != axis]
        face.sort(key=lambda p: math.atan2(p[w], p[u]))
        centre = 4 + axis
        for k in range(4):
            tris.append((label[face[k]], label[face[(k + 1) % 4]], centre))
    return Triangulation(tris)


def tetrahedron() -> Triangulation:
    return Triangulation(combinations(range(4), 3))


def bipyramid(n: int) -> Triangulation:
    """Suspension of an n-gon: equator 0..n-1, poles n and n+1."""
    if n < 3:
        raise ValueError("a bipyramid needs an equator of at least 3 vertices")
    return Triangulation(
        [i, (i + 1) % n, pole] for pole in (n, n + 1) for i in range(n)
    )


def octahedron() -> Triangulation:
    return bipyramid(4)


def torus_7() -> Triangulation:
    """Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    return Triangulation(
        [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
        + [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
    )


_BUILDERS = {
    "tetrahedron": (tetrahedron, "boundary of the 3-simplex"),
    "octahedron": (octahedron, "boundary of the octahedron (bipyramid over a square)"),
    "torus_7": (torus_7, "seven-vertex torus, cyclic construction"),
    "half_icosahedron": (half_icosahedron, "antipodal quotient of the icosahedron"),
    "half_cube": (half_cube, "antipodal quotient of the cube, each square coned off at a centre"),
    "mobius5": (lambda: realize_shell_class(MOBIUS5), "five-triangle Moebius band realising the 5-shell matrix"),
    "mobius6": (lambda: realize_shell_class(MOBIUS6), "six-triangle Moebius band realising the 6-shell matrix"),
}


# -- catalog ------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    triangulation: Triangulation
    expected: dict[str, Any]
    notes: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            **self.triangulation.to_dict(),
            "expected": self.expected,
            "notes": self.notes,
        }


def describe(T: Triangulation) -> dict[str, Any]:
    """The facts a catalog entry pins down for its triangulation."""
    rep = validate_surface(T).to_dict()
    rep["degrees"] = sorted(vertex_degrees(T).values())
    return rep


def _parametric(name: str) -> CatalogEntry | None:
    for prefix, build, note in (
        ("sphere_bipyramid_", bipyramid, "bipyramid over an {n}-gon"),
        ("disk_shell_", lambda n: realize_shell_class(Disk(n)), "fan of {n} triangles around a centre"),
    ):
        if name.startswith(prefix):
            tail = name[len(prefix):]
            if not tail.isdigit() or int(tail) < 3:
                raise UnknownName(name)
            n = int(tail)
            T = build(n)
            return CatalogEntry(name, T, describe(T), note.format(n=n))
    return None


def _load_fixture(name: str) -> CatalogEntry:
    path = fixture_dir() / "catalog" / f"{name}.json"
    data = json.loads(path.read_text())
    T = Triangulation.from_dict(data)
    return CatalogEntry(name, T, data["expected"], data.get("notes", ""))


@lru_cache(maxsize=None)
def _catalog_cached(name: str, where: str) -> CatalogEntry:
    entry = _parametric(name)
    if entry is None:
        if name not in _BUILDERS:
            raise UnknownName(name)
        entry = _load_fixture(name)
    got = describe(entry.triangulation)
    if got != entry.expected:
        raise AssertionError(f"catalog entry {name!r} no longer validates: {got} != {entry.expected}")
    return entry


def catalog(name: str) -> CatalogEntry:
    """Named triangulation, re-validated against its stored expectations."""
    return _catalog_cached(name, str(fixture_dir()))


def catalog_names() -> list[str]:
    return list(FIXED_NAMES) + ["sphere_bipyramid_n", "disk_shell_n"]


def exceptional_self_map(kind: str) -> tuple[int, ...]:
    """Stored non-induced intersection-preserving self-map of an exceptional surface."""
    if kind not in EXCEPTIONAL_SURFACES:
        raise UnknownName(kind)
    path = fixture_dir() / "maps" / f"{EXCEPTIONAL_SURFACES[kind]}.json"
    return tuple(json.loads(path.read_text())["map"])


def discover_exceptional_self_map(T: Triangulation) -> tuple[int, ...] | None:
    """Lexicographically first self-map of T that no vertex map induces."""
    for f in find_intersection_preserving_maps(T, T):
        if is_induced(f, T, T) is None:
            return f
    return None


def write_fixtures(root: Path) -> None:
    """Regenerate every JSON fixture from the constructions above."""
    (root / "catalog").mkdir(parents=True, exist_ok=True)
    (root / "maps").mkdir(parents=True, exist_ok=True)
    for name, (build, notes) in _BUILDERS.items():
        T = build()
        data = {"name": name, **T.to_dict(), "expected": describe(T), "notes": notes}
        (root / "catalog" / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")
    for kind, name in EXCEPTIONAL_SURFACES.items():
        T = Triangulation.from_dict(json.loads((root / "catalog" / f"{name}.json").read_text()))
        f = discover_exceptional_self_map(T)
        data = {
            "kind": kind,
            "surface": name,
            "map": list(f),
            "provenance": "first map, in lexicographic order, among the intersection-preserving "
            "self-maps of the catalog triangulation that no vertex bijection induces",
        }
        (root / "maps" / f"{name}.json").write_text(json.dumps(data) + "\n")


# -- enumeration ---------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationConfig:
    max_vertices: int = 8
    surface_filter: str = "all"
    require_closed: bool = True

    def __post_init__(self):
        if self.max_vertices < 4:
            raise ValueError("max_vertices must be at least 4")
        if self.surface_filter not in SURFACE_FILTERS:
            raise ValueError(f"surface_filter must be one of {SURFACE_FILTERS}")


def surface_type(T: Triangulation) -> str:
    rep = validate_surface(T)
    chi, orientable = rep.euler_characteristic, rep.orientable
    if chi == 2:
        return "sphere"
    if chi == 1 and not orientable:
        return "projective_plane"
    if chi == 0:
        return "torus" if orientable else "klein_bottle"
    return f"chi={chi},{'orientable' if orientable else 'non-orientable'}"


class _Grower:
    """Close open edges one triangle at a time.

    The state is a connected partial surface on labels 0..nv-1.  The open
    edge to close is always the lexicographically smallest one, and a new
    vertex always receives the next unused label, so each closed surface
    is reached from at most 6T rooted labellings.
    """

    def __init__(self, max_vertices: int):
        self.max_v = max_vertices
        self.tris: set[tuple[int, int, int]] = set()
        self.edge: dict[tuple[int, int], int] = {}
        self.link: list[dict[int, list[int]]] = [dict() for _ in range(max_vertices)]
        self.closed = [False] * max_vertices
        self.nv = 0
        self.leaves: dict[bytes, Triangulation] = {}
        self.nodes = 0

    def _path_end(self, x: int, start: int) -> int:
        lk = self.link[x]
        prev, cur = None, start
        while True:
            nxt = [y for y in lk.get(cur, ()) if y != prev]
            if not nxt:
                return cur
            prev, cur = cur, nxt[0]
            if cur == start:
                return cur

    def _link_ok_after(self, x: int, p: int, q: int) -> bool:
        # adding link edge p-q to link(x); closing a cycle must swallow the whole link
        lk = self.link[x]
        if p in lk and q in lk and len(lk[p]) == 1 and len(lk[q]) == 1 and self._path_end(x, p) == q:
            return sum(len(nb) for nb in lk.values()) // 2 + 1 == len(lk)
        return True

    def _add(self, t):
        a, b, c = t
        self.tris.add(t)
        for e in ((a, b), (a, c), (b, c)):
            self.edge[e] = self.edge.get(e, 0) + 1
        for x, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            lk = self.link[x]
            lk.setdefault(p, []).append(q)
            lk.setdefault(q, []).append(p)
            if all(len(nb) == 2 for nb in lk.values()):
                self.closed[x] = True

    def _remove(self, t):
        a, b, c = t
        self.tris.discard(t)
        for e in ((a, b), (a, c), (b, c)):
            self.edge[e] -= 1
            if not self.edge[e]:
                del self.edge[e]
        for x, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            lk = self.link[x]
            lk[p].remove(q)
            lk[q].remove(p)
            if not lk[p]:
                del lk[p]
            if not lk[q]:
                del lk[q]
            self.closed[x] = False

    def _fits(self, u: int, w: int, z: int) -> bool:
        if self.closed[z]:
            return False
        t = tuple(sorted((u, w, z)))
        if t in self.tris:
            return False
        if self.edge.get(tuple(sorted((u, z))), 0) >= 2 or self.edge.get(tuple(sorted((w, z))), 0) >= 2:
            return False
        return (
            self._link_ok_after(u, w, z)
            and self._link_ok_after(w, u, z)
            and self._link_ok_after(z, u, w)
        )

    def run(self) -> dict[bytes, Triangulation]:
        self.nv = 3
        self._add((0, 1, 2))
        self._grow()
        return self.leaves

    def _grow(self):
        self.nodes += 1
        open_edges = [e for e, c in self.edge.items() if c == 1]
        if not open_edges:
            T = Triangulation(sorted(self.tris))
            code, order = canonical_labeling(T)
            if code not in self.leaves:
                pos = {v: k for k, v in enumerate(order)}
                self.leaves[code] = Triangulation(sorted(tuple(sorted(pos[v] for v in t)) for t in T))
            return
        u, w = min(open_edges)
        choices = list(range(self.nv))
        if self.nv < self.max_v:
            choices.append(self.nv)
        for z in choices:
            if z in (u, w) or not self._fits(u, w, z):
                continue
            fresh = z == self.nv
            if fresh:
                self.nv += 1
            t = tuple(sorted((u, w, z)))
            self._add(t)
            self._grow()
            self._remove(t)
            if fresh:
                self.nv -= 1


@lru_cache(maxsize=8)
def _enumerate_all(max_vertices: int) -> tuple[Triangulation, ...]:
    g = _Grower(max_vertices)
    leaves = g.run()
    log.info("enumerated %d closed surfaces on <= %d vertices (%d nodes)", len(leaves), max_vertices, g.nodes)
    return tuple(
        leaves[c] for c in sorted(leaves, key=lambda c: (len(leaves[c].vertices), len(leaves[c]), c))
    )


def enumerate_closed(config: EnumerationConfig = EnumerationConfig()) -> Iterator[Triangulation]:
    """Closed connected surfaces on at most ``max_vertices`` vertices, one per class.

    Representatives are canonically labelled with integers and come out
    sorted by (vertices, triangles, canonical code).
    """
    for T in _enumerate_all(config.max_vertices):
        if config.surface_filter == "all" or surface_type(T) == config.surface_filter:
            yield T


# -- scans ----------------------------------------------------------------------


@dataclass
class ScanGroup:
    members: list[Triangulation] = field(default_factory=list)


def _matrix_key(T: Triangulation):
    from .intersection import _joint_refinement, intersection_matrix

    M = intersection_matrix(T).entries
    cols = _joint_refinement(M, M)[0]
    return (len(T), tuple(sorted(tuple(sorted(r)) for r in M)), tuple(sorted(cols)))


def _population(config: EnumerationConfig, extra) -> list[Triangulation]:
    pop = list(enumerate_closed(config))
    for T in extra or ():
        if config.require_closed and not validate_surface(T).is_closed_surface:
            continue
        pop.append(T)
    return pop


def theorem1_scan(config: EnumerationConfig = EnumerationConfig(), extra=None) -> dict[str, Any]:
    """Group triangulations by matrix equivalence and look for non-isomorphic pairs.

    ``extra`` adds triangulations (for instance boundary objects) to the
    enumerated population; with ``require_closed`` they must pass the
    closed-surface gate to be included.
    """
    pop = _population(config, extra)
    buckets: dict[Any, list[int]] = {}
    for k, T in enumerate(pop):
        buckets.setdefault(_matrix_key(T), []).append(k)
    groups: list[list[int]] = []
    for members in buckets.values():
        local: list[list[int]] = []
        for k in members:
            for g in local:
                if find_intersection_preserving_maps(pop[g[0]], pop[k], limit=1):
                    g.append(k)
                    break
            else:
                local.append([k])
        groups.extend(local)
    groups.sort()
    out_groups = []
    violations = []
    for g in groups:
        codes = sorted({canonical_code(pop[k]) for k in g})
        entry = {
            "members": [pop[k].to_dict() for k in g],
            "n_triangles": len(pop[g[0]]),
            "isomorphism_classes": len(codes),
        }
        out_groups.append(entry)
        if len(codes) > 1:
            violations.append(entry)
    return {
        "config": config.__dict__,
        "population": len(pop),
        "groups": out_groups,
        "violations": violations,
    }


def exceptional_scan(config: EnumerationConfig = EnumerationConfig()) -> dict[str, Any]:
    """Codes of enumerated triangulations with a non-induced self- or cross-map.

    Also feeds every non-induced map to extend_map and records whether the
    reported exceptional kind matches the surface.
    """
    from .reconstruct import exceptional_codes, extend_map

    special = exceptional_codes()
    pop = list(enumerate_closed(config))
    hits = []
    checks = []
    pairs = [(k, k) for k in range(len(pop))]
    buckets: dict[Any, list[int]] = {}
    for k, T in enumerate(pop):
        buckets.setdefault(_matrix_key(T), []).append(k)
    for members in buckets.values():
        pairs += list(combinations(members, 2))
    flagged = set()
    for i, j in sorted(pairs):
        S, S2 = pop[i], pop[j]
        for f in find_intersection_preserving_maps(S, S2):
            if is_induced(f, S, S2) is not None:
                continue
            res = extend_map(f, S, S2)
            want = special.get(canonical_code(S))
            checks.append({
                "pair": [i, j],
                "map": list(f),
                "kind": res.kind,
                "correct": (not res.extends) and res.kind == want,
            })
            flagged.update((i, j))
    for k in sorted(flagged):
        code = canonical_code(pop[k])
        hits.append({"code": code.decode(), "name": special.get(code), **pop[k].to_dict()})
    return {
        "config": config.__dict__,
        "population": len(pop),
        "codes": [h["code"] for h in hits],
        "surfaces": hits,
        "non_induced_maps": len(checks),
        "all_kinds_correct": all(c["correct"] for c in checks),
    }


def same_surface(S: Triangulation, S2: Triangulation) -> bool:
    return is_isomorphic(S, S2) is not None
