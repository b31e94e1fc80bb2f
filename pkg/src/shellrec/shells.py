"""n-shells: fans of triangles with the cyclic intersection pattern.

A closed n-shell is an ordered list ``t_0 .. t_{n-1}`` in which cyclically
consecutive triangles share an edge and every other pair shares exactly
one vertex.  An open shell drops the closing pair down to one vertex.
The star of a vertex in a closed surface is always a closed shell; the
converse fails for n = 5 and n = 6, where two Moebius bands realise the
same intersection pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .complex_core import Triangulation, canonical_code, vertex_star
from .errors import InvalidShell, LinkNotCycle, Unclassifiable


@dataclass(frozen=True)
class Shell:
    triangles: tuple[int, ...]
    closed: bool = True

    @property
    def n(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True)
class StructuralVertexList:
    """``a[i] = t_i - t_{i+1}`` and ``b[i] = t_i - t_{i-1}``.

    For an open shell ``a[n-1]`` and ``b[0]`` are undefined and held as
    ``None``.
    """

    a: tuple
    b: tuple
    closed: bool = True

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True, order=True)
class ShellClass:
    kind: str  # "disk" | "mobius5" | "mobius6"
    n: int

    def __str__(self) -> str:
        return f"disk:{self.n}" if self.kind == "disk" else self.kind

    @classmethod
    def parse(cls, text: str) -> "ShellClass":
        if text == "mobius5":
            return MOBIUS5
        if text == "mobius6":
            return MOBIUS6
        kind, _, n = text.partition(":")
        if kind != "disk" or not n.isdigit() or int(n) < 3:
            raise ValueError(f"unknown shell class {text!r}")
        return Disk(int(n))


def Disk(n: int) -> ShellClass:
    return ShellClass("disk", n)


MOBIUS5 = ShellClass("mobius5", 5)
MOBIUS6 = ShellClass("mobius6", 6)

# the two equalities a four-triangle window may show
FAN = "b[i+1]=a[i+2]"
TWIST = "a[i]=b[i+3]"


class WindowRepetition(NamedTuple):
    window: int  # index of the first of the four triangles
    kind: str  # FAN, TWIST, or "both" (only possible when n == 4)


def _pair_pattern_ok(sets: Sequence[frozenset], closed: bool) -> bool:
    n = len(sets)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1:
                want = 2
            elif i == 0 and j == n - 1:
                want = 2 if closed else 1
            else:
                want = 1
            if len(sets[i] & sets[j]) != want:
                return False
    return True


def is_shell(S: Triangulation, indices: Sequence[int]) -> Shell | None:
    """Shell for the given cyclic order of triangles, or ``None``."""
    indices = tuple(indices)
    if len(indices) < 3 or len(set(indices)) != len(indices):
        return None
    sets = [frozenset(S[i]) for i in indices]
    for closed in (True, False):
        if _pair_pattern_ok(sets, closed):
            return Shell(indices, closed)
    return None


def shell_around_vertex(S: Triangulation, v) -> Shell:
    star = vertex_star(S, v)
    if not star.closed:
        raise LinkNotCycle(f"star of {v!r} is open")
    shell = is_shell(S, star.triangles)
    if shell is None or not shell.closed:
        raise LinkNotCycle(f"star of {v!r} is not a closed shell")
    return shell


def structural_vertex_list(S: Triangulation, shell: Shell) -> StructuralVertexList:
    n = shell.n
    t = [frozenset(S[i]) for i in shell.triangles]

    def only(s: frozenset):
        if len(s) != 1:
            raise InvalidShell("consecutive triangles do not share an edge")
        return next(iter(s))

    last = n if shell.closed else n - 1
    a = [only(t[i] - t[(i + 1) % n]) if i < last else None for i in range(n)]
    b = [only(t[i] - t[(i - 1) % n]) if i > 0 or shell.closed else None for i in range(n)]
    return StructuralVertexList(tuple(a), tuple(b), shell.closed)


def law_violations(svl: StructuralVertexList) -> list[str]:
    """Every breach of the elementary distinctness laws of a shell.

    Checked: a_i != b_i; a_i != a_{i+1}; b_i != b_{i+1}; a_i != b_{i+1};
    all a pairwise distinct and all b pairwise distinct; and, for
    n >= 4, no repetition inside {a_{i-1}, a_i, b_i, b_{i+1}}.
    """
    n = svl.n
    a, b = svl.a, svl.b

    def idx(i):
        if svl.closed:
            return i % n
        return i if 0 <= i < n else None

    def get(seq, i):
        k = idx(i)
        return None if k is None else seq[k]

    out: list[str] = []

    def differ(x, y, label):
        if x is not None and y is not None and x == y:
            out.append(label)

    for i in range(n):
        differ(get(a, i), get(b, i), f"a[{i}] == b[{i}]")
        if svl.closed or i + 1 < n:
            j = idx(i + 1)
            differ(get(a, i), get(a, i + 1), f"a[{i}] == a[{j}]")
            differ(get(b, i), get(b, i + 1), f"b[{i}] == b[{j}]")
            differ(get(a, i), get(b, i + 1), f"a[{i}] == b[{j}]")
    for seq, name in ((a, "a"), (b, "b")):
        seen: dict = {}
        for i, x in enumerate(seq):
            if x is None:
                continue
            if x in seen:
                out.append(f"{name}[{seen[x]}] == {name}[{i}]")
            else:
                seen[x] = i
    if n >= 4:
        for i in range(n):
            if not svl.closed and not 1 <= i <= n - 2:
                continue
            group = [get(a, i - 1), get(a, i), get(b, i), get(b, i + 1)]
            group = [x for x in group if x is not None]
            if len(set(group)) != len(group):
                out.append(f"repetition among a[{idx(i - 1)}], a[{i}], b[{i}], b[{idx(i + 1)}]")
    return sorted(set(out))


def repetition_pattern(svl: StructuralVertexList) -> list[WindowRepetition]:
    """Classify every window of four consecutive triangles.

    Raises :class:`InvalidShell` if the distinctness laws fail or, for
    n >= 5, a window shows neither or both of the permitted equalities.
    """
    n = svl.n
    if n < 4:
        raise InvalidShell("window analysis needs at least four triangles")
    bad = law_violations(svl)
    if bad:
        raise InvalidShell("; ".join(bad))
    a, b = svl.a, svl.b
    starts = range(n) if svl.closed else range(n - 3)
    out = []
    for i in starts:
        fan = b[(i + 1) % n] == a[(i + 2) % n]
        twist = a[i] == b[(i + 3) % n]
        if fan and twist:
            if n >= 5:
                raise InvalidShell(f"window {i} repeats both b[i+1]=a[i+2] and a[i]=b[i+3]")
            out.append(WindowRepetition(i, "both"))
        elif fan:
            out.append(WindowRepetition(i, FAN))
        elif twist:
            out.append(WindowRepetition(i, TWIST))
        else:
            raise InvalidShell(f"window {i} has no repetition")
    return out


def realize_shell_class(c: ShellClass) -> Triangulation:
    """Template triangulation for a shell class, in shell order."""
    if c.kind == "disk":
        n = c.n
        return Triangulation([f"a{i}", f"a{(i + 1) % n}", "x"] for i in range(n))
    if c == MOBIUS5:
        return Triangulation([
            ["a0", "a2", "a1"],
            ["a1", "a3", "a2"],
            ["a2", "a4", "a3"],
            ["a3", "a0", "a4"],
            ["a4", "a1", "a0"],
        ])
    if c == MOBIUS6:
        return Triangulation([
            ["a0", "a1", "a2"],
            ["a1", "a2", "a4"],
            ["a2", "a3", "a4"],
            ["a3", "a0", "a4"],
            ["a0", "a5", "a4"],
            ["a5", "a2", "a0"],
        ])
    raise ValueError(f"unknown shell class {c!r}")


def open_fan(n: int) -> Triangulation:
    return Triangulation([f"a{i}", f"a{i + 1}", "x"] for i in range(n))


def _expected_windows(c: ShellClass) -> list[str] | None:
    if c.n < 5:
        return None
    if c.kind == "disk":
        return [FAN] * c.n
    if c == MOBIUS5:
        return [TWIST] * 5
    # Moebius6 alternates, starting with either kind
    return None


def classify_shell(S: Triangulation, shell: Shell) -> ShellClass:
    """Which object the shell's triangles realise.

    The repetition pattern narrows the candidates; the answer is confirmed
    by isomorphism with the explicit template.
    """
    n = shell.n
    sub = S.reorder(shell.triangles)
    if not shell.closed:
        if canonical_code(sub) == canonical_code(open_fan(n)):
            return Disk(n)
        raise Unclassifiable("open shell is not a fan")
    kinds = None
    if n >= 4:
        try:
            kinds = [w.kind for w in repetition_pattern(structural_vertex_list(S, shell))]
        except InvalidShell as exc:
            raise Unclassifiable(str(exc)) from None
    candidates = [Disk(n)]
    if n == 5:
        candidates.append(MOBIUS5)
    elif n == 6:
        candidates.append(MOBIUS6)
    code = canonical_code(sub)
    for c in candidates:
        if code != canonical_code(realize_shell_class(c)):
            continue
        expected = _expected_windows(c)
        if expected is not None and kinds != expected:
            raise Unclassifiable(f"{c} template matched but windows read {kinds}")
        if c == MOBIUS6 and not (
            len(set(kinds[0::2])) == 1 and len(set(kinds[1::2])) == 1 and kinds[0] != kinds[1]
        ):
            raise Unclassifiable(f"mobius6 template matched but windows read {kinds}")
        return c
    raise Unclassifiable(f"closed {n}-shell matches no template")


# -- exhaustive realisations -----------------------------------------------


def _candidates(m: int) -> Iterator[tuple[int, int, int]]:
    """3-sets over labels 0..m-1 plus fresh labels used in order."""
    for x in range(m + 1):
        for y in range(x + 1, m + 2):
            for z in range(y + 1, m + 3):
                fresh = [u for u in (x, y, z) if u >= m]
                if fresh == list(range(m, m + len(fresh))):
                    yield (x, y, z)


def shell_realizations(n: int, closed: bool = True) -> list[Triangulation]:
    """Every realisation of the n-shell matrix, one per isomorphism class.

    Brute force: triangles are assigned in shell order from a label pool
    that only grows by fresh labels (at most 3n of them), each candidate is
    checked against all earlier triangles, and the complete assignments are
    deduplicated by canonical code.
    """
    if n < 3:
        raise ValueError("shells have at least three triangles")

    def want(i: int, j: int) -> int:
        if j == i + 1:
            return 2
        if i == 0 and j == n - 1:
            return 2 if closed else 1
        return 1

    found: dict[bytes, Triangulation] = {}
    chosen: list[frozenset] = [frozenset((0, 1, 2))]

    def extend(m: int) -> None:
        k = len(chosen)
        if k == n:
            T = Triangulation(tuple(sorted(s)) for s in chosen)
            found.setdefault(canonical_code(T), T)
            return
        for cand in _candidates(m):
            s = frozenset(cand)
            if all(len(chosen[i] & s) == want(i, k) for i in range(k)):
                chosen.append(s)
                extend(max(m, max(cand) + 1))
                chosen.pop()

    extend(3)
    return [found[c] for c in sorted(found)]
