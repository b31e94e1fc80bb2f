from collections import Counter
from itertools import combinations

import pytest

from shellrec import Triangulation, catalog
from shellrec.complex_core import vertex_degrees
from shellrec.errors import InvalidShell, Unclassifiable
from shellrec.shells import (
    FAN,
    MOBIUS5,
    MOBIUS6,
    TWIST,
    Disk,
    Shell,
    ShellClass,
    StructuralVertexList,
    classify_shell,
    is_shell,
    law_violations,
    realize_shell_class,
    repetition_pattern,
    shell_around_vertex,
    shell_realizations,
    structural_vertex_list,
)

from oracles import nx_isomorphic


def whole(T):
    return is_shell(T, range(len(T)))


def test_is_shell_examples(disk5, mob5, tetra):
    assert whole(disk5) == Shell(tuple(range(5)), True)
    assert whole(mob5) == Shell(tuple(range(5)), True)
    assert is_shell(tetra, [0, 1, 2]).closed
    assert is_shell(disk5, [0, 2, 1, 3, 4]) is None
    assert is_shell(disk5, [0, 1]) is None


def test_open_shell_detected():
    fan = Triangulation([[0, 1, 9], [1, 2, 9], [2, 3, 9], [3, 4, 9]])
    assert whole(fan) == Shell((0, 1, 2, 3), False)


def test_shell_around_vertex_octahedron():
    octa = catalog("octahedron").triangulation
    assert all(shell_around_vertex(octa, v).n == 4 for v in octa.vertices)


def test_shell_around_vertex_half_icosahedron(half_icosahedron):
    assert set(vertex_degrees(half_icosahedron).values()) == {5}
    for v in half_icosahedron.vertices:
        shell = shell_around_vertex(half_icosahedron, v)
        assert shell.n == 5 and shell.closed


def test_shell_around_square_centres(half_cube):
    for v in ("4", "5", "6"):
        assert shell_around_vertex(half_cube, v).n == 4


def test_disk_structural_list():
    for n in range(3, 9):
        T = catalog(f"disk_shell_{n}").triangulation
        svl = structural_vertex_list(T, whole(T))
        assert list(svl.a) == [f"a{i}" for i in range(n)]
        assert list(svl.b) == [f"a{(i + 1) % n}" for i in range(n)]


def test_mobius5_structural_list(mob5):
    svl = structural_vertex_list(mob5, whole(mob5))
    assert all(svl.b[i] == svl.a[(i + 2) % 5] for i in range(5))
    assert all(svl.a[i] == svl.b[(i + 3) % 5] for i in range(5))


def test_mobius6_structural_list(mob6):
    svl = structural_vertex_list(mob6, whole(mob6))
    assert svl.b[1] == svl.a[4] and svl.a[1] != svl.b[4]
    assert svl.a[0] == svl.b[3]
    assert [w.kind for w in repetition_pattern(svl)] == [TWIST, FAN] * 3


def test_open_structural_list_leaves_ends_undefined():
    fan = Triangulation([[0, 1, 9], [1, 2, 9], [2, 3, 9], [3, 4, 9]])
    svl = structural_vertex_list(fan, whole(fan))
    assert svl.a == (0, 1, 2, None)
    assert svl.b == (None, 2, 3, 4)


def test_repetition_patterns(mob5):
    T = catalog("disk_shell_6").triangulation
    assert [w.kind for w in repetition_pattern(structural_vertex_list(T, whole(T)))] == [FAN] * 6
    assert [w.kind for w in repetition_pattern(structural_vertex_list(mob5, whole(mob5)))] == [TWIST] * 5


def test_fabricated_repetition_is_rejected():
    svl = StructuralVertexList(("p", "q", "r", "q", "s"), ("q", "r", "s", "t", "p"))
    assert "a[1] == a[3]" in law_violations(svl)
    with pytest.raises(InvalidShell):
        repetition_pattern(svl)


def test_window_analysis_needs_four():
    T = catalog("disk_shell_3").triangulation
    with pytest.raises(InvalidShell):
        repetition_pattern(structural_vertex_list(T, whole(T)))


def test_every_vertex_star_is_a_disk(corpus, half_icosahedron, half_cube):
    for T in corpus + [half_icosahedron, half_cube]:
        for v in T.vertices:
            shell = shell_around_vertex(T, v)
            assert classify_shell(T, shell) == Disk(shell.n)


@pytest.mark.parametrize("c", [Disk(3), Disk(4), Disk(5), Disk(7), MOBIUS5, MOBIUS6])
def test_templates_classify_as_themselves(c):
    T = realize_shell_class(c)
    assert classify_shell(T, whole(T)) == c


def test_template_shapes():
    assert realize_shell_class(Disk(4)).triangles == (
        ("a0", "a1", "x"), ("a1", "a2", "x"), ("a2", "a3", "x"), ("a0", "a3", "x"),
    )
    assert len(realize_shell_class(MOBIUS5).vertices) == 5
    assert len(realize_shell_class(MOBIUS6).vertices) == 6


def test_book_is_unclassifiable():
    book = Triangulation([[0, 1, 2], [0, 1, 3], [0, 1, 4]])
    shell = whole(book)
    assert shell is not None and shell.closed
    with pytest.raises(Unclassifiable):
        classify_shell(book, shell)


def test_open_shell_that_is_not_a_fan():
    band = Triangulation([["p", "q", "r"], ["q", "s", "r"], ["s", "u", "r"], ["u", "p", "s"]])
    shell = whole(band)
    assert not shell.closed
    with pytest.raises(Unclassifiable):
        classify_shell(band, shell)


def test_shell_class_text_round_trip():
    for c in (Disk(3), Disk(11), MOBIUS5, MOBIUS6):
        assert ShellClass.parse(str(c)) == c
    assert str(Disk(4)) == "disk:4"
    with pytest.raises(ValueError):
        ShellClass.parse("disk:2")


def test_laws_hold_on_realised_shells():
    for n in range(3, 9):
        for T in shell_realizations(n) + shell_realizations(n, closed=False):
            shell = whole(T)
            svl = structural_vertex_list(T, shell)
            if n == 3 and shell.closed and len(T.vertices) == 5:
                # the three-page book: every b equals its a
                assert law_violations(svl)
                continue
            assert law_violations(svl) == []


# -- labelled open 4-shells ------------------------------------------------

FOUR_PATTERN = {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 2): 1, (1, 3): 1, (0, 3): 1}
TEMPLATE_FAN = [("p", "q", "x"), ("q", "r", "x"), ("r", "s", "x"), ("s", "u", "x")]
TEMPLATE_TWIST = [("p", "q", "r"), ("q", "s", "r"), ("s", "u", "r"), ("u", "p", "s")]


def labelled_open_four_shells():
    """Every open 4-shell on labels 0..7 with t_0 = {0, 1, 2}."""
    tris = [frozenset(t) for t in combinations(range(8), 3)]
    t0 = frozenset((0, 1, 2))
    out = []
    for t1 in tris:
        if len(t0 & t1) != 2:
            continue
        for t2 in tris:
            if len(t1 & t2) != 2 or len(t0 & t2) != 1:
                continue
            for t3 in tris:
                shell = (t0, t1, t2, t3)
                if all(len(shell[i] & shell[j]) == k for (i, j), k in FOUR_PATTERN.items()):
                    out.append(shell)
    return out


def signature(shell):
    """Which triangles each vertex lies in; fixes the shell up to aligned relabelling."""
    verts = set().union(*shell)
    return Counter(frozenset(k for k, t in enumerate(shell) if v in t) for v in verts)


def test_open_four_shell_is_determined_by_its_repetition():
    shells = labelled_open_four_shells()
    assert shells
    by_kind = {}
    for shell in shells:
        a = [next(iter(shell[i] - shell[i + 1])) for i in range(3)]
        b = [None] + [next(iter(shell[i] - shell[i - 1])) for i in range(1, 4)]
        fan, twist = b[1] == a[2], a[0] == b[3]
        assert fan != twist
        by_kind.setdefault(FAN if fan else TWIST, []).append(signature(shell))
    assert all(s == signature([set(t) for t in TEMPLATE_FAN]) for s in by_kind[FAN])
    assert all(s == signature([set(t) for t in TEMPLATE_TWIST]) for s in by_kind[TWIST])


def test_package_agrees_on_open_four_templates():
    for template, kind in ((TEMPLATE_FAN, FAN), (TEMPLATE_TWIST, TWIST)):
        T = Triangulation(template)
        assert [w.kind for w in repetition_pattern(structural_vertex_list(T, whole(T)))] == [kind]


# -- propagation along open shells ---------------------------------------


def test_open_shell_patterns():
    patterns = {}
    for n in range(4, 9):
        patterns[n] = sorted(
            [w.kind for w in repetition_pattern(structural_vertex_list(T, whole(T)))]
            for T in shell_realizations(n, closed=False)
        )
    assert patterns[4] == sorted([[FAN], [TWIST]])
    assert patterns[5] == sorted([[FAN, FAN], [FAN, TWIST]])
    assert patterns[6] == sorted([[FAN, FAN, FAN], [FAN, TWIST, FAN]])
    for n in (7, 8):
        assert patterns[n] == [[FAN] * (n - 3)]


def test_two_fan_windows_propagate():
    for n in range(5, 9):
        for T in shell_realizations(n, closed=False):
            kinds = [w.kind for w in repetition_pattern(structural_vertex_list(T, whole(T)))]
            if kinds[:2] == [FAN, FAN]:
                assert kinds == [FAN] * (n - 3)
                svl = structural_vertex_list(T, whole(T))
                assert all(svl.b[i] == svl.a[i + 1] for i in range(1, n - 2))


def test_closed_shell_realisations_classify():
    for n in range(4, 9):
        got = sorted(str(classify_shell(T, whole(T))) for T in shell_realizations(n))
        expected = {5: ["disk:5", "mobius5"], 6: ["disk:6", "mobius6"]}.get(n, [f"disk:{n}"])
        assert got == expected


def test_mobius_realisations_match_templates():
    five = [T for T in shell_realizations(5) if len(T.vertices) == 5]
    six = [T for T in shell_realizations(6) if len(T.vertices) == 6]
    assert len(five) == 1 and nx_isomorphic(five[0].triangles, realize_shell_class(MOBIUS5).triangles)
    assert len(six) == 1 and nx_isomorphic(six[0].triangles, realize_shell_class(MOBIUS6).triangles)
