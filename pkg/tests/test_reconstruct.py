import random

import pytest

from shellrec import (
    IntersectionMatrix,
    catalog,
    extend_map,
    find_intersection_preserving_maps,
    intersection_matrix,
    is_isomorphic,
    reconstruct_from_matrix,
)
from shellrec.corpus import exceptional_self_map
from shellrec.errors import NotClosedSurface, NotIntersectionPreserving, NotRealizable
from shellrec.reconstruct import HALF_CUBE, HALF_ICOSAHEDRON, verify_theorem2
from shellrec.schemas import validate_report

from conftest import scramble
from oracles import nx_isomorphic


def test_extend_recovers_the_relabelling(corpus):
    rng = random.Random(11)
    for T in corpus[::5]:
        T2, g, f = scramble(T, rng)
        res = extend_map(f, T, T2)
        assert res.extends
        assert res.vertex_map == g


def test_half_icosahedron_fixture_is_exceptional(half_icosahedron):
    S = half_icosahedron
    res = extend_map(exceptional_self_map("half-icosahedron"), S, S)
    assert not res.extends and res.kind == HALF_ICOSAHEDRON
    w = res.witness
    assert len(w.shell) == 5 and w.shell_class == "mobius5"
    for i in range(5):
        for j in ((i + 2) % 5, (i - 2) % 5):
            assert len(set(S[w.r[i]]) & set(S[w.r[j]])) == 2
            assert len(set(S[w.r_prime[i]]) & set(S[w.r_prime[j]])) == 2


def test_half_cube_fixture_is_exceptional(half_cube):
    S = half_cube
    res = extend_map(exceptional_self_map("half-cube"), S, S)
    assert not res.extends and res.kind == HALF_CUBE
    w = res.witness
    assert len(w.shell) == 6 and w.shell_class == "mobius6"
    for p, q in ((0, 1), (1, 4), (4, 5), (5, 2), (2, 3), (3, 0)):
        assert len(set(S[w.r[p]]) & set(S[w.r[q]])) == 2


def test_extend_rejects_bad_input(disk5):
    with pytest.raises(NotClosedSurface):
        extend_map(tuple(range(5)), disk5, disk5)
    octa = catalog("octahedron").triangulation
    swap = (1, 0, 2, 3, 4, 5, 6, 7)
    assert swap not in find_intersection_preserving_maps(octa, octa)
    with pytest.raises(NotIntersectionPreserving):
        extend_map(swap, octa, octa)


def test_verify_on_tetrahedron(tetra):
    out = verify_theorem2(tetra, tetra)
    assert (out["n_maps"], out["n_extends"], out["n_exceptional"]) == (24, 24, 0)
    assert out["dichotomy_holds"]


def test_verify_on_exceptional_surfaces(half_icosahedron, half_cube):
    out = verify_theorem2(half_icosahedron, half_icosahedron)
    assert (out["n_maps"], out["n_extends"]) == (120, 60)
    assert out["exceptional_kinds"] == [HALF_ICOSAHEDRON] and out["dichotomy_holds"]
    out = verify_theorem2(half_cube, half_cube)
    assert (out["n_maps"], out["n_extends"]) == (48, 24)
    assert out["exceptional_kinds"] == [HALF_CUBE] and out["dichotomy_holds"]


def test_verify_between_different_surfaces(half_icosahedron, tetra):
    assert verify_theorem2(half_icosahedron, tetra)["n_maps"] == 0


def test_reconstruct_tetrahedron(tetra):
    rec = reconstruct_from_matrix(intersection_matrix(tetra))
    assert is_isomorphic(rec.triangulation, tetra) is not None
    assert not rec.ambiguous_boundary and rec.closed_surface and rec.exhausted
    assert intersection_matrix(rec.triangulation) == intersection_matrix(tetra)


def test_reconstruct_five_shell_is_ambiguous(disk5, mob5):
    rec = reconstruct_from_matrix(intersection_matrix(disk5))
    assert rec.ambiguous_boundary and not rec.closed_surface
    assert rec.realization_classes == 2
    T = rec.triangulation
    assert nx_isomorphic(T.triangles, disk5.triangles) or nx_isomorphic(T.triangles, mob5.triangles)


def test_reconstruct_exceptional_surfaces(half_icosahedron, half_cube):
    for S in (half_icosahedron, half_cube):
        rec = reconstruct_from_matrix(intersection_matrix(S))
        assert is_isomorphic(rec.triangulation, S) is not None
        assert not rec.ambiguous_boundary


def test_reconstruct_respects_triangle_order(half_cube):
    S2, _, _ = scramble(half_cube, random.Random(5))
    M = intersection_matrix(S2)
    rec = reconstruct_from_matrix(M)
    assert intersection_matrix(rec.triangulation) == M


def test_not_realizable():
    M = IntersectionMatrix([[3, 2, 2], [2, 3, 0], [2, 0, 3]])
    with pytest.raises(NotRealizable):
        reconstruct_from_matrix(M)


def test_budget_exhaustion_is_reported(half_cube):
    with pytest.raises(NotRealizable, match="budget"):
        reconstruct_from_matrix(intersection_matrix(half_cube), max_nodes=3)


def test_corpus_round_trip(corpus):
    for T in corpus:
        rec = reconstruct_from_matrix(intersection_matrix(T))
        assert is_isomorphic(rec.triangulation, T) is not None
        assert not rec.ambiguous_boundary and rec.exhausted


def test_results_match_their_schemas(half_icosahedron, tetra):
    res = extend_map(exceptional_self_map("half-icosahedron"), half_icosahedron, half_icosahedron)
    validate_report("extend", res.to_dict())
    validate_report("extend", extend_map((0, 1, 2, 3), tetra, tetra).to_dict())
    validate_report("reconstruct", reconstruct_from_matrix(intersection_matrix(tetra)).to_dict())
