import math
import random
from itertools import product

import pytest
from hypothesis import given, settings

from markoff_hurwitz.core import (
    Params,
    Stratum,
    StructuralError,
    apply_word,
    check_on_variety,
    classify,
    height,
    normal_coords,
    vieta,
)
from markoff_hurwitz.enumeration import (
    FamilyDescriptor,
    enumerate_fd,
    enumerate_solutions,
    family_for,
    orbit_graph,
    solve_last_coordinate,
    vieta_edges,
)
from markoff_hurwitz.reduction import equivalent, reduce

from conftest import naive_scan, random_move, solutions

MARKOFF = Params(1, 0, 3)


class TestSolveLastCoordinate:
    def test_markoff(self):
        assert solve_last_coordinate((3, 3), MARKOFF) == (3, 6)

    def test_double_root(self):
        assert solve_last_coordinate((0, 0), MARKOFF) == (0,)

    def test_no_root(self):
        assert solve_last_coordinate((1, 1), Params(1, 1, 3)) == ()

    def test_wrong_prefix_length(self):
        with pytest.raises(StructuralError):
            solve_last_coordinate((1, 2, 3), MARKOFF)

    def test_negative_a_rejected(self):
        with pytest.raises(StructuralError):
            solve_last_coordinate((1, 1), Params(-1, 0, 3))

    def test_brute_force(self):
        for a, n in product((1, 2, 3), (3, 4)):
            for prefix in product(range(-4, 5), repeat=n - 1):
                bound = 8 + a * 4 ** (n - 1)
                by_k = {}
                for x in range(-bound, bound + 1):
                    value = sum(y * y for y in prefix) + x * x - a * math.prod(prefix) * x
                    by_k.setdefault(value, []).append(x)
                for k in range(-6, 7):
                    expected = tuple(by_k.get(k, ()))
                    assert solve_last_coordinate(prefix, Params(a, k, n)) == expected

    def test_huge_prefix_exact(self):
        p = (3, 3, 3)
        for i in [1, 2, 3] * 4:
            p = vieta(p, i, MARKOFF)
        assert p[2] in solve_last_coordinate(p[:2], MARKOFF)


class TestEnumerateSolutions:
    def test_markoff_small(self):
        sols = enumerate_solutions(MARKOFF, 30)
        assert sols.points == ((0, 0, 0), (3, 3, 3), (3, 3, 6), (3, 6, 15))

    def test_markoff_height_15(self):
        assert enumerate_solutions(MARKOFF, 15).points == ((0, 0, 0), (3, 3, 3), (3, 3, 6))

    def test_empty(self):
        assert enumerate_solutions(Params(1, -1, 3), 5).points == ()

    @pytest.mark.parametrize("k", [-3, 0, 2, 5])
    def test_zero_bound(self, k):
        sols = enumerate_solutions(Params(1, k, 3), 0)
        assert sols.points == (((0, 0, 0),) if k == 0 else ())

    def test_negative_bound(self):
        with pytest.raises(StructuralError):
            enumerate_solutions(MARKOFF, -1)

    @pytest.mark.parametrize("a, k, n, bound", [
        (1, 0, 3, 25), (2, 1, 3, 25), (1, -4, 3, 25), (3, 5, 3, 20),
        (1, 5, 4, 12), (2, 2, 4, 12), (1, -3, 4, 10), (3, 7, 4, 10),
    ])
    def test_matches_naive_scan(self, a, k, n, bound):
        params = Params(a, k, n)
        assert list(enumerate_solutions(params, bound).points) == naive_scan(params, bound)

    def test_points_are_normal_and_on_variety(self):
        params = Params(2, 3, 4)
        for q in enumerate_solutions(params, 30).points:
            assert q == normal_coords(q)
            assert check_on_variety(q, params)
            assert height(q) <= 30

    def test_workers_agree(self):
        params = Params(1, 6, 3)
        assert enumerate_solutions(params, 60, workers=3) == enumerate_solutions(params, 60)


class TestFamilies:
    def test_family_for(self):
        assert family_for(Params(1, 4, 3)) == FamilyDescriptor(Params(1, 4, 3), Stratum.S2_POS, 2)
        assert family_for(Params(2, 2, 4)).x_min == 1
        assert family_for(Params(1, 5, 3)) is None

    def test_members(self):
        fam = family_for(Params(1, 5, 4))
        assert fam.pattern == "1,2,x,x"
        assert fam.members(4) == ((1, 2, 2, 2), (1, 2, 3, 3), (1, 2, 4, 4))
        with pytest.raises(StructuralError):
            fam.member(1)

    @pytest.mark.parametrize("params", [Params(1, 4, 3), Params(1, 6, 5), Params(2, 1, 3), Params(2, 3, 5)])
    def test_members_are_fixed_points(self, params):
        for q in family_for(params).members(40):
            assert check_on_variety(q, params)
            assert classify(q, params) is Stratum.S2_POS
            assert reduce(q, params).representative == q


class TestEnumerateFd:
    def test_markoff(self):
        fd = enumerate_fd(MARKOFF, 100)
        assert fd.points() == ((0, 0, 0), (3, 3, 3))
        assert fd.infinite_families == ()
        assert not fd.truncated

    def test_a1_k4_exact(self):
        fd = enumerate_fd(Params(1, 4, 3), 100)
        assert fd.finite_members == (((-1, 1, 1), Stratum.S1), ((0, 0, 2), Stratum.S0))
        assert fd.infinite_families[0].pattern == "2,x,x"

    def test_a2_k1_exact(self):
        fd = enumerate_fd(Params(2, 1, 3), 100)
        assert fd.finite_members == (((0, 0, 1), Stratum.S0),)
        assert fd.infinite_families[0].members(3) == ((1, 1, 1), (1, 2, 2), (1, 3, 3))

    def test_exceptional_has_family(self):
        fd = enumerate_fd(Params(1, 4, 3), 100)
        assert len(fd.infinite_families) == 1
        assert (-1, 1, 1) in fd.points()
        assert (2, 2, 2) in fd.bounded_members(6)

    def test_a3_k5_has_only_s0_and_sgt2(self):
        fd = enumerate_fd(Params(3, 5, 3), 100)
        tags = {tag for _, tag in fd.finite_members}
        assert tags <= {Stratum.S0, Stratum.SGT2_POS, Stratum.SGT2_NEG}
        assert (0, 1, 2) in fd.points()

    def test_negative_stratum_found(self):
        fd = enumerate_fd(Params(1, 54, 3), 100)
        assert ((-3, 3, 3), Stratum.SGT2_NEG) in fd.finite_members

    def test_members_are_fixed_points(self):
        for a, k, n in product((1, 2, 3), range(-10, 11), (3, 4)):
            params = Params(a, k, n)
            for q, tag in enumerate_fd(params, 100).finite_members:
                res = reduce(q, params)
                assert res.representative == q and res.stratum is tag

    def test_members_pairwise_inequivalent(self):
        for a, k, n in product((1, 2), range(-8, 9), (3, 4)):
            params = Params(a, k, n)
            pts = enumerate_fd(params, 100).bounded_members(30)
            for p, q in zip(pts, pts[1:]):
                assert not equivalent(p, q, params)

    def test_stable_in_cap(self):
        for a, k, n in product((1, 2, 3), range(-10, 11), (3, 4)):
            params = Params(a, k, n)
            if params.exceptional:
                continue
            small, big = enumerate_fd(params, 100), enumerate_fd(params, 200)
            assert small.finite_members == big.finite_members
            assert not small.infinite_families and not small.truncated

    def test_matches_reduced_bounded_solutions(self):
        # every representative of a small solution is a member, and vice versa up to the bound
        for a, k, n in product((1, 2, 3), range(-10, 11), (3, 4)):
            params = Params(a, k, n)
            fd = enumerate_fd(params, 100)
            reps = {reduce(q, params).representative for q in enumerate_solutions(params, 30).points}
            assert reps <= set(fd.points()) | set(fd.bounded_members(30))
            assert {q for q in fd.bounded_members(30)} <= reps


class TestOrbitGraph:
    def test_markoff(self):
        g = orbit_graph(MARKOFF, 12)
        assert g.vertices == ((0, 0, 0), (3, 3, 3), (3, 3, 6))
        assert [(e.source, e.target, e.i) for e in g.edges] == [((3, 3, 6), (3, 3, 3), 3)]
        assert [c.representative for c in g.components] == [(0, 0, 0), (3, 3, 3)]
        assert g.components[1].open

    def test_markoff_height_15(self):
        g = orbit_graph(MARKOFF, 15)
        assert [c.vertices for c in g.components] == [((0, 0, 0),), ((3, 3, 3), (3, 3, 6))]
        assert [e.i for e in g.edges] == [3]

    def test_height_zero(self):
        g = orbit_graph(Params(2, 0, 4), 0)
        assert g.vertices == ((0, 0, 0, 0),) and g.edges == ()
        assert len(g.components) == 1

    def test_small_s1_component(self):
        g = orbit_graph(Params(1, 4, 3), 6)
        comp = next(c for c in g.components if (-1, 1, 1) in c.vertices)
        assert (1, 1, 2) in comp.vertices
        assert comp.representative == (-1, 1, 1)

    def test_edges_symmetric(self):
        params = Params(1, 5, 4)
        g = orbit_graph(params, 25)
        for e in g.edges:
            back = {normal_coords(vieta(e.target, i, params)) for i in range(1, params.n + 1)}
            assert e.source in back

    def test_closed_component(self):
        g = orbit_graph(MARKOFF, 12)
        assert not g.components[0].open

    def test_edges_connect_vieta_neighbours(self):
        params = Params(1, 5, 4)
        g = orbit_graph(params, 25)
        verts = set(g.vertices)
        for e in g.edges:
            assert e.source in verts and e.target in verts
            assert height(e.source) >= height(e.target)
            assert normal_coords(vieta(e.source, e.i, params)) == e.target

    def test_components_partition_vertices(self):
        g = orbit_graph(Params(2, 1, 3), 40)
        flat = sorted(v for c in g.components for v in c.vertices)
        assert flat == sorted(g.vertices)

    def test_frontier_above_bound(self):
        g = orbit_graph(MARKOFF, 30)
        for f in g.frontier:
            assert f.neighbour_height > 30
            assert height(normal_coords(vieta(f.vertex, f.i, MARKOFF))) == f.neighbour_height

    def test_deterministic(self):
        params = Params(1, -4, 4)
        assert orbit_graph(params, 20) == orbit_graph(params, 20)

    def test_workers_agree(self):
        params = Params(1, 6, 3)
        assert orbit_graph(params, 50, workers=2) == orbit_graph(params, 50)


@settings(max_examples=200, deadline=None)
@given(solutions())
def test_edge_classes_independent_of_scrambling(case):
    params, p = case
    q = normal_coords(p)
    rng = random.Random(hash(p))
    scrambled = p
    for _ in range(5):
        move = random_move(rng, params.n)
        if not hasattr(move, "i"):
            scrambled = apply_word(scrambled, [move], params)
    direct = {v for _, v, _ in vieta_edges(q, params)}
    from_scrambled = {normal_coords(vieta(scrambled, i, params)) for i in range(1, params.n + 1)}
    assert direct == from_scrambled
