"""Brute-force oracle: matchings, partitions, census, even-subgraph sums."""

import random
from math import factorial

import pytest
from gmpy2 import mpq

from bicount import (
    InstanceTooLargeError,
    PotentialSpec,
    a_poly,
    enumerate_census,
    eulerian_sum,
    expand_series,
    models,
    perfect_matchings,
    regular_monochrome_classes,
    weighted_A,
)
from bicount.expansion import double_factorial


class TestMatchings:
    def test_counts_are_double_factorials(self):
        for s in range(5):
            got = sum(1 for _ in perfect_matchings(range(2 * s)))
            assert got == double_factorial(2 * s - 1)

    def test_structure(self):
        for m in perfect_matchings(range(6)):
            flat = sorted(x for pair in m for x in pair)
            assert flat == list(range(6))

    def test_odd_set_has_none(self):
        assert list(perfect_matchings(range(3))) == []


class TestCensus:
    def test_empty_graph(self):
        entries = enumerate_census(0, 0)
        assert len(entries) == 1
        assert entries[0].profile == ()
        assert entries[0].weight == 1

    def test_single_red_edge(self):
        # one red edge: either a loop on one vertex (weight 1/2) or an
        # edge between two univalent vertices (weight 1/2)
        entries = {e.profile: e.weight for e in enumerate_census(1, 0)}
        assert entries == {
            ((2, 0),): mpq(1, 2),
            ((1, 0), (1, 0)): mpq(1, 2),
        }

    def test_two_vertex_quartic_weights(self):
        # all three 4-regular two-vertex graphs share one profile; their
        # 1/|Aut| weights sum to 35/384
        entries = enumerate_census(4, 0, min_degree=4, exact_degree=4)
        by_profile = {e.profile: e.weight for e in entries
                      if len(e.profile) == 2}
        assert by_profile[((4, 0), (4, 0))] == mpq(35, 384)
        mixed = enumerate_census(3, 1, min_degree=4, exact_degree=4)
        by_profile = {e.profile: e.weight for e in mixed
                      if len(e.profile) == 2}
        assert by_profile[((2, 2), (4, 0))] == mpq(5, 32)

    def test_labeled_count_integrality(self):
        for s, t in ((1, 0), (2, 1), (1, 2), (2, 2)):
            for e in enumerate_census(s, t):
                assert e.weight > 0
                scaled = e.weight * factorial(2 * s) * factorial(2 * t)
                assert scaled.denominator == 1
                assert scaled == e.labeled_count

    def test_color_swap_symmetry(self):
        def transposed(entries):
            return sorted(
                (tuple(sorted((w, u) for u, w in e.profile)), e.weight)
                for e in entries
            )

        for s, t in ((2, 1), (3, 0), (2, 2)):
            left = transposed(enumerate_census(s, t))
            right = sorted((e.profile, e.weight)
                           for e in enumerate_census(t, s))
            assert left == right

    def test_size_guard(self):
        with pytest.raises(InstanceTooLargeError):
            enumerate_census(4, 3)


class TestWeightedA:
    def test_zero_potential(self):
        empty = PotentialSpec({})
        assert weighted_A(0, empty) == 1
        assert weighted_A(1, empty) == 0
        assert weighted_A(2, empty) == 0

    def test_ising_symbolic(self):
        pot = models.ising_model()
        series = expand_series(pot, 2)
        assert weighted_A(1, pot) == series[1]
        assert weighted_A(2, pot) == series[2]

    def test_cubic(self):
        pot = models.cubic_model()
        series = expand_series(pot, 2)
        assert weighted_A(1, pot) == mpq(5, 24) == series[1]
        assert weighted_A(2, pot) == series[2]

    def test_generic_small(self):
        pot = PotentialSpec({(3, 0): mpq(1, 3), (2, 1): mpq(-2, 5),
                             (0, 3): mpq(7, 2)})
        series = expand_series(pot, 1, method="recursion")
        assert weighted_A(1, pot) == series[1]

    def test_quintic_vanishing_is_combinatorial(self):
        # at vertex degree 5, chi = -n forces 2n/3 vertices, so the
        # census finds no graphs at n = 1, 2 and exactly A_3 at n = 3
        quintic = models.quintic_model()
        assert weighted_A(1, quintic) == 0
        assert weighted_A(2, quintic) == 0
        assert weighted_A(3, quintic) == mpq(21, 640)

    def test_ising_n3_at_guard_boundary(self):
        # chi = -3 at degree 4 needs exactly 12 half-edges, the largest
        # instance inside the guard
        pot = models.ising_model()
        assert weighted_A(3, pot) == expand_series(pot, 3)[3]

    def test_guard_on_large_n(self):
        with pytest.raises(InstanceTooLargeError):
            weighted_A(3, models.cubic_model())


def test_two_edge_census_full_polynomial():
    # complete automorphism-weighted census of all graphs with exactly
    # two edges, as a polynomial in the vertex weights: each profile is
    # one monomial (the profile fixes the split, so no collisions)
    expected = {
        ((0, 1), (1, 0), (1, 1)): mpq(1),
        ((0, 1), (0, 1), (0, 1), (0, 1)): mpq(1, 8),
        ((0, 1), (0, 1), (0, 2)): mpq(3, 4),
        ((0, 1), (0, 1), (1, 0), (1, 0)): mpq(1, 4),
        ((0, 1), (0, 1), (2, 0)): mpq(1, 4),
        ((0, 1), (0, 3)): mpq(1, 2),
        ((0, 1), (2, 1)): mpq(1, 2),
        ((0, 2), (0, 2)): mpq(3, 8),
        ((0, 2), (1, 0), (1, 0)): mpq(1, 4),
        ((0, 2), (2, 0)): mpq(1, 4),
        ((0, 4),): mpq(1, 8),
        ((1, 0), (1, 0), (1, 0), (1, 0)): mpq(1, 8),
        ((1, 0), (1, 0), (2, 0)): mpq(3, 4),
        ((1, 0), (1, 2)): mpq(1, 2),
        ((1, 0), (3, 0)): mpq(1, 2),
        ((1, 1), (1, 1)): mpq(1, 2),
        ((2, 0), (2, 0)): mpq(3, 8),
        ((2, 2),): mpq(1, 4),
        ((4, 0),): mpq(1, 8),
    }
    got = {}
    for s in range(3):
        for e in enumerate_census(s, 2 - s):
            assert e.profile not in got
            got[e.profile] = e.weight
    assert got == expected


def test_quartic_mixed_color_profile_weights():
    # decomposition of the lam^2 weight of A_2 by bidegree profile:
    # the single fully split coloring contributes 1/64, the four
    # balanced (2,2)-(2,2) colorings 1/32 + 1/8 + 1/16 + 1/16 = 9/32
    entries = {e.profile: e.weight
               for e in enumerate_census(2, 2, min_degree=4, exact_degree=4)
               if len(e.profile) == 2}
    assert entries[((0, 4), (4, 0))] == mpq(1, 64)
    assert entries[((2, 2), (2, 2))] == mpq(9, 32)
    assert entries[((0, 4), (4, 0))] + entries[((2, 2), (2, 2))] == mpq(19, 64)


@pytest.mark.parametrize("edges", [1, 2, 3])
def test_census_matches_generating_kernel(edges):
    # the weighted census over all graphs with a fixed edge count equals
    # sum_{s+t=E} (2s-1)!! (2t-1)!! a_{2s,2t}, e.g. for two edges
    # 3 a_{4,0} + a_{2,2} + 3 a_{0,4}, whatever the vertex weights
    rng = random.Random(20260810 + edges)
    lam = {
        (u, w): mpq(rng.randint(-6, 6), rng.randint(1, 6))
        for u in range(2 * edges + 1) for w in range(2 * edges + 1)
        if 1 <= u + w <= 2 * edges
    }
    census_total = mpq(0)
    kernel_total = mpq(0)
    for s in range(edges + 1):
        t = edges - s
        for e in enumerate_census(s, t):
            prod = mpq(1)
            for deg in e.profile:
                prod *= lam[deg]
            census_total += e.weight * prod
        kernel_total += (
            double_factorial(2 * s - 1) * double_factorial(2 * t - 1)
            * a_poly(2 * s, 2 * t, lam)
        )
    assert census_total == kernel_total


class TestEulerian:
    def test_single_loop(self):
        lam = mpq(3, 7)
        assert eulerian_sum([(0, 0)], lam) == 1 + lam

    def test_lambda_zero(self):
        graphs = [
            [(0, 0)],
            [(0, 1), (0, 1), (0, 1), (0, 1)],
            [(0, 0), (0, 1), (0, 1), (1, 1)],
        ]
        for g in graphs:
            assert eulerian_sum(g, 0) == 1

    def test_size_guard(self):
        with pytest.raises(InstanceTooLargeError):
            eulerian_sum([(0, 1)] * 9, 1)

    def test_quartic_classes_and_ising_identity(self):
        classes = regular_monochrome_classes(4, 4)
        assert sorted(w for _, w in classes) == sorted(
            [mpq(1, 128), mpq(1, 48), mpq(1, 16)]
        )
        series = expand_series(models.ising_model(), 2)
        a2 = series[2]
        for lam in (mpq(0), mpq(1), mpq(1, 2), mpq(2, 3), mpq(-1), mpq(5)):
            total = sum(
                (w * eulerian_sum(edges, lam) for edges, w in classes),
                mpq(0),
            )
            assert total == a2(lam), f"lam={lam}"
