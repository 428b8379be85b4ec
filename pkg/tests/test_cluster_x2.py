import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapalg.cluster_x2 import (
    RationalFunc,
    Seed,
    Triangulation,
    check_flip_compat,
    check_mutation_poisson,
    check_theta_poisson,
    enumerate_triangulations,
    epsilon,
    fan,
    fg_bracket,
    fg_from_points,
    flip,
    flip_graph,
    flip_path,
    mutate,
    mutate_epsilon,
    theta,
    theta_map,
)
from swapalg.core_ring import SwapPoly, pair
from swapalg.errors import DegenerateFlags, NotADiagonal, UnsupportedSize
from swapalg.rank_reduction import eq_in_Qn
from swapalg.swap_bracket import bracket_fraction

SQUARE = Triangulation(4, frozenset({(0, 2)}))
PENTAGON = Triangulation(5, frozenset({(0, 2), (0, 3)}))
HEX_FAN = fan(6)


def brute_triangulation_count(k):
    """Maximal non-crossing diagonal sets, found by brute force."""
    diags = [(i, j) for i, j in combinations(range(k), 2) if j - i > 1 and not (i == 0 and j == k - 1)]

    def cross(e, f):
        (a, b), (c, d) = e, f
        return len({a, b, c, d}) == 4 and ((a < c < b) != (a < d < b))

    return sum(1 for s in combinations(diags, k - 3)
               if not any(cross(e, f) for e, f in combinations(s, 2)))


@pytest.mark.parametrize("k", range(4, 9))
def test_triangulation_counts(k):
    tris = enumerate_triangulations(k)
    assert len(tris) == brute_triangulation_count(k)
    assert len(set(tris)) == len(tris)
    assert all(len(T.triangles()) == k - 2 for T in tris)


def test_catalan_values():
    assert [len(enumerate_triangulations(k)) for k in (4, 5, 6, 10)] == [2, 5, 14, 1430]


@pytest.mark.parametrize("k", [3, 11])
def test_unsupported_size(k):
    with pytest.raises(UnsupportedSize):
        enumerate_triangulations(k)


def test_crossing_diagonals_rejected():
    with pytest.raises(ValueError):
        Triangulation(4, frozenset({(0, 2), (1, 3)}))


def test_square_flip():
    T2, e2 = flip(SQUARE, (0, 2))
    assert T2.diagonals == {(1, 3)} and e2 == (1, 3)
    assert flip(T2, e2) == (SQUARE, (0, 2))


def test_flip_is_involution_everywhere():
    for T in enumerate_triangulations(6):
        for e in T.edges:
            T2, e2 = flip(T, e)
            assert flip(T2, e2) == (T, e)


def test_flip_not_a_diagonal():
    with pytest.raises(NotADiagonal):
        flip(PENTAGON, (1, 3))


def test_pentagon_flip_graph_is_a_five_cycle():
    graph = flip_graph(5)
    assert all(len(set(nbrs)) == 2 for nbrs in graph.values())
    start = next(iter(graph))
    seen, prev, node = [start], None, start
    while True:
        nxt = next(n for n in graph[node] if n != prev)
        if nxt == start:
            break
        seen.append(nxt)
        prev, node = node, nxt
    assert len(seen) == 5


def test_quadrilateral_labeling():
    assert PENTAGON.quadrilateral((0, 2)) == (0, 1, 2, 3)
    assert SQUARE.quadrilateral((0, 2)) == (0, 1, 2, 3)


def test_epsilon_examples():
    eps = epsilon(PENTAGON)
    assert eps((0, 2), (0, 3)) == 1 and eps((0, 3), (0, 2)) == -1
    assert epsilon(SQUARE).rows() == [[0]]
    h = epsilon(HEX_FAN)
    assert h((0, 2), (0, 3)) == 1
    assert h((0, 3), (0, 4)) == 1
    assert h((0, 2), (0, 4)) == 0
    assert h((3, 0), (4, 0)) == 1  # unordered edge names


def test_epsilon_antisymmetric_and_bounded():
    for k in (5, 6, 7):
        for T in enumerate_triangulations(k):
            eps = epsilon(T)
            for i in T.edges:
                for j in T.edges:
                    assert eps(i, j) == -eps(j, i)
                    assert eps(i, j) in (-1, 0, 1)


def test_mutated_epsilon_matches_flipped_triangulation():
    for T in enumerate_triangulations(6):
        for e in T.edges:
            T2, e2 = flip(T, e)
            mutated = mutate_epsilon(epsilon(T), e).relabel(e, e2)
            assert mutated.same_as(epsilon(T2))
            assert mutate_epsilon(mutate_epsilon(epsilon(T), e), e).same_as(epsilon(T))


def test_fg_square():
    assert fg_from_points({"v1": 0, "v2": 1, "v3": 2, "v4": 3}, SQUARE) == {(0, 2): Fraction(3)}


def test_fg_degenerate():
    with pytest.raises(DegenerateFlags):
        fg_from_points({0: 0, 1: 1, 2: 1, 3: 3}, SQUARE)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=4,
                max_size=4, unique=True), st.integers(0, 3))
def test_fg_positive_on_cyclic_tuples(values, shift):
    ordered = sorted(values)
    ordered = ordered[shift:] + ordered[:shift]  # rotations stay cyclically ordered
    X = fg_from_points(dict(enumerate(ordered)), SQUARE)
    assert X[(0, 2)] > 0


def test_fg_positive_on_hexagon():
    rng = random.Random(5)
    for T in enumerate_triangulations(6):
        vals = sorted(Fraction(rng.randint(-1000, 1000), rng.randint(1, 50)) for _ in range(6))
        if len(set(vals)) < 6:
            continue
        assert all(x > 0 for x in fg_from_points(dict(enumerate(vals)), T).values())


def test_theta_square():
    P = SQUARE.points
    x, y, z, t = P.names
    expected = -(pair(P, y, z) * pair(P, t, x))
    got = theta(SQUARE, (0, 2))
    assert got.num == expected and got.den == pair(P, t, z) * pair(P, y, x)
    inv = theta_map(SQUARE, RationalFunc.var(1, 0).inverse())
    assert eq_in_Qn(got * inv, SwapPoly.one(P), 2)


def test_theta_pentagon_uses_first_quadrilateral():
    P = PENTAGON.points
    v1, v2, v3, v4, _ = P.names
    got = theta(PENTAGON, (0, 2))
    assert got.num == -(pair(P, v2, v3) * pair(P, v4, v1))
    assert got.den == pair(P, v4, v3) * pair(P, v2, v1)


def test_theta_multiplicative():
    T = HEX_FAN
    r = len(T.edges)
    X = [RationalFunc.var(r, i) for i in range(r)]
    lhs = theta_map(T, X[0] * X[1] / X[2])
    rhs = theta(T, T.edges[0]) * theta(T, T.edges[1]) / theta(T, T.edges[2])
    assert eq_in_Qn(lhs, rhs, 2)


def test_fg_bracket_examples():
    eps = epsilon(PENTAGON)
    X0, X1 = RationalFunc.var(2, 0), RationalFunc.var(2, 1)
    assert fg_bracket(eps, X0, X0) == 0
    assert fg_bracket(eps, X0, X1) == X0 * X1
    assert fg_bracket(eps, X0, RationalFunc.const(2, 5)) == 0


def test_fg_bracket_antisymmetric():
    eps = epsilon(HEX_FAN)
    X = [RationalFunc.var(3, i) for i in range(3)]
    f = (X[0] + X[1] * X[2]) / (1 + X[2])
    g = X[1] * X[1] - X[0] / X[2]
    assert fg_bracket(eps, f, g) == -fg_bracket(eps, g, f)


def test_mutation_square():
    seed = mutate(Seed.initial(SQUARE), (0, 2))
    assert seed.coords[0] == RationalFunc.var(1, 0).inverse()
    assert seed.eps.rows() == [[0]]
    assert seed.labels == ((1, 3),)


def test_mutation_pentagon():
    seed = mutate(Seed.initial(PENTAGON), (0, 2))
    X13, X14 = RationalFunc.var(2, 0), RationalFunc.var(2, 1)
    assert seed.coordinate((0, 3)) == X14 * (1 + X13)
    assert seed.coordinate((1, 3)) == X13.inverse()


@pytest.mark.parametrize("k", [5, 6])
def test_double_mutation_restores_coordinates(k):
    for T in enumerate_triangulations(k):
        base = Seed.initial(T)
        for slot, e in enumerate(T.edges):
            once = mutate(base, e)
            twice = mutate(once, once.labels[slot])
            assert twice.triangulation == T
            assert twice.labels == base.labels
            assert all(a == b for a, b in zip(twice.coords, base.coords))
            assert twice.eps.same_as(base.eps)


def test_checks_on_square():
    assert check_theta_poisson(SQUARE).passed
    assert check_flip_compat(SQUARE, (0, 2)).passed
    assert check_mutation_poisson(SQUARE, (0, 2)).passed


@pytest.mark.parametrize("k", [5, 6])
def test_theta_is_poisson(k):
    for T in enumerate_triangulations(k):
        report = check_theta_poisson(T)
        assert report.passed, report.failures


@pytest.mark.parametrize("k", [5, 6])
def test_flip_compatibility(k):
    for T in enumerate_triangulations(k):
        for e in T.edges:
            report = check_flip_compat(T, e)
            assert report.passed, report.failures


def test_flip_compatibility_pentagon_case():
    T2, _ = flip(PENTAGON, (0, 2))
    seed = mutate(Seed.initial(PENTAGON), (0, 2))
    lhs = theta_map(PENTAGON, seed.coordinate((0, 3)))
    assert eq_in_Qn(lhs, theta(T2, (0, 3)), 2)


@pytest.mark.parametrize("k", [5, 6])
def test_mutation_preserves_bracket(k):
    for T in enumerate_triangulations(k):
        for e in T.edges:
            report = check_mutation_poisson(T, e)
            assert report.passed, report.failures


def test_bracket_agrees_along_flip_path_between_fans():
    # carry the base coordinates through every flip and compare brackets with
    # the exchange matrix of the triangulation reached
    start, goal = fan(6, 0), fan(6, 3)
    path = flip_path(start, goal)
    assert path and path[0][0] == start
    seed = Seed.initial(start)
    base_eps = seed.eps
    for T, e in path:
        assert seed.triangulation == T
        seed = mutate(seed, e)
        assert seed.eps.same_as(epsilon(seed.triangulation))
        for a, i in enumerate(seed.labels):
            for b, j in enumerate(seed.labels):
                lhs = fg_bracket(base_eps, seed.coords[a], seed.coords[b], start.edges)
                assert lhs == seed.coords[a] * seed.coords[b] * seed.eps(i, j)
    assert seed.triangulation == goal


def test_theta_brackets_match_epsilon_directly():
    th = {e: theta(PENTAGON, e) for e in PENTAGON.edges}
    i, j = PENTAGON.edges
    assert eq_in_Qn(bracket_fraction(th[i], th[j]), th[i] * th[j], 2)
    assert not eq_in_Qn(bracket_fraction(th[i], th[j]), th[i] * th[j] * -1, 2)
