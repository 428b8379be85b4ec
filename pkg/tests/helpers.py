"""Shared strategies and small independent oracles for the test suite."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from hypothesis import strategies as st

from swapalg.core_ring import PointSet, SwapPoly

COEFFS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2)]


def points_of(m: int) -> PointSet:
    return PointSet([f"p{i}" for i in range(m)])


@st.composite
def pairs(draw, m: int):
    i = draw(st.integers(0, m - 1))
    j = draw(st.integers(0, m - 2))
    return (i, j + (j >= i))


@st.composite
def monomials(draw, points: PointSet, max_degree: int = 3):
    deg = draw(st.integers(1, max_degree))
    return SwapPoly.from_pairs(points, [draw(pairs(len(points))) for _ in range(deg)])


@st.composite
def polys(draw, points: PointSet, max_degree: int = 3, max_terms: int = 4):
    out = SwapPoly(points)
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + draw(monomials(points, max_degree)).scale(draw(st.sampled_from(COEFFS)))
    return out


def naive_product(f: SwapPoly, g: SwapPoly) -> dict:
    """Term-by-term product using plain lists, independent of SwapPoly.__mul__."""
    out = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            key = tuple(sorted(list(m1) + list(m2)))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def brute_determinant(points: PointSet, xs, ys) -> dict:
    """Leibniz expansion with inversion-count signs, skipping xx factors."""
    out = {}
    for perm in permutations(range(len(xs))):
        factors = [(points.index(xs[i]), points.index(ys[perm[i]])) for i in range(len(xs))]
        if any(a == b for a, b in factors):
            continue
        key = tuple(sorted(factors))
        out[key] = out.get(key, 0) + perm_sign(perm)
    return {k: Fraction(v) for k, v in out.items() if v}
