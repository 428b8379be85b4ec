from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import naive_product, points_of, polys
from swapalg.core_ring import PointSet, SwapFraction, SwapPoly, fraction, mk_point_set, pair
from swapalg.errors import DivisionByZero, DuplicatePoint, PointSetMismatch, UnknownPoint

P = mk_point_set(["x", "y", "z", "t"])
P6 = points_of(6)


def test_point_set_positions():
    assert P.position == {"x": 0, "y": 1, "z": 2, "t": 3}
    assert len(mk_point_set(["x"])) == 1


def test_duplicate_point_rejected():
    with pytest.raises(DuplicatePoint):
        mk_point_set(["x", "x"])


def test_empty_point_set_rejected():
    with pytest.raises(ValueError):
        PointSet([])


def test_generator_and_diagonal_pair():
    xy = pair(P, "x", "y")
    assert xy.terms == {((0, 1),): Fraction(1)}
    assert pair(P, "x", "x").is_zero()
    assert pair(P, "x", "y") != pair(P, "y", "x")


def test_unknown_point():
    with pytest.raises(UnknownPoint):
        pair(P, "x", "w")


def test_basic_arithmetic():
    xy, zt = pair(P, "x", "y"), pair(P, "z", "t")
    assert (xy + (-1) * xy).is_zero()
    assert (xy * zt).terms == {((0, 1), (2, 3)): Fraction(1)}
    assert (xy + zt) * (xy - zt) == xy * xy - zt * zt


def test_mixed_point_sets():
    with pytest.raises(PointSetMismatch):
        pair(P, "x", "y") + pair(points_of(4), "p0", "p1")


def test_printing():
    f = Fraction(1, 2) * pair(P, "x", "y") * pair(P, "z", "t") - pair(P, "x", "z")
    assert str(f) == "-p(x,z) + 1/2*p(x,y)*p(z,t)"
    assert str(SwapPoly(P)) == "0"


def test_fractions():
    xy, xz, xt = pair(P, "x", "y"), pair(P, "x", "z"), pair(P, "x", "t")
    assert fraction(xy, xy) == 1
    inv = fraction(xz, xt).invert()
    assert inv.num == xt and inv.den == xz
    with pytest.raises(DivisionByZero):
        fraction(xy, SwapPoly(P))
    with pytest.raises(DivisionByZero):
        SwapFraction(SwapPoly(P), xy).invert()


def test_fraction_field_operations():
    a = fraction(pair(P, "x", "y"), pair(P, "z", "t"))
    b = fraction(pair(P, "y", "z"), pair(P, "x", "t"))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a ** -2 * a ** 2 == 1


@settings(max_examples=1000, deadline=None)
@given(polys(P6), polys(P6), polys(P6))
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f * g).terms == naive_product(f, g)


@settings(max_examples=200, deadline=None)
@given(polys(P6))
def test_no_degenerate_pairs_stored(f):
    assert all(i != j for m in f.terms for i, j in m)
    assert all(c != 0 for c in f.terms.values())


@settings(max_examples=200, deadline=None)
@given(polys(P6), polys(P6), st.integers(0, 5))
def test_rotation_preserves_equality_verdicts(f, g, shift):
    R = P6.rotated(shift)
    assert (f == g) == (f.with_points(R) == g.with_points(R))
    assert (f * g).with_points(R) == f.with_points(R) * g.with_points(R)
