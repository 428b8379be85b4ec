"""Linking numbers and the swapping Poisson bracket.

The bracket of two generators is ``{rx, sy} = J(rx, sy) * ry * sx`` and is
extended to Z(P) by the Leibniz rule in each argument, then to fractions by
``{a, 1/b} = -{a, b}/b**2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Dict

from swapalg.core_ring import Monomial, Pair, PointSet, SwapFraction, SwapPoly
from swapalg.errors import PointSetMismatch

CUT = Fraction(-1, 2)


def _sign(a) -> int:
    return (a > 0) - (a < 0)


def linking_number_at(r, x, s, y, *, cut=CUT, period=None) -> Fraction:
    """Linking number of chords ``rx`` and ``sy`` given real coordinates.

    Coordinates are read on a circle of length ``period``; the circle is cut
    at ``cut``, which must differ from all four points.  With ``period=None``
    the coordinates are used as they are (the cut lies below all of them).
    """
    if period is not None:
        if any((p - cut) % period == 0 for p in (r, x, s, y)):
            raise ValueError("the cut point must differ from r, x, s, y")
        r, x, s, y = ((p - cut) % period for p in (r, x, s, y))
    srx = _sign(r - x)
    twice = srx * _sign(r - y) * _sign(y - x) - srx * _sign(r - s) * _sign(s - x)
    return Fraction(twice, 2)


@lru_cache(maxsize=None)
def _linking2(r: int, x: int, s: int, y: int) -> int:
    # twice the linking number, for integer positions cut at -1/2
    srx = _sign(r - x)
    return srx * _sign(r - y) * _sign(y - x) - srx * _sign(r - s) * _sign(s - x)


def linking_number(r: str, x: str, s: str, y: str, points: PointSet) -> Fraction:
    """J(rx, sy) for named points of ``points`` (repetitions allowed)."""
    idx = points.index
    return Fraction(_linking2(idx(r), idx(x), idx(s), idx(y)), 2)


@lru_cache(maxsize=None)
def _bracket_pairs(u: Pair, v: Pair):
    """(twice J, pair ry, pair sx) for generators u = rx, v = sy, or None."""
    r, x = u
    s, y = v
    j2 = _linking2(r, x, s, y)
    if not j2 or r == y or s == x:
        return None
    return j2, (r, y), (s, x)


def bracket_generators(rx: Pair, sy: Pair, points: PointSet) -> SwapPoly:
    """``{rx, sy}`` for position pairs ``rx`` and ``sy``."""
    hit = _bracket_pairs(tuple(rx), tuple(sy))
    if hit is None:
        return SwapPoly(points)
    j2, ry, sx = hit
    return SwapPoly(points, {tuple(sorted((ry, sx))): Fraction(j2, 2)})


def _counted(m: Monomial):
    return [(p, len(list(grp))) for p, grp in groupby(m)]


def _drop_one(m: Monomial, p: Pair) -> list:
    out = list(m)
    out.remove(p)
    return out


@lru_cache(maxsize=200_000)
def _bracket_monomials(m1: Monomial, m2: Monomial):
    # Leibniz in both arguments, one factor of each side at a time
    out: Dict[Monomial, Fraction] = {}
    if not m1 or not m2:
        return ()
    for u, a in _counted(m1):
        rest1 = None
        for v, b in _counted(m2):
            hit = _bracket_pairs(u, v)
            if hit is None:
                continue
            j2, ry, sx = hit
            if rest1 is None:
                rest1 = _drop_one(m1, u)
            mono = tuple(sorted(rest1 + _drop_one(m2, v) + [ry, sx]))
            s = out.get(mono, 0) + Fraction(j2 * a * b, 2)
            if s:
                out[mono] = s
            else:
                del out[mono]
    return tuple(out.items())


def bracket_poly(f: SwapPoly, g: SwapPoly) -> SwapPoly:
    """The swapping bracket ``{f, g}`` on Z(P)."""
    if f.points != g.points:
        raise PointSetMismatch("bracket operands live over different point sets")
    terms: Dict[Monomial, Fraction] = {}
    for m1, c1 in f.terms.items():
        if not m1:
            continue
        for m2, c2 in g.terms.items():
            if not m2:
                continue
            c = c1 * c2
            for m, v in _bracket_monomials(m1, m2):
                s = terms.get(m, 0) + c * v
                if s:
                    terms[m] = s
                else:
                    del terms[m]
    return SwapPoly(f.points, terms)


def _as_fraction(F) -> SwapFraction:
    return F if isinstance(F, SwapFraction) else SwapFraction(F)


def bracket_fraction(F, G) -> SwapFraction:
    """The bracket on the fraction ring.

    For ``F = a/b`` and ``G = c/d``::

        {F, G} = ({a,c} b d - {a,d} b c - {b,c} a d + {b,d} a c) / (b**2 d**2)
    """
    F, G = _as_fraction(F), _as_fraction(G)
    if F.points != G.points:
        raise PointSetMismatch("bracket operands live over different point sets")
    a, b, c, d = F.num, F.den, G.num, G.den
    num = bracket_poly(a, c) * b * d
    if not d.is_constant():
        num = num - bracket_poly(a, d) * b * c
    if not b.is_constant():
        num = num - bracket_poly(b, c) * a * d
        if not d.is_constant():
            num = num + bracket_poly(b, d) * a * c
    return SwapFraction(num, (b * b) * (d * d))


def bracket(f, g):
    """Dispatch to :func:`bracket_poly` or :func:`bracket_fraction`."""
    if isinstance(f, SwapPoly) and isinstance(g, SwapPoly):
        return bracket_poly(f, g)
    return bracket_fraction(f, g)
