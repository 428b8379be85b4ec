"""Cyclically ordered point sets, the pair-variable ring and its fractions.

A :class:`SwapPoly` is a polynomial with exact rational coefficients in the
ordered pair variables ``xy`` (``x != y``) of a :class:`PointSet`; the pair
``xx`` is identified with zero and never stored.  Internally a pair is the
tuple ``(left position, right position)`` and a monomial is the sorted tuple
of its pairs, repeated according to multiplicity.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from swapalg.errors import DivisionByZero, DuplicatePoint, PointSetMismatch, UnknownPoint

Pair = Tuple[int, int]
Monomial = Tuple[Pair, ...]


class PointSet:
    """A finite set of named points listed in anticlockwise order."""

    __slots__ = ("names", "position")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a point set needs at least one point")
        position = {}
        for i, name in enumerate(names):
            if name in position:
                raise DuplicatePoint(f"point {name!r} listed twice")
            position[name] = i
        self.names = names
        self.position = position

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.position

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PointSet({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self.position[name]
        except KeyError:
            raise UnknownPoint(f"unknown point {name!r}") from None

    def rotated(self, shift: int) -> "PointSet":
        """Same cyclic order, index origin moved by ``shift``."""
        shift %= len(self.names)
        return PointSet(self.names[shift:] + self.names[:shift])

    def pair_name(self, pair: Pair) -> str:
        return f"p({self.names[pair[0]]},{self.names[pair[1]]})"


def mk_point_set(names: Sequence[str]) -> PointSet:
    return PointSet(names)


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def _monomial_key(mono: Monomial):
    return (len(mono), mono)


class SwapPoly:
    """Immutable element of the ring Z(P).

    ``terms`` maps monomials to nonzero :class:`~fractions.Fraction`
    coefficients.  The constructor trusts that every monomial is a sorted
    tuple of pairs with distinct endpoints; use :func:`pair` and the ring
    operations to build values.
    """

    __slots__ = ("points", "terms", "_hash")

    def __init__(self, points: PointSet, terms: Mapping[Monomial, Fraction] | None = None):
        self.points = points
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, points: PointSet) -> "SwapPoly":
        return cls(points)

    @classmethod
    def constant(cls, points: PointSet, c) -> "SwapPoly":
        c = _coerce_scalar(c)
        return cls(points, {(): c} if c else None)

    @classmethod
    def one(cls, points: PointSet) -> "SwapPoly":
        return cls(points, {(): Fraction(1)})

    @classmethod
    def from_pairs(cls, points: PointSet, pairs: Iterable[Pair], coeff=1) -> "SwapPoly":
        """Monomial ``coeff * prod(pairs)`` given by position pairs."""
        pairs = tuple(pairs)
        if any(i == j for i, j in pairs):
            return cls(points)
        return cls(points, {tuple(sorted(pairs)): _coerce_scalar(coeff)})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        """Terms in the canonical graded-lex order."""
        for m in sorted(self.terms, key=_monomial_key):
            yield m, self.terms[m]

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def pairs(self) -> set:
        return {p for m in self.terms for p in m}

    def with_points(self, points: PointSet) -> "SwapPoly":
        """Re-express over another point set containing the same names."""
        remap = [points.index(name) for name in self.points.names]
        terms = {}
        for m, c in self.terms.items():
            key = tuple(sorted((remap[i], remap[j]) for i, j in m))
            terms[key] = c
        return SwapPoly(points, terms)

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "SwapPoly":
        if isinstance(other, SwapPoly):
            if other.points != self.points:
                raise PointSetMismatch("operands live over different point sets")
            return other
        return SwapPoly.constant(self.points, other)

    def __add__(self, other):
        if isinstance(other, SwapFraction):
            return NotImplemented
        other = self._lift(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return SwapPoly(self.points, terms)

    __radd__ = __add__

    def __neg__(self):
        return SwapPoly(self.points, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, SwapFraction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "SwapPoly":
        c = _coerce_scalar(c)
        if not c:
            return SwapPoly(self.points)
        return SwapPoly(self.points, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SwapFraction):
            return NotImplemented
        if not isinstance(other, SwapPoly):
            return self.scale(other)
        other = self._lift(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2)) if m1 and m2 else m1 or m2
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return SwapPoly(self.points, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = SwapPoly.one(self.points)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, SwapFraction):
            return SwapFraction(self) / other
        return SwapFraction(self, self._lift(other))

    def __rtruediv__(self, other):
        return SwapFraction(self._lift(other), self)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SwapPoly):
            return self.points == other.points and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == SwapPoly.constant(self.points, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.points, frozenset(self.terms.items())))
        return self._hash

    # -- display ----------------------------------------------------------

    def _monomial_str(self, m: Monomial) -> str:
        return "*".join(self.points.pair_name(p) for p in m)

    def __str__(self):
        """Text in the expression grammar accepted by :mod:`swapalg.expr`."""
        if not self.terms:
            return "0"
        out = []
        for m, c in self.items():
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if not m:
                body = str(c)
            elif c == 1:
                body = self._monomial_str(m)
            else:
                body = f"{c}*{self._monomial_str(m)}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"SwapPoly({self})"


def pair(points: PointSet, x: str, y: str) -> SwapPoly:
    """The generator ``xy``; zero when ``x == y``."""
    i, j = points.index(x), points.index(y)
    if i == j:
        return SwapPoly(points)
    return SwapPoly(points, {((i, j),): Fraction(1)})


class SwapFraction:
    """Formal quotient ``num/den`` of two elements of Z(P).

    No cancellation is ever attempted.  ``==`` compares by
    cross-multiplication in Z(P); use
    :func:`swapalg.rank_reduction.eq_in_Qn` for equality in a rank-n quotient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: SwapPoly, den: SwapPoly | None = None):
        if den is None:
            den = SwapPoly.one(num.points)
        if num.points != den.points:
            raise PointSetMismatch("numerator and denominator over different point sets")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num = num
        self.den = den

    @property
    def points(self) -> PointSet:
        return self.num.points

    def _lift(self, other) -> "SwapFraction":
        if isinstance(other, SwapFraction):
            if other.points != self.points:
                raise PointSetMismatch("operands live over different point sets")
            return other
        if isinstance(other, SwapPoly):
            if other.points != self.points:
                raise PointSetMismatch("operands live over different point sets")
            return SwapFraction(other)
        return SwapFraction(SwapPoly.constant(self.points, other))

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return SwapFraction(self.num + other.num, self.den)
        return SwapFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return SwapFraction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return SwapFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def invert(self) -> "SwapFraction":
        if self.num.is_zero():
            raise DivisionByZero("cannot invert a zero fraction")
        return SwapFraction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).invert()

    def __rtruediv__(self, other):
        return self._lift(other) * self.invert()

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        return SwapFraction(self.num ** k, self.den ** k)

    def cross_difference(self, other) -> SwapPoly:
        """``self.num * other.den - other.num * self.den``."""
        other = self._lift(other)
        return self.num * other.den - other.num * self.den

    def __eq__(self, other):
        if not isinstance(other, (SwapFraction, SwapPoly, int, Fraction)):
            return NotImplemented
        return self.cross_difference(other).is_zero()

    __hash__ = None  # equality is not structural

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"SwapFraction({self})"


def fraction(num, den=None) -> SwapFraction:
    """Build a fraction from polynomials (or a polynomial and a scalar)."""
    if den is None:
        return SwapFraction(num)
    if not isinstance(den, SwapPoly):
        den = SwapPoly.constant(num.points, den)
    return SwapFraction(num, den)
