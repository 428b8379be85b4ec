"""Triangulated polygons, Fock-Goncharov coordinates and their embedding.

Vertices of the convex k-gon are ``v1 .. vk`` in anticlockwise order and
are addressed internally by 0-based index.  An inner edge (diagonal) is a
sorted index pair ``(i, j)``.  For a diagonal ``(x, z)`` the adjacent
quadrilateral is read anticlockwise as ``x, y, z, t``: ``y`` is the apex
lying between ``x`` and ``z``, ``t`` the other apex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from swapalg.core_ring import PointSet, SwapFraction, SwapPoly, pair
from swapalg.errors import DegenerateFlags, NotADiagonal, UnsupportedSize
from swapalg.rank_reduction import eq_in_Qn
from swapalg.swap_bracket import bracket_fraction

Edge = Tuple[int, int]

MIN_K, MAX_K = 4, 10


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def polygon_points(k: int) -> PointSet:
    return PointSet([f"v{i + 1}" for i in range(k)])


# -- triangulations ---------------------------------------------------------


@dataclass(frozen=True)
class Triangulation:
    k: int
    diagonals: FrozenSet[Edge]

    def __post_init__(self):
        object.__setattr__(self, "diagonals", frozenset(_edge(*e) for e in self.diagonals))
        k = self.k
        if k < 3:
            raise UnsupportedSize(f"a polygon needs at least 3 vertices, got {k}")
        if len(self.diagonals) != k - 3:
            raise ValueError(f"a triangulation of a {k}-gon has {k - 3} diagonals")
        for i, j in self.diagonals:
            if not (0 <= i < j < k) or j - i == 1 or (i == 0 and j == k - 1):
                raise ValueError(f"({i},{j}) is not a diagonal of the {k}-gon")
        for e, f in combinations(self.diagonals, 2):
            if _cross(e, f):
                raise ValueError(f"diagonals {e} and {f} cross")

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Inner edges in canonical (sorted) order."""
        return tuple(sorted(self.diagonals))

    @property
    def points(self) -> PointSet:
        return polygon_points(self.k)

    def is_edge(self, u: int, v: int) -> bool:
        u, v = _edge(u, v)
        return v - u == 1 or (u == 0 and v == self.k - 1) or (u, v) in self.diagonals

    def triangles(self) -> List[Tuple[int, int, int]]:
        """Triangles with vertices listed anticlockwise (increasing index)."""
        return _triangles(self.k, self.diagonals)

    def quadrilateral(self, e: Edge) -> Tuple[int, int, int, int]:
        """``(x, y, z, t)`` anticlockwise around the diagonal ``e = {x, z}``."""
        e = self._require(e)
        x, z = e
        y = t = None
        for tri in self.triangles():
            if x in tri and z in tri:
                apex = next(v for v in tri if v != x and v != z)
                if x < apex < z:
                    y = apex
                else:
                    t = apex
        return x, y, z, t

    def _require(self, e) -> Edge:
        e = _edge(*e)
        if e not in self.diagonals:
            raise NotADiagonal(f"{edge_name(e)} is not a diagonal of this triangulation")
        return e

    def __str__(self):
        return "{" + ", ".join(edge_name(e) for e in self.edges) + "}"


def edge_name(e: Edge) -> str:
    return f"v{e[0] + 1}v{e[1] + 1}"


def parse_edge(text: str, k: int) -> Edge:
    """``"v1v3"``, ``"v1-v3"`` or ``"1,3"`` to an index pair."""
    cleaned = text.replace("v", " ").replace("-", " ").replace(",", " ").split()
    if len(cleaned) != 2:
        raise ValueError(f"cannot read an edge from {text!r}")
    u, v = (int(c) - 1 for c in cleaned)
    if not (0 <= u < k and 0 <= v < k) or u == v:
        raise ValueError(f"edge {text!r} is outside the {k}-gon")
    return _edge(u, v)


def _cross(e: Edge, f: Edge) -> bool:
    (a, b), (c, d) = e, f
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


@lru_cache(maxsize=None)
def _triangles(k: int, diagonals: FrozenSet[Edge]):
    def joined(u, v):
        return v - u == 1 or (u == 0 and v == k - 1) or (u, v) in diagonals

    out = []
    for u, v, w in combinations(range(k), 3):
        if joined(u, v) and joined(v, w) and joined(u, w):
            out.append((u, v, w))
    return out


@lru_cache(maxsize=None)
def _triangulate(vertices: Tuple[int, ...]) -> Tuple[FrozenSet[Edge], ...]:
    # triangulations of the sub-polygon on `vertices` (anticlockwise)
    if len(vertices) < 4:
        return (frozenset(),)
    first, last = vertices[0], vertices[-1]
    out = []
    for m in range(1, len(vertices) - 1):
        apex = vertices[m]
        chords = set()
        if m > 1:
            chords.add(_edge(first, apex))
        if m < len(vertices) - 2:
            chords.add(_edge(apex, last))
        for left in _triangulate(vertices[: m + 1]):
            for right in _triangulate(vertices[m:]):
                out.append(frozenset(chords) | left | right)
    return tuple(out)


def enumerate_triangulations(k: int) -> List[Triangulation]:
    """Every triangulation of the convex k-gon, sorted by diagonal list."""
    if not (MIN_K <= k <= MAX_K):
        raise UnsupportedSize(f"k must lie in {MIN_K}..{MAX_K}, got {k}")
    found = {tuple(sorted(d)) for d in _triangulate(tuple(range(k)))}
    return [Triangulation(k, frozenset(d)) for d in sorted(found)]


def fan(k: int, apex: int = 0) -> Triangulation:
    """All diagonals from one vertex (0-based ``apex``)."""
    diags = [_edge(apex, (apex + j) % k) for j in range(2, k - 1)]
    return Triangulation(k, frozenset(diags))


def flip(T: Triangulation, e) -> Tuple[Triangulation, Edge]:
    """Swap the diagonal ``e`` for the other diagonal of its quadrilateral."""
    x, y, z, t = T.quadrilateral(e)
    e_new = _edge(y, t)
    diags = (T.diagonals - {_edge(x, z)}) | {e_new}
    return Triangulation(T.k, diags), e_new


def flip_graph(k: int) -> Dict[Triangulation, List[Triangulation]]:
    tris = enumerate_triangulations(k)
    return {T: sorted((flip(T, e)[0] for e in T.edges), key=lambda S: S.edges) for T in tris}


def flip_path(T0: Triangulation, T1: Triangulation) -> List[Tuple[Triangulation, Edge]]:
    """Shortest sequence of ``(triangulation, flipped edge)`` leading T0 to T1."""
    prev = {T0: None}
    queue = deque([T0])
    while queue:
        T = queue.popleft()
        if T == T1:
            break
        for e in T.edges:
            S, _ = flip(T, e)
            if S not in prev:
                prev[S] = (T, e)
                queue.append(S)
    path = []
    node = T1
    while prev[node] is not None:
        T, e = prev[node]
        path.append((T, e))
        node = T
    return path[::-1]


# -- exchange matrix ----------------------------------------------------------


@dataclass(frozen=True)
class ExchangeMatrix:
    """Antisymmetric integer matrix on an ordered list of inner edges."""

    edges: Tuple[Edge, ...]
    entries: Mapping[Tuple[Edge, Edge], int] = field(hash=False)

    def __call__(self, i: Edge, j: Edge) -> int:
        return self.entries.get((_edge(*i), _edge(*j)), 0)

    def rows(self) -> List[List[int]]:
        return [[self(i, j) for j in self.edges] for i in self.edges]

    def relabel(self, old: Edge, new: Edge) -> "ExchangeMatrix":
        swap = lambda f: new if f == old else f  # noqa: E731
        entries = {(swap(i), swap(j)): v for (i, j), v in self.entries.items()}
        return ExchangeMatrix(tuple(swap(f) for f in self.edges), entries)

    def same_as(self, other: "ExchangeMatrix") -> bool:
        if set(self.edges) != set(other.edges):
            return False
        return all(self(i, j) == other(i, j) for i in self.edges for j in self.edges)


def epsilon(T: Triangulation) -> ExchangeMatrix:
    """The exchange matrix: +1 for ``(ab, ad)`` when ``a, b, d`` is an
    anticlockwise triangle, -1 when clockwise, summed over triangles."""
    inner = T.diagonals
    entries: Dict[Tuple[Edge, Edge], int] = {}
    for tri in T.triangles():
        for a in tri:
            # the other two vertices, in anticlockwise order after a
            pos = tri.index(a)
            b, d = tri[(pos + 1) % 3], tri[(pos + 2) % 3]
            e1, e2 = _edge(a, b), _edge(a, d)
            if e1 in inner and e2 in inner:
                entries[(e1, e2)] = entries.get((e1, e2), 0) + 1
                entries[(e2, e1)] = entries.get((e2, e1), 0) - 1
    return ExchangeMatrix(T.edges, {k: v for k, v in entries.items() if v})


def mutate_epsilon(eps: ExchangeMatrix, e: Edge) -> ExchangeMatrix:
    """Mutated matrix, still indexed by the old edge labels."""
    e = _edge(*e)
    entries = {}
    for i in eps.edges:
        for j in eps.edges:
            if e in (i, j):
                v = -eps(i, j)
            else:
                eie = eps(i, e)
                v = eps(i, j) + eie * max(0, eie * eps(e, j))
            if v:
                entries[(i, j)] = v
    return ExchangeMatrix(eps.edges, entries)


# -- numeric coordinates ------------------------------------------------------


def fg_from_points(values: Mapping, T: Triangulation) -> Dict[Edge, Fraction]:
    """Coordinates ``X_xz = -((y - z)/(t - z)) * ((t - x)/(y - x))`` of points
    ``values`` on the projective line, one per vertex.

    ``values`` is keyed by vertex name (``"v1"``) or 0-based index.
    """
    vals = []
    for i in range(T.k):
        v = values.get(f"v{i + 1}", values.get(i)) if isinstance(values, Mapping) else values[i]
        if v is None:
            raise KeyError(f"no value for vertex v{i + 1}")
        vals.append(Fraction(v))
    if len(set(vals)) < len(vals):
        raise DegenerateFlags("vertex values must be pairwise distinct")
    out = {}
    for e in T.edges:
        x, y, z, t = (vals[v] for v in T.quadrilateral(e))
        out[e] = -((y - z) / (t - z)) * ((t - x) / (y - x))
    return out


# -- rational functions in the coordinates --------------------------------------


class XPoly:
    """Sparse polynomial in variables X_0 .. X_{r-1} with rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c) -> "XPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "XPoly":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other) -> "XPoly":
        return other if isinstance(other, XPoly) else XPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return XPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return XPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return XPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = XPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "XPoly":
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                terms[m[:i] + (m[i] - 1,) + m[i + 1:]] = c * m[i]
        return XPoly(self.nvars, terms)

    def max_degrees(self) -> List[int]:
        degs = [0] * self.nvars
        for m in self.terms:
            degs = [max(a, b) for a, b in zip(degs, m)]
        return degs

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = XPoly.const(self.nvars, other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(f"{names[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class RationalFunc:
    """Formal quotient of two XPoly; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: XPoly, den: XPoly | None = None):
        if den is None:
            den = XPoly.const(num.nvars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def var(cls, nvars: int, i: int) -> "RationalFunc":
        return cls(XPoly.var(nvars, i))

    @classmethod
    def const(cls, nvars: int, c) -> "RationalFunc":
        return cls(XPoly.const(nvars, c))

    def _lift(self, other) -> "RationalFunc":
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, XPoly):
            return RationalFunc(other)
        return RationalFunc.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("cannot invert zero")
        return RationalFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunc(self.num ** k, self.den ** k)

    def diff(self, i: int) -> "RationalFunc":
        return RationalFunc(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def __eq__(self, other):
        if not isinstance(other, (RationalFunc, XPoly, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def substitute(self, images: Sequence["RationalFunc"]) -> "RationalFunc":
        """Compose: replace X_i by ``images[i]``."""
        return _apply_homogenized(self, images, lambda c: RationalFunc.const(images[0].nvars, c),
                                  lambda f: (f.num, f.den), RationalFunc)

    def to_str(self, names: Sequence[str]) -> str:
        if self.den == XPoly.const(self.nvars, 1):
            return self.num.to_str(names)
        return f"({self.num.to_str(names)})/({self.den.to_str(names)})"


def _apply_homogenized(f: RationalFunc, images, const, split, build):
    """Evaluate ``f`` at fractions ``images[i] = n_i/d_i`` over one common
    denominator ``prod d_i^D_i``, where ``D_i`` bounds the degree in X_i of
    both numerator and denominator of ``f``."""
    degs = [max(a, b) for a, b in zip(f.num.max_degrees(), f.den.max_degrees())]
    parts = [split(img) for img in images]
    cache = {}

    def power(i, which, e):
        key = (i, which, e)
        if key not in cache:
            base = parts[i][which]
            out = None
            for _ in range(e):
                out = base if out is None else out * base
            cache[key] = out
        return cache[key]

    def evaluate(poly: XPoly):
        total = None
        for m, c in poly.terms.items():
            term = const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, 0, e)
                if degs[i] - e:
                    term = term * power(i, 1, degs[i] - e)
            total = term if total is None else total + term
        return total if total is not None else const(0)

    return build(evaluate(f.num), evaluate(f.den))


def fg_bracket(eps: ExchangeMatrix, f: RationalFunc, g: RationalFunc,
               edges: Sequence[Edge] | None = None) -> RationalFunc:
    """``{f, g} = sum_ab eps(a, b) X_a X_b df/dX_a dg/dX_b``.

    Variable ``X_i`` stands for ``edges[i]`` (default ``eps.edges``).
    """
    edges = list(edges or eps.edges)
    r = len(edges)
    f_parts = [f.num.diff(i) * f.den - f.num * f.den.diff(i) for i in range(r)]
    g_parts = [g.num.diff(i) * g.den - g.num * g.den.diff(i) for i in range(r)]
    num = XPoly(r)
    for a in range(r):
        if f_parts[a].is_zero():
            continue
        for b in range(r):
            w = eps(edges[a], edges[b])
            if w and not g_parts[b].is_zero():
                num = num + f_parts[a] * g_parts[b] * (XPoly.var(r, a) * XPoly.var(r, b)) * w
    den = (f.den * f.den) * (g.den * g.den)
    return RationalFunc(num, den)


# -- seeds and mutation --------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """A triangulation, its exchange matrix and the current coordinates.

    ``labels[i]`` is the current edge sitting in slot ``i``; ``coords[i]`` is
    that coordinate written in the variables of the base seed.
    """

    triangulation: Triangulation
    labels: Tuple[Edge, ...]
    eps: ExchangeMatrix
    coords: Tuple[RationalFunc, ...]

    @classmethod
    def initial(cls, T: Triangulation) -> "Seed":
        r = len(T.edges)
        coords = tuple(RationalFunc.var(r, i) for i in range(r))
        return cls(T, T.edges, epsilon(T), coords)

    def coordinate(self, e: Edge) -> RationalFunc:
        return self.coords[self.labels.index(_edge(*e))]


def transition(eps: ExchangeMatrix, e: Edge, i: Edge, X: Mapping[Edge, RationalFunc]) -> RationalFunc:
    """The transition map g_e applied to coordinate ``i``."""
    e, i = _edge(*e), _edge(*i)
    if i == e:
        return X[e].inverse()
    w = eps(i, e)
    if w <= 0:
        return X[i] * (1 + X[e]) ** (-w)
    return X[i] * (1 + X[e].inverse()) ** (-w)


def mutate(seed: Seed, e) -> Seed:
    """Mutation at the inner edge ``e`` (the new edge takes over e's slot)."""
    e = seed.triangulation._require(e)
    T_new, e_new = flip(seed.triangulation, e)
    current = dict(zip(seed.labels, seed.coords))
    coords = tuple(transition(seed.eps, e, i, current) for i in seed.labels)
    eps_new = mutate_epsilon(seed.eps, e).relabel(e, e_new)
    labels = tuple(e_new if f == e else f for f in seed.labels)
    return Seed(T_new, labels, eps_new, coords)


# -- the embedding into the rank-2 fraction ring -------------------------------


def theta(T: Triangulation, e, points: PointSet | None = None) -> SwapFraction:
    """``theta_T(X_xz) = -(yz/tz) * (tx/yx)`` for the quadrilateral x,y,z,t."""
    points = points or T.points
    x, y, z, t = (points.names[v] for v in T.quadrilateral(e))
    P = lambda u, v: pair(points, u, v)  # noqa: E731
    return SwapFraction(-(P(y, z) * P(t, x)), P(t, z) * P(y, x))


def theta_map(T: Triangulation, f: RationalFunc, edges: Sequence[Edge] | None = None,
              points: PointSet | None = None) -> SwapFraction:
    """Extend theta multiplicatively: ``X_i`` is ``theta(T, edges[i])``."""
    points = points or T.points
    edges = list(edges or T.edges)
    images = [theta(T, e, points) for e in edges]
    return _apply_homogenized(
        f, images,
        lambda c: SwapPoly.constant(points, c),
        lambda F: (F.num, F.den),
        lambda num, den: SwapFraction(num, den),
    )


# -- checks ----------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    cases: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.cases)

    @property
    def failures(self) -> List[str]:
        return [d for d, ok in self.cases if not ok]

    def add(self, description: str, ok: bool):
        self.cases.append((description, ok))


def check_theta_poisson(T: Triangulation) -> CheckReport:
    """``{theta(X_i), theta(X_j)} = eps_ij theta(X_i) theta(X_j)`` in Q_2."""
    eps = epsilon(T)
    thetas = {e: theta(T, e) for e in T.edges}
    report = CheckReport(f"theta_poisson {T}")
    for i in T.edges:
        for j in T.edges:
            lhs = bracket_fraction(thetas[i], thetas[j])
            rhs = thetas[i] * thetas[j] * eps(i, j)
            ok = eq_in_Qn(lhs, rhs, 2)
            report.add(f"T={T} i={edge_name(i)} j={edge_name(j)} eps={eps(i, j)}", ok)
    return report


def check_flip_compat(T: Triangulation, e) -> CheckReport:
    """``theta_T(g_e(X_i)) = theta_T'(X_i')`` in Q_2 for every coordinate i."""
    e = T._require(e)
    T_new, e_new = flip(T, e)
    seed = Seed.initial(T)
    mutated = mutate(seed, e)
    report = CheckReport(f"flip_compat {T} at {edge_name(e)}")
    points = T.points
    for slot, i in enumerate(T.edges):
        lhs = theta_map(T, mutated.coords[slot], T.edges, points)
        i_new = e_new if i == e else i
        rhs = theta(T_new, i_new, points)
        report.add(f"T={T} e={edge_name(e)} i={edge_name(i)}", eq_in_Qn(lhs, rhs, 2))
    return report


def check_mutation_poisson(T: Triangulation, e) -> CheckReport:
    """``{g_e(X_i), g_e(X_j)}_2 = eps'_ij g_e(X_i) g_e(X_j)`` as rational functions."""
    e = T._require(e)
    seed = Seed.initial(T)
    mutated = mutate(seed, e)
    eps_old = seed.eps
    eps_new = mutate_epsilon(eps_old, e)
    report = CheckReport(f"mutation_poisson {T} at {edge_name(e)}")
    for a, i in enumerate(T.edges):
        for b, j in enumerate(T.edges):
            gi, gj = mutated.coords[a], mutated.coords[b]
            lhs = fg_bracket(eps_old, gi, gj, T.edges)
            rhs = gi * gj * eps_new(i, j)
            report.add(f"T={T} e={edge_name(e)} i={edge_name(i)} j={edge_name(j)}", lhs == rhs)
    return report


def all_diagonal_cases(k: int) -> Iterable[Tuple[Triangulation, Edge]]:
    for T in enumerate_triangulations(k):
        for e in T.edges:
            yield T, e
