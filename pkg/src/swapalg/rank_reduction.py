"""Determinants, the rank-n ideal and an exact zero test for Z_n(P).

Membership of ``f`` in the determinantal ideal R_n(P) is decided in the
model ring K[a_{i,k}, b_{i,k}] modulo the ideal L generated by the
contractions ``<a_i|b_i> = sum_k a_{i,k} b_{i,k}``: every pair variable ``xy``
is sent to ``<a_x|b_y>`` and the image is reduced with the rules

    a_{i,n} b_{i,n}  ->  - sum_{k<n} a_{i,k} b_{i,k}.

The leading terms ``a_{i,n} b_{i,n}`` are pairwise coprime, so the rules form a
Groebner basis of L and the reduced form is unique; ``f`` is zero in Z_n(P)
exactly when it reduces to zero.

Model monomials are packed into Python ints, one byte of exponent per
variable, so multiplying monomials is integer addition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import lcm
from typing import Dict, Iterable, List, Sequence, Tuple

from swapalg.core_ring import PointSet, SwapFraction, SwapPoly
from swapalg.errors import BadModel, BadSpec, DenominatorVanishesInZn, UnsupportedRank
from swapalg.swap_bracket import linking_number_at

FIELD_BITS = 8
FIELD_MASK = (1 << FIELD_BITS) - 1


# -- determinants -----------------------------------------------------------


@dataclass(frozen=True)
class DeterminantSpec:
    """Rows ``xs`` and columns ``ys`` of a matrix of pair variables."""

    points: PointSet
    xs: Tuple[str, ...]
    ys: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ys", tuple(self.ys))
        if len(self.xs) != len(self.ys):
            raise BadSpec(f"{len(self.xs)} rows but {len(self.ys)} columns")
        if not self.xs:
            raise BadSpec("empty determinant")
        for name in self.xs + self.ys:
            self.points.index(name)

    @property
    def size(self) -> int:
        return len(self.xs)

    def replace_x(self, slot: int, name: str) -> "DeterminantSpec":
        xs = self.xs[:slot] + (name,) + self.xs[slot + 1:]
        return DeterminantSpec(self.points, xs, self.ys)

    def replace_y(self, slot: int, name: str) -> "DeterminantSpec":
        ys = self.ys[:slot] + (name,) + self.ys[slot + 1:]
        return DeterminantSpec(self.points, self.xs, ys)

    def __str__(self):
        return f"det([{','.join(self.xs)}],[{','.join(self.ys)}])"


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _signed_permutations(size: int):
    return tuple((p, _perm_sign(p)) for p in permutations(range(size)))


@lru_cache(maxsize=100_000)
def _det_terms(rows: Tuple[int, ...], cols: Tuple[int, ...]):
    if len(set(rows)) < len(rows) or len(set(cols)) < len(cols):
        return ()
    terms = {}
    for perm, sign in _signed_permutations(len(rows)):
        mono = []
        for i, r in enumerate(rows):
            c = cols[perm[i]]
            if r == c:
                break
            mono.append((r, c))
        else:
            key = tuple(sorted(mono))
            terms[key] = terms.get(key, 0) + sign
    return tuple((m, Fraction(c)) for m, c in terms.items() if c)


def determinant(spec: DeterminantSpec) -> SwapPoly:
    """Full expansion of ``det(x_i y_j)``; repeated rows or columns give 0."""
    idx = spec.points.index
    rows = tuple(idx(x) for x in spec.xs)
    cols = tuple(idx(y) for y in spec.ys)
    return SwapPoly(spec.points, dict(_det_terms(rows, cols)))


# -- right/left substitution sums ---------------------------------------------


def _on_ccw_arc(m: int, start: int, end: int, p: int) -> bool:
    # closed arc traversed anticlockwise from start to end
    return (p - start) % m <= (end - start) % m


def delta_terms(a: str, b: str, spec: DeterminantSpec, side: str = "R"):
    """Summands of the right (``"R"``) or left (``"L"``) substitution sum.

    The right side of the directed chord ``a -> b`` is the anticlockwise arc
    from ``a`` to ``b``, the left side the anticlockwise arc from ``b`` to
    ``a``; both include ``a`` and ``b``.  The auxiliary point ``u`` (resp.
    ``v``) is a virtual point a quarter step after ``b`` (resp. ``a``), hence
    strictly on the left (resp. right).

    Returns a list of ``(coefficient, (p, q), DeterminantSpec)`` meaning
    ``coefficient * pq * det(spec')``; summands with a zero linking number
    are omitted.
    """
    if side not in ("R", "L"):
        raise ValueError("side must be 'R' or 'L'")
    P = spec.points
    m = len(P)
    ia, ib = P.index(a), P.index(b)
    if ia == ib:
        raise BadSpec("the chord needs two distinct endpoints")
    if side == "R":
        aux = ib + Fraction(1, 4)
        chosen = lambda p: _on_ccw_arc(m, ia, ib, p)  # noqa: E731
    else:
        aux = ia + Fraction(1, 4)
        chosen = lambda p: _on_ccw_arc(m, ib, ia, p)  # noqa: E731

    def J(r, x, s, y):
        return linking_number_at(r, x, s, y, period=m)

    out = []
    for d, x in enumerate(spec.xs):
        ix = P.index(x)
        if chosen(ix):
            c = J(ia, ib, ix, aux)
            if c:
                out.append((c, (x, b), spec.replace_x(d, a)))
    for d, y in enumerate(spec.ys):
        iy = P.index(y)
        if chosen(iy):
            c = J(ia, ib, aux, iy)
            if c:
                out.append((c, (a, y), spec.replace_y(d, b)))
    return out


def _sum_terms(points: PointSet, terms) -> SwapPoly:
    out = SwapPoly(points)
    for c, (p, q), sub in terms:
        if p == q:
            continue
        factor = SwapPoly.from_pairs(points, [(points.index(p), points.index(q))], c)
        out = out + factor * determinant(sub)
    return out


def delta_R(a: str, b: str, spec: DeterminantSpec) -> SwapPoly:
    return _sum_terms(spec.points, delta_terms(a, b, spec, "R"))


def delta_L(a: str, b: str, spec: DeterminantSpec) -> SwapPoly:
    return _sum_terms(spec.points, delta_terms(a, b, spec, "L"))


# -- the model ring -----------------------------------------------------------


class RankModel:
    """Variables a_{i,k}, b_{i,k} (1 <= i <= p, 1 <= k <= n) and the ideal L."""

    __slots__ = ("n", "p", "_nf_cache", "_site_masks")

    def __init__(self, n: int, p: int):
        if n < 1 or p < 1:
            raise BadModel("rank and number of points must be positive")
        self.n = n
        self.p = p
        self._nf_cache: Dict[int, Tuple[Tuple[int, int], ...]] = {}
        self._site_masks = [
            (i, FIELD_MASK * self.var("a", i, n), FIELD_MASK * self.var("b", i, n))
            for i in range(1, p + 1)
        ]

    def __eq__(self, other):
        return isinstance(other, RankModel) and (self.n, self.p) == (other.n, other.p)

    def __hash__(self):
        return hash((RankModel, self.n, self.p))

    def __repr__(self):
        return f"RankModel(n={self.n}, p={self.p})"

    def _slot(self, kind: str, i: int, k: int) -> int:
        if not (1 <= i <= self.p and 1 <= k <= self.n):
            raise BadModel(f"variable {kind}[{i},{k}] outside n={self.n}, p={self.p}")
        return 2 * ((i - 1) * self.n + (k - 1)) + (kind == "b")

    def var(self, kind: str, i: int, k: int) -> int:
        """Packed monomial of the single variable ``a[i,k]`` or ``b[i,k]``."""
        return 1 << (FIELD_BITS * self._slot(kind, i, k))

    def exponents(self, mono: int) -> Dict[Tuple[str, int, int], int]:
        out = {}
        for i in range(1, self.p + 1):
            for k in range(1, self.n + 1):
                for kind in "ab":
                    e = (mono >> (FIELD_BITS * self._slot(kind, i, k))) & FIELD_MASK
                    if e:
                        out[(kind, i, k)] = e
        return out

    def monomial_str(self, mono: int) -> str:
        parts = []
        for (kind, i, k), e in sorted(self.exponents(mono).items()):
            parts.append(f"{kind}[{i},{k}]" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts) or "1"

    def rewrite_sites(self, mono: int) -> List[int]:
        """Points i whose monomial block is divisible by a_{i,n} b_{i,n}."""
        return [i for i, am, bm in self._site_masks if mono & am and mono & bm]

    def _rewrite(self, mono: int, i: int) -> List[int]:
        # a_{i,n} b_{i,n} m' -> -sum_{k<n} a_{i,k} b_{i,k} m'
        rest = mono - self.var("a", i, self.n) - self.var("b", i, self.n)
        return [rest + self.var("a", i, k) + self.var("b", i, k) for k in range(1, self.n)]

    def nf_monomial(self, mono: int) -> Tuple[Tuple[int, int], ...]:
        """Normal form of one monomial as ``((monomial, int coefficient), ...)``."""
        hit = self._nf_cache.get(mono)
        if hit is not None:
            return hit
        for i, am, bm in self._site_masks:
            if mono & am and mono & bm:
                break
        else:
            # already reduced; not worth caching
            return ((mono, 1),)
        acc: Dict[int, int] = {}
        for m2 in self._rewrite(mono, i):
            for m3, c in self.nf_monomial(m2):
                s = acc.get(m3, 0) - c
                if s:
                    acc[m3] = s
                else:
                    del acc[m3]
        result = tuple(acc.items())
        if len(self._nf_cache) > 2_000_000:
            self._nf_cache.clear()
        self._nf_cache[mono] = result
        return result


class ModelPoly:
    """Immutable polynomial over a :class:`RankModel` with rational coefficients."""

    __slots__ = ("model", "terms")

    def __init__(self, model: RankModel, terms: Dict[int, Fraction] | None = None):
        self.model = model
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def variable(cls, model: RankModel, kind: str, i: int, k: int) -> "ModelPoly":
        return cls(model, {model.var(kind, i, k): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _check(self, other):
        if not isinstance(other, ModelPoly):
            return ModelPoly(self.model, {0: other})
        if other.model != self.model:
            raise BadModel("polynomials over different models")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return ModelPoly(self.model, terms)

    __radd__ = __add__

    def __neg__(self):
        return ModelPoly(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        terms: Dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return ModelPoly(self.model, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ModelPoly):
            return NotImplemented
        return self.model == other.model and self.terms == other.terms

    def __hash__(self):
        return hash((self.model, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if not m:
                parts.append(str(c))
            elif abs(c) == 1:
                parts.append(("-" if c < 0 else "") + self.model.monomial_str(m))
            else:
                parts.append(f"{c}*{self.model.monomial_str(m)}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _pair_form(model: RankModel, x: int, y: int) -> List[int]:
    # <a_x|b_y> as a list of packed monomials; x, y are 1-based
    return [model.var("a", x, k) + model.var("b", y, k) for k in range(1, model.n + 1)]


def expand_to_model(f: SwapPoly, model: RankModel) -> ModelPoly:
    """Image of ``f`` under ``xy -> <a_x|b_y>`` (points numbered from 1)."""
    if len(f.points) > model.p:
        raise BadModel(f"{len(f.points)} points do not fit a model with p={model.p}")
    forms = {}
    terms: Dict[int, Fraction] = {}
    for mono, c in f.terms.items():
        partial = {0: Fraction(c)}
        for pr in mono:
            form = forms.get(pr)
            if form is None:
                form = forms[pr] = _pair_form(model, pr[0] + 1, pr[1] + 1)
            nxt: Dict[int, Fraction] = {}
            for m, v in partial.items():
                for t in form:
                    nxt[m + t] = nxt.get(m + t, 0) + v
            partial = nxt
        for m, v in partial.items():
            terms[m] = terms.get(m, 0) + v
    return ModelPoly(model, terms)


def normal_form_model(q: ModelPoly, model: RankModel | None = None, site_order: str = "first",
                      rng: random.Random | None = None) -> ModelPoly:
    """Reduce ``q`` modulo L to its unique normal form.

    ``site_order`` picks which rewrite site fires first when a monomial has
    several (``"first"``, ``"last"`` or ``"random"`` with ``rng``); the
    result does not depend on it.
    """
    model = model or q.model
    if model != q.model:
        raise BadModel("polynomial and model disagree")
    if site_order == "first":
        acc: Dict[int, Fraction] = {}
        for m, c in q.terms.items():
            for m2, v in model.nf_monomial(m):
                acc[m2] = acc.get(m2, 0) + c * v
        return ModelPoly(model, acc)
    # explicit worklist reduction, used to cross-check the cached path
    rng = rng or random.Random(0)
    acc = {}
    work = list(q.terms.items())
    while work:
        m, c = work.pop()
        sites = model.rewrite_sites(m)
        if not sites:
            acc[m] = acc.get(m, 0) + c
            continue
        if site_order == "last":
            i = sites[-1]
        elif site_order == "random":
            i = rng.choice(sites)
        else:
            raise ValueError(f"unknown site order {site_order!r}")
        work.extend((m2, -c) for m2 in model._rewrite(m, i))
    return ModelPoly(model, acc)


# -- zero tests ---------------------------------------------------------------


def _check_rank(n: int):
    if not isinstance(n, int) or n < 2:
        raise UnsupportedRank(f"rank {n!r} is not supported; Z_1(P) is not a domain")


def _integral(f: SwapPoly) -> List[Tuple[tuple, int]]:
    # same zero locus, integer coefficients
    den = lcm(*(c.denominator for c in f.terms.values())) if f.terms else 1
    return [(m, int(c * den)) for m, c in f.terms.items()]


class _Reducer:
    """Cached normal forms of expanded pair monomials for one model."""

    term_budget = 3_000_000

    def __init__(self, model: RankModel):
        self.model = model
        self.cache: Dict[tuple, Tuple[Tuple[int, int], ...]] = {(): ((0, 1),)}
        self.stored = 0

    def nf(self, mono: tuple):
        hit = self.cache.get(mono)
        if hit is not None:
            return hit
        model = self.model
        # NF(m * xy) = NF(NF(m) * <a_x|b_y>)
        prefix = self.nf(mono[:-1])
        x, y = mono[-1]
        form = _pair_form(model, x + 1, y + 1)
        acc: Dict[int, int] = {}
        nf_monomial = model.nf_monomial
        for m, c in prefix:
            for t in form:
                for m2, v in nf_monomial(m + t):
                    s = acc.get(m2, 0) + c * v
                    if s:
                        acc[m2] = s
                    else:
                        del acc[m2]
        result = tuple(acc.items())
        if self.stored > self.term_budget:
            self.cache = {(): ((0, 1),)}
            self.stored = 0
        self.cache[mono] = result
        self.stored += len(result)
        return result


_REDUCERS: Dict[Tuple[int, int], _Reducer] = {}


def _reducer(n: int, p: int) -> _Reducer:
    red = _REDUCERS.get((n, p))
    if red is None:
        if len(_REDUCERS) > 16:
            _REDUCERS.clear()
        red = _REDUCERS[(n, p)] = _Reducer(RankModel(n, p))
    return red


def normal_form_Zn(f: SwapPoly, n: int) -> ModelPoly:
    """Normal form of the image of ``f`` in K[M_{n,p}]/L."""
    _check_rank(n)
    red = _reducer(n, len(f.points))
    acc: Dict[int, Fraction] = {}
    for mono, c in f.terms.items():
        for m, v in red.nf(mono):
            acc[m] = acc.get(m, 0) + c * v
    return ModelPoly(red.model, acc)


def is_zero_Zn(f: SwapPoly, n: int, *, prefilter: bool = False) -> bool:
    """True iff ``f`` lies in R_n(P).

    The verdict is the model normal form.  With ``prefilter=True`` a few
    random evaluations run first; a nonzero evaluation already proves
    ``f != 0`` in Z_n(P), so only candidates for zero pay for the normal form.
    """
    _check_rank(n)
    if f.is_zero():
        return True
    if prefilter and not random_zero_test(f, n, trials=2, seed=0x5eed):
        return False
    red = _reducer(n, len(f.points))
    acc: Dict[int, int] = {}
    for mono, c in _integral(f):
        for m, v in red.nf(mono):
            s = acc.get(m, 0) + c * v
            if s:
                acc[m] = s
            else:
                del acc[m]
    return not acc


def random_model_point(n: int, p: int, rng: random.Random, bound: int = 1 << 20):
    """Integer vectors a_i, b_i with <a_i|b_i> = 0 for every i.

    ``b_i`` is drawn at random and replaced by ``|a_i|^2 b_i - <a_i|b_i> a_i``.
    """
    a_vecs, b_vecs = [], []
    for _ in range(p):
        a = [rng.randint(-bound, bound) for _ in range(n)]
        while not any(a):
            a = [rng.randint(-bound, bound) for _ in range(n)]
        b = [rng.randint(-bound, bound) for _ in range(n)]
        aa = sum(t * t for t in a)
        ab = sum(s * t for s, t in zip(a, b))
        a_vecs.append(a)
        b_vecs.append([aa * t - ab * s for s, t in zip(a, b)])
    return a_vecs, b_vecs


def evaluate_at(f: SwapPoly, a_vecs, b_vecs) -> Fraction:
    """Value of ``f`` with ``xy`` replaced by ``<a_x|b_y>``."""
    gram = {}
    total = Fraction(0)
    for mono, c in f.terms.items():
        v = c
        for pr in mono:
            g = gram.get(pr)
            if g is None:
                g = gram[pr] = sum(s * t for s, t in zip(a_vecs[pr[0]], b_vecs[pr[1]]))
            v *= g
            if not v:
                break
        total += v
    return total


def random_zero_test(f: SwapPoly, n: int, trials: int = 5, seed: int = 0) -> bool:
    """Probabilistic zero test; ``False`` is a proof of nonvanishing."""
    _check_rank(n)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if f.is_zero():
        return True
    rng = random.Random(seed)
    ints = _integral(f)
    p = len(f.points)
    for _ in range(trials):
        a_vecs, b_vecs = random_model_point(n, p, rng)
        gram = [[sum(s * t for s, t in zip(a, b)) for b in b_vecs] for a in a_vecs]
        total = 0
        for mono, c in ints:
            v = c
            for x, y in mono:
                v *= gram[x][y]
            total += v
        if total:
            return False
    return True


def eq_in_Qn(F, G, n: int) -> bool:
    """Equality of two fractions in the fraction field of Z_n(P)."""
    _check_rank(n)
    F = F if isinstance(F, SwapFraction) else SwapFraction(F)
    G = G if isinstance(G, SwapFraction) else SwapFraction(G)
    for den in (F.den, G.den):
        if is_zero_Zn(den, n, prefilter=True):
            raise DenominatorVanishesInZn(f"denominator {den} vanishes in Z_{n}")
    return is_zero_Zn(F.cross_difference(G), n, prefilter=True)


def check_fraction(F: SwapFraction, n: int) -> SwapFraction:
    """Raise DenominatorVanishesInZn unless ``F`` is a legal element of Q_n(P)."""
    _check_rank(n)
    if is_zero_Zn(F.den, n, prefilter=True):
        raise DenominatorVanishesInZn(f"denominator {F.den} vanishes in Z_{n}")
    return F


def iter_determinant_specs(points: PointSet, size: int, rng: random.Random) -> Iterable[DeterminantSpec]:
    """Endless stream of random specs with distinct rows and distinct columns."""
    names = list(points.names)
    while True:
        xs = rng.sample(names, size)
        ys = rng.sample(names, size)
        yield DeterminantSpec(points, tuple(xs), tuple(ys))
