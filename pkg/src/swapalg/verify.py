"""Seeded, parameterised verification suites with JSON-serialisable reports.

Every failure record carries an ``input`` string that can be fed back to the
command line (``swapalg eval`` / ``swapalg cluster``) to reproduce it.
"""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Any, Callable, Dict, List, Mapping

from swapalg import cluster_x2 as cx
from swapalg.core_ring import PointSet, SwapPoly, pair
from swapalg.cross_ratio import check_cross_ratio_conditions
from swapalg.errors import BadParams, UnknownSuite
from swapalg.rank_reduction import (
    DeterminantSpec,
    delta_L,
    delta_R,
    determinant,
    is_zero_Zn,
    iter_determinant_specs,
    random_zero_test,
)
from swapalg.swap_bracket import bracket_poly

COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2))


def thread_cap() -> int:
    """Worker cap from ``SWAPALG_THREADS`` (default 1)."""
    raw = os.environ.get("SWAPALG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class Failure:
    input: str
    expected: str
    got: str


@dataclass
class SuiteReport:
    suite: str
    params: Dict[str, Any]
    seed: int
    trials: int
    failures: List[Failure] = field(default_factory=list)
    elapsed_ms: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "params": dict(self.params),
            "seed": self.seed,
            "trials": self.trials,
            "failures": [asdict(f) for f in self.failures],
            "elapsed_ms": self.elapsed_ms,
            "notes": list(self.notes),
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SuiteReport":
        return cls(
            suite=data["suite"],
            params=dict(data["params"]),
            seed=data["seed"],
            trials=data["trials"],
            failures=[Failure(**f) for f in data["failures"]],
            elapsed_ms=data["elapsed_ms"],
            notes=list(data.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "SuiteReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.suite}: {verdict} trials={self.trials} failures={len(self.failures)} "
                f"elapsed_ms={self.elapsed_ms}")


# -- random inputs -----------------------------------------------------------


def letters(m: int) -> PointSet:
    """Points ``p0 .. p{m-1}`` in anticlockwise order."""
    return PointSet([f"p{i}" for i in range(m)])


def random_monomial(points: PointSet, rng: random.Random, degree: int) -> SwapPoly:
    m = len(points)
    pairs = []
    for _ in range(degree):
        i = rng.randrange(m)
        j = rng.randrange(m - 1)
        pairs.append((i, j + (j >= i)))
    return SwapPoly.from_pairs(points, pairs)


def random_element(points: PointSet, rng: random.Random, max_degree: int = 3,
                   max_terms: int = 4) -> SwapPoly:
    """Sum of up to ``max_terms`` monomials of degree 1..max_degree with
    coefficients drawn from {+-1, +-2, +-1/2}."""
    out = SwapPoly(points)
    for _ in range(rng.randint(1, max_terms)):
        mono = random_monomial(points, rng, rng.randint(1, max_degree))
        out = out + mono.scale(rng.choice(COEFFS))
    return out


def _generators(points: PointSet) -> List[SwapPoly]:
    return [pair(points, x, y) for x, y in permutations(points.names, 2)]


# -- parameter handling ---------------------------------------------------------


_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "jacobi": {"points": 5, "mode": "exhaustive", "trials": 1000, "degree": 2},
    "poisson_ideal": {"n": 2, "points": 6, "trials": 200},
    "delta_r_l": {"n": 2, "points": 6, "mode": "exhaustive", "trials": 100},
    "domain": {"n": 2, "points": 5, "trials": 100, "degree": 2},
    "cross_ratio": {"points": 6},
    "nesting": {"n": 2, "points": 6, "trials": 20, "size": 4},
    "theta_poisson": {"k": 5},
    "flip_compat": {"k": 5},
    "mutation_poisson": {"k": 5},
    "oracle_agreement": {"n": 2, "points": 6, "trials": 500, "rz_trials": 5},
}

SUITES = tuple(_DEFAULTS)


def _resolve(name: str, params: Mapping[str, Any] | None) -> Dict[str, Any]:
    if name not in _DEFAULTS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    merged = dict(_DEFAULTS[name])
    for key, value in (params or {}).items():
        if key not in merged:
            raise BadParams(f"suite {name!r} takes no parameter {key!r}")
        if key == "mode":
            if value not in ("exhaustive", "random"):
                raise BadParams("mode must be 'exhaustive' or 'random'")
        elif not isinstance(value, int) or isinstance(value, bool):
            raise BadParams(f"parameter {key!r} must be an integer")
        merged[key] = value
    if "n" in merged and merged["n"] < 2:
        raise BadParams(f"rank n={merged['n']} is unsupported; rank 1 is not a domain")
    if "trials" in merged and merged["trials"] < 0:
        raise BadParams("trials must be nonnegative")
    if "points" in merged:
        need = {"cross_ratio": 6, "jacobi": 2}.get(name, merged.get("n", 1) + 1)
        if merged["points"] < need:
            raise BadParams(f"suite {name!r} needs at least {need} points")
        if merged["points"] > 26:
            raise BadParams("at most 26 points")
    if "k" in merged and not (cx.MIN_K <= merged["k"] <= cx.MAX_K):
        raise BadParams(f"k must lie in {cx.MIN_K}..{cx.MAX_K}")
    if name == "nesting" and merged["size"] < merged["n"] + 1:
        raise BadParams("nesting needs size >= n + 1")
    if name == "nesting" and merged["size"] > merged["points"]:
        raise BadParams("determinant size exceeds the number of points")
    return merged


# -- suites ---------------------------------------------------------------------


def _jacobi(p, rng, report):
    points = letters(p["points"])
    if p["mode"] == "exhaustive":
        gens = _generators(points)
        triples = ((f, g, h) for f in gens for g in gens for h in gens)
        pairs_ = ((f, g) for f in gens for g in gens)
    else:
        triples = [tuple(random_monomial(points, rng, rng.randint(1, p["degree"])) for _ in range(3))
                   for _ in range(p["trials"])]
        pairs_ = [(f, g) for f, g, _ in triples]
    for f, g in pairs_:
        s = bracket_poly(f, g) + bracket_poly(g, f)
        report.trials += 1
        if s:
            report.failures.append(Failure(f"br({f},{g}) + br({g},{f})", "0", str(s)))
    for f, g, h in triples:
        s = (bracket_poly(f, bracket_poly(g, h)) + bracket_poly(g, bracket_poly(h, f))
             + bracket_poly(h, bracket_poly(f, g)))
        report.trials += 1
        if s:
            text = f"br({f},br({g},{h})) + br({g},br({h},{f})) + br({h},br({f},{g}))"
            report.failures.append(Failure(text, "0", str(s)))
    report.notes.append(f"points={','.join(points.names)}")


def _poisson_ideal(p, rng, report):
    n = p["n"]
    points = letters(p["points"])
    gens = _generators(points)
    specs = iter_determinant_specs(points, n + 1, rng)
    for _ in range(p["trials"]):
        spec = next(specs)
        det = determinant(spec)
        for g in gens:
            report.trials += 1
            b = bracket_poly(g, det)
            if not is_zero_Zn(b, n):
                report.failures.append(Failure(f"br({g},{spec})", f"0 in Z_{n}", str(b)))


def _configurations(points: PointSet, size: int, mode: str, trials: int, rng):
    names = points.names
    if mode == "exhaustive":
        for a, b in permutations(names, 2):
            for xs in combinations(names, size):
                for ys in combinations(names, size):
                    yield a, b, DeterminantSpec(points, xs, ys)
    else:
        for _ in range(trials):
            a, b = rng.sample(names, 2)
            xs = tuple(rng.sample(names, size))
            ys = tuple(rng.sample(names, size))
            yield a, b, DeterminantSpec(points, xs, ys)


def _delta_r_l(p, rng, report):
    points = letters(p["points"])
    for a, b, spec in _configurations(points, p["n"] + 1, p["mode"], p["trials"], rng):
        report.trials += 1
        br = bracket_poly(pair(points, a, b), determinant(spec))
        right, left = delta_R(a, b, spec), delta_L(a, b, spec)
        text = f"br(p({a},{b}),{spec})"
        if br != right:
            report.failures.append(Failure(text, f"right sum {right}", str(br)))
        if right != left:
            report.failures.append(Failure(text, f"left sum {left}", f"right sum {right}"))


def _certified_nonzero(points, rng, n, degree):
    while True:
        f = random_element(points, rng, max_degree=degree)
        if not is_zero_Zn(f, n):
            return f


def _domain(p, rng, report):
    n = p["n"]
    points = letters(p["points"])
    for _ in range(p["trials"]):
        f = _certified_nonzero(points, rng, n, p["degree"])
        g = _certified_nonzero(points, rng, n, p["degree"])
        report.trials += 1
        if is_zero_Zn(f * g, n):
            report.failures.append(Failure(f"({f})*({g})", f"nonzero in Z_{n}", "0"))


def _cross_ratio(p, rng, report):
    result = check_cross_ratio_conditions(letters(p["points"]))
    for key, r in result.results.items():
        report.trials += r.checked
        if r.status == "fail":
            for tup in r.failures:
                report.failures.append(Failure(f"{key} at ({tup})", "identity", "mismatch"))
    report.notes.extend(result.lines())


def _nesting(p, rng, report):
    n = p["n"]
    points = letters(p["points"])
    specs = iter_determinant_specs(points, p["size"], rng)
    for _ in range(p["trials"]):
        spec = next(specs)
        report.trials += 1
        if not is_zero_Zn(determinant(spec), n):
            report.failures.append(Failure(str(spec), f"0 in Z_{n}", "nonzero"))


def _cluster_sweep(check: Callable, per_edge: bool):
    def run(p, rng, report):
        k = p["k"]
        cases = cx.all_diagonal_cases(k) if per_edge else ((T,) for T in cx.enumerate_triangulations(k))
        for args in cases:
            r = check(*args)
            report.trials += len(r.cases)
            for desc in r.failures:
                report.failures.append(Failure(desc, "identity", "mismatch"))
    return run


def _oracle_agreement(p, rng, report):
    n = p["n"]
    points = letters(p["points"])
    specs = iter_determinant_specs(points, n + 1, rng)
    false_zero = 0
    for t in range(p["trials"]):
        f = random_element(points, rng)
        if t % 2:
            # a genuine zero of Z_n: a multiple of a rank-n determinant
            f = random_element(points, rng, max_degree=1, max_terms=2) * determinant(next(specs))
        report.trials += 1
        exact = is_zero_Zn(f, n)
        quick = random_zero_test(f, n, trials=p["rz_trials"], seed=rng.randrange(1 << 30))
        if exact and not quick:
            report.failures.append(Failure(str(f), "zero (normal form)", "nonzero (random test)"))
        elif quick and not exact:
            false_zero += 1
            report.failures.append(Failure(str(f), "nonzero (normal form)", "zero (random test)"))
    report.notes.append(f"probabilistic false zeros: {false_zero}")


_RUNNERS: Dict[str, Callable] = {
    "jacobi": _jacobi,
    "poisson_ideal": _poisson_ideal,
    "delta_r_l": _delta_r_l,
    "domain": _domain,
    "cross_ratio": _cross_ratio,
    "nesting": _nesting,
    "theta_poisson": _cluster_sweep(cx.check_theta_poisson, per_edge=False),
    "flip_compat": _cluster_sweep(cx.check_flip_compat, per_edge=True),
    "mutation_poisson": _cluster_sweep(cx.check_mutation_poisson, per_edge=True),
    "oracle_agreement": _oracle_agreement,
}


def run_suite(name: str, params: Mapping[str, Any] | None = None, seed: int = 0) -> SuiteReport:
    """Run one suite; the same (name, params, seed) always gives the same
    trials, failures and notes."""
    resolved = _resolve(name, params)
    report = SuiteReport(suite=name, params=resolved, seed=seed, trials=0)
    rng = random.Random(seed)
    start = time.perf_counter()
    _RUNNERS[name](resolved, rng, report)
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report
