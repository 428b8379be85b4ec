import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swapalg.cli import main
from swapalg.core_ring import PointSet, SwapFraction, pair
from swapalg.errors import (
    DenominatorVanishesInZn,
    DivisionByZero,
    IllegalCrossFraction,
    ParseError,
    UnknownPoint,
)
from swapalg.expr import BinOp, Br, Cr, Det, Neg, Num, Pair, eval_expr, evaluate, parse_expr, to_text

P = PointSet("xyzt")
NAMES = list(P.names)


def test_cross_fraction_expression():
    e = parse_expr("cr(x,y,z,t)", P)
    assert e == Cr("x", "y", "z", "t")
    via_pairs = parse_expr("p(x,z)*p(y,t)/(p(x,t)*p(y,z))", P)
    assert evaluate(e, P) == evaluate(via_pairs, P)


def test_bracket_node_matches_generator_formula():
    Q = PointSet("rsxy")
    e = parse_expr("br(p(r,x), p(s,y))", Q)
    assert isinstance(e, Br)
    assert evaluate(e, Q) == pair(Q, "r", "y") * pair(Q, "s", "x")


@pytest.mark.parametrize("text,line,column", [
    ("p(x,)", 1, 5),
    ("p(x,y", 1, 6),
    ("p(x,y) +\n  * p(z,t)", 2, 3),
    ("1/0", 1, 3),
    ("p(x,y) $", 1, 8),
    ("det([x,y],[z])", 1, 11),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_expr(text, P)
    assert (info.value.line, info.value.column) == (line, column)


def test_unknown_identifier_and_illegal_cross_fraction():
    with pytest.raises(UnknownPoint):
        parse_expr("p(x,w)", P)
    with pytest.raises(IllegalCrossFraction):
        parse_expr("cr(x,y,z,x)", P)


def test_precedence_and_literals():
    assert parse_expr("1/2*p(x,y)", P) == BinOp("*", Num(Fraction(1, 2)), Pair("x", "y"))
    assert parse_expr("p(x,y)/1/2", P) == BinOp("/", Pair("x", "y"), Num(Fraction(1, 2)))
    assert parse_expr("p(x,y) - p(z,t) - p(y,x)", P) == BinOp(
        "-", BinOp("-", Pair("x", "y"), Pair("z", "t")), Pair("y", "x"))
    assert parse_expr("-p(x,y)*p(z,t)", P) == BinOp("*", Neg(Pair("x", "y")), Pair("z", "t"))


def test_example_bracket_vanishes_in_rank_two():
    result = eval_expr("br(p(x,z), det([x,z,y],[z,x,t]))", P, rank=2)
    assert result.is_zero
    assert result.numerator_nf.is_zero()


def test_normalisation_expression():
    Q = PointSet("acd")
    assert eval_expr("cr(a,a,c,d) - 1", Q).value == 0


def test_vanishing_denominator():
    with pytest.raises(DenominatorVanishesInZn):
        eval_expr("p(x,y)/det([x,z,y],[z,x,t])", P, rank=2)
    # the same fraction is legal in the full ring
    assert isinstance(eval_expr("p(x,y)/det([x,z,y],[z,x,t])", P).value, SwapFraction)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        eval_expr("p(x,y)/(p(x,z) - p(x,z))", P)


# -- printer round trip ------------------------------------------------------------

ids = st.sampled_from(NAMES)
leaves = st.one_of(
    st.builds(Num, st.fractions(min_value=0, max_value=20, max_denominator=7)),
    st.builds(Pair, ids, ids),
    st.tuples(ids, ids, ids, ids).filter(lambda q: q[0] != q[3] and q[1] != q[2]).map(lambda q: Cr(*q)),
    st.integers(1, 3).flatmap(lambda n: st.builds(
        Det, st.tuples(*[ids] * n), st.tuples(*[ids] * n))),
)
exprs = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Neg, kids),
        st.builds(Br, kids, kids),
        st.builds(BinOp, st.sampled_from("+-*/"), kids, kids),
    ),
    max_leaves=8,
)


@settings(max_examples=500, deadline=None)
@given(exprs)
def test_print_then_parse_is_identity(e):
    text = to_text(e)
    assert parse_expr(text, P) == e
    assert to_text(parse_expr(text, P)) == text


def test_integer_quotient_printing():
    e = BinOp("/", Num(Fraction(2)), Num(Fraction(3)))
    assert to_text(e) == "(2)/3"
    assert parse_expr("(2)/3", P) == e


# -- command line ---------------------------------------------------------------------


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_eval(capsys):
    code, out, _ = run(["eval", "--points", "x,y,z,t", "--rank", "2",
                        "br(p(x,z), det([x,z,y],[z,x,t]))"], capsys)
    assert code == 0
    assert "zero in Z_2: true" in out


def test_cli_eval_json(capsys):
    code, out, _ = run(["eval", "--points", "x,y,z,t", "--json", "cr(x,y,z,t)"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["zero"] is False


def test_cli_parse_error_exit_code(capsys):
    code, _, err = run(["eval", "--points", "x,y,z,t", "p(x,)"], capsys)
    assert code == 2
    assert "line 1, column 5" in err


def test_cli_evaluation_failure_exit_code(capsys):
    code, _, err = run(["eval", "--points", "x,y,z,t", "--rank", "2",
                        "p(x,y)/det([x,z,y],[z,x,t])"], capsys)
    assert code == 1
    assert "DenominatorVanishesInZn" in err


def test_cli_bracket_and_reduce(capsys):
    code, out, _ = run(["bracket", "--points", "r,s,x,y", "p(r,x)", "p(s,y)"], capsys)
    assert code == 0 and "value: p(r,y)*p(s,x)" in out
    code, out, _ = run(["reduce", "--rank", "2", "--points", "x,y,z,t",
                        "p(y,z)*p(z,t)*p(t,y) + p(t,z)*p(z,y)*p(y,t)"], capsys)
    assert code == 0 and "normal form: 0" in out


def test_cli_verify(capsys):
    code, out, _ = run(["verify", "nesting", "mutation_poisson", "--trials", "3", "--json"], capsys)
    # mutation_poisson takes no trials parameter
    assert code == 2
    code, out, _ = run(["verify", "nesting", "--trials", "3", "--seed", "4", "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert list(data)[:6] == ["suite", "params", "seed", "trials", "failures", "elapsed_ms"]
    assert data["seed"] == 4 and data["failures"] == []


def test_cli_verify_bad_rank(capsys):
    code, _, err = run(["verify", "domain", "--rank", "1"], capsys)
    assert code == 2 and "rank" in err


def test_cli_cluster(capsys):
    code, out, _ = run(["cluster", "list", "--k", "6"], capsys)
    assert code == 0 and out.startswith("14 triangulations")
    code, out, _ = run(["cluster", "epsilon", "--k", "5", "--edges", "v1v3,v1v4", "--json"], capsys)
    assert json.loads(out)["matrix"] == [[0, 1], [-1, 0]]
    code, out, _ = run(["cluster", "flip", "--k", "4", "--edges", "v1v3", "--edge", "v1v3"], capsys)
    assert code == 0 and "new edge: v2v4" in out
    code, out, _ = run(["cluster", "check", "--k", "5"], capsys)
    assert code == 0 and "PASS" in out
    code, _, err = run(["cluster", "flip", "--k", "5", "--edge", "v2v4"], capsys)
    assert code == 2 and "NotADiagonal" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "swapalg", "cluster", "theta", "--k", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("theta(X_v1v3) = ")
