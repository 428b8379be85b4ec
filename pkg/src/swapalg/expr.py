"""Expression language for building and evaluating ring elements.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := INT ('/' INT)? | 'p(' ID ',' ID ')'
            | 'cr(' ID ',' ID ',' ID ',' ID ')'
            | 'det(' '[' IDs ']' ',' '[' IDs ']' ')'
            | 'br(' expr ',' expr ')' | '-' factor | '(' expr ')'
    ID     := [A-Za-z][A-Za-z0-9_]*

``INT '/' INT`` is always read as one rational literal, so ``p(x,y)/1/2``
divides by one half.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from swapalg.core_ring import PointSet, SwapFraction, SwapPoly, pair
from swapalg.cross_ratio import cross_fraction
from swapalg.errors import (
    DenominatorVanishesInZn,
    DivisionByZero,
    IllegalCrossFraction,
    ParseError,
)
from swapalg.rank_reduction import (
    DeterminantSpec,
    ModelPoly,
    _check_rank,
    determinant,
    is_zero_Zn,
    normal_form_Zn,
)
from swapalg.swap_bracket import bracket_fraction, bracket_poly

# -- syntax tree ---------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Pair:
    x: str
    y: str


@dataclass(frozen=True)
class Cr:
    x: str
    y: str
    z: str
    t: str


@dataclass(frozen=True)
class Det:
    xs: Tuple[str, ...]
    ys: Tuple[str, ...]


@dataclass(frozen=True)
class Br:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Pair, Cr, Det, Br, Neg, BinOp]


# -- tokens ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<id>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/(),\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str  # int | id | op | end
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(offset):
        line = max(i for i, s in enumerate(line_starts) if s <= offset)
        return line + 1, offset - line_starts[line] + 1

    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            tokens.append(Token("end", "", *where(pos)))
            return tokens
        m = _TOKEN.match(text, pos)
        if not m:
            line, col = where(pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), *where(start)))
        pos = m.end()


# -- parser ------------------------------------------------------------------------

_CALLS = {"p", "cr", "det", "br"}


class _Parser:
    def __init__(self, text: str, points: Optional[PointSet]):
        self.tokens = tokenize(text)
        self.i = 0
        self.points = points

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.fail(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "id":
            self.fail("expected a point name")
        self.i += 1
        if self.points is not None:
            self.points.index(tok.text)
        return tok.text

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail("unexpected trailing input")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            num = int(tok.text)
            if self.tok.text == "/" and self.peek().kind == "int":
                self.i += 1
                den_tok = self.tok
                self.i += 1
                if int(den_tok.text) == 0:
                    raise ParseError("zero denominator in rational literal", den_tok.line, den_tok.column)
                return Num(Fraction(num, int(den_tok.text)))
            return Num(Fraction(num))
        if tok.kind == "op" and tok.text == "-":
            self.i += 1
            return Neg(self.factor())
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "id" and tok.text in _CALLS and self.peek().text == "(":
            return self.call()
        if tok.kind == "id":
            self.fail("a bare name is not an expression; write p(x,y)")
        self.fail("expected a number, p(..), cr(..), det(..), br(..), '-' or '('")

    def call(self) -> Expr:
        name_tok = self.tok
        name = name_tok.text
        self.i += 1
        self.expect("(")
        if name == "p":
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            return Pair(x, y)
        if name == "cr":
            args = [self.ident()]
            for _ in range(3):
                self.expect(",")
                args.append(self.ident())
            self.expect(")")
            x, y, z, t = args
            if x == t or y == z:
                raise IllegalCrossFraction(f"cr({x},{y},{z},{t}) needs x != t and y != z")
            return Cr(x, y, z, t)
        if name == "det":
            xs = self.id_list()
            self.expect(",")
            ys_tok = self.tok
            ys = self.id_list()
            self.expect(")")
            if len(xs) != len(ys):
                raise ParseError(f"det needs lists of equal length, got {len(xs)} and {len(ys)}",
                                 ys_tok.line, ys_tok.column)
            return Det(tuple(xs), tuple(ys))
        left = self.expr()
        self.expect(",")
        right = self.expr()
        self.expect(")")
        return Br(left, right)

    def id_list(self) -> List[str]:
        self.expect("[")
        if self.tok.text == "]":
            self.fail("expected a point name")
        out = [self.ident()]
        while self.tok.text == ",":
            self.i += 1
            out.append(self.ident())
        self.expect("]")
        return out


def parse_expr(text: str, points: Optional[PointSet] = None) -> Expr:
    """Parse ``text``; with ``points`` every name is checked against it."""
    if not text.strip():
        raise ParseError("empty expression", 1, 1)
    return _Parser(text, points).parse()


# -- printer -----------------------------------------------------------------------


def _num_text(v: Fraction) -> str:
    if v < 0:
        return f"(-{_num_text(-v)})"
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _show(e: Expr) -> Tuple[str, int, bool]:
    """(text, precedence, ends with a bare integer literal)."""
    if isinstance(e, Num):
        text = _num_text(e.value)
        return text, 3, e.value >= 0 and e.value.denominator == 1
    if isinstance(e, Pair):
        return f"p({e.x},{e.y})", 3, False
    if isinstance(e, Cr):
        return f"cr({e.x},{e.y},{e.z},{e.t})", 3, False
    if isinstance(e, Det):
        return f"det([{','.join(e.xs)}],[{','.join(e.ys)}])", 3, False
    if isinstance(e, Br):
        return f"br({to_text(e.left)},{to_text(e.right)})", 3, False
    if isinstance(e, Neg):
        text, prec, tail = _show(e.operand)
        if prec < 3:
            return f"-({text})", 3, False
        return f"-{text}", 3, tail
    if isinstance(e, BinOp):
        prec = 1 if e.op in "+-" else 2
        lt, lp, ltail = _show(e.left)
        rt, rp, rtail = _show(e.right)
        if lp < prec:
            lt, ltail = f"({lt})", False
        if rp <= prec:
            rt, rtail = f"({rt})", False
        if e.op == "/" and ltail and rt[0].isdigit():
            # keep "a/b" from fusing into one literal
            lt = f"({lt})"
        sep = f" {e.op} " if prec == 1 else e.op
        return f"{lt}{sep}{rt}", prec, rtail
    raise TypeError(f"not an expression: {e!r}")


def to_text(e: Expr) -> str:
    """Canonical text; ``parse_expr(to_text(e)) == e``."""
    return _show(e)[0]


# -- evaluation ----------------------------------------------------------------------

Value = Union[SwapPoly, SwapFraction]


def simplify_value(v: Value) -> Value:
    """Collapse fractions with a zero numerator or a constant denominator."""
    if isinstance(v, SwapFraction) and v.num.is_zero():
        return v.num
    if isinstance(v, SwapFraction) and v.den.is_constant():
        return v.num.scale(1 / v.den.constant_term())
    return v


def _denominator_guard(v: Value, rank: Optional[int]):
    if rank is not None and isinstance(v, SwapFraction) and not v.den.is_constant():
        if is_zero_Zn(v.den, rank, prefilter=True):
            raise DenominatorVanishesInZn(f"denominator {v.den} vanishes in Z_{rank}")


def evaluate(e: Expr, points: PointSet, rank: Optional[int] = None) -> Value:
    """Evaluate bottom-up in Z(P) or its fraction ring.

    With ``rank`` set, every fraction formed along the way must have a
    denominator that stays nonzero in Z_rank(P).
    """
    if rank is not None:
        _check_rank(rank)

    def go(node: Expr) -> Value:
        if isinstance(node, Num):
            return SwapPoly.constant(points, node.value)
        if isinstance(node, Pair):
            return pair(points, node.x, node.y)
        if isinstance(node, Cr):
            v = cross_fraction(points, node.x, node.y, node.z, node.t).value
            _denominator_guard(v, rank)
            return v
        if isinstance(node, Det):
            return determinant(DeterminantSpec(points, node.xs, node.ys))
        if isinstance(node, Br):
            f, g = go(node.left), go(node.right)
            if isinstance(f, SwapPoly) and isinstance(g, SwapPoly):
                return bracket_poly(f, g)
            return simplify_value(bracket_fraction(f, g))
        if isinstance(node, Neg):
            return -go(node.operand)
        f, g = go(node.left), go(node.right)
        if node.op == "+":
            return simplify_value(f + g)
        if node.op == "-":
            return simplify_value(f - g)
        if node.op == "*":
            return simplify_value(f * g)
        if (isinstance(g, SwapPoly) and g.is_zero()) or (isinstance(g, SwapFraction) and g.num.is_zero()):
            raise DivisionByZero(f"division by zero in {to_text(node)}")
        v = f / g
        _denominator_guard(v, rank)
        return simplify_value(v)

    return go(e)


@dataclass
class EvalResult:
    """Value of an expression, plus its rank-n image when a rank is given."""

    value: Value
    rank: Optional[int] = None
    is_zero: Optional[bool] = None
    numerator_nf: Optional[ModelPoly] = None
    denominator_nf: Optional[ModelPoly] = None

    @property
    def numerator(self) -> SwapPoly:
        return self.value.num if isinstance(self.value, SwapFraction) else self.value

    @property
    def denominator(self) -> SwapPoly:
        return self.value.den if isinstance(self.value, SwapFraction) else SwapPoly.one(self.value.points)

    def lines(self) -> List[str]:
        out = [f"value: {self.value}"]
        if self.rank is not None:
            out.append(f"zero in Z_{self.rank}: {str(self.is_zero).lower()}")
            out.append(f"numerator normal form: {self.numerator_nf}")
            out.append(f"denominator normal form: {self.denominator_nf}")
        else:
            out.append(f"zero: {str(self.value == 0).lower()}")
        return out


def eval_expr(e: Union[Expr, str], points: PointSet, rank: Optional[int] = None) -> EvalResult:
    """Parse if needed, evaluate, and in rank mode reduce numerator and
    denominator to model normal forms."""
    if isinstance(e, str):
        e = parse_expr(e, points)
    value = evaluate(e, points, rank)
    result = EvalResult(value, rank)
    if rank is not None:
        result.numerator_nf = normal_form_Zn(result.numerator, rank)
        result.denominator_nf = normal_form_Zn(result.denominator, rank)
        result.is_zero = result.numerator_nf.is_zero()
    return result
