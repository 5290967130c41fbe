"""Scalar function DSL: expression parsing, evaluation, and named catalogs.

Functions of one real variable are the currency of the whole package: the
target function f, the weight h, and the deformation map phi are all values
of :class:`FuncDef`.  A FuncDef couples an evaluable source (a parsed
expression tree, a catalog family, or a derived pointwise construction) with
a closed domain interval ``[lo, hi]``; evaluation outside the interval is an
error, never an extrapolation.

Grammar (normative)::

    expr    := term (('+'|'-') term)*
    term    := unary (('*'|'/') unary)*
    unary   := '-' unary | factor
    factor  := atom ('^' factor)?          # right-associative power
    atom    := number | symbol | '(' expr ')' | func '(' expr ')'
    func    in {sqrt, exp, ln, abs}

Precedence is therefore pow > unary minus > mul/div > add/sub.  Numbers are
decimal literals with an optional exponent.  All arithmetic is IEEE double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .errors import (
    CatalogError,
    EvalDomainError,
    ExpressionSyntaxError,
    UnknownSymbolError,
)

__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Expr",
    "FuncDef",
    "parse",
    "infer_variable",
    "to_source",
    "eval_expr",
    "evaluate",
    "catalog",
    "func_from_expr",
    "identity_on",
    "constant_on",
    "CATALOG_FAMILIES",
]


# --------------------------------------------------------------------------
# Expression trees
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg', 'sqrt', 'exp', 'ln', 'abs'
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # '+', '-', '*', '/', '^'
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]

_FUNCS = ("sqrt", "exp", "ln", "abs")


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

_SINGLE = "+-*/^()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, byte_offset) triples; kinds: num, ident, op."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        start = i
        if c in _SINGLE:
            tokens.append(("op", c, _byte_offset(text, start)))
            i += 1
        elif c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            i += 1
            while i < n and (text[i].isdigit() or text[i] == "."):
                i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j + 1
                    while i < n and text[i].isdigit():
                        i += 1
            lexeme = text[start:i]
            try:
                float(lexeme)
            except ValueError:
                raise ExpressionSyntaxError(
                    f"malformed number '{lexeme}'", _byte_offset(text, start)
                ) from None
            tokens.append(("num", lexeme, _byte_offset(text, start)))
        elif c.isalpha() or c == "_":
            i += 1
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("ident", text[start:i], _byte_offset(text, start)))
        else:
            raise ExpressionSyntaxError(
                f"unexpected character '{c}'", _byte_offset(text, start)
            )
    tokens.append(("eof", "", len(text.encode("utf-8"))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


# --------------------------------------------------------------------------
# Recursive-descent parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens, variable):
        self.tokens = tokens
        self.pos = 0
        self.variable = variable

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        kind, lexeme, off = self.peek()
        if kind != "op" or lexeme != text:
            raise ExpressionSyntaxError(f"expected '{text}'", off)
        return self.advance()

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            node = Binary(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            node = Binary(op, node, self.parse_unary())
        return node

    def parse_unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Unary("neg", self.parse_unary())
        return self.parse_factor()

    def parse_factor(self) -> Expr:
        node = self.parse_atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return Binary("^", node, self.parse_factor())
        return node

    def parse_atom(self) -> Expr:
        kind, lexeme, off = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(lexeme))
        if kind == "ident":
            self.advance()
            if lexeme in _FUNCS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return Unary(lexeme, arg)
            if lexeme != self.variable:
                raise UnknownSymbolError(lexeme, off)
            return Var(lexeme)
        if kind == "op" and lexeme == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(
            f"expected number, symbol or '(' but found {lexeme!r}" if lexeme
            else "unexpected end of input", off
        )


def parse(text: str, variable: str) -> Expr:
    """Parse ``text`` into an expression tree over the single ``variable``.

    Raises :class:`ExpressionSyntaxError` (with byte offset) on malformed
    input and :class:`UnknownSymbolError` for identifiers that are neither
    the variable nor one of sqrt/exp/ln/abs.
    """
    parser = _Parser(_tokenize(text), variable)
    node = parser.parse_expr()
    kind, lexeme, off = parser.peek()
    if kind != "eof":
        raise ExpressionSyntaxError(f"trailing input {lexeme!r}", off)
    return node


def infer_variable(text: str) -> str:
    """Return the unique non-function identifier in ``text``.

    Used by scenario loading when a function is given as a bare DSL string.
    Expressions with no symbol default to 'x'; two distinct symbols are an
    error (the DSL is univariate).
    """
    names = []
    for kind, lexeme, off in _tokenize(text):
        if kind == "ident" and lexeme not in _FUNCS and lexeme not in names:
            names.append(lexeme)
    if len(names) > 1:
        raise UnknownSymbolError(names[1], 0)
    return names[0] if names else "x"


# --------------------------------------------------------------------------
# Printer
# --------------------------------------------------------------------------

_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _level(node: Expr) -> int:
    if isinstance(node, Binary):
        return _LEVEL[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return _LEVEL["neg"]
    return 5


def to_source(node: Expr) -> str:
    """Render a tree back to DSL text; reparsing yields an equivalent tree."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            arg = to_source(node.arg)
            if _level(node.arg) < _LEVEL["neg"]:
                arg = f"({arg})"
            return f"-{arg}"
        return f"{node.op}({to_source(node.arg)})"
    left, right = to_source(node.left), to_source(node.right)
    mine = _LEVEL[node.op]
    if node.op == "^":
        # right-associative: parenthesize a pow/neg/lower left child
        if _level(node.left) <= mine:
            left = f"({left})"
        if _level(node.right) < mine:
            right = f"({right})"
    else:
        if _level(node.left) < mine:
            left = f"({left})"
        if _level(node.right) < mine or (
            _level(node.right) == mine and node.op in ("-", "/")
        ):
            right = f"({right})"
    return f"{left}{node.op}{right}"


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _finite(value: float, point: float) -> float:
    if not math.isfinite(value):
        raise EvalDomainError(f"non-finite value {value!r}", point)
    return value


def _pow(base: float, exponent: float, point: float) -> float:
    if base == 0.0 and exponent < 0.0:
        raise EvalDomainError("zero raised to a negative power", point)
    try:
        return math.pow(base, exponent)
    except ValueError:  # negative base, fractional exponent
        raise EvalDomainError(
            f"pow undefined for base {base!r}, exponent {exponent!r}", point
        ) from None
    except OverflowError:
        raise EvalDomainError("pow overflow", point) from None


def eval_expr(node: Expr, value: float) -> float:
    """Evaluate a tree at ``value``; pure, raises EvalDomainError on partial
    operations (sqrt of negative, ln of non-positive, division by zero,
    undefined pow) and on any non-finite intermediate."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return value
    if isinstance(node, Unary):
        arg = eval_expr(node.arg, value)
        if node.op == "neg":
            return -arg
        if node.op == "sqrt":
            if arg < 0.0:
                raise EvalDomainError(f"sqrt of negative {arg!r}", value)
            return math.sqrt(arg)
        if node.op == "exp":
            try:
                return _finite(math.exp(arg), value)
            except OverflowError:
                raise EvalDomainError("exp overflow", value) from None
        if node.op == "ln":
            if arg <= 0.0:
                raise EvalDomainError(f"ln of non-positive {arg!r}", value)
            return math.log(arg)
        if node.op == "abs":
            return abs(arg)
        raise AssertionError(node.op)
    left = eval_expr(node.left, value)
    right = eval_expr(node.right, value)
    if node.op == "+":
        return _finite(left + right, value)
    if node.op == "-":
        return _finite(left - right, value)
    if node.op == "*":
        return _finite(left * right, value)
    if node.op == "/":
        if right == 0.0:
            raise EvalDomainError("division by zero", value)
        return _finite(left / right, value)
    if node.op == "^":
        return _finite(_pow(left, right, value), value)
    raise AssertionError(node.op)


# --------------------------------------------------------------------------
# FuncDef and the named catalog
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExprSource:
    expr: Expr
    variable: str

    def __call__(self, u: float) -> float:
        return eval_expr(self.expr, u)

    @property
    def label(self) -> str:
        return to_source(self.expr)


@dataclass(frozen=True)
class CatalogSource:
    family: str
    params: tuple[float, ...]

    def __call__(self, u: float) -> float:
        return _FAMILY_EVAL[self.family](self.params, u)

    @property
    def label(self) -> str:
        inner = ",".join(repr(p) for p in self.params)
        return f"{self.family}({inner})"


@dataclass(frozen=True)
class DerivedSource:
    """Pointwise construction (sum, scaling, composition, restriction)."""

    fn: Callable[[float], float]
    _label: str

    def __call__(self, u: float) -> float:
        return self.fn(u)

    @property
    def label(self) -> str:
        return self._label


Source = Union[ExprSource, CatalogSource, DerivedSource]

# Domain membership is checked with a few-ulp slack so that blend points such
# as t*x + m*(1-t)*y, which can poke past an endpoint by rounding alone, are
# clamped to the endpoint instead of rejected.  Anything beyond the slack is
# a genuine violation.
_DOMAIN_SLACK_ULPS = 16.0
_EPS = math.ulp(1.0)


@dataclass(frozen=True)
class FuncDef:
    """A scalar function of one variable restricted to a closed interval."""

    source: Source
    domain: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise CatalogError(f"invalid domain [{lo!r}, {hi!r}]")

    @property
    def label(self) -> str:
        return self.source.label

    def __call__(self, u: float) -> float:
        return evaluate(self, u)


def evaluate(f: FuncDef, u: float) -> float:
    """Evaluate ``f`` at ``u``; raises EvalDomainError outside the domain."""
    lo, hi = f.domain
    if not (lo <= u <= hi):
        slack = _DOMAIN_SLACK_ULPS * _EPS * max(1.0, abs(lo), abs(hi))
        if lo - slack <= u < lo:
            u = lo
        elif hi < u <= hi + slack:
            u = hi
        else:
            raise EvalDomainError(
                f"{u!r} outside domain [{lo!r}, {hi!r}] of {f.label}", u
            )
    return f.source(u)


def _eval_identity(params, u):
    return u


def _eval_constant(params, u):
    return params[0]


def _eval_power(params, u):
    if u < 0.0:
        raise EvalDomainError(f"power family undefined below 0 ({u!r})", u)
    return _pow(u, params[0], u)


def _eval_recip_power(params, u):
    if u <= 0.0:
        raise EvalDomainError(f"recip_power undefined at {u!r}", u)
    return _pow(u, -params[0], u)


def _eval_affine(params, u):
    c0, c1 = params
    return c0 + c1 * u


def _eval_poly(params, u):
    # Horner, highest coefficient first in the loop
    acc = 0.0
    for c in reversed(params):
        acc = acc * u + c
    return acc


def _eval_sqrt(params, u):
    if u < 0.0:
        raise EvalDomainError(f"sqrt of negative {u!r}", u)
    return math.sqrt(u)


# family -> (arity check, natural domain, evaluator); arity None = any >= 1
_FAMILY_EVAL = {
    "identity": _eval_identity,
    "constant": _eval_constant,
    "power": _eval_power,
    "recip_power": _eval_recip_power,
    "affine": _eval_affine,
    "poly": _eval_poly,
    "sqrt": _eval_sqrt,
}

_FAMILY_ARITY = {
    "identity": 0,
    "constant": 1,
    "power": 1,
    "recip_power": 1,
    "affine": 2,
    "poly": None,
    "sqrt": 0,
}

_FAMILY_NATURAL_LO = {
    "identity": -math.inf,
    "constant": -math.inf,
    "power": 0.0,
    "recip_power": 0.0,
    "affine": -math.inf,
    "poly": -math.inf,
    "sqrt": 0.0,
}

CATALOG_FAMILIES = tuple(sorted(_FAMILY_EVAL))


def catalog(
    name: str,
    params: tuple[float, ...] | list[float] = (),
    interval: tuple[float, float] = (0.0, 1.0),
) -> FuncDef:
    """Build a FuncDef from a named family.

    Families: identity, constant(c), power(s) = u^s, recip_power(s) = u^(-s),
    affine(c0, c1) = c0 + c1*u, poly(c0, .., cn) with ascending coefficients,
    sqrt.  The natural domain (e.g. [0, inf) for power) is intersected with
    the requested interval.  Parameter combinations are rejected only when
    unevaluable everywhere, so e.g. recip_power(1) on [0, 1] is fine: it is
    evaluated on the open interior only and errors at 0.
    """
    if name not in _FAMILY_EVAL:
        raise CatalogError(
            f"unknown family '{name}'; expected one of {', '.join(CATALOG_FAMILIES)}"
        )
    params = tuple(float(p) for p in params)
    arity = _FAMILY_ARITY[name]
    if arity is None:
        if not params:
            raise CatalogError("poly needs at least one coefficient")
    elif len(params) != arity:
        raise CatalogError(f"{name} takes {arity} parameter(s), got {len(params)}")
    for p in params:
        if not math.isfinite(p):
            raise CatalogError(f"non-finite parameter {p!r} for {name}")
    lo, hi = float(interval[0]), float(interval[1])
    lo = max(lo, _FAMILY_NATURAL_LO[name])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise CatalogError(f"interval [{interval[0]!r}, {interval[1]!r}] must be finite")
    if lo > hi:
        raise CatalogError(
            f"requested interval [{interval[0]!r}, {interval[1]!r}] does not meet "
            f"the natural domain of {name}"
        )
    return FuncDef(CatalogSource(name, params), (lo, hi))


def func_from_expr(
    text: str, variable: str | None = None, interval: tuple[float, float] = (0.0, 1.0)
) -> FuncDef:
    """Parse DSL text into a FuncDef on ``interval``."""
    if variable is None:
        variable = infer_variable(text)
    return FuncDef(ExprSource(parse(text, variable), variable), (float(interval[0]), float(interval[1])))


def identity_on(interval: tuple[float, float]) -> FuncDef:
    return catalog("identity", (), interval)


def constant_on(c: float, interval: tuple[float, float]) -> FuncDef:
    return catalog("constant", (c,), interval)
