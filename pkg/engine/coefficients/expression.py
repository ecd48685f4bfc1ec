"""
Coefficient expressions in the variable u.

Grammar (precedence from loose to tight):
    expr   := expr ('+' | '-') expr
            | expr ('*' | '/') expr
            | '-' expr
            | expr '^' expr            (right associative, binds tighter than unary minus)
            | NUMBER | 'u' | FUNC '(' expr [',' expr] ')' | '(' expr ')'
    FUNC   := exp | log | sqrt | pow

A top-down operator precedence parser turns the source into a tree of
symbols; each symbol compiles to a numpy-vectorized closure.
"""
import re
from collections.abc import Callable
from typing import Any, NamedTuple

import numpy as np

from engine.errors import DomainError, ExpressionSyntaxError

Compiled = Callable[[np.ndarray], np.ndarray]

TOKEN_PATTERN = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),])"
    r"|(?P<space>\s+)"
)


class Token(NamedTuple):
    type: str
    value: str | float
    where: int


def tokenize(source: str) -> list[Token]:
    """Split an expression into tokens, recording the offset of each."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(source):
        match = TOKEN_PATTERN.match(source, pos)
        if match is None:
            raise ExpressionSyntaxError("unexpected character", pos, source[pos])
        kind = match.lastgroup
        text = match.group()
        if kind == "num":
            tokens.append(Token("num", float(text), pos))
        elif kind == "name":
            tokens.append(Token("name", text, pos))
        elif kind == "op":
            tokens.append(Token(text, text, pos))
        pos = match.end()
    return tokens


def _power(base: np.ndarray, exponent: np.ndarray) -> np.ndarray:
    base, exponent = np.broadcast_arrays(np.asarray(base, dtype=float), np.asarray(exponent, dtype=float))
    bad = (base < 0) & (exponent != np.round(exponent))
    if np.any(bad):
        raise DomainError("negative base raised to a non-integer power")
    return np.power(base, exponent)


def _log(x: np.ndarray) -> np.ndarray:
    if np.any(np.asarray(x) < 0):
        raise DomainError("log of a negative argument")
    return np.log(x)


def _sqrt(x: np.ndarray) -> np.ndarray:
    if np.any(np.asarray(x) < 0):
        raise DomainError("sqrt of a negative argument")
    return np.sqrt(x)


FUNCTIONS: dict[str, tuple[int, Callable[..., np.ndarray]]] = {
    "exp": (1, np.exp),
    "log": (1, _log),
    "sqrt": (1, _sqrt),
    "pow": (2, _power),
}

BINARY: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": _power,
}


class Symbol:
    id = ""
    lbp = 0

    def __init__(self, parser: "ExpressionParser", token: Token):
        self.parser = parser
        self.token = token
        self.first: Symbol | None = None
        self.second: Symbol | None = None

    def nud(self) -> "Symbol":
        raise ExpressionSyntaxError(self.parser.describe(self.token), self.token.where, str(self.token.value))

    def led(self, left: "Symbol") -> "Symbol":
        raise ExpressionSyntaxError(self.parser.describe(self.token), self.token.where, str(self.token.value))

    def compile(self) -> Compiled:
        raise NotImplementedError


class Number(Symbol):
    def nud(self) -> Symbol:
        return self

    def compile(self) -> Compiled:
        value = float(self.token.value)
        return lambda u: np.full(np.shape(u), value)


class Name(Symbol):
    """The variable u or the head of a function call."""

    def nud(self) -> Symbol:
        name = self.token.value
        if name == "u":
            return self
        if name in FUNCTIONS:
            return FunctionCall(self.parser, self.token).call()
        raise ExpressionSyntaxError(f"unknown name '{name}'", self.token.where, str(name))

    def compile(self) -> Compiled:
        return lambda u: u


class FunctionCall(Symbol):
    def call(self) -> Symbol:
        parser = self.parser
        parser.advance("(")
        self.arguments = [parser.expression(0)]
        while parser.token.id == ",":
            parser.advance(",")
            self.arguments.append(parser.expression(0))
        parser.advance(")")
        arity, _ = FUNCTIONS[self.token.value]
        if len(self.arguments) != arity:
            raise ExpressionSyntaxError(
                f"{self.token.value} takes {arity} argument(s), got {len(self.arguments)}",
                self.token.where,
                str(self.token.value),
            )
        return self

    def compile(self) -> Compiled:
        _, fn = FUNCTIONS[self.token.value]
        compiled = [arg.compile() for arg in self.arguments]
        return lambda u: fn(*(arg(u) for arg in compiled))


class Infix(Symbol):
    right_assoc = False

    def led(self, left: Symbol) -> Symbol:
        self.first = left
        self.second = self.parser.expression(self.lbp - int(self.right_assoc))
        return self

    def compile(self) -> Compiled:
        op = BINARY[self.id]
        a, b = self.first.compile(), self.second.compile()
        return lambda u: op(a(u), b(u))


class Caret(Infix):
    right_assoc = True


class Minus(Infix):
    # Prefix minus binds looser than '^' so -u^2 means -(u^2)
    prefix_rbp = 25

    def nud(self) -> Symbol:
        self.first = self.parser.expression(self.prefix_rbp)
        return self

    def compile(self) -> Compiled:
        if self.second is None:
            operand = self.first.compile()
            return lambda u: np.negative(operand(u))
        return super().compile()


class Group(Symbol):
    def nud(self) -> Symbol:
        expr = self.parser.expression(0)
        self.parser.advance(")")
        return expr


class End(Symbol):
    pass


class ExpressionParser:
    """Top-down operator precedence parser for coefficient expressions."""

    def __init__(self) -> None:
        self.symbol_table: dict[str, type[Symbol]] = {}
        self.source = ""
        self.tokens: list[Token] = []
        self.index = 0
        self.token: Symbol | None = None
        self.define("end", 0, End)
        self.define("num", 0, Number)
        self.define("name", 0, Name)
        self.define("+", 10, Infix)
        self.define("-", 10, Minus)
        self.define("*", 20, Infix)
        self.define("/", 20, Infix)
        self.define("^", 30, Caret)
        self.define("(", 0, Group)
        self.define(")", 0, Symbol)
        self.define(",", 0, Symbol)

    def define(self, sid: str, lbp: int, symbol_class: type[Symbol]) -> None:
        self.symbol_table[sid] = type(symbol_class.__name__, (symbol_class,), {"id": sid, "lbp": lbp})

    def describe(self, token: Token) -> str:
        if token.type == "end":
            return "unexpected end of input"
        return f"unexpected token '{token.value}'"

    def advance(self, expected: str | None = None) -> Symbol:
        current = self.token
        if expected is not None and (current is None or current.id != expected):
            where = current.token.where if current is not None else len(self.source)
            raise ExpressionSyntaxError(f"expected '{expected}'", where, str(current.token.value) if current else "")
        if self.index < len(self.tokens):
            token = self.tokens[self.index]
            self.index += 1
        else:
            token = Token("end", "", len(self.source))
        self.token = self.symbol_table[token.type](self, token)
        return self.token

    def expression(self, rbp: int) -> Symbol:
        symbol = self.token
        self.advance()
        left = symbol.nud()
        while rbp < self.token.lbp:
            symbol = self.token
            self.advance()
            left = symbol.led(left)
        return left

    def parse(self, source: str) -> Symbol:
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0
        self.token = None
        self.advance()
        tree = self.expression(0)
        if self.token.id != "end":
            raise ExpressionSyntaxError(self.describe(self.token.token), self.token.token.where, str(self.token.token.value))
        return tree


class Coefficient:
    """A scalar function of u in [0, 1] compiled from an expression."""

    def __init__(self, source: str):
        self.source = source.strip()
        if not self.source:
            raise ExpressionSyntaxError("empty expression", 0)
        self._compiled = ExpressionParser().parse(self.source).compile()

    def __call__(self, u: Any) -> Any:
        points = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            values = np.broadcast_to(np.asarray(self._compiled(points), dtype=float), points.shape)
        undefined = np.isnan(values)
        if np.any(undefined):
            where = float(points[undefined][0]) if points.ndim else float(points)
            raise DomainError(f"'{self.source}' is undefined at u={where:g}")
        if points.ndim == 0:
            return float(values)
        return np.array(values)

    def __reduce__(self):
        return (Coefficient, (self.source,))

    def __repr__(self) -> str:
        return f"Coefficient({self.source!r})"


def parse_coefficient(expr: str) -> Coefficient:
    """
    Parse an expression in u into a deterministic vectorized function.

    Args:
        expr: Expression text, e.g. "u*(1-u)" or "pow(u, 0.5)"

    Returns:
        Callable coefficient accepting floats or numpy arrays

    Raises:
        ExpressionSyntaxError: If the text is not a valid expression
    """
    return Coefficient(expr)
