"""Surface syntax for super-polynomials: a small precedence-climbing parser
and the canonical printer.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" ["-"] INT)?
    atom    := NUMBER | SYMBOL | "(" expr ")"
    SYMBOL  := i | lambda | hbar | x<k> | p<k> | y<k> | psi<k>

Negative exponents are accepted only on ``lambda``/``hbar``.  Division is
allowed by a nonzero scalar (optionally times a power of the parameter).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .superalgebra import KINDS, GaussianRational, I, WeylElement

__all__ = [
    "ParseError",
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Pow",
    "parse",
    "evaluate",
    "parse_element",
    "print_canonical",
    "format_monomial",
]


class ParseError(ValueError):
    """Lexical, syntactic or semantic error with a source position."""

    def __init__(self, message, line=1, column=1, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


# -- AST ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Tuple[int, int] = (1, 1)


@dataclass(frozen=True)
class Sym:
    name: str  # "i", "lambda", "hbar", "x", "p", "y", "psi"
    index: int = 0  # 1-based for indexed variables
    pos: Tuple[int, int] = (1, 1)

    def __str__(self):
        return f"{self.name}{self.index}" if self.index else self.name


@dataclass(frozen=True)
class Neg:
    operand: "Expression"
    pos: Tuple[int, int] = (1, 1)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expression"
    right: "Expression"
    pos: Tuple[int, int] = (1, 1)


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int
    pos: Tuple[int, int] = (1, 1)


Expression = Union[Num, Sym, Neg, BinOp, Pow]


# -- lexer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>[0-9]+)
  | (?P<sym>psi[0-9]+|lambda|hbar|[xpy][0-9]+|i(?![A-Za-z0-9_]))
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str  # num, sym, op, eof
    text: str
    line: int
    col: int


def _lex(src: str) -> List[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        col = pos - line_start + 1
        if not m or m.end() == pos:
            if src[pos].isalpha():
                word = re.match(r"[A-Za-z0-9_]+", src[pos:]).group(0)
                raise ParseError(f"unknown symbol {word!r}", line, col)
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group(kind)
        if kind == "sym":
            end = m.end()
            if end < len(src) and (src[end].isalnum() or src[end] == "_"):
                word = re.match(r"[A-Za-z0-9_]+", src[pos:]).group(0)
                raise ParseError(f"unknown symbol {word!r}", line, col)
        if kind == "ws":
            for k, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            toks.append(_Tok(kind, text, line, col))
        pos = m.end()
    col = pos - line_start + 1
    toks.append(_Tok("eof", "", line, col))
    return toks


_ATOM_START = ("NUMBER", "SYMBOL", "(", "-")


class _Parser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _error(self, message, expected=()):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{message}, found {found}", t.line, t.col, expected)

    def parse(self) -> Expression:
        if self.tok.kind == "eof":
            self._error("empty expression", _ATOM_START)
        node = self.expr()
        if self.tok.kind != "eof":
            self._error("unexpected token", ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            t = self._advance()
            node = BinOp(t.text, node, self.term(), (t.line, t.col))
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            t = self._advance()
            node = BinOp(t.text, node, self.unary(), (t.line, t.col))
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            t = self._advance()
            return Neg(self.unary(), (t.line, t.col))
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            t = self._advance()
            negative = False
            if self.tok.kind == "op" and self.tok.text == "-":
                self._advance()
                negative = True
            if self.tok.kind != "num":
                self._error("exponent must be an integer literal", ("INTEGER",))
            n = int(self._advance().text)
            if negative:
                n = -n
            if n < 0 and not (isinstance(base, Sym) and base.name in ("lambda", "hbar")):
                raise ParseError(
                    "negative exponent on a non-parameter symbol", t.line, t.col
                )
            if isinstance(base, Sym) and base.name == "psi" and n >= 2:
                raise ParseError(f"odd variable {base} squared", t.line, t.col)
            return Pow(base, n, (t.line, t.col))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Num(Fraction(int(t.text)), (t.line, t.col))
        if t.kind == "sym":
            self._advance()
            m = re.match(r"^(psi|x|p|y)([0-9]+)$", t.text)
            if m:
                idx = int(m.group(2))
                if idx < 1:
                    raise ParseError(f"variable index must be >= 1 in {t.text!r}", t.line, t.col)
                return Sym(m.group(1), idx, (t.line, t.col))
            return Sym(t.text, 0, (t.line, t.col))
        if t.kind == "op" and t.text == "(":
            self._advance()
            node = self.expr()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self._error("unbalanced parenthesis", (")", "+", "-", "*", "/", "^"))
            self._advance()
            return node
        self._error("expected an operand", _ATOM_START)


def parse(src: str) -> Expression:
    """Parse ``src`` into an expression tree."""
    return _Parser(src).parse()


# -- evaluation -----------------------------------------------------------


def _params_in(node) -> set:
    if isinstance(node, Sym):
        return {node.name} if node.name in ("lambda", "hbar") else set()
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return _params_in(node.operand)
    if isinstance(node, Pow):
        return _params_in(node.base)
    return _params_in(node.left) | _params_in(node.right)


def _first_sym(node, names):
    if isinstance(node, Sym):
        return node if node.name in names else None
    if isinstance(node, Num):
        return None
    if isinstance(node, Neg):
        return _first_sym(node.operand, names)
    if isinstance(node, Pow):
        return _first_sym(node.base, names)
    return _first_sym(node.left, names) or _first_sym(node.right, names)


def evaluate(node: Expression, dim: int, order=None, param: Optional[str] = None) -> WeylElement:
    """Evaluate an expression tree to an element of dimension ``dim``."""
    used = _params_in(node)
    if len(used) > 1:
        s = _first_sym(node, {"hbar"})
        raise ParseError("cannot mix lambda and hbar in one expression", *s.pos)
    if used:
        param = used.pop()
    elif param is None:
        param = "hbar"
    return _eval(node, dim, order, param)


def _eval(node, dim, order, param) -> WeylElement:
    if isinstance(node, Num):
        return WeylElement.const(node.value, dim, order, param)
    if isinstance(node, Sym):
        if node.name == "i":
            return WeylElement.const(I, dim, order, param)
        if node.name in ("lambda", "hbar"):
            return WeylElement.parameter(dim, 1, param, order)
        if node.index > dim:
            raise ParseError(f"index of {node} exceeds dimension {dim}", *node.pos)
        return WeylElement.variable(f"{node.name}{node.index}", dim, order, param)
    if isinstance(node, Neg):
        return -_eval(node.operand, dim, order, param)
    if isinstance(node, Pow):
        if node.exponent < 0:
            return WeylElement.parameter(dim, node.exponent, param, order)
        return _eval(node.base, dim, order, param) ** node.exponent
    left = _eval(node.left, dim, order, param)
    right = _eval(node.right, dim, order, param)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    # division by an invertible scalar monomial
    if len(right.terms) != 1:
        raise ParseError("division only by a nonzero scalar or parameter monomial", *node.pos)
    ((exps, psi, h), c), = right.terms.items()
    if any(exps) or psi:
        raise ParseError("division only by a nonzero scalar or parameter monomial", *node.pos)
    return left.scale(1 / c, -h)


def parse_element(src: str, dim: int, order=None, param: Optional[str] = None) -> WeylElement:
    """Parse and evaluate in one step."""
    return evaluate(parse(src), dim, order, param)


# -- printing -------------------------------------------------------------


def _var_names(dim):
    return [f"{KINDS[k]}{a + 1}" for k in range(3) for a in range(dim)]


def format_monomial(key, dim, param="hbar") -> str:
    exps, psi, h = key
    parts = []
    for name, n in zip(_var_names(dim), exps):
        if n == 1:
            parts.append(name)
        elif n:
            parts.append(f"{name}^{n}")
    for a in range(dim):
        if psi >> a & 1:
            parts.append(f"psi{a + 1}")
    if h == 1:
        parts.append(param)
    elif h:
        parts.append(f"{param}^{h}")
    return "*".join(parts)


def _format_term(c: GaussianRational, mono: str) -> str:
    if not c.im:
        r = c.re
        if not mono:
            return str(r)
        if r == 1:
            return mono
        if r == -1:
            return "-" + mono
        return f"{r}*{mono}"
    if not c.re:
        r = c.im
        if r == 1:
            s = "i"
        elif r == -1:
            s = "-i"
        else:
            s = f"{r}*i"
        return f"{s}*{mono}" if mono else s
    sign = "-" if c.im < 0 else "+"
    mag = abs(c.im)
    imag = "i" if mag == 1 else f"{mag}*i"
    s = f"({c.re} {sign} {imag})"
    return f"{s}*{mono}" if mono else s


def term_sort_key(key, dim):
    exps, psi, h = key
    degree = sum(exps) + bin(psi).count("1")
    psi_slots = tuple(-a for a in range(dim) if psi >> a & 1)
    return (-degree, tuple(-e for e in exps), psi_slots, -h)


def print_canonical(e: WeylElement) -> str:
    """Deterministic graded-lex rendering; ``parse`` inverts it."""
    if not e.terms:
        return "0"
    keys = sorted(e.terms, key=lambda k: term_sort_key(k, e.dim))
    out = []
    for n, key in enumerate(keys):
        s = _format_term(e.terms[key], format_monomial(key, e.dim, e.param))
        if n == 0:
            out.append(s)
        elif s.startswith("-"):
            out.append(" - " + s[1:])
        else:
            out.append(" + " + s)
    return "".join(out)
