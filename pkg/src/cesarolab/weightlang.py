"""A small expression language for weight formulas in the variables ``i`` and ``n``.

Weight families are written as ``log a_n(i)``, e.g. ``i*n*exp(i*n)``.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          # right-associative
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

``^`` binds tighter than unary minus, so ``-2^2`` is ``-(2^2)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .xreal import XArray

VARIABLES = ("i", "n")
FUNCTIONS = ("exp", "log", "loglog")
BUILTIN_SEQUENCES = ("identity", "log", "loglog")


class WeightLangError(ValueError):
    pass


class WeightSyntaxError(WeightLangError):
    def __init__(self, message: str, offset: int, expected: Sequence[str] = ()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at byte {offset}{detail}")


class UnknownIdentifierError(WeightLangError):
    def __init__(self, name: str, offset: int, valid: Sequence[str]):
        self.name = name
        self.offset = offset
        self.valid = tuple(sorted(valid))
        super().__init__(f"unknown identifier {name!r} at byte {offset}; valid names: "
                         + ", ".join(self.valid))


class WeightDomainError(WeightLangError):
    def __init__(self, message: str, subexpr: "Node", index=None):
        self.subexpr = subexpr
        self.index = index
        where = f" at i={index}" if index is not None else ""
        super().__init__(f"{message} in {pretty(subexpr)}{where}")


# --------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # neg | exp | log | loglog
    arg: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # add | sub | mul | div | pow
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Const, Var, Param, Unary, Binary, Call]
WeightExpr = Node

_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}
_OPNAME = {v: k for k, v in _SYMBOL.items()}


def pretty(node: Node) -> str:
    """Fully parenthesised source text that parses back to the same tree."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, (Var, Param)):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-({pretty(node.arg)}))"
        return f"{node.op}({pretty(node.arg)})"
    if isinstance(node, Binary):
        return f"({pretty(node.left)} {_SYMBOL[node.op]} {pretty(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({pretty(node.arg)})"
    raise TypeError(node)


def parameters(node: Node) -> set:
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, (Unary, Call)):
        return parameters(node.arg)
    if isinstance(node, Binary):
        return parameters(node.left) | parameters(node.right)
    return set()


# ------------------------------------------------------------------ parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(source: str):
    tokens = []
    pos = 0
    raw = source.encode("utf-8")
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            offset = len(source[:pos].encode("utf-8"))
            raise WeightSyntaxError(f"unexpected character {source[pos]!r}", offset,
                                    ("number", "identifier", "operator"))
        kind = m.lastgroup
        if kind != "ws":
            offset = len(source[:pos].encode("utf-8"))
            tokens.append((kind, m.group(), offset))
        pos = m.end()
    tokens.append(("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, source, params, sequences):
        self.tokens = _tokenize(source)
        self.k = 0
        self.params = set(params)
        self.sequences = set(sequences) | set(BUILTIN_SEQUENCES)

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, text):
        kind, value, offset = self.peek()
        if value != text or kind not in ("op",):
            raise WeightSyntaxError(f"unexpected {value or 'end of input'!r}", offset, (text,))
        self.take()

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = _OPNAME[self.take()[1]]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = _OPNAME[self.take()[1]]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Binary("pow", base, self.unary())
        return base

    def atom(self):
        kind, value, offset = self.take()
        if kind == "number":
            return Const(float(value))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                if value in FUNCTIONS:
                    return Unary(value, arg)
                if value in self.sequences:
                    return Call(value, arg)
                raise UnknownIdentifierError(value, offset, set(FUNCTIONS) | self.sequences)
            if value in VARIABLES:
                return Var(value)
            if value in self.params:
                return Param(value)
            raise UnknownIdentifierError(value, offset, set(VARIABLES) | self.params)
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise WeightSyntaxError(f"unexpected {value or 'end of input'!r}", offset,
                                ("number", "identifier", "(", "-"))


def parse(source: str, params: Sequence[str] = (), sequences: Sequence[str] = ()) -> Node:
    """Parse a weight formula.

    ``params`` lists the parameter names the formula may reference and
    ``sequences`` the names of user sequences callable as ``name(expr)``.
    """
    p = _Parser(source, params, sequences)
    if p.peek()[0] == "end":
        raise WeightSyntaxError("empty expression", 0, ("number", "identifier", "(", "-"))
    node = p.expr()
    kind, value, offset = p.peek()
    if kind != "end":
        raise WeightSyntaxError(f"unexpected {value!r}", offset, ("+", "-", "*", "/", "^", "end"))
    return node


# -------------------------------------------------------------- evaluation

def evaluate_x(node: Node, i, n, params: Mapping[str, float] | None = None,
               sequences: Mapping[str, object] | None = None) -> XArray:
    """Vectorised evaluation over an array of ``i`` values in extended range.

    ``i`` may be an :class:`XArray` (e.g. for indices like ``exp(2**30)``) or
    anything convertible to a float array.
    """
    params = dict(params or {})
    sequences = dict(sequences or {})
    ix = i if isinstance(i, XArray) else XArray.from_float(np.atleast_1d(np.asarray(i, float)))
    nx = XArray.from_float(np.full(ix.shape, float(n)))

    def index_of(mask):
        if mask.ndim == 0 or not np.any(mask):
            return None
        k = int(np.argmax(mask))
        v = ix.to_float()[k]
        return int(v) if math.isfinite(v) and v == int(v) else v

    def ev(node):
        if isinstance(node, Const):
            return XArray.from_float(np.full(ix.shape, node.value))
        if isinstance(node, Var):
            return ix if node.name == "i" else nx
        if isinstance(node, Param):
            if node.name not in params:
                raise WeightDomainError(f"unbound parameter {node.name!r}", node)
            return XArray.from_float(np.full(ix.shape, float(params[node.name])))
        if isinstance(node, Unary):
            a = ev(node.arg)
            if node.op == "neg":
                return -a
            if node.op == "exp":
                return a.exp()
            bad = (a.sgn <= 0) & ~a.undetermined
            if np.any(bad):
                raise WeightDomainError("log of non-positive value", node.arg, index_of(bad))
            la = a.log()
            if node.op == "log":
                return la
            bad = (la.sgn <= 0) & ~la.undetermined
            if np.any(bad):
                raise WeightDomainError("loglog needs argument > 1", node.arg, index_of(bad))
            return la.log()
        if isinstance(node, Binary):
            a, b = ev(node.left), ev(node.right)
            if node.op == "add":
                return a + b
            if node.op == "sub":
                return a - b
            if node.op == "mul":
                return a * b
            if node.op == "div":
                bad = (b.sgn == 0)
                if np.any(bad):
                    raise WeightDomainError("division by zero", node.right, index_of(bad))
                return a / b
            return _pow(node, a, b, index_of)
        if isinstance(node, Call):
            return _call(node, ev(node.arg), sequences, index_of)
        raise TypeError(node)

    return ev(node)


def _pow(node, a, b, index_of):
    zero_zero = (a.sgn == 0) & (b.sgn == 0)
    if np.any(zero_zero):
        raise WeightDomainError("0^0 is undefined", node, index_of(zero_zero))
    zero_neg = (a.sgn == 0) & (b.sgn < 0)
    if np.any(zero_neg):
        raise WeightDomainError("division by zero (0 to a negative power)", node, index_of(zero_neg))
    with np.errstate(invalid="ignore"):
        integral = np.isfinite(b.val) & (np.round(b.val) == b.val)
    neg_frac = (a.sgn < 0) & ~integral
    if np.any(neg_frac):
        raise WeightDomainError("negative base with non-integer exponent", node, index_of(neg_frac))
    return a.pow(b)


def _call(node, arg, sequences, index_of):
    target = sequences.get(node.name, node.name)
    if isinstance(target, str):
        if target == "identity":
            return arg
        if target in ("log", "loglog"):
            bad = (arg.sgn <= 0) & ~arg.undetermined
            if np.any(bad):
                raise WeightDomainError("log of non-positive value", node.arg, index_of(bad))
            out = arg.log()
            if target == "loglog":
                bad = (out.sgn <= 0) & ~out.undetermined
                if np.any(bad):
                    raise WeightDomainError("loglog needs argument > 1", node.arg, index_of(bad))
                out = out.log()
            return out
        raise WeightDomainError(f"unknown sequence {target!r}", node)
    table = np.asarray(target, dtype=float)
    idx = arg.to_float()
    with np.errstate(invalid="ignore"):
        ok = np.isfinite(idx) & (np.round(idx) == idx) & (idx >= 1) & (idx <= len(table))
    if not np.all(ok):
        raise WeightDomainError(f"index outside table {node.name!r} (length {len(table)})",
                                node, index_of(~ok))
    return XArray.from_float(table[idx.astype(np.int64) - 1])


def evaluate(node: Node, i, n, params: Mapping[str, float] | None = None,
             sequences: Mapping[str, object] | None = None) -> float:
    """Scalar evaluation.  Returns ``+inf`` (``-inf``) when the result overflows."""
    out = evaluate_x(node, [float(i)], n, params, sequences).to_float()[0]
    return float(out)
