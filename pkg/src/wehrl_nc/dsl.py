"""A small expression language for single-mode state preparations.

Grammar (whitespace between tokens is ignored)::

    expr      := unary* primitive
    unary     := "D(" num "," num ")" | "S(" num ("," num)? ")" | "A" ("^" uint)?
    primitive := "vac" | "fock(" uint ")" | "coh(" num "," num ")"
               | "thermal(" num ")" | "cat+(" num ")" | "cat-(" num ")"

Operators act right to left: ``A^2 S(0.5) vac`` is ``a^dag^2 S(0.5)|0>``.
Input is treated as bytes, so error offsets are byte offsets.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from . import states as fk
from .errors import NcError, ParseError

_NUMBER = re.compile(rb"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_UINT = re.compile(rb"\d+")
_SPACE = b" \t\r\n\f\v"

UNARY_TOKENS = ("D(", "S(", "A")
PRIMITIVE_TOKENS = ("vac", "fock(", "coh(", "thermal(", "cat+(", "cat-(")
END = "<end>"

# token, node kind, argument slots
_PRIMITIVES = (
    ("vac", "vac", ()),
    ("fock(", "fock", ("uint",)),
    ("coh(", "coh", ("num", "num")),
    ("thermal(", "thermal", ("num",)),
    ("cat+(", "cat+", ("num",)),
    ("cat-(", "cat-", ("num",)),
)


@dataclass(frozen=True)
class Primitive:
    kind: str
    args: tuple = ()
    span: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary:
    """Operator applied to ``child``; ``span`` covers the operator token only."""

    op: str
    args: tuple
    child: "StateExpr"
    span: tuple = field(default=(0, 0), compare=False)


StateExpr = Union[Primitive, Unary]


class _Parser:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip(self):
        while self.pos < len(self.data) and self.data[self.pos] in _SPACE:
            self.pos += 1

    def fail(self, expected):
        self.skip()
        if self.pos >= len(self.data):
            found = "end of input"
        else:
            found = repr(self.data[self.pos : self.pos + 8].decode("utf-8", "replace"))
        wanted = " or ".join(f'"{e}"' if e != END else e for e in expected)
        raise ParseError(f"syntax error at byte {self.pos}: expected {wanted}, found {found}", self.pos, expected)

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.data.startswith(literal.encode(), self.pos)

    def take(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, *literals: str) -> str:
        for lit in literals:
            if self.take(lit):
                return lit
        self.fail(literals)

    def number(self) -> float:
        self.skip()
        m = _NUMBER.match(self.data, self.pos)
        if not m:
            self.fail(("number",))
        value = float(m.group())
        if not math.isfinite(value):
            raise ParseError(f"number out of range at byte {self.pos}", self.pos, ("finite number",))
        self.pos = m.end()
        return value

    def uint(self) -> int:
        self.skip()
        m = _UINT.match(self.data, self.pos)
        if not m:
            self.fail(("unsigned integer",))
        self.pos = m.end()
        return int(m.group())

    def expr(self) -> StateExpr:
        pending = []
        while True:
            self.skip()
            start = self.pos
            if self.take("D("):
                re_ = self.number()
                self.expect(",")
                im = self.number()
                self.expect(")")
                pending.append(("D", (re_, im), (start, self.pos)))
            elif self.take("S("):
                r = self.number()
                args = (r,)
                if self.expect(",", ")") == ",":
                    args = (r, self.number())
                    self.expect(")")
                pending.append(("S", args, (start, self.pos)))
            elif self.take("A"):
                m = self.uint() if self.take("^") else 1
                pending.append(("A", (m,), (start, self.pos)))
            else:
                break
        node = self.primitive()
        for op, args, span in reversed(pending):
            node = Unary(op, args, node, span)
        return node

    def primitive(self) -> Primitive:
        self.skip()
        start = self.pos
        for token, kind, signature in _PRIMITIVES:
            if self.take(token):
                break
        else:
            self.fail(UNARY_TOKENS + PRIMITIVE_TOKENS)
        args = []
        for i, slot in enumerate(signature):
            if i:
                self.expect(",")
            args.append(self.uint() if slot == "uint" else self.number())
        if signature:
            self.expect(")")
        return Primitive(kind, tuple(args), (start, self.pos))


def parse(text: str | bytes) -> StateExpr:
    """Parse a state expression; raises ParseError with a byte offset."""
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    parser = _Parser(data)
    node = parser.expr()
    parser.skip()
    if parser.pos != len(data):
        parser.fail((END,))
    return node


def _num(x: float) -> str:
    return repr(float(x))


def format_expr(expr: StateExpr) -> str:
    """Canonical text for ``expr``; parsing it gives back an equal tree."""
    parts = []
    node = expr
    while isinstance(node, Unary):
        if node.op == "A":
            parts.append("A" if node.args[0] == 1 else f"A^{node.args[0]}")
        else:
            parts.append(f"{node.op}({','.join(_num(a) for a in node.args)})")
        node = node.child
    if node.kind == "vac":
        parts.append("vac")
    elif node.kind == "fock":
        parts.append(f"fock({node.args[0]})")
    else:
        parts.append(f"{node.kind}({','.join(_num(a) for a in node.args)})")
    return " ".join(parts)


def _build_primitive(node: Primitive, dim: int, tail_tol: float):
    kind, args = node.kind, node.args
    if kind == "vac":
        return fk.vacuum(dim, tail_tol)
    if kind == "fock":
        return fk.fock(args[0], dim, tail_tol)
    if kind == "coh":
        return fk.coherent(complex(args[0], args[1]), dim, tail_tol)
    if kind == "thermal":
        return fk.thermal(args[0], dim, tail_tol)
    return fk.cat_state(args[0], "even" if kind == "cat+" else "odd", dim, tail_tol)


def _apply(node: Unary, state, tail_tol: float):
    if node.op == "D":
        return fk.displace(state, complex(*node.args), tail_tol)
    if node.op == "S":
        return fk.squeeze(state, fk.SqueezeParam(*node.args), tail_tol)
    return fk.add_photons(state, node.args[0], tail_tol)


def _evaluate_at(expr: StateExpr, dim: int, tail_tol: float):
    chain = []
    node = expr
    while isinstance(node, Unary):
        chain.append(node)
        node = node.child
    current = node
    try:
        state = _build_primitive(node, dim, tail_tol)
        for current in reversed(chain):
            state = _apply(current, state, tail_tol)
    except NcError as err:
        if err.span is None:
            err.span = current.span
        raise
    return state


def evaluate(expr: StateExpr | str, dim: int | None = None, tail_tol: float = fk.DEFAULT_TAIL_TOL):
    """Build the state described by ``expr``.

    With ``dim=None`` the truncation starts at the default dimension and
    doubles until the tail fits.  Errors carry the span of the failing node.
    """
    if isinstance(expr, (str, bytes)):
        expr = parse(expr)
    if dim is None:
        return fk.build_auto(lambda d: _evaluate_at(expr, d, tail_tol))
    return _evaluate_at(expr, int(dim), tail_tol)
