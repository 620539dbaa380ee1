"""Program expression trees and the canonical trace grammar.

Trace form (bit-exact, no whitespace emitted):

    expr := NAME '(' expr (',' expr)* ')' | leaf
    leaf := 'T' | 'num:' NUMBER | 'str:' QUOTED | 'col:' (NAME | QUOTED)

Numbers render via format_num (integral floats lose the '.0'); strings
are double-quoted with backslash escapes; column names are quoted only
when they contain a delimiter character. Equal trees serialize to equal
traces and vice versa.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from veritab.errors import TraceSyntaxError
from veritab.dsl.values import format_num, quote_str


@dataclass(frozen=True)
class TableRef:
    """The root view 'T'."""

    def serialize(self) -> str:
        return "T"


@dataclass(frozen=True)
class NumLit:
    value: float

    def serialize(self) -> str:
        return f"num:{format_num(self.value)}"


@dataclass(frozen=True)
class StrLit:
    value: str

    def serialize(self) -> str:
        return f"str:{quote_str(self.value)}"


@dataclass(frozen=True)
class ColRef:
    name: str

    def serialize(self) -> str:
        if any(ch in self.name for ch in ',()"'):
            return f"col:{quote_str(self.name)}"
        return f"col:{self.name}"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]

    def serialize(self) -> str:
        return f"{self.name}({','.join(a.serialize() for a in self.args)})"


Expr = Union[TableRef, NumLit, StrLit, ColRef, Call]


@dataclass(frozen=True)
class Program:
    root: Expr

    @property
    def trace(self) -> str:
        return self.root.serialize()

    @property
    def depth(self) -> int:
        """Number of function applications in the tree."""
        return _count_calls(self.root)

    def function_names(self) -> list[str]:
        """Pre-order list of applied function names."""
        out: list[str] = []
        _collect_names(self.root, out)
        return out

    def __str__(self):
        return self.trace


def _count_calls(node: Expr) -> int:
    if isinstance(node, Call):
        return 1 + sum(_count_calls(a) for a in node.args)
    return 0


def _collect_names(node: Expr, out: list[str]) -> None:
    if isinstance(node, Call):
        out.append(node.name)
        for a in node.args:
            _collect_names(a, out)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise TraceSyntaxError(f"{msg} at offset {self.pos}: {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_expr(self) -> Expr:
        self.skip_ws()
        if self.text.startswith("num:", self.pos):
            self.pos += 4
            return NumLit(self.parse_number())
        if self.text.startswith("str:", self.pos):
            self.pos += 4
            return StrLit(self.parse_quoted())
        if self.text.startswith("col:", self.pos):
            self.pos += 4
            if self.peek() == '"':
                return ColRef(self.parse_quoted())
            return ColRef(self.parse_bare_col())
        name = self.parse_name()
        self.skip_ws()
        if self.peek() == "(":
            self.pos += 1
            args = [self.parse_expr()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                args.append(self.parse_expr())
                self.skip_ws()
            self.expect(")")
            return Call(name, tuple(args))
        if name == "T":
            return TableRef()
        self.error(f"bare identifier {name!r} (only 'T' may stand alone)")

    def parse_name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            self.error("expected a name")
        return self.text[start:self.pos]

    def parse_number(self) -> float:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "+-0123456789.eE":
            self.pos += 1
        try:
            return float(self.text[start:self.pos])
        except ValueError:
            self.error(f"bad number {self.text[start:self.pos]!r}")

    def parse_quoted(self) -> str:
        self.expect('"')
        out = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated string")
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "\\":
                if self.pos >= len(self.text):
                    self.error("dangling escape")
                out.append(self.text[self.pos])
                self.pos += 1
            elif ch == '"':
                return "".join(out)
            else:
                out.append(ch)

    def parse_bare_col(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in ",)":
            self.pos += 1
        name = self.text[start:self.pos].strip()
        if not name:
            self.error("empty column name")
        return name


def parse_trace(text: str) -> Program:
    p = _Parser(text)
    root = p.parse_expr()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing characters")
    return Program(root)
