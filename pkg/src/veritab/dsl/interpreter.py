"""Program type checking and bottom-up execution over a table."""
from __future__ import annotations

from dataclasses import dataclass

from veritab.errors import ArgumentTypeMismatch, DivergentValue, UnknownFunction
from veritab.table import Table, View
from veritab.dsl.catalog import catalog
from veritab.dsl.program import Call, ColRef, Expr, NumLit, Program, StrLit, TableRef
from veritab.dsl.values import TypedValue, ValType, type_of


@dataclass(frozen=True)
class TypeIssue:
    path: tuple[int, ...]   # child indices from the root to the offending node
    message: str

    def __str__(self):
        where = "root" if not self.path else "arg " + ".".join(map(str, self.path))
        return f"{where}: {self.message}"


def _static_type(node: Expr) -> ValType:
    if isinstance(node, TableRef):
        return ValType.VIEW
    if isinstance(node, NumLit):
        return ValType.NUM
    if isinstance(node, StrLit):
        return ValType.STR
    if isinstance(node, ColRef):
        return ValType.COL
    fdef = catalog().get(node.name)
    if fdef is None:
        return ValType.VAL  # reported separately by the walk
    return fdef.return_type


def type_check(program: Program) -> TypeIssue | None:
    """None when every node satisfies its signature, else the first issue."""
    return _check(program.root, ())


def _check(node: Expr, path: tuple[int, ...]) -> TypeIssue | None:
    if not isinstance(node, Call):
        return None
    fdef = catalog().get(node.name)
    if fdef is None:
        return TypeIssue(path, f"unknown function {node.name!r}")
    if len(node.args) != fdef.arity:
        return TypeIssue(path, f"{node.name} expects {fdef.arity} args, got {len(node.args)}")
    for i, (arg, want) in enumerate(zip(node.args, fdef.arg_types)):
        got = _static_type(arg)
        if not want.accepts(got):
            return TypeIssue(path + (i,), f"{node.name} arg {i} wants {want.value}, got {got.value}")
        issue = _check(arg, path + (i,))
        if issue is not None:
            return issue
    return None


def execute(program: Program, table: Table) -> TypedValue:
    """Evaluate bottom-up; pure with respect to the table.

    The program must be well-typed (enforced). Raises ExecutionError
    subclasses when the program's semantics are undefined on this table
    (each aborts this program only) and UnknownFunction/UnknownColumn
    on catalog or schema misses.
    """
    issue = type_check(program)
    if issue is not None:
        raise ArgumentTypeMismatch(str(issue))
    value = _eval(program.root, table)
    tag = type_of(value)
    if tag is ValType.NUM and value != value:
        raise DivergentValue("NaN result")
    return TypedValue(tag, value)


_RUNTIME_OK = {
    ValType.NUM: lambda v: isinstance(v, float) and not isinstance(v, bool),
    ValType.STR: lambda v: isinstance(v, str),
    ValType.BOOL: lambda v: isinstance(v, bool),
    ValType.VIEW: lambda v: isinstance(v, View),
    ValType.COL: lambda v: isinstance(v, int) and not isinstance(v, bool),
    ValType.VAL: lambda v: isinstance(v, (float, str)) and not isinstance(v, bool),
}


def _eval(node: Expr, table: Table):
    if isinstance(node, TableRef):
        return table.view()
    if isinstance(node, NumLit):
        return node.value
    if isinstance(node, StrLit):
        return node.value
    if isinstance(node, ColRef):
        return table.column_index(node.name)
    fdef = catalog().get(node.name)
    if fdef is None:
        raise UnknownFunction(node.name)
    args = [_eval(a, table) for a in node.args]
    # closes the static/dynamic gap left by VAL-returning functions
    for i, (arg, want) in enumerate(zip(args, fdef.arg_types)):
        if not _RUNTIME_OK[want](arg):
            raise ArgumentTypeMismatch(
                f"{node.name} arg {i}: runtime value does not fit {want.value}")
    return fdef.semantics(*args)
