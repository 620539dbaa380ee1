from veritab.dsl.catalog import ALWAYS_ON, FunctionDef, catalog, lookup
from veritab.dsl.interpreter import TypeIssue, execute, type_check
from veritab.dsl.program import (
    Call,
    ColRef,
    Expr,
    NumLit,
    Program,
    StrLit,
    TableRef,
    parse_trace,
)
from veritab.dsl.values import TypedValue, ValType, format_num, num_close, type_of

__all__ = [
    "ALWAYS_ON", "Call", "ColRef", "Expr", "FunctionDef", "NumLit", "Program",
    "StrLit", "TableRef", "TypeIssue", "TypedValue", "ValType", "catalog",
    "execute", "format_num", "lookup", "num_close", "parse_trace",
    "type_check", "type_of",
]
