"""Value and type tags shared by the catalog, interpreter and search."""
from __future__ import annotations

import math
from enum import Enum
from typing import Any, NamedTuple

from veritab.table import View

# numeric equality: relative tolerance for float aggregates, with a
# small absolute floor so differences against zero stay comparable
NUM_REL_TOL = 1e-6
NUM_ABS_TOL = 1e-9


class ValType(Enum):
    NUM = "num"
    STR = "str"
    BOOL = "bool"
    VIEW = "view"
    COL = "col"    # column reference; never lives in a cache
    VAL = "val"    # Num-or-Str: polymorphic slots and hop's return

    def accepts(self, actual: "ValType") -> bool:
        """Whether a slot declared as `self` accepts a child of `actual`."""
        if self is actual:
            return True
        if self is ValType.VAL:
            return actual in (ValType.NUM, ValType.STR, ValType.VAL)
        if actual is ValType.VAL:
            return self in (ValType.NUM, ValType.STR)
        return False


class TypedValue(NamedTuple):
    tag: ValType
    value: Any

    def render(self) -> str:
        if self.tag is ValType.BOOL:
            return "bool:true" if self.value else "bool:false"
        if self.tag is ValType.NUM:
            return f"num:{format_num(self.value)}"
        if self.tag is ValType.STR:
            return f"str:{quote_str(self.value)}"
        v: View = self.value
        return f"view:{v.n_rows}x{v.n_cols} rows={list(v.row_indices)}"


def type_of(value) -> ValType:
    if isinstance(value, bool):
        return ValType.BOOL
    if isinstance(value, float):
        return ValType.NUM
    if isinstance(value, str):
        return ValType.STR
    if isinstance(value, View):
        return ValType.VIEW
    raise TypeError(f"not a DSL value: {value!r}")


def num_close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=NUM_REL_TOL, abs_tol=NUM_ABS_TOL)


def format_num(x: float) -> str:
    """Canonical number rendering: integral floats lose the '.0'."""
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def quote_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
