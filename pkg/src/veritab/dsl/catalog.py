"""The typed function catalog: every operation a program may apply.

Function families:
  filters             (View, Col, Val|Num|Str) -> View
  aggregates          (View[, Col])            -> Num
  superlative/ordinal (View, Col[, Num])       -> View | Num
  row access          hop / first_row / last_row
  numeric compare     (Num, Num)   -> Bool      arithmetic -> Num
  string compare      (Str, Str)   -> Bool
  logical             and / or / not
  quantifiers         (View, Col, Val|Num)     -> Bool
  cardinality         only / is_not_empty

Semantics notes that matter for search behavior: numeric equality uses
num_close; string comparison is over normalized forms; a non-numeric
cell fails every numeric predicate except "not equal", so filter_eq and
filter_not_eq always partition a view. hop demands exactly one row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from veritab import kernels as K
from veritab.errors import (
    DivergentValue,
    EmptyViewAggregate,
    MultiRowHop,
    NonNumericColumn,
    ValueOutOfRange,
)
from veritab.table import View
from veritab.dsl.values import NUM_ABS_TOL, NUM_REL_TOL, ValType, num_close

V, N, S, B, C, VAL = (ValType.VIEW, ValType.NUM, ValType.STR, ValType.BOOL,
                      ValType.COL, ValType.VAL)


@dataclass(frozen=True)
class FunctionDef:
    name: str
    arg_types: tuple[ValType, ...]
    return_type: ValType
    triggers: frozenset[str]
    semantics: Callable

    @property
    def arity(self) -> int:
        return len(self.arg_types)


def _col_name(view: View, col: int) -> str:
    return view.source.columns[col].name


def _check_agg(code: int, view: View, col: int):
    if code == K.EMPTY:
        raise EmptyViewAggregate("aggregate over a 0-row view")
    if code == K.NON_NUMERIC:
        raise NonNumericColumn(_col_name(view, col))
    if code == K.OUT_OF_RANGE:
        raise ValueOutOfRange("ordinal position outside the view")


def _finite(x: float) -> float:
    if math.isnan(x) or math.isinf(x):
        raise DivergentValue(f"non-finite result {x!r}")
    return x


_NUM_OPS = {"filter_eq": K.OP_EQ, "filter_not_eq": K.OP_NE,
            "filter_greater": K.OP_GT, "filter_less": K.OP_LT,
            "filter_ge": K.OP_GE, "filter_le": K.OP_LE}
_TEXT_MODES = {"filter_eq": K.TEXT_EQ, "filter_not_eq": K.TEXT_NE,
               "filter_str_contains": K.TEXT_CONTAINS}


def _make_filter(name: str):
    num_op = _NUM_OPS.get(name)
    text_mode = _TEXT_MODES.get(name)

    def fn(view: View, col: int, value):
        t = view.source
        if isinstance(value, str):
            rows = K.filter_text(t.col_texts(col), view.row_indices, value, text_mode)
        else:
            rows = K.filter_num(t.col_numbers(col), t.col_numflags(col),
                                view.row_indices, num_op, value,
                                NUM_REL_TOL, NUM_ABS_TOL)
        return View(t, rows, view.col_indices)

    return fn


def _make_quantifier(name: str):
    num_op = _NUM_OPS.get("filter" + name[3:])
    text_mode = _TEXT_MODES.get("filter" + name[3:])

    def fn(view: View, col: int, value):
        t = view.source
        if isinstance(value, str):
            return bool(K.all_text(t.col_texts(col), view.row_indices, value, text_mode))
        return bool(K.all_num(t.col_numbers(col), t.col_numflags(col),
                              view.row_indices, num_op, value,
                              NUM_REL_TOL, NUM_ABS_TOL))

    return fn


def _make_agg(op: int):
    def fn(view: View, col: int):
        t = view.source
        code, val = K.agg_num(t.col_numbers(col), t.col_numflags(col),
                              view.row_indices, op)
        _check_agg(code, view, col)
        return _finite(val)

    return fn


def _make_argext(want_max: bool):
    def fn(view: View, col: int):
        t = view.source
        code, pos = K.arg_ext(t.col_numbers(col), t.col_numflags(col),
                              view.row_indices, want_max)
        _check_agg(code, view, col)
        return View(t, (view.row_indices[pos],), view.col_indices)

    return fn


def _require_ordinal(n: float) -> int:
    if not float(n).is_integer():
        raise ValueOutOfRange(f"ordinal position must be integral, got {n!r}")
    return int(n)


def _make_nth(want_max: bool, as_view: bool):
    def fn(view: View, col: int, n: float):
        t = view.source
        code, val, pos = K.nth_ext(t.col_numbers(col), t.col_numflags(col),
                                   view.row_indices, _require_ordinal(n), want_max)
        _check_agg(code, view, col)
        if as_view:
            return View(t, (view.row_indices[pos],), view.col_indices)
        return _finite(val)

    return fn


def _count(view: View):
    return float(view.n_rows)


def _count_distinct(view: View, col: int):
    return float(K.count_distinct(view.source.col_keys(col), view.row_indices))


def _hop(view: View, col: int):
    if view.n_rows == 0:
        raise EmptyViewAggregate("hop over a 0-row view")
    if view.n_rows > 1:
        raise MultiRowHop(f"hop needs exactly one row, got {view.n_rows}")
    cell = view.source.rows[view.row_indices[0]][col]
    return cell.number if cell.is_number else cell.text


def _first_row(view: View):
    if view.n_rows == 0:
        raise EmptyViewAggregate("first_row over a 0-row view")
    return View(view.source, (view.row_indices[0],), view.col_indices)


def _last_row(view: View):
    if view.n_rows == 0:
        raise EmptyViewAggregate("last_row over a 0-row view")
    return View(view.source, (view.row_indices[-1],), view.col_indices)


def _only(view: View):
    return view.n_rows == 1


def _is_not_empty(view: View):
    return view.n_rows > 0


def _diff(a: float, b: float):
    return _finite(a - b)


def _add(a: float, b: float):
    return _finite(a + b)


_SPECS: list[tuple[str, tuple[ValType, ...], ValType, Callable]] = [
    # filters
    ("filter_eq", (V, C, VAL), V, _make_filter("filter_eq")),
    ("filter_not_eq", (V, C, VAL), V, _make_filter("filter_not_eq")),
    ("filter_greater", (V, C, N), V, _make_filter("filter_greater")),
    ("filter_less", (V, C, N), V, _make_filter("filter_less")),
    ("filter_ge", (V, C, N), V, _make_filter("filter_ge")),
    ("filter_le", (V, C, N), V, _make_filter("filter_le")),
    ("filter_str_contains", (V, C, S), V, _make_filter("filter_str_contains")),
    # aggregates
    ("count", (V,), N, _count),
    ("sum", (V, C), N, _make_agg(K.AGG_SUM)),
    ("avg", (V, C), N, _make_agg(K.AGG_AVG)),
    ("max", (V, C), N, _make_agg(K.AGG_MAX)),
    ("min", (V, C), N, _make_agg(K.AGG_MIN)),
    ("count_distinct", (V, C), N, _count_distinct),
    # superlative / ordinal
    ("argmax", (V, C), V, _make_argext(True)),
    ("argmin", (V, C), V, _make_argext(False)),
    ("nth_argmax", (V, C, N), V, _make_nth(True, as_view=True)),
    ("nth_argmin", (V, C, N), V, _make_nth(False, as_view=True)),
    ("nth_max", (V, C, N), N, _make_nth(True, as_view=False)),
    ("nth_min", (V, C, N), N, _make_nth(False, as_view=False)),
    # row access
    ("hop", (V, C), VAL, _hop),
    ("first_row", (V,), V, _first_row),
    ("last_row", (V,), V, _last_row),
    # numeric compares
    ("eq", (N, N), B, lambda a, b: num_close(a, b)),
    ("not_eq", (N, N), B, lambda a, b: not num_close(a, b)),
    ("greater", (N, N), B, lambda a, b: a > b),
    ("less", (N, N), B, lambda a, b: a < b),
    ("ge", (N, N), B, lambda a, b: a >= b),
    ("le", (N, N), B, lambda a, b: a <= b),
    # arithmetic
    ("diff", (N, N), N, _diff),
    ("add", (N, N), N, _add),
    # string compares
    ("str_eq", (S, S), B, lambda a, b: a == b),
    ("not_str_eq", (S, S), B, lambda a, b: a != b),
    # logical
    ("and", (B, B), B, lambda a, b: a and b),
    ("or", (B, B), B, lambda a, b: a or b),
    ("not", (B,), B, lambda a: not a),
    # quantifiers
    ("all_eq", (V, C, VAL), B, _make_quantifier("all_eq")),
    ("all_not_eq", (V, C, VAL), B, _make_quantifier("all_not_eq")),
    ("all_greater", (V, C, N), B, _make_quantifier("all_greater")),
    ("all_less", (V, C, N), B, _make_quantifier("all_less")),
    ("all_ge", (V, C, N), B, _make_quantifier("all_ge")),
    ("all_le", (V, C, N), B, _make_quantifier("all_le")),
    # cardinality
    ("only", (V,), B, _only),
    ("is_not_empty", (V,), B, _is_not_empty),
]

# functions admitted into every search regardless of trigger hits
ALWAYS_ON = frozenset({
    "filter_eq", "filter_not_eq", "filter_greater", "filter_less",
    "filter_ge", "filter_le", "filter_str_contains",
    "count", "eq", "and", "hop",
})

_CATALOG: dict[str, FunctionDef] | None = None


def catalog() -> dict[str, FunctionDef]:
    """The stable function catalog, keyed by name.

    Trigger sets come from the packaged lexicon (see veritab.triggers).
    """
    global _CATALOG
    if _CATALOG is None:
        from veritab.triggers import triggers_for_function

        defs = {}
        for name, args, ret, impl in _SPECS:
            defs[name] = FunctionDef(
                name=name,
                arg_types=args,
                return_type=ret,
                triggers=frozenset(triggers_for_function(name)),
                semantics=impl,
            )
        _CATALOG = defs
    return _CATALOG


def lookup(name: str) -> FunctionDef | None:
    return catalog().get(name)
