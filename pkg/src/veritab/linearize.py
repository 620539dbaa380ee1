"""Serialize a (column-pruned) table into a text premise.

Two modes: `template` renders rows as near-natural sentences ("row
one's game is 51; the date is february; the score is 3.4 (ot)."),
`concatenation` joins raw cells with [SEP] tokens and carries the
column names as a parallel annotation channel in the batch record.
The scan may be horizontal (rows) or vertical (defined as the
horizontal scan of the transposed view), and the statement goes before
or after the table text.

Row subjects: "row one's" for the first row, numeric "row 2's" from the
second on.
"""
from __future__ import annotations

from dataclasses import dataclass

from veritab.errors import EmptyView
from veritab.linker import LinkedStatement
from veritab.table import Table, View

MODES = ("concatenation", "template")
SCANS = ("horizontal", "vertical")
ORDERS = ("table_then_fact", "fact_then_table")

SEP = "[SEP]"


@dataclass(frozen=True)
class LinearizationSpec:
    mode: str = "template"
    scan: str = "horizontal"
    order: str = "fact_then_table"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.scan not in SCANS:
            raise ValueError(f"scan must be one of {SCANS}")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")


def prune_columns(table: Table, linked: LinkedStatement) -> View:
    """Keep exactly the columns carrying an entity link (cell or column
    name); keep everything when nothing linked."""
    cols = sorted({l.col for l in linked.links
                   if l.kind in ("cell", "column") and l.col is not None})
    full = table.view()
    if not cols:
        return full
    return View(table, full.row_indices, tuple(cols))


def row_label(i: int) -> str:
    """1-based row subject: word for row one, digits from row 2 on."""
    return "one" if i == 0 else str(i + 1)


def _check_nonempty(view: View):
    if view.n_rows == 0 or view.n_cols == 0:
        raise EmptyView(f"cannot linearize a {view.n_rows}x{view.n_cols} view")


def transpose(view: View) -> Table:
    """Materialized transpose: one row per original column, with a
    leading 'column' field naming it; columns named after original rows."""
    _check_nonempty(view)
    names = ["column"] + [f"row {row_label(i)}" for i in range(view.n_rows)]
    rows = []
    for j in range(view.n_cols):
        col_name = view.source.columns[view.col_indices[j]].name
        rows.append([col_name] + [view.cell(i, j).raw for i in range(view.n_rows)])
    return Table.from_raw_rows(names, rows, table_id=view.source.table_id + ":t")


def _template_horizontal(view: View) -> str:
    names = view.column_names()
    sentences = []
    for i in range(view.n_rows):
        parts = [f"row {row_label(i)}'s {names[0]} is {view.cell(i, 0).raw}"]
        for j in range(1, view.n_cols):
            parts.append(f"the {names[j]} is {view.cell(i, j).raw}")
        sentences.append("; ".join(parts) + ".")
    return " ".join(sentences)


def _concat_cells(view: View, scan: str) -> tuple[list[str], list[str]]:
    cells = []
    channel = []
    names = view.column_names()
    if scan == "horizontal":
        for i in range(view.n_rows):
            for j in range(view.n_cols):
                cells.append(view.cell(i, j).raw)
                channel.append(names[j])
    else:
        for j in range(view.n_cols):
            for i in range(view.n_rows):
                cells.append(view.cell(i, j).raw)
                channel.append(names[j])
    return cells, channel


def linearize_table(view: View, spec: LinearizationSpec) -> str:
    """The table segment alone, deterministic and bit-exact."""
    _check_nonempty(view)
    if spec.mode == "template":
        if spec.scan == "horizontal":
            return _template_horizontal(view)
        return _template_horizontal(transpose(view).view())
    cells, _ = _concat_cells(view, spec.scan)
    return f" {SEP} ".join(cells)


def linearize(view: View, statement: str, spec: LinearizationSpec) -> str:
    """Full premise string: statement and table segment in spec order."""
    table_text = linearize_table(view, spec)
    joiner = " " if spec.mode == "template" else f" {SEP} "
    if spec.order == "fact_then_table":
        return statement + joiner + table_text
    return table_text + joiner + statement


def linearize_record(view: View, statement: str, spec: LinearizationSpec) -> dict:
    """Batch record for external sequence-model trainers."""
    table_text = linearize_table(view, spec)
    record = {
        "premise": linearize(view, statement, spec),
        "statement": statement,
        "table_text": table_text,
        "mode": spec.mode,
        "scan": spec.scan,
        "order": spec.order,
    }
    if spec.mode == "concatenation":
        cells, channel = _concat_cells(view, spec.scan)
        record["cells"] = cells
        record["column_channel"] = channel
    return record
