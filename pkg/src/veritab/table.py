"""Typed in-memory table model, cell-type inference, and file ingestion.

A table file is delimiter-separated UTF-8 text whose first line holds
the column names (default delimiter '#'). Cells are typed at ingestion:
a cell is a Number when it starts with a numeric token whose remainder
is detached (empty, whitespace, '(' annotation, or '%'), otherwise it
is Text. Tables are immutable after construction and safe to share
across threads.
"""
from __future__ import annotations

import math
import re
from array import array
from dataclasses import dataclass

from veritab.errors import DuplicateColumn, EmptyTable, IndexOutOfBounds, RaggedRow

_WS = re.compile(r"\s+")

# optional sign, digits with optional 3-digit grouping, optional decimals
_NUM_TOKEN = re.compile(r"[+-]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?")


def normalize_text(raw: str) -> str:
    """lowercase + trim + collapse internal whitespace."""
    return _WS.sub(" ", raw.strip().lower())


def parse_number(raw: str) -> float | None:
    """Leading numeric token with a detached suffix, else None.

    "3,412" -> 3412.0; "3.4 (ot)" -> 3.4; "52%" -> 52.0;
    "1st", "2004-05", "february" -> None (kept as text).
    """
    s = raw.strip()
    m = _NUM_TOKEN.match(s)
    if not m:
        return None
    rest = s[m.end():]
    if rest and not (rest[0] in " \t(" or rest[0] == "%"):
        return None
    value = float(m.group(0).replace(",", ""))
    # digit strings long enough to overflow stay text: Num values are finite
    if math.isinf(value):
        return None
    return value


def infer_cell(raw: str) -> float | str:
    """Parsed cell value: a float under the numeric grammar, else the
    normalized text. Total and deterministic."""
    num = parse_number(raw)
    if num is not None:
        return num
    return normalize_text(raw)


@dataclass(frozen=True)
class Cell:
    raw: str
    number: float | None
    text: str

    @classmethod
    def from_raw(cls, raw: str) -> "Cell":
        return cls(raw=raw, number=parse_number(raw), text=normalize_text(raw))

    @property
    def parsed(self) -> float | str:
        return self.number if self.number is not None else self.text

    @property
    def is_number(self) -> bool:
        return self.number is not None

    def key(self) -> str:
        """Canonical identity used by distinct-counting."""
        return repr(self.number) if self.number is not None else self.text


@dataclass(frozen=True)
class ColumnMeta:
    name: str       # normalized
    raw_name: str
    numeric: bool   # every cell in the column parsed as a number


class Table:
    """Immutable grid of typed cells plus caption and column names."""

    def __init__(self, rows: list[list[Cell]], columns: list[ColumnMeta],
                 table_id: str = "", caption: str = ""):
        self.table_id = table_id
        self.caption = caption
        self.columns = columns
        self.rows = rows
        self.row_count = len(rows)
        self.col_count = len(columns)
        self._name_to_idx = {c.name: j for j, c in enumerate(columns)}
        # per-column arrays consumed by the kernels
        self._numbers: list[array] = []
        self._numflags: list[bytearray] = []
        self._texts: list[list[str]] = []
        self._keys: list[list[str]] = []
        for j in range(self.col_count):
            nums = array("d", (0.0,) * self.row_count)
            flags = bytearray(self.row_count)
            texts = []
            keys = []
            for i in range(self.row_count):
                cell = rows[i][j]
                if cell.number is not None:
                    nums[i] = cell.number
                    flags[i] = 1
                texts.append(cell.text)
                keys.append(cell.key())
            self._numbers.append(nums)
            self._numflags.append(flags)
            self._texts.append(texts)
            self._keys.append(keys)

    @classmethod
    def from_raw_rows(cls, column_names: list[str], raw_rows: list[list[str]],
                      table_id: str = "", caption: str = "") -> "Table":
        """Build a table directly from raw strings (fixtures, loaders)."""
        norm_names = []
        for name in column_names:
            n = normalize_text(name)
            if n in norm_names:
                raise DuplicateColumn(n)
            norm_names.append(n)
        if not raw_rows:
            raise EmptyTable("table has no data rows")
        cells = [[Cell.from_raw(v) for v in row] for row in raw_rows]
        cols = []
        for j, (name, raw_name) in enumerate(zip(norm_names, column_names)):
            cols.append(ColumnMeta(
                name=name,
                raw_name=raw_name,
                numeric=all(r[j].is_number for r in cells),
            ))
        return cls(cells, cols, table_id=table_id, caption=caption)

    def column_index(self, name: str) -> int:
        idx = self._name_to_idx.get(normalize_text(name))
        if idx is None:
            from veritab.errors import UnknownColumn
            raise UnknownColumn(f"no column named {name!r}")
        return idx

    def cell(self, i: int, j: int) -> Cell:
        return self.rows[i][j]

    # kernel-facing accessors
    def col_numbers(self, j: int) -> array:
        return self._numbers[j]

    def col_numflags(self, j: int) -> bytearray:
        return self._numflags[j]

    def col_texts(self, j: int) -> list[str]:
        return self._texts[j]

    def col_keys(self, j: int) -> list[str]:
        return self._keys[j]

    def view(self) -> "View":
        return View(self, tuple(range(self.row_count)), tuple(range(self.col_count)))

    def to_text(self, delimiter: str = "#") -> str:
        """Serialize back to the ingestion format (header + raw cells)."""
        parts = [delimiter.join(c.raw_name for c in self.columns)]
        for row in self.rows:
            for cell in row:
                if delimiter in cell.raw or "\n" in cell.raw:
                    raise ValueError(
                        f"cell {cell.raw!r} cannot be serialized with delimiter {delimiter!r}"
                    )
            parts.append(delimiter.join(cell.raw for cell in row))
        return "\n".join(parts) + "\n"

    def __repr__(self):
        return f"Table({self.table_id or '?'}: {self.row_count}x{self.col_count})"


@dataclass(frozen=True, eq=False)
class View:
    """A reference to a row/column subset of a table. Never copies cells.

    Orderings preserve source order; equality compares index sets over
    the same source table.
    """
    source: Table
    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]

    def __eq__(self, other):
        if not isinstance(other, View):
            return NotImplemented
        return (self.source is other.source
                and self.row_indices == other.row_indices
                and self.col_indices == other.col_indices)

    def __hash__(self):
        return hash((id(self.source), self.row_indices, self.col_indices))

    @property
    def n_rows(self) -> int:
        return len(self.row_indices)

    @property
    def n_cols(self) -> int:
        return len(self.col_indices)

    def cell(self, i: int, j: int) -> Cell:
        return self.source.rows[self.row_indices[i]][self.col_indices[j]]

    def column_names(self) -> list[str]:
        return [self.source.columns[j].name for j in self.col_indices]


def project(view: View, rows, cols) -> View:
    """Compose a projection: `rows`/`cols` index into the view itself.

    None keeps the axis unchanged. Projection of a projection equals the
    direct projection.
    """
    if rows is None:
        row_idx = view.row_indices
    else:
        rows = tuple(rows)
        for r in rows:
            if not (0 <= r < view.n_rows):
                raise IndexOutOfBounds(f"row position {r} out of range 0..{view.n_rows - 1}")
        row_idx = tuple(view.row_indices[r] for r in rows)
    if cols is None:
        col_idx = view.col_indices
    else:
        cols = tuple(cols)
        for c in cols:
            if not (0 <= c < view.n_cols):
                raise IndexOutOfBounds(f"col position {c} out of range 0..{view.n_cols - 1}")
        col_idx = tuple(view.col_indices[c] for c in cols)
    return View(view.source, row_idx, col_idx)


def parse_table(data: bytes | str, delimiter: str = "#", table_id: str = "",
                caption: str = "", strict_dims: bool = False) -> Table:
    """Parse a delimiter-separated table file.

    First line holds column names. Raises EmptyTable, RaggedRow (with
    the 1-based physical line number) or DuplicateColumn on malformed
    input; rows are never silently dropped. `strict_dims` additionally
    rejects tables larger than 50 rows or 10 columns.
    """
    if len(delimiter) != 1:
        raise ValueError("delimiter must be a single character")
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.split("\n")
    # a final newline terminates the last line; it does not open a row
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmptyTable("no header line")
    header = lines[0].split(delimiter)
    n_cols = len(header)
    raw_rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(delimiter)
        if len(cells) != n_cols:
            raise RaggedRow(line_no, n_cols, len(cells))
        raw_rows.append(cells)
    if not raw_rows:
        raise EmptyTable("no data rows")
    table = Table.from_raw_rows(header, raw_rows, table_id=table_id, caption=caption)
    if strict_dims and (table.row_count > 50 or table.col_count > 10):
        raise EmptyTable(
            f"strict-dims: {table.row_count}x{table.col_count} exceeds 50x10"
        )
    return table
