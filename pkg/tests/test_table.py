import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veritab.errors import DuplicateColumn, EmptyTable, IndexOutOfBounds, RaggedRow
from veritab.table import Cell, View, infer_cell, parse_table, project

from tests.conftest import make_table


class TestParseTable:
    def test_minimal_wellformed(self):
        t = parse_table("a#b\n1#x\n2#y")
        assert t.row_count == 2 and t.col_count == 2
        assert t.columns[0].name == "a" and t.columns[0].numeric
        assert not t.columns[1].numeric
        assert t.cell(0, 0).number == 1.0
        assert t.cell(1, 1).text == "y"

    def test_bytes_input(self):
        t = parse_table(b"a#b\n1#x\n")
        assert t.row_count == 1

    def test_ragged_row_reports_line(self):
        with pytest.raises(RaggedRow) as exc:
            parse_table("a#b\n1#x\n2")
        assert exc.value.line_no == 3

    def test_duplicate_column(self):
        with pytest.raises(DuplicateColumn):
            parse_table("a# A \n1#2")

    def test_empty_inputs(self):
        with pytest.raises(EmptyTable):
            parse_table("")
        with pytest.raises(EmptyTable):
            parse_table("a#b\n")

    def test_custom_delimiter(self):
        t = parse_table("a|b\n1|x", delimiter="|")
        assert t.col_count == 2

    def test_strict_dims(self):
        big = "c\n" + "\n".join(str(i) for i in range(51))
        parse_table(big)  # fine by default
        with pytest.raises(EmptyTable):
            parse_table(big, strict_dims=True)
        wide_header = "#".join(f"c{i}" for i in range(11))
        wide = wide_header + "\n" + "#".join("1" for _ in range(11))
        with pytest.raises(EmptyTable):
            parse_table(wide, strict_dims=True)


class TestInferCell:
    @pytest.mark.parametrize("raw,expected", [
        ("3,412", 3412.0),
        ("february", "february"),
        ("51", 51.0),
        ("-7", -7.0),
        ("52.5%", 52.5),
        ("24 points", 24.0),
        ("1st", "1st"),
        ("2004-05", "2004-05"),
        ("3-2", "3-2"),
        ("  MiXeD   Case ", "mixed case"),
        ("1,23", "1,23"),
    ])
    def test_examples(self, raw, expected):
        assert infer_cell(raw) == expected

    def test_annotated_numeric_prefix(self):
        # the premise sentence cell "3.4 (ot)" must stay comparable
        assert infer_cell("3.4 (ot)") == 3.4
        cell = Cell.from_raw("3.4 (ot)")
        assert cell.number == 3.4 and cell.text == "3.4 (ot)"

    def test_overflowing_digits_stay_text(self):
        raw = "9" * 400
        assert infer_cell(raw) == raw
        assert Cell.from_raw(raw).number is None

    def test_total_and_idempotent_on_text(self):
        out = infer_cell("Some  Phrase HERE")
        assert infer_cell(out) == out


class TestViews:
    def test_project_identity(self):
        t = make_table(["a"], [[1], [2]])
        full = t.view()
        assert project(full, None, None) == full
        assert project(full, range(2), range(1)) == full

    def test_project_composition(self):
        t = make_table(["a"], [[1], [2], [3]])
        v = t.view()
        assert project(project(v, (0, 1), None), (1,), None) == project(v, (1,), None)

    def test_project_bounds(self):
        t = make_table(["a"], [[1]])
        with pytest.raises(IndexOutOfBounds):
            project(t.view(), (1,), None)
        with pytest.raises(IndexOutOfBounds):
            project(t.view(), None, (5,))

    def test_project_party_filter_shape(self, fig1_table):
        # two democratic incumbents among five rows
        rows = [i for i in range(fig1_table.row_count)
                if fig1_table.cell(i, 2).text == "democratic"]
        v = project(fig1_table.view(), rows, None)
        assert v.n_rows == 2

    def test_equal_index_sets_compare_equal(self):
        t = make_table(["a", "b"], [[1, 2], [3, 4]])
        assert View(t, (0,), (0, 1)) == View(t, (0,), (0, 1))
        assert View(t, (0,), (0, 1)) != View(t, (1,), (0, 1))
        assert hash(View(t, (0,), (0, 1))) == hash(View(t, (0,), (0, 1)))


_cell_text = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Nd"), max_codepoint=0x7F),
    min_size=0, max_size=8,
)


@st.composite
def _table_texts(draw):
    n_cols = draw(st.integers(1, 4))
    n_rows = draw(st.integers(1, 5))
    names = [f"c{i}" for i in range(n_cols)]
    rows = [[draw(_cell_text) for _ in range(n_cols)] for _ in range(n_rows)]
    return names, rows


@given(_table_texts())
@settings(max_examples=150, deadline=None)
def test_roundtrip_serialize_reparse(data):
    names, rows = data
    t = make_table(names, rows)
    back = parse_table(t.to_text("#"), delimiter="#")
    assert [c.name for c in back.columns] == [c.name for c in t.columns]
    assert [[c.raw for c in row] for row in back.rows] == \
           [[c.raw for c in row] for row in t.rows]
    assert [[c.parsed for c in row] for row in back.rows] == \
           [[c.parsed for c in row] for row in t.rows]


@given(_cell_text)
@settings(max_examples=300, deadline=None)
def test_inference_deterministic(raw):
    assert infer_cell(raw) == infer_cell(raw)
    c1, c2 = Cell.from_raw(raw), Cell.from_raw(raw)
    assert c1 == c2
    # exactly one variant: numeric iff the grammar accepted it
    assert (c1.number is not None) == isinstance(c1.parsed, float)
