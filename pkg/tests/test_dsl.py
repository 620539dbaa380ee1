import math
import random

import pytest

from veritab.errors import (
    EmptyViewAggregate,
    ExecutionError,
    MultiRowHop,
    NonNumericColumn,
    TraceSyntaxError,
    UnknownColumn,
    ValueOutOfRange,
)
from veritab.table import View
from veritab.dsl import (
    Call,
    ColRef,
    NumLit,
    Program,
    StrLit,
    TableRef,
    ValType,
    catalog,
    execute,
    parse_trace,
    type_check,
)

from tests.conftest import make_table, random_table
from tests.reference import REFERENCE


def prog(text: str) -> Program:
    return parse_trace(text)


class TestCatalog:
    def test_count_signature(self):
        f = catalog()["count"]
        assert f.arity == 1
        assert f.arg_types == (ValType.VIEW,)
        assert f.return_type == ValType.NUM

    def test_greater_signature(self):
        f = catalog()["greater"]
        assert f.arity == 2
        assert f.arg_types == (ValType.NUM, ValType.NUM)
        assert f.return_type == ValType.BOOL

    def test_unknown_function(self):
        assert catalog().get("bogus") is None

    def test_catalog_is_stable(self):
        names = list(catalog())
        assert len(names) == len(set(names))
        assert len(names) == 43
        assert catalog() is catalog()

    def test_every_function_covered_by_reference(self):
        assert set(catalog()) == set(REFERENCE)


class TestExecuteExamples:
    def test_democratic_count_is_false(self, fig1_table):
        p = prog('eq(count(filter_eq(T,col:party,str:"democratic")),num:3)')
        assert execute(p, fig1_table).value is False
        p2 = prog('eq(count(filter_eq(T,col:party,str:"democratic")),num:2)')
        assert execute(p2, fig1_table).value is True

    def test_total_count(self, fig1_table):
        out = execute(prog("count(T)"), fig1_table)
        assert out.tag == ValType.NUM and out.value == 5.0

    def test_hop_annotated_numeric(self, sample_row_table):
        out = execute(prog("hop(T,col:score)"), sample_row_table)
        assert out.value == 3.4

    def test_determinism(self, fig1_table):
        p = prog('avg(filter_str_contains(T,col:candidates,str:"d"),col:district)')
        with pytest.raises(NonNumericColumn):
            execute(p, fig1_table)
        p2 = prog("count(filter_greater(T,col:district,num:4))")
        assert execute(p2, fig1_table).value == execute(p2, fig1_table).value

    def test_unknown_column(self, fig1_table):
        with pytest.raises(UnknownColumn):
            execute(prog("count(filter_eq(T,col:nope,num:1))"), fig1_table)


class TestExecuteErrors:
    def test_empty_view_aggregate(self):
        t = make_table(["a"], [[1]])
        for fn in ("avg", "max", "min"):
            with pytest.raises(EmptyViewAggregate):
                execute(prog(f"{fn}(filter_greater(T,col:a,num:99),col:a)"), t)
        with pytest.raises(EmptyViewAggregate):
            execute(prog("argmax(filter_greater(T,col:a,num:99),col:a)"), t)
        assert execute(prog("sum(filter_greater(T,col:a,num:99),col:a)"), t).value == 0.0

    def test_non_numeric_column(self):
        t = make_table(["a"], [["x"], ["1"]])
        with pytest.raises(NonNumericColumn):
            execute(prog("sum(T,col:a)"), t)

    def test_multi_row_hop(self):
        t = make_table(["a"], [[1], [2]])
        with pytest.raises(MultiRowHop):
            execute(prog("hop(T,col:a)"), t)

    def test_ordinal_out_of_range(self):
        t = make_table(["a"], [[1], [2]])
        with pytest.raises(ValueOutOfRange):
            execute(prog("nth_max(T,col:a,num:3)"), t)
        with pytest.raises(ValueOutOfRange):
            execute(prog("nth_max(T,col:a,num:1.5)"), t)


class TestTypeCheck:
    def test_ok(self):
        assert type_check(prog("greater(num:1,num:2)")) is None

    def test_arg_zero_mismatch(self):
        p = Program(Call("greater", (StrLit("x"), NumLit(2.0))))
        issue = type_check(p)
        assert issue is not None and issue.path == (0,)

    def test_arity_mismatch(self):
        issue = type_check(Program(Call("count", (TableRef(), NumLit(1.0)))))
        assert issue is not None

    def test_unknown_function(self):
        issue = type_check(Program(Call("bogus", (TableRef(),))))
        assert issue is not None and "unknown" in issue.message

    def test_hop_feeds_either_compare(self):
        assert type_check(prog("eq(hop(T,col:a),num:1)")) is None
        assert type_check(prog('str_eq(hop(T,col:a),str:"x")')) is None


class TestTraceGrammar:
    @pytest.mark.parametrize("text", [
        "T",
        "count(T)",
        "num:3",
        "num:-2.5",
        'str:"a b"',
        'str:"quo\\"te"',
        'eq(count(filter_eq(T,col:party,str:"democratic")),num:3)',
        'col:with space',
        'col:"odd,name"',
    ])
    def test_roundtrip(self, text):
        p = parse_trace(text)
        assert parse_trace(p.trace) == p

    def test_syntax_errors(self):
        for bad in ["", "count(", "count(T", "num:x", 'str:"open', "foo", "count(T))"]:
            with pytest.raises(TraceSyntaxError):
                parse_trace(bad)

    def test_equal_trees_equal_traces(self):
        a = prog("eq(num:3,count(T))")
        b = Program(Call("eq", (NumLit(3.0), Call("count", (TableRef(),)))))
        assert a == b and a.trace == b.trace

    def test_random_programs_roundtrip(self):
        rng = random.Random(29)
        strings = ['a b', 'quo"te', "back\\slash", "comma, inside",
                   "paren (x)", "", "плюс"]
        columns = ["plain", "two words", "odd,name", 'q"uote', "p(aren)"]

        def leaf(want):
            if want == ValType.VIEW:
                return TableRef()
            if want == ValType.COL:
                return ColRef(rng.choice(columns))
            if want == ValType.STR:
                return StrLit(rng.choice(strings))
            return NumLit(rng.choice([0.0, -1.0, 3.5, 1e6, 0.1, -2.75, 7.0]))

        def build(want, depth):
            if depth <= 0 or want in (ValType.COL,):
                return leaf(want)
            options = [f for f in catalog().values()
                       if want.accepts(f.return_type) and f.return_type != ValType.VAL]
            if not options or rng.random() < 0.3:
                return leaf(want)
            fdef = rng.choice(sorted(options, key=lambda f: f.name))
            return Call(fdef.name,
                        tuple(build(t, depth - 1) for t in fdef.arg_types))

        for _ in range(300):
            want = rng.choice([ValType.BOOL, ValType.NUM, ValType.VIEW])
            p = Program(build(want, 3))
            assert parse_trace(p.trace) == p
            assert parse_trace(p.trace).trace == p.trace


def _random_args(rng, fdef, table):
    view = table.view()
    if rng.random() < 0.5 and table.row_count > 1:
        keep = sorted(rng.sample(range(table.row_count),
                                 rng.randint(1, table.row_count)))
        view = View(table, tuple(keep), view.col_indices)
    args = []
    for t in fdef.arg_types:
        if t == ValType.VIEW:
            args.append(view)
        elif t == ValType.COL:
            args.append(rng.randrange(table.col_count))
        elif t == ValType.NUM:
            args.append(float(rng.randint(-5, 10)))
        elif t == ValType.STR:
            args.append(rng.choice(["red", "blue", "x", "7"]))
        elif t == ValType.BOOL:
            args.append(rng.random() < 0.5)
        else:  # VAL
            args.append(float(rng.randint(-5, 10)) if rng.random() < 0.5
                        else rng.choice(["red", "blue"]))
    return args


def _agree(fn, ref, args):
    try:
        got = fn.semantics(*args)
        got_err = None
    except ExecutionError as e:
        got, got_err = None, type(e)
    try:
        want = ref(*args)
        want_err = None
    except ExecutionError as e:
        want, want_err = None, type(e)
    assert got_err == want_err, (fn.name, args, got_err, want_err)
    if got_err is None:
        if isinstance(want, float):
            assert got == want, (fn.name, args, got, want)
        else:
            assert got == want, (fn.name, args, got, want)


def test_reference_equivalence_sampled():
    rng = random.Random(7)
    cat = catalog()
    for _ in range(200):
        table = random_table(rng)
        for fdef in cat.values():
            _agree(fdef, REFERENCE[fdef.name], _random_args(rng, fdef, table))


def test_filter_partition_law():
    rng = random.Random(11)
    cat = catalog()
    for _ in range(100):
        table = random_table(rng)
        view = table.view()
        col = rng.randrange(table.col_count)
        for value in (float(rng.randint(-5, 10)), rng.choice(["red", "7"])):
            kept = cat["filter_eq"].semantics(view, col, value)
            dropped = cat["filter_not_eq"].semantics(view, col, value)
            assert kept.n_rows + dropped.n_rows == view.n_rows
            assert set(kept.row_indices) | set(dropped.row_indices) == set(view.row_indices)
            assert set(kept.row_indices).issubset(view.row_indices)


def test_superlative_consistency():
    rng = random.Random(13)
    cat = catalog()
    checked = 0
    for _ in range(200):
        table = random_table(rng, kinds=("num",))
        view = table.view()
        col = rng.randrange(table.col_count)
        top = cat["argmax"].semantics(view, col)
        assert cat["hop"].semantics(top, col) == cat["max"].semantics(view, col)
        bottom = cat["argmin"].semantics(view, col)
        assert cat["hop"].semantics(bottom, col) == cat["min"].semantics(view, col)
        # nth at position 1 agrees with the plain extremum
        assert cat["nth_max"].semantics(view, col, 1.0) == cat["max"].semantics(view, col)
        checked += 1
    assert checked == 200


def test_numeric_equality_tolerance():
    cat = catalog()
    assert cat["eq"].semantics(1.0, 1.0 + 1e-9) is True
    assert cat["eq"].semantics(1.0, 1.01) is False
    assert cat["not_eq"].semantics(1.0, 1.01) is True
    assert cat["eq"].semantics(0.0, math.ulp(0.0)) is True


def test_filter_count_matches_naive_scan():
    rng = random.Random(17)
    cat = catalog()
    for _ in range(100):
        table = random_table(rng, max_rows=4, max_cols=4)
        view = table.view()
        for col in range(table.col_count):
            values = {c.text for row in table.rows for c in row} | {"1", "zz"}
            for value in sorted(values)[:4]:
                got = cat["count"].semantics(
                    cat["filter_eq"].semantics(view, col, value))
                naive = sum(1 for r in range(table.row_count)
                            if table.cell(r, col).text == value)
                assert got == float(naive)
