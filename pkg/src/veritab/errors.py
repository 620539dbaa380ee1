"""Exception hierarchy for the whole package."""


class VeritabError(Exception):
    """Base class for all package errors."""


# ---- table ingestion ----

class TableError(VeritabError):
    pass


class EmptyTable(TableError):
    pass


class RaggedRow(TableError):
    def __init__(self, line_no, expected, got):
        super().__init__(f"line {line_no}: expected {expected} cells, got {got}")
        self.line_no = line_no
        self.expected = expected
        self.got = got


class DuplicateColumn(TableError):
    def __init__(self, name):
        super().__init__(f"duplicate column name after normalization: {name!r}")
        self.name = name


class IndexOutOfBounds(TableError):
    pass


# ---- program execution ----

class DSLError(VeritabError):
    pass


class UnknownFunction(DSLError):
    pass


class UnknownColumn(DSLError):
    pass


class TraceSyntaxError(DSLError):
    pass


class ExecutionError(DSLError):
    """Aborts the offending program only; the search treats it as a prune."""


class ArgumentTypeMismatch(ExecutionError):
    """A runtime value did not fit the declared argument slot."""


class EmptyViewAggregate(ExecutionError):
    pass


class NonNumericColumn(ExecutionError):
    def __init__(self, col_name):
        super().__init__(f"column {col_name!r} has non-numeric cells in the selection")
        self.col_name = col_name


class DivergentValue(ExecutionError):
    pass


class MultiRowHop(ExecutionError):
    pass


class ValueOutOfRange(ExecutionError):
    pass


# ---- linearizer ----

class EmptyView(VeritabError):
    pass


# ---- ranker ----

class RankerError(VeritabError):
    pass


class DegenerateDump(RankerError):
    pass


class ModelMissing(RankerError):
    pass


# ---- harness / dataset ----

class DatasetError(VeritabError):
    pass


class MissingTable(DatasetError):
    def __init__(self, table_id):
        super().__init__(f"table file not found: {table_id}")
        self.table_id = table_id


class LabelArityMismatch(DatasetError):
    def __init__(self, table_id, n_statements, n_labels):
        super().__init__(
            f"{table_id}: {n_statements} statements but {n_labels} labels"
        )
        self.table_id = table_id
