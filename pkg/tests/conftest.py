import random

import pytest

from veritab.linker import LinkedStatement
from veritab.table import Table

WORDS = ["red", "blue", "green", "apple", "pear", "lion", "tiger", "delta",
         "gamma", "north", "south", "rapid", "calm", "ghost", "ember"]
COLUMN_NAMES = ["alpha", "beta", "kappa", "sigma", "omega", "zeta", "theta",
                "iota", "mu", "nu"]


def make_table(columns, rows, table_id="t", caption=""):
    return Table.from_raw_rows(columns, [[str(c) for c in row] for row in rows],
                               table_id=table_id, caption=caption)


def random_cell(rng: random.Random, kind: str) -> str:
    if kind == "num":
        if rng.random() < 0.3:
            return f"{rng.uniform(-50, 50):.2f}"
        return str(rng.randint(-20, 99))
    if kind == "annotated":
        return f"{rng.randint(0, 30)}.{rng.randint(0, 9)} ({rng.choice(WORDS)[:2]})"
    if kind == "mixed":
        return (str(rng.randint(0, 9)) if rng.random() < 0.5
                else rng.choice(WORDS))
    return rng.choice(WORDS)


def random_table(rng: random.Random, max_rows=6, max_cols=5,
                 kinds=("num", "text", "mixed", "annotated")) -> Table:
    n_rows = rng.randint(1, max_rows)
    n_cols = rng.randint(1, max_cols)
    col_kinds = [rng.choice(kinds) for _ in range(n_cols)]
    names = rng.sample(COLUMN_NAMES, n_cols)
    rows = [[random_cell(rng, col_kinds[j]) for j in range(n_cols)]
            for _ in range(n_rows)]
    return make_table(names, rows, table_id=f"rand{rng.randint(0, 10 ** 6)}")


def synthetic_linked(statement="", num_seeds=(), str_seeds=()) -> LinkedStatement:
    """A LinkedStatement with hand-chosen seeds, bypassing the linker."""
    tokens = statement.split()
    return LinkedStatement(
        original=statement,
        tokens=tokens,
        links=[],
        masked_text=statement,
        raw_tokens=tokens,
        lemmas=tokens,
        num_seeds=list(num_seeds),
        str_seeds=list(str_seeds),
    )


FIG1_ROWS = [
    ["california 3", "john e. moss", "democratic", "re-elected",
     "john e. moss (d) 69.9% john rakus (r) 30.1%"],
    ["california 5", "phillip burton", "democratic", "re-elected",
     "phillip burton (d) 81.8% edlo e. powell (r) 18.2%"],
    ["california 7", "john j. mcfall", "republican", "re-elected",
     "john j. mcfall (d) unopposed"],
    ["california 9", "don edwards", "republican", "re-elected",
     "don edwards (d) 56.5% larry fargher (r) 43.5%"],
    ["california 10", "charles s. gubser", "republican", "re-elected",
     "charles s. gubser (r) 75.9% stewart m. banks (d) 24.1%"],
]


@pytest.fixture
def fig1_table():
    return make_table(
        ["district", "incumbent", "party", "result", "candidates"],
        FIG1_ROWS, table_id="fig1",
        caption="united states house of representatives elections, 1972",
    )


@pytest.fixture
def sample_row_table():
    return make_table(["game", "date", "score"], [["51", "february", "3.4 (ot)"]],
                      table_id="s32", caption="divisional game log")
