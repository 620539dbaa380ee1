"""veritab: fact verification over semi-structured tables.

A statement is ENTAILED or REFUTED by a table. The pipeline links
statement phrases to table content, synthesizes candidate programs over
a typed table DSL by breadth-first search with memoization, executes
them, and turns the candidate set into a verdict by voting, weighted
voting, or discriminator ranking.
"""
from veritab.harness import Instance, categorize, evaluate, load_dataset, verify_statement
from veritab.kernels import BACKEND as KERNEL_BACKEND
from veritab.linearize import LinearizationSpec, linearize, linearize_table, prune_columns
from veritab.linker import EntityLink, LinkedStatement, lemmatize, link
from veritab.ranker import Label, ScorerModel, Verdict, decide, featurize, train
from veritab.search import CandidateSet, SearchConfig, search, trigger_filter
from veritab.table import Cell, Table, View, infer_cell, parse_table, project
from veritab.dsl import Program, TypedValue, catalog, execute, parse_trace, type_check

__version__ = "0.1.0"

__all__ = [
    "CandidateSet", "Cell", "EntityLink", "Instance", "KERNEL_BACKEND",
    "Label", "LinearizationSpec", "LinkedStatement", "Program",
    "ScorerModel", "SearchConfig", "Table", "TypedValue", "Verdict", "View",
    "__version__", "catalog", "categorize", "decide", "evaluate", "execute",
    "featurize", "infer_cell", "lemmatize", "linearize", "linearize_table",
    "link", "load_dataset", "parse_table", "parse_trace", "project",
    "prune_columns", "search", "train", "trigger_filter", "type_check",
    "verify_statement",
]
