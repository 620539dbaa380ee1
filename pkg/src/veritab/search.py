"""Breadth-first latent program synthesis over typed value caches.

A search state holds four caches (Num, Str, Bool, View). Statement
seeds fill the Num/Str caches and the full table fills the View cache.
Each step applies one catalog function to arguments drawn from the
caches: Num/Str/Bool arguments are consumed, views are reusable and
only accumulate, and the exact same expression is never applied twice
along one path. A Bool result with the Num/Str/Bool caches empty and
every seed inside its expression tree is a finished candidate; a
non-Bool result that would leave those caches empty is a dead end;
anything else re-enters the queue.

Expansion order is deterministic: per depth wave, states sort by their
trace-so-far, functions by name, argument tuples by cache position, so
runs are reproducible and the max_traces cutoff is stable. Memoization
merges states whose cache *values* are identical (trace differences
alone do not keep states apart).
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

from veritab.errors import ExecutionError
from veritab.linker import LinkedStatement
from veritab.table import Table, View
from veritab.triggers import triggered_functions
from veritab.dsl.catalog import ALWAYS_ON, FunctionDef, catalog
from veritab.dsl.program import Call, ColRef, Expr, NumLit, Program, StrLit, TableRef
from veritab.dsl.values import ValType, type_of


@dataclass
class SearchConfig:
    max_step: int = 7
    max_traces: int = 50
    trigger_pruning: bool = True
    dedup: bool = True
    # guard rails; both keep runs deterministic (time_limit only when set)
    max_expansions: int = 200_000
    time_limit: float | None = None

    def __post_init__(self):
        if self.max_step < 1:
            raise ValueError("max_step must be >= 1")
        if self.max_traces < 1:
            raise ValueError("max_traces must be >= 1")


class CacheEntry(NamedTuple):
    value: object
    expr: Expr
    trace: str
    calls: int = 0   # function applications inside expr


@dataclass(frozen=True)
class CacheState:
    nums: tuple[CacheEntry, ...]
    strs: tuple[CacheEntry, ...]
    bools: tuple[CacheEntry, ...]
    views: tuple[CacheEntry, ...]
    depth: int
    path: tuple[str, ...]

    def contents_key(self):
        """Executed cache values up to multiset equality; traces excluded."""
        return (
            tuple(sorted(e.value for e in self.nums)),
            tuple(sorted(e.value for e in self.strs)),
            tuple(sorted(e.value for e in self.bools)),
            tuple(sorted((e.value.row_indices, e.value.col_indices) for e in self.views)),
        )


def dedupe(state: CacheState, seen: set) -> bool:
    """True (skip) when a state with identical cache contents was seen;
    otherwise records the state and returns False."""
    key = state.contents_key()
    if key in seen:
        return True
    seen.add(key)
    return False


@dataclass
class SearchStats:
    expanded_states: int = 0
    applications: int = 0
    deduped: int = 0
    errored: int = 0
    duplicate_traces: int = 0
    discarded: int = 0
    truncated: bool = False
    capped: bool = False
    timed_out: bool = False


@dataclass
class CandidateSet:
    items: list[tuple[Program, bool]]
    stats: SearchStats = field(default_factory=SearchStats)

    def results(self) -> list[bool]:
        return [r for _, r in self.items]

    def __len__(self):
        return len(self.items)


def trigger_filter(linked: LinkedStatement) -> set[FunctionDef]:
    """Functions admitted for this statement: trigger hits plus the
    always-on core (filters, count, eq, and, hop)."""
    cat = catalog()
    raw = list(linked.raw_tokens)
    for tok in linked.raw_tokens:
        if tok.endswith("n't") and len(tok) > 3:
            raw.append("n't")
    names = triggered_functions(raw, linked.lemmas, " ".join(linked.raw_tokens),
                                linked.has_numeral)
    names = (names & set(cat)) | ALWAYS_ON
    return {cat[n] for n in names}


def seed_state(table: Table, linked: LinkedStatement) -> CacheState:
    nums = tuple(CacheEntry(v, NumLit(v), NumLit(v).serialize())
                 for v in linked.num_seeds)
    strs = tuple(CacheEntry(s, StrLit(s), StrLit(s).serialize())
                 for s in linked.str_seeds)
    root = TableRef()
    views = (CacheEntry(table.view(), root, root.serialize()),)
    return CacheState(nums=nums, strs=strs, bools=(), views=views, depth=0, path=())


def _leaf_counter(node: Expr, counter: Counter) -> None:
    if isinstance(node, (NumLit, StrLit)):
        counter[node] += 1
    elif isinstance(node, Call):
        for a in node.args:
            _leaf_counter(a, counter)


def _seed_counter(state: CacheState) -> Counter:
    c: Counter = Counter()
    for e in state.nums:
        c[e.expr] += 1
    for e in state.strs:
        c[e.expr] += 1
    return c


def _slot_options(state: CacheState, table: Table, slot: ValType):
    """Deterministically ordered argument options for one slot."""
    if slot is ValType.VIEW:
        return [("view", i) for i in range(len(state.views))]
    if slot is ValType.NUM:
        return [("num", i) for i in range(len(state.nums))]
    if slot is ValType.STR:
        return [("str", i) for i in range(len(state.strs))]
    if slot is ValType.BOOL:
        return [("bool", i) for i in range(len(state.bools))]
    if slot is ValType.VAL:
        return ([("num", i) for i in range(len(state.nums))]
                + [("str", i) for i in range(len(state.strs))])
    if slot is ValType.COL:
        return [("col", j) for j in range(table.col_count)]
    raise AssertionError(slot)


def _remove(entries: tuple, consumed: list[int]) -> tuple:
    if not consumed:
        return entries
    drop = set(consumed)
    return tuple(e for i, e in enumerate(entries) if i not in drop)


class _Engine:
    def __init__(self, table: Table, fns: list[FunctionDef], cfg: SearchConfig):
        self.table = table
        self.fns = sorted(fns, key=lambda f: f.name)
        self.cfg = cfg
        self.stats = SearchStats()
        self.emitted: dict[str, tuple[Expr, bool]] = {}
        self.seen: set = set()
        self.seeds: Counter = Counter()
        self.done = False
        self.t0 = time.monotonic()

    def out_of_budget(self) -> bool:
        if len(self.emitted) >= self.cfg.max_traces:
            self.stats.truncated = True
            return True
        if self.stats.applications >= self.cfg.max_expansions:
            self.stats.capped = True
            return True
        if (self.cfg.time_limit is not None
                and time.monotonic() - self.t0 > self.cfg.time_limit):
            self.stats.timed_out = True
            return True
        return False

    def run(self, initial: CacheState) -> CandidateSet:
        self.seeds = _seed_counter(initial)
        if self.cfg.dedup:
            self.seen.add(initial.contents_key())
        frontier = [initial]
        for _ in range(self.cfg.max_step):
            if not frontier or self.done:
                break
            frontier.sort(key=lambda s: s.path)
            next_frontier: list[CacheState] = []
            for state in frontier:
                if self.done or self.out_of_budget():
                    self.done = True
                    break
                self.stats.expanded_states += 1
                self.expand(state, next_frontier)
            frontier = next_frontier
        items = [(Program(expr), r) for expr, r in self.emitted.values()]
        items.sort(key=lambda pr: pr[0].trace)
        return CandidateSet(items=items, stats=self.stats)

    def expand(self, state: CacheState, out: list[CacheState]) -> None:
        for fdef in self.fns:
            option_lists = [_slot_options(state, self.table, t)
                            for t in fdef.arg_types]
            if any(not opts for opts in option_lists):
                continue
            for combo in product(*option_lists):
                if self.done:
                    return
                # same-cache slots must consume distinct entries
                used = [c for c in combo if c[0] != "col"]
                if len(set(used)) != len(used):
                    continue
                self.apply(state, fdef, combo, out)
                if self.out_of_budget():
                    self.done = True
                    return

    def apply(self, state: CacheState, fdef: FunctionDef, combo, out) -> None:
        self.stats.applications += 1
        values = []
        exprs = []
        traces = []
        calls = 1
        consumed: dict[str, list[int]] = {"num": [], "str": [], "bool": []}
        for kind, idx in combo:
            if kind == "col":
                values.append(idx)
                name = self.table.columns[idx].name
                ref = ColRef(name)
                exprs.append(ref)
                traces.append(ref.serialize())
                continue
            entry = getattr(state, kind + "s")[idx]
            values.append(entry.value)
            exprs.append(entry.expr)
            traces.append(entry.trace)
            calls += entry.calls
            if kind != "view":
                consumed[kind].append(idx)

        # tree bound: a reused view embeds its subtree at every use, so
        # the application count of the expression is what max_step caps
        if calls > self.cfg.max_step:
            self.stats.discarded += 1
            return

        expr_trace = f"{fdef.name}({','.join(traces)})"
        # never re-apply the exact same expression along one path
        if expr_trace in state.path:
            self.stats.discarded += 1
            return

        try:
            result = fdef.semantics(*values)
        except ExecutionError:
            self.stats.errored += 1
            return

        expr = Call(fdef.name, tuple(exprs))
        trace = expr_trace
        new_nums = _remove(state.nums, consumed["num"])
        new_strs = _remove(state.strs, consumed["str"])
        new_bools = _remove(state.bools, consumed["bool"])
        tag = type_of(result)

        if tag is ValType.BOOL:
            if not new_nums and not new_strs and not new_bools:
                leaves: Counter = Counter()
                _leaf_counter(expr, leaves)
                if leaves == self.seeds:
                    if trace in self.emitted:
                        self.stats.duplicate_traces += 1
                    else:
                        self.emitted[trace] = (expr, bool(result))
                else:
                    self.stats.discarded += 1
                return
            entry = CacheEntry(bool(result), expr, trace, calls)
            self.push(state, new_nums, new_strs, new_bools + (entry,),
                      state.views, trace, out)
            return

        if not new_nums and not new_strs and not new_bools:
            # ends without consuming the cache: throw the branch away
            self.stats.discarded += 1
            return

        if tag is ValType.VIEW:
            entry = CacheEntry(result, expr, trace, calls)
            self.push(state, new_nums, new_strs, new_bools,
                      state.views + (entry,), trace, out)
        elif tag is ValType.NUM:
            entry = CacheEntry(float(result), expr, trace, calls)
            self.push(state, new_nums + (entry,), new_strs, new_bools,
                      state.views, trace, out)
        else:
            entry = CacheEntry(result, expr, trace, calls)
            self.push(state, new_nums, new_strs + (entry,), new_bools,
                      state.views, trace, out)

    def push(self, parent, nums, strs, bools, views, trace, out) -> None:
        state = CacheState(nums=nums, strs=strs, bools=bools, views=views,
                           depth=parent.depth + 1, path=parent.path + (trace,))
        if self.cfg.dedup and dedupe(state, self.seen):
            self.stats.deduped += 1
            return
        out.append(state)


def search(table: Table, linked: LinkedStatement,
           cfg: SearchConfig | None = None) -> CandidateSet:
    """Enumerate candidate programs for one linked statement.

    Output order is canonical (sorted by trace). Per-program execution
    errors prune that branch only and are counted in stats.
    """
    cfg = cfg or SearchConfig()
    if cfg.trigger_pruning:
        fns = trigger_filter(linked)
    else:
        fns = set(catalog().values())
    engine = _Engine(table, list(fns), cfg)
    return engine.run(seed_state(table, linked))
