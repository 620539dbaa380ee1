"""Pure-Python kernel implementations.

These are the hot per-column primitives the interpreter and the entity
linker run in their inner loops. `veritab._ckernels` is the compiled
twin with the exact same signatures and semantics; `veritab.kernels`
picks one at import time. Keep the two files in lockstep (see
tests/test_kernels.py for the parity check).

Conventions:
  values  -- per-row cell numbers for one column (NaN where non-numeric)
  flags   -- bytes-like, 1 where the cell parsed as a number
  texts   -- per-row normalized cell text for one column
  keys    -- per-row canonical cell keys (number repr or text)
  rows    -- tuple of row indices (a View's row selection)
"""

BACKEND_NAME = "python"

# comparison opcodes shared by filter_num / all_num
OP_EQ, OP_NE, OP_GT, OP_LT, OP_GE, OP_LE = 0, 1, 2, 3, 4, 5
# text match modes
TEXT_EQ, TEXT_NE, TEXT_CONTAINS = 0, 1, 2
# aggregate opcodes
AGG_SUM, AGG_AVG, AGG_MAX, AGG_MIN = 0, 1, 2, 3
# result codes
OK, EMPTY, NON_NUMERIC, OUT_OF_RANGE = 0, 1, 2, 3


def _close(a, b, rel_tol, abs_tol):
    d = a - b
    if d < 0.0:
        d = -d
    aa = a if a >= 0.0 else -a
    ab = b if b >= 0.0 else -b
    m = aa if aa >= ab else ab
    lim = rel_tol * m
    if abs_tol > lim:
        lim = abs_tol
    return d <= lim


def _num_pred(v, op, x, rel_tol, abs_tol):
    if op == OP_EQ:
        return _close(v, x, rel_tol, abs_tol)
    if op == OP_NE:
        return not _close(v, x, rel_tol, abs_tol)
    if op == OP_GT:
        return v > x
    if op == OP_LT:
        return v < x
    if op == OP_GE:
        return v >= x
    return v <= x


def filter_num(values, flags, rows, op, x, rel_tol, abs_tol):
    """Rows whose cell is numeric and satisfies (cell op x).

    Exception: under OP_NE a non-numeric cell counts as "not equal",
    so filter_eq/filter_not_eq partition every column.
    """
    out = []
    for r in rows:
        if flags[r]:
            if _num_pred(values[r], op, x, rel_tol, abs_tol):
                out.append(r)
        elif op == OP_NE:
            out.append(r)
    return tuple(out)


def filter_text(texts, rows, needle, mode):
    out = []
    for r in rows:
        t = texts[r]
        if mode == TEXT_EQ:
            keep = t == needle
        elif mode == TEXT_NE:
            keep = t != needle
        else:
            keep = needle in t
        if keep:
            out.append(r)
    return tuple(out)


def agg_num(values, flags, rows, op):
    """(code, value). Empty rows: sum -> 0.0, others -> EMPTY.

    Any non-numeric cell in the selection -> NON_NUMERIC.
    """
    n = len(rows)
    if n == 0:
        if op == AGG_SUM:
            return OK, 0.0
        return EMPTY, 0.0
    for r in rows:
        if not flags[r]:
            return NON_NUMERIC, 0.0
    if op == AGG_SUM or op == AGG_AVG:
        total = 0.0
        for r in rows:
            total += values[r]
        return OK, (total / n if op == AGG_AVG else total)
    best = values[rows[0]]
    for r in rows:
        v = values[r]
        if (op == AGG_MAX and v > best) or (op == AGG_MIN and v < best):
            best = v
    return OK, best


def arg_ext(values, flags, rows, want_max):
    """Position (index into rows) of the first extremal numeric cell."""
    if len(rows) == 0:
        return EMPTY, 0
    best = 0.0
    pos = -1
    for i, r in enumerate(rows):
        if not flags[r]:
            return NON_NUMERIC, 0
        v = values[r]
        if pos < 0 or (want_max and v > best) or (not want_max and v < best):
            best = v
            pos = i
    return OK, pos


def nth_ext(values, flags, rows, n, want_max):
    """n-th largest/smallest value (1-based, duplicates counted).

    Ties are broken by view order. Returns (code, value, pos).
    """
    if len(rows) == 0:
        return EMPTY, 0.0, 0
    for r in rows:
        if not flags[r]:
            return NON_NUMERIC, 0.0, 0
    if n < 1 or n > len(rows):
        return OUT_OF_RANGE, 0.0, 0
    order = sorted(
        range(len(rows)),
        key=(lambda i: (-values[rows[i]], i)) if want_max else (lambda i: (values[rows[i]], i)),
    )
    pos = order[n - 1]
    return OK, values[rows[pos]], pos


def all_num(values, flags, rows, op, x, rel_tol, abs_tol):
    """1 iff every row satisfies (cell op x); vacuously true on no rows.

    Non-numeric cells satisfy only OP_NE (mirrors filter_num).
    """
    for r in rows:
        if flags[r]:
            if not _num_pred(values[r], op, x, rel_tol, abs_tol):
                return 0
        elif op != OP_NE:
            return 0
    return 1


def all_text(texts, rows, needle, mode):
    for r in rows:
        t = texts[r]
        if mode == TEXT_EQ:
            ok = t == needle
        elif mode == TEXT_NE:
            ok = t != needle
        else:
            ok = needle in t
        if not ok:
            return 0
    return 1


def count_distinct(keys, rows):
    seen = set()
    for r in rows:
        seen.add(keys[r])
    return len(seen)


def levenshtein(a, b):
    """Edit distance (unit costs) between two strings."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == b[j - 1] else 1
            m = prev[j] + 1
            if cur[j - 1] + 1 < m:
                m = cur[j - 1] + 1
            if prev[j - 1] + cost < m:
                m = prev[j - 1] + cost
            cur[j] = m
        prev, cur = cur, prev
    return prev[lb]
