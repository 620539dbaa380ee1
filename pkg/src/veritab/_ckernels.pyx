# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Exact twin of veritab._pykernels (same names, signatures, semantics);
keep the two files in lockstep. tests/test_kernels.py checks parity on
random inputs.
"""
from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"

OP_EQ, OP_NE, OP_GT, OP_LT, OP_GE, OP_LE = 0, 1, 2, 3, 4, 5
TEXT_EQ, TEXT_NE, TEXT_CONTAINS = 0, 1, 2
AGG_SUM, AGG_AVG, AGG_MAX, AGG_MIN = 0, 1, 2, 3
OK, EMPTY, NON_NUMERIC, OUT_OF_RANGE = 0, 1, 2, 3


cdef inline bint _close(double a, double b, double rel_tol, double abs_tol) noexcept:
    cdef double d = a - b
    cdef double aa, ab, m, lim
    if d < 0.0:
        d = -d
    aa = a if a >= 0.0 else -a
    ab = b if b >= 0.0 else -b
    m = aa if aa >= ab else ab
    lim = rel_tol * m
    if abs_tol > lim:
        lim = abs_tol
    return d <= lim


cdef inline bint _num_pred(double v, int op, double x,
                           double rel_tol, double abs_tol) noexcept:
    if op == 0:
        return _close(v, x, rel_tol, abs_tol)
    if op == 1:
        return not _close(v, x, rel_tol, abs_tol)
    if op == 2:
        return v > x
    if op == 3:
        return v < x
    if op == 4:
        return v >= x
    return v <= x


def filter_num(const double[:] values, const unsigned char[:] flags, rows,
               int op, double x, double rel_tol, double abs_tol):
    """Rows whose cell is numeric and satisfies (cell op x).

    Exception: under OP_NE a non-numeric cell counts as "not equal",
    so filter_eq/filter_not_eq partition every column.
    """
    cdef Py_ssize_t k, r, n = len(rows)
    out = []
    for k in range(n):
        r = rows[k]
        if flags[r]:
            if _num_pred(values[r], op, x, rel_tol, abs_tol):
                out.append(r)
        elif op == 1:
            out.append(r)
    return tuple(out)


def filter_text(list texts, rows, str needle, int mode):
    cdef Py_ssize_t k, r, n = len(rows)
    cdef bint keep
    cdef str t
    out = []
    for k in range(n):
        r = rows[k]
        t = <str>texts[r]
        if mode == 0:
            keep = t == needle
        elif mode == 1:
            keep = t != needle
        else:
            keep = needle in t
        if keep:
            out.append(r)
    return tuple(out)


def agg_num(const double[:] values, const unsigned char[:] flags, rows, int op):
    """(code, value). Empty rows: sum -> 0.0, others -> EMPTY.

    Any non-numeric cell in the selection -> NON_NUMERIC.
    """
    cdef Py_ssize_t k, r, n = len(rows)
    cdef double total, best, v
    if n == 0:
        if op == 0:
            return OK, 0.0
        return EMPTY, 0.0
    for k in range(n):
        r = rows[k]
        if not flags[r]:
            return NON_NUMERIC, 0.0
    if op == 0 or op == 1:
        total = 0.0
        for k in range(n):
            total += values[rows[k]]
        return OK, (total / n if op == 1 else total)
    best = values[rows[0]]
    for k in range(n):
        v = values[rows[k]]
        if (op == 2 and v > best) or (op == 3 and v < best):
            best = v
    return OK, best


def arg_ext(const double[:] values, const unsigned char[:] flags, rows,
            bint want_max):
    """Position (index into rows) of the first extremal numeric cell."""
    cdef Py_ssize_t k, r, pos = -1, n = len(rows)
    cdef double best = 0.0, v
    if n == 0:
        return EMPTY, 0
    for k in range(n):
        r = rows[k]
        if not flags[r]:
            return NON_NUMERIC, 0
        v = values[r]
        if pos < 0 or (want_max and v > best) or (not want_max and v < best):
            best = v
            pos = k
    return OK, pos


def nth_ext(const double[:] values, const unsigned char[:] flags, rows,
            long n, bint want_max):
    """n-th largest/smallest value (1-based, duplicates counted).

    Ties are broken by view order. Returns (code, value, pos).
    """
    cdef Py_ssize_t k, r, m = len(rows)
    if m == 0:
        return EMPTY, 0.0, 0
    for k in range(m):
        if not flags[rows[k]]:
            return NON_NUMERIC, 0.0, 0
    if n < 1 or n > m:
        return OUT_OF_RANGE, 0.0, 0
    cdef double v
    items = []
    for k in range(m):
        v = values[rows[k]]
        items.append((-v if want_max else v, k))
    items.sort()
    pos = items[n - 1][1]
    return OK, values[rows[pos]], pos


def all_num(const double[:] values, const unsigned char[:] flags, rows,
            int op, double x, double rel_tol, double abs_tol):
    """1 iff every row satisfies (cell op x); vacuously true on no rows.

    Non-numeric cells satisfy only OP_NE (mirrors filter_num).
    """
    cdef Py_ssize_t k, r, n = len(rows)
    for k in range(n):
        r = rows[k]
        if flags[r]:
            if not _num_pred(values[r], op, x, rel_tol, abs_tol):
                return 0
        elif op != 1:
            return 0
    return 1


def all_text(list texts, rows, str needle, int mode):
    cdef Py_ssize_t k, r, n = len(rows)
    cdef bint ok
    cdef str t
    for k in range(n):
        r = rows[k]
        t = <str>texts[r]
        if mode == 0:
            ok = t == needle
        elif mode == 1:
            ok = t != needle
        else:
            ok = needle in t
        if not ok:
            return 0
    return 1


def count_distinct(list keys, rows):
    cdef Py_ssize_t k, n = len(rows)
    seen = set()
    for k in range(n):
        seen.add(keys[rows[k]])
    return len(seen)


def levenshtein(str a, str b):
    """Edit distance (unit costs) between two strings."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i, j
    cdef long cost, m, v, result
    cdef long *prev
    cdef long *cur
    cdef long *tmp
    cdef Py_UCS4 ca
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = <long *> malloc((lb + 1) * sizeof(long))
    cur = <long *> malloc((lb + 1) * sizeof(long))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    for j in range(lb + 1):
        prev[j] = j
    for i in range(1, la + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == <Py_UCS4>b[j - 1] else 1
            m = prev[j] + 1
            v = cur[j - 1] + 1
            if v < m:
                m = v
            v = prev[j - 1] + cost
            if v < m:
                m = v
            cur[j] = m
        tmp = prev
        prev = cur
        cur = tmp
    result = prev[lb]
    free(prev)
    free(cur)
    return result
