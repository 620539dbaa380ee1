"""Kernel backend selection.

Prefers the compiled extension (`veritab._ckernels`) when it was built;
falls back to the pure-Python twin otherwise. VERITAB_PURE_PYTHON=1
forces the fallback, which is what the benchmark and the parity tests
use to drive both implementations side by side.
"""
import os

if os.environ.get("VERITAB_PURE_PYTHON") == "1":
    from veritab import _pykernels as _impl
else:
    try:
        from veritab import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from veritab import _pykernels as _impl

BACKEND = _impl.BACKEND_NAME

OP_EQ = _impl.OP_EQ
OP_NE = _impl.OP_NE
OP_GT = _impl.OP_GT
OP_LT = _impl.OP_LT
OP_GE = _impl.OP_GE
OP_LE = _impl.OP_LE
TEXT_EQ = _impl.TEXT_EQ
TEXT_NE = _impl.TEXT_NE
TEXT_CONTAINS = _impl.TEXT_CONTAINS
AGG_SUM = _impl.AGG_SUM
AGG_AVG = _impl.AGG_AVG
AGG_MAX = _impl.AGG_MAX
AGG_MIN = _impl.AGG_MIN
OK = _impl.OK
EMPTY = _impl.EMPTY
NON_NUMERIC = _impl.NON_NUMERIC
OUT_OF_RANGE = _impl.OUT_OF_RANGE

filter_num = _impl.filter_num
filter_text = _impl.filter_text
agg_num = _impl.agg_num
arg_ext = _impl.arg_ext
nth_ext = _impl.nth_ext
all_num = _impl.all_num
all_text = _impl.all_text
count_distinct = _impl.count_distinct
levenshtein = _impl.levenshtein
