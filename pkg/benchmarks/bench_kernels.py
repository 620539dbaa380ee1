#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times each kernel on synthetic columns, then an end-to-end search on a
synthetic table with whichever backend the package selected at import.

    python3 benchmarks/bench_kernels.py [--rows 2000] [--repeat 200]
"""
import argparse
import random
import time
from array import array

from veritab import _pykernels as pk

try:
    from veritab import _ckernels as ck
except ImportError:
    ck = None


def make_column(rng, n, numeric_share=0.8):
    values = array("d", [0.0] * n)
    flags = bytearray(n)
    texts = []
    for i in range(n):
        if rng.random() < numeric_share:
            values[i] = rng.uniform(-100, 100)
            flags[i] = 1
            texts.append(str(round(values[i], 2)))
        else:
            texts.append(rng.choice(["red", "blue", "green", "delta"]))
    return values, flags, texts


def time_call(fn, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_backend(mod, rng_seed, n_rows, repeat):
    rng = random.Random(rng_seed)
    values, flags, texts = make_column(rng, n_rows)
    nvalues, nflags, _ = make_column(rng, n_rows, numeric_share=1.0)
    rows = tuple(range(n_rows))
    words = ["committee", "commitee", "tournament", "tournamnet",
             "john j. mcfall", "john mcfall", "representatives"]
    results = {}
    results["filter_num"] = time_call(
        lambda: mod.filter_num(values, flags, rows, mod.OP_GE, 0.0, 1e-6, 1e-9),
        repeat)
    results["filter_text"] = time_call(
        lambda: mod.filter_text(texts, rows, "red", mod.TEXT_CONTAINS), repeat)
    results["agg_num(avg)"] = time_call(
        lambda: mod.agg_num(nvalues, nflags, rows, mod.AGG_AVG), repeat)
    results["arg_ext"] = time_call(
        lambda: mod.arg_ext(nvalues, nflags, rows, True), repeat)
    results["nth_ext"] = time_call(
        lambda: mod.nth_ext(nvalues, nflags, rows, 3, True), repeat)
    results["all_num"] = time_call(
        lambda: mod.all_num(nvalues, nflags, rows, mod.OP_LE, 1e6, 1e-6, 1e-9),
        repeat)
    results["levenshtein"] = time_call(
        lambda: [mod.levenshtein(a, b) for a in words for b in words],
        max(1, repeat // 10))
    return results


def bench_search():
    """End-to-end search timing with the active backend."""
    from veritab import KERNEL_BACKEND, SearchConfig, Table, search
    from veritab.linker import LinkedStatement

    rng = random.Random(13)
    rows = [[str(rng.randint(0, 50)), rng.choice(["red", "blue", "green"]),
             f"{rng.randint(0, 20)}.{rng.randint(0, 9)}"]
            for _ in range(12)]
    table = Table.from_raw_rows(["points", "team", "margin"], rows, table_id="bench")
    linked = LinkedStatement(
        original="the red team has the highest total of more than 30 points",
        tokens=[], links=[], masked_text="",
        raw_tokens="the red team has the highest total of more than 30 points".split(),
        lemmas=[], num_seeds=[30.0], str_seeds=["red"],
    )
    t0 = time.perf_counter()
    out = search(table, linked, SearchConfig())
    dt = time.perf_counter() - t0
    return KERNEL_BACKEND, len(out.items), out.stats.applications, dt


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    print(f"columns of {args.rows} rows, {args.repeat} repeats\n")
    py = bench_backend(pk, 42, args.rows, args.repeat)
    cy = bench_backend(ck, 42, args.rows, args.repeat) if ck else None

    header = f"{'kernel':<16}{'python':>12}" + (f"{'compiled':>12}{'speedup':>10}" if cy else "")
    print(header)
    print("-" * len(header))
    for name, t_py in py.items():
        line = f"{name:<16}{t_py * 1e6:>10.1f}us"
        if cy:
            t_cy = cy[name]
            line += f"{t_cy * 1e6:>10.1f}us{t_py / t_cy:>9.1f}x"
        print(line)

    backend, n_items, n_apps, dt = bench_search()
    print(f"\nend-to-end search [{backend} backend]: "
          f"{n_items} candidates, {n_apps} applications, {dt:.2f}s")
    if not ck:
        print("compiled kernels not built; run pip install -e . to compare")


if __name__ == "__main__":
    main()
