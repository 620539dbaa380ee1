"""Command-line interface.

Subcommands: verify, search, link, exec, linearize, train-ranker,
evaluate. A JSON config file (--config) supplies defaults for search
and linearization settings; explicit flags win. Exit code 0 on
success, 2 on data errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from veritab.errors import VeritabError
from veritab.harness import evaluate, load_dataset, verify_statement
from veritab.linearize import LinearizationSpec, linearize_record, prune_columns
from veritab.linker import link
from veritab.ranker import (
    ScorerModel,
    decide,
    dump_record,
    featurize,
    read_dump,
    train,
    write_dump,
)
from veritab.search import SearchConfig, search
from veritab.table import parse_table
from veritab.dsl import execute, parse_trace

log = logging.getLogger("veritab")


def _load_table(path: str, delimiter: str, strict: bool, caption: str = ""):
    with open(path, "rb") as f:
        return parse_table(f.read(), delimiter=delimiter, table_id=path,
                           caption=caption, strict_dims=strict)


def _search_config(args, config: dict) -> SearchConfig:
    base = config.get("search", {})
    return SearchConfig(
        max_step=args.max_step if args.max_step is not None else base.get("max_step", 7),
        max_traces=args.max_traces if args.max_traces is not None else base.get("max_traces", 50),
        trigger_pruning=not args.no_triggers and base.get("trigger_pruning", True),
        dedup=not args.no_dedup and base.get("dedup", True),
        max_expansions=base.get("max_expansions", 200_000),
        time_limit=base.get("time_limit"),
    )


def _add_table_args(p):
    p.add_argument("--table", required=True, help="table file path")
    p.add_argument("--delimiter", default="#")
    p.add_argument("--caption", default="", help="table caption text")
    p.add_argument("--strict-dims", action="store_true",
                   help="reject tables larger than 50 rows or 10 columns")


def _add_search_args(p):
    p.add_argument("--max-step", type=int, default=None)
    p.add_argument("--max-traces", type=int, default=None)
    p.add_argument("--no-triggers", action="store_true",
                   help="search with the full catalog")
    p.add_argument("--no-dedup", action="store_true",
                   help="disable state memoization")


def _add_linearize_args(p):
    p.add_argument("--mode", choices=("concatenation", "template"), default=None)
    p.add_argument("--scan", choices=("horizontal", "vertical"), default=None)
    p.add_argument("--order", choices=("tf", "ft"), default=None,
                   help="tf = table then fact, ft = fact then table")
    p.add_argument("--no-prune", action="store_true",
                   help="keep all columns instead of linked ones")


def _linearize_spec(args, config: dict) -> LinearizationSpec:
    base = config.get("linearize", {})
    order = args.order if args.order is not None else base.get("order", "tf")
    if order in ("tf", "ft"):
        order = "table_then_fact" if order == "tf" else "fact_then_table"
    return LinearizationSpec(
        mode=args.mode if args.mode is not None else base.get("mode", "template"),
        scan=args.scan if args.scan is not None else base.get("scan", "horizontal"),
        order=order,
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="veritab",
                                description="Fact verification over tables "
                                            "via latent program search")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("link", help="show entity links for a statement")
    _add_table_args(sp)
    sp.add_argument("--statement", required=True)

    sp = sub.add_parser("exec", help="execute a program trace against a table")
    _add_table_args(sp)
    sp.add_argument("--trace", required=True)

    sp = sub.add_parser("search", help="enumerate candidate programs")
    _add_table_args(sp)
    sp.add_argument("--statement", required=True)
    sp.add_argument("--model", default=None, help="scorer model for confidences")
    _add_search_args(sp)

    sp = sub.add_parser("search-batch",
                        help="run search over a statements file, write a "
                             "candidate dump for ranker training")
    sp.add_argument("--statements", required=True,
                    help="JSONL of {table_id, statement, label}")
    sp.add_argument("--tables", required=True, help="directory of table files")
    sp.add_argument("--out", required=True, help="output dump (JSONL)")
    sp.add_argument("--delimiter", default="#")
    _add_search_args(sp)

    sp = sub.add_parser("train-ranker", help="fit the scorer on a candidate dump")
    sp.add_argument("--dump", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--caption", action="store_true",
                    help="include caption tokens as features")
    sp.add_argument("--epochs", type=int, default=20)
    sp.add_argument("--lr", type=float, default=0.5)
    sp.add_argument("--l2", type=float, default=1e-6)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("verify", help="verdict for one statement")
    _add_table_args(sp)
    sp.add_argument("--statement", required=True)
    sp.add_argument("--mode", choices=("voting", "weighted", "ranking"),
                    default="voting")
    sp.add_argument("--model", default=None)
    _add_search_args(sp)

    sp = sub.add_parser("linearize", help="emit the text premise for a table")
    _add_table_args(sp)
    sp.add_argument("--statement", required=True)
    _add_linearize_args(sp)
    sp.add_argument("--json", action="store_true", help="emit the full record")

    sp = sub.add_parser("linearize-batch",
                        help="premise records for a statements file, for "
                             "external sequence-model trainers")
    sp.add_argument("--statements", required=True,
                    help="JSONL of {table_id, statement, label}")
    sp.add_argument("--tables", required=True, help="directory of table files")
    sp.add_argument("--out", required=True, help="output records (JSONL)")
    sp.add_argument("--delimiter", default="#")
    _add_linearize_args(sp)

    sp = sub.add_parser("evaluate", help="run a dataset split end to end")
    sp.add_argument("--data", required=True, help="dataset root directory")
    sp.add_argument("--split", choices=("train", "val", "test"), default="val")
    sp.add_argument("--mode", choices=("voting", "weighted", "ranking"),
                    default="voting")
    sp.add_argument("--model", default=None)
    sp.add_argument("--limit", type=int, default=None,
                    help="evaluate only the first N instances")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--time-limit", type=float, default=10.0,
                    help="per-instance search budget in seconds")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    _add_search_args(sp)

    return p


def _cmd_link(args, config):
    table = _load_table(args.table, args.delimiter, args.strict_dims, args.caption)
    linked = link(args.statement, table)
    print(json.dumps(linked.to_record(), indent=2))
    return 0


def _cmd_exec(args, config):
    table = _load_table(args.table, args.delimiter, args.strict_dims, args.caption)
    program = parse_trace(args.trace)
    result = execute(program, table)
    print(result.render())
    return 0


def _cmd_search(args, config):
    table = _load_table(args.table, args.delimiter, args.strict_dims, args.caption)
    cfg = _search_config(args, config)
    linked = link(args.statement, table)
    candidates = search(table, linked, cfg)
    model = ScorerModel.load(args.model) if args.model else None
    for program, result in candidates.items:
        line = f"{program.trace}\t{result}"
        if model is not None:
            score = model.score(featurize(linked, program, model.use_caption))
            line += f"\t{score:.6f}"
        print(line)
    log.info("stats: %s", candidates.stats)
    return 0


def _cmd_search_batch(args, config):
    cfg = _search_config(args, config)
    tables = {}
    records = []
    with open(args.statements, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            item = json.loads(line)
            tid = item["table_id"]
            if tid not in tables:
                tables[tid] = _load_table(os.path.join(args.tables, tid),
                                          args.delimiter, False,
                                          item.get("caption", ""))
            table = tables[tid]
            linked = link(item["statement"], table)
            candidates = search(table, linked, cfg)
            records.append(dump_record(table, linked, item.get("label", 0),
                                       candidates))
    write_dump(args.out, records)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_train_ranker(args, config):
    records = read_dump(args.dump)
    model = train(records, use_caption=args.caption, epochs=args.epochs,
                  lr=args.lr, l2=args.l2, seed=args.seed)
    model.save(args.out)
    print(f"model saved to {args.out}; "
          f"final train loss {model.meta['train_loss'][-1]:.4f}; "
          f"holdout loss {model.meta['holdout_loss']}")
    return 0


def _cmd_verify(args, config):
    table = _load_table(args.table, args.delimiter, args.strict_dims, args.caption)
    cfg = _search_config(args, config)
    model = ScorerModel.load(args.model) if args.model else None
    verdict, candidates, _ = verify_statement(
        table, args.statement, mode=args.mode, model=model, cfg=cfg)
    print(f"{verdict.label.name}\tconfidence={verdict.confidence:.4f}"
          f"\tcandidates={len(candidates.items)}")
    if verdict.rationale is not None:
        print(f"rationale: {verdict.rationale.trace}")
    return 0


def _cmd_linearize(args, config):
    table = _load_table(args.table, args.delimiter, args.strict_dims, args.caption)
    spec = _linearize_spec(args, config)
    if args.no_prune:
        view = table.view()
    else:
        view = prune_columns(table, link(args.statement, table))
    record = linearize_record(view, args.statement, spec)
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print(record["premise"])
    return 0


def _cmd_linearize_batch(args, config):
    spec = _linearize_spec(args, config)
    tables = {}
    n = 0
    with open(args.statements, encoding="utf-8") as fin, \
            open(args.out, "w", encoding="utf-8") as fout:
        for line in fin:
            line = line.strip()
            if not line:
                continue
            item = json.loads(line)
            tid = item["table_id"]
            if tid not in tables:
                tables[tid] = _load_table(os.path.join(args.tables, tid),
                                          args.delimiter, False,
                                          item.get("caption", ""))
            table = tables[tid]
            if args.no_prune:
                view = table.view()
            else:
                view = prune_columns(table, link(item["statement"], table))
            record = linearize_record(view, item["statement"], spec)
            record["table_id"] = tid
            if "label" in item:
                record["label"] = int(item["label"])
            fout.write(json.dumps(record) + "\n")
            n += 1
    print(f"wrote {n} records to {args.out}")
    return 0


def _cmd_evaluate(args, config):
    instances = load_dataset(args.data, args.split)
    if args.limit is not None:
        instances = instances[:args.limit]
    model = ScorerModel.load(args.model) if args.model else None
    cfg = _search_config(args, config)
    report = evaluate(instances, mode=args.mode, model=model, cfg=cfg,
                      workers=args.workers, time_limit=args.time_limit)
    print(report.render_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(report.to_json(), f, indent=2)
    return 0


_COMMANDS = {
    "link": _cmd_link,
    "exec": _cmd_exec,
    "search": _cmd_search,
    "search-batch": _cmd_search_batch,
    "train-ranker": _cmd_train_ranker,
    "verify": _cmd_verify,
    "linearize": _cmd_linearize,
    "linearize-batch": _cmd_linearize_batch,
    "evaluate": _cmd_evaluate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    config = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as f:
                config = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
    try:
        return _COMMANDS[args.command](args, config)
    except (VeritabError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
