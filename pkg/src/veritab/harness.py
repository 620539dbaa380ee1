"""Dataset loading, category tagging, and end-to-end evaluation.

The dataset layout follows the released corpus: a JSON map per split
(`<split>_examples.json`) from table file name to [statements, labels,
caption], with the table files themselves in an `all_csv/` directory
('#'-delimited, header row first). Channel membership (simple/complex)
is read from `simple_<split>_id.json` / `complex_<split>_id.json` when
those files exist, else instances are tagged "unknown".
"""
from __future__ import annotations

import json
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from veritab.errors import LabelArityMismatch, MissingTable
from veritab.linker import LinkedStatement, link, tokenize
from veritab.ranker import Label, ScorerModel, Verdict, decide
from veritab.search import CandidateSet, SearchConfig, search
from veritab.table import Table, parse_table

log = logging.getLogger("veritab")

CATEGORIES = ("aggregation", "negation", "superlative", "comparative",
              "ordinal", "unique", "all", "none")

_CATEGORY_WORDS = {
    "aggregation": {"average", "avg", "total", "sum", "altogether",
                    "combined", "overall", "mean"},
    "negation": {"not", "never", "no", "n't", "without", "neither", "nor"},
    "superlative": {"highest", "lowest", "best", "worst", "most", "least",
                    "largest", "smallest", "greatest", "biggest", "top",
                    "maximum", "minimum", "longest", "shortest", "earliest",
                    "latest"},
    "comparative": {"higher", "lower", "more", "less", "fewer", "greater",
                    "smaller", "bigger", "than", "better", "worse", "older",
                    "younger", "longer", "shorter", "faster", "slower"},
    "ordinal": {"first", "second", "third", "fourth", "fifth", "sixth",
                "seventh", "eighth", "ninth", "tenth", "last"},
    "unique": {"only", "unique", "different", "distinct"},
    "all": {"all", "every", "each", "none", "always", "both"},
}

_ORDINAL_TOKEN = re.compile(r"[0-9]+(?:st|nd|rd|th)$")


def categorize(statement: str) -> set[str]:
    """Trigger-lexicon multi-tag; {"none"} iff nothing else fires."""
    tokens = [t for t, _, _ in tokenize(statement)]
    tags = set()
    for tok in tokens:
        for cat, words in _CATEGORY_WORDS.items():
            if tok in words:
                tags.add(cat)
        if tok.endswith("n't") and len(tok) > 3:
            tags.add("negation")
        if _ORDINAL_TOKEN.fullmatch(tok):
            tags.add("ordinal")
    return tags or {"none"}


@dataclass
class Instance:
    table_id: str
    statement: str
    label: int                   # ENTAILED=1, REFUTED=0
    channel: str = "unknown"     # simple | complex | unknown
    table: Table | None = None


def _find_tables_dir(root: str) -> str:
    for sub in ("all_csv", os.path.join("data", "all_csv"), "csv"):
        path = os.path.join(root, sub)
        if os.path.isdir(path):
            return path
    return root


def _load_channel_ids(root: str, split: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for channel in ("simple", "complex"):
        for pattern in (f"{channel}_{split}_id.json", f"{split}_{channel}_ids.json"):
            path = os.path.join(root, pattern)
            if os.path.isfile(path):
                with open(path, encoding="utf-8") as f:
                    for tid in json.load(f):
                        out[tid] = channel
                break
    return out


def load_dataset(root: str, split: str) -> list[Instance]:
    """All statements of one split, each resolved to its parsed table."""
    examples_path = os.path.join(root, f"{split}_examples.json")
    if not os.path.isfile(examples_path):
        examples_path = os.path.join(root, f"{split}.json")
    with open(examples_path, encoding="utf-8") as f:
        examples = json.load(f)

    tables_dir = _find_tables_dir(root)
    channels = _load_channel_ids(root, split)

    instances: list[Instance] = []
    tables: dict[str, Table] = {}
    for table_id, payload in examples.items():
        statements, labels, caption = payload[0], payload[1], payload[2]
        if len(statements) != len(labels):
            raise LabelArityMismatch(table_id, len(statements), len(labels))
        if table_id not in tables:
            path = os.path.join(tables_dir, table_id)
            if not os.path.isfile(path):
                raise MissingTable(table_id)
            with open(path, "rb") as f:
                tables[table_id] = parse_table(
                    f.read(), table_id=table_id,
                    caption=caption if isinstance(caption, str) else "",
                )
        channel = channels.get(table_id, "unknown")
        for stmt, lab in zip(statements, labels):
            instances.append(Instance(
                table_id=table_id, statement=stmt, label=int(lab),
                channel=channel, table=tables[table_id],
            ))
    log.info("loaded %d instances from %s", len(instances), examples_path)
    return instances


def verify_statement(table: Table, statement: str, mode: str = "voting",
                     model: ScorerModel | None = None,
                     cfg: SearchConfig | None = None,
                     ) -> tuple[Verdict, CandidateSet, LinkedStatement]:
    """The full pipeline for one statement: link -> search -> decide."""
    linked = link(statement, table)
    candidates = search(table, linked, cfg)
    verdict = decide(candidates, model=model, mode=mode, linked=linked)
    return verdict, candidates, linked


@dataclass
class EvalReport:
    total: int = 0
    correct: int = 0
    confusion: dict = field(default_factory=lambda: {"tp": 0, "tn": 0, "fp": 0, "fn": 0})
    per_channel: dict = field(default_factory=dict)
    per_category: dict = field(default_factory=dict)
    timeouts: int = 0
    errors: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "per_channel": self.per_channel,
            "per_category": self.per_category,
            "timeouts": self.timeouts,
            "errors": self.errors,
        }

    def render_text(self) -> str:
        lines = [
            f"instances   {self.total}",
            f"correct     {self.correct}",
            f"accuracy    {self.accuracy:.4f}",
            f"timeouts    {self.timeouts}",
            f"errors      {self.errors}",
            ("confusion   tp={tp} tn={tn} fp={fp} fn={fn}".format(**self.confusion)),
        ]
        for title, table in (("channel", self.per_channel),
                             ("category", self.per_category)):
            if table:
                lines.append(f"-- by {title}")
                for key in sorted(table):
                    row = table[key]
                    lines.append(
                        f"  {key:<12} {row['correct']:>6}/{row['total']:<6}"
                        f" acc={row['accuracy']:.4f}"
                    )
        return "\n".join(lines)


def _eval_one(payload) -> dict:
    instance, mode, model, cfg = payload
    out = {
        "gold": instance.label,
        "channel": instance.channel,
        "categories": sorted(categorize(instance.statement)),
        "pred": None,
        "timed_out": False,
        "error": None,
    }
    try:
        verdict, candidates, _ = verify_statement(
            instance.table, instance.statement, mode=mode, model=model, cfg=cfg)
        if candidates.stats.timed_out:
            out["timed_out"] = True
            out["pred"] = int(Label.REFUTED)
        else:
            out["pred"] = int(verdict.label)
    except Exception as exc:  # per-instance failures count as incorrect
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def evaluate(instances: list[Instance], mode: str = "voting",
             model: ScorerModel | None = None,
             cfg: SearchConfig | None = None,
             workers: int = 1, time_limit: float | None = 10.0) -> EvalReport:
    """Run the pipeline over instances and fold the verdicts into a
    report. Instances evaluate independently (optionally in parallel);
    the reduction is deterministic in input order."""
    cfg = cfg or SearchConfig()
    if time_limit is not None:
        cfg = SearchConfig(
            max_step=cfg.max_step, max_traces=cfg.max_traces,
            trigger_pruning=cfg.trigger_pruning, dedup=cfg.dedup,
            max_expansions=cfg.max_expansions, time_limit=time_limit,
        )
    payloads = [(inst, mode, model, cfg) for inst in instances]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_eval_one, payloads, chunksize=8))
    else:
        results = [_eval_one(p) for p in payloads]

    report = EvalReport()
    for res in results:
        report.total += 1
        gold = res["gold"]
        pred = res["pred"]
        ok = pred is not None and pred == gold
        if ok:
            report.correct += 1
        if res["error"] is not None:
            report.errors += 1
            log.warning("instance failed: %s", res["error"])
        if res["timed_out"]:
            report.timeouts += 1
        if pred is not None:
            key = ("tp" if pred == 1 and gold == 1 else
                   "tn" if pred == 0 and gold == 0 else
                   "fp" if pred == 1 else "fn")
            report.confusion[key] += 1
        for bucket, name in ((report.per_channel, res["channel"]),
                             *[(report.per_category, c) for c in res["categories"]]):
            row = bucket.setdefault(name, {"total": 0, "correct": 0, "accuracy": 0.0})
            row["total"] += 1
            row["correct"] += int(ok)
    for bucket in (report.per_channel, report.per_category):
        for row in bucket.values():
            row["accuracy"] = row["correct"] / row["total"] if row["total"] else 0.0
    return report
