"""Candidate scoring and the three decision modes.

The scorer is a logistic model over hashed sparse features of the
(statement, program) pair, trained with weak labels: a candidate is
positive exactly when its executed result matches the gold verdict.
Any object with a ``score(features) -> float in (0,1)`` method can be
plugged in where a ScorerModel is accepted.

Decision modes:
  voting   -- majority over executed results, equal weights
  weighted -- sign of the score-weighted sum of {+1,-1} results
  ranking  -- verdict of the highest-scoring candidate, kept as the
              rationale

Ties (and empty candidate sets) default to REFUTED.
"""
from __future__ import annotations

import json
import math
import random
import zlib
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable

from veritab.errors import DegenerateDump, ModelMissing
from veritab.linker import LinkedStatement
from veritab.linker import tokenize as _tokenize
from veritab.search import CandidateSet
from veritab.dsl.program import Program, parse_trace

FEATURE_DIM = 1 << 20   # hashed feature space; collisions tolerated


class Label(IntEnum):
    REFUTED = 0
    ENTAILED = 1


@dataclass
class Verdict:
    label: Label
    confidence: float
    rationale: Program | None = None

    def to_record(self) -> dict:
        return {
            "label": self.label.name,
            "confidence": self.confidence,
            "rationale": self.rationale.trace if self.rationale else None,
        }


def _hash(feature: str) -> int:
    return zlib.crc32(feature.encode("utf-8")) & (FEATURE_DIM - 1)


def _feature_values(tokens: list[str], caption: str, link_kinds: list[str],
                    program: Program, use_caption: bool) -> dict[int, float]:
    feats: dict[int, float] = {}

    def add(name: str, value: float = 1.0):
        idx = _hash(name)
        feats[idx] = feats.get(idx, 0.0) + value

    for t in tokens:
        add(f"u={t}")
    for a, b in zip(tokens, tokens[1:]):
        add(f"b={a}|{b}")
    fns = program.function_names()
    for f in fns:
        add(f"p={f}")
    for a, b in zip(fns, fns[1:]):
        add(f"q={a}|{b}")
    for kind in link_kinds:
        add(f"slot={kind}")
    for t in tokens:
        for f in fns:
            add(f"x={t}|{f}")
    add("depth", float(program.depth))
    if use_caption:
        for t, _, _ in _tokenize(caption):
            add(f"c={t}")
    return feats


def featurize(statement: LinkedStatement, program: Program,
              use_caption: bool = False) -> dict[int, float]:
    """Deterministic sparse features for one (statement, program) pair."""
    return _feature_values(
        tokens=statement.tokens,
        caption=statement.caption,
        link_kinds=[l.kind for l in statement.links],
        program=program,
        use_caption=use_caption,
    )


def _sigmoid(z: float) -> float:
    if z > 35.0:
        z = 35.0
    elif z < -35.0:
        z = -35.0
    return 1.0 / (1.0 + math.exp(-z))


@dataclass
class ScorerModel:
    weights: dict[int, float] = field(default_factory=dict)
    bias: float = 0.0
    dim: int = FEATURE_DIM
    use_caption: bool = False
    meta: dict = field(default_factory=dict)

    def score(self, feats: dict[int, float]) -> float:
        z = self.bias
        w = self.weights
        for i, v in feats.items():
            wi = w.get(i)
            if wi is not None:
                z += wi * v
        return _sigmoid(z)

    def save(self, path: str) -> None:
        payload = {
            "version": 1,
            "dim": self.dim,
            "bias": self.bias,
            "use_caption": self.use_caption,
            "weights": {str(i): w for i, w in self.weights.items()},
            "meta": self.meta,
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f)

    @classmethod
    def load(cls, path: str) -> "ScorerModel":
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
        return cls(
            weights={int(i): w for i, w in payload["weights"].items()},
            bias=payload["bias"],
            dim=payload["dim"],
            use_caption=payload["use_caption"],
            meta=payload.get("meta", {}),
        )


# ---- candidate dump: the training artifact produced by batch search ----

def dump_record(table, linked: LinkedStatement, label: int,
                candidates: CandidateSet) -> dict:
    return {
        "table_id": table.table_id,
        "statement": linked.original,
        "caption": linked.caption,
        "tokens": linked.tokens,
        "link_kinds": [l.kind for l in linked.links],
        "label": int(label),
        "candidates": [[p.trace, bool(r)] for p, r in candidates.items],
    }


def write_dump(path: str, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec) + "\n")


def read_dump(path: str) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def _dump_samples(records: list[dict], use_caption: bool):
    """(features, weak label, statement index) triples from a dump."""
    samples = []
    for si, rec in enumerate(records):
        gold = int(rec["label"])
        for trace, result in rec["candidates"]:
            program = parse_trace(trace)
            feats = _feature_values(
                tokens=list(rec.get("tokens", [])),
                caption=rec.get("caption", ""),
                link_kinds=list(rec.get("link_kinds", [])),
                program=program,
                use_caption=use_caption,
            )
            y = 1 if int(bool(result)) == gold else 0
            samples.append((feats, y, si))
    return samples


def train(records: list[dict], use_caption: bool = False, epochs: int = 20,
          lr: float = 0.5, l2: float = 1e-6, seed: int = 0,
          holdout_every: int = 10) -> ScorerModel:
    """Fit the scorer on weak labels by SGD on the logistic loss.

    Statements whose index is a multiple of `holdout_every` are held
    out; their final loss lands in model.meta["holdout_loss"]. Training
    is deterministic under a fixed seed.
    """
    if not records:
        raise DegenerateDump("empty dump")
    samples = _dump_samples(records, use_caption)
    labels = {y for _, y, _ in samples}
    if len(labels) < 2:
        raise DegenerateDump("all candidates carry one weak label")

    n_statements = len(records)
    holdout_ids = (set(range(0, n_statements, holdout_every))
                   if n_statements > holdout_every else set())
    train_set = [(f, y) for f, y, si in samples if si not in holdout_ids]
    held_set = [(f, y) for f, y, si in samples if si in holdout_ids]
    if not train_set or len({y for _, y in train_set}) < 2:
        train_set = [(f, y) for f, y, _ in samples]
        held_set = []

    rng = random.Random(seed)
    weights: dict[int, float] = {}
    bias = 0.0
    order = list(range(len(train_set)))
    loss_history = []
    for _ in range(epochs):
        rng.shuffle(order)
        total = 0.0
        for k in order:
            feats, y = train_set[k]
            z = bias
            for i, v in feats.items():
                wi = weights.get(i)
                if wi is not None:
                    z += wi * v
            p = _sigmoid(z)
            total += -(y * math.log(p) + (1 - y) * math.log(1.0 - p))
            g = p - y
            for i, v in feats.items():
                w = weights.get(i, 0.0)
                weights[i] = w - lr * (g * v + l2 * w)
            bias -= lr * g
        loss_history.append(total / len(train_set))

    model = ScorerModel(weights=weights, bias=bias, use_caption=use_caption)
    model.meta = {
        "epochs": epochs,
        "train_loss": loss_history,
        "holdout_loss": _mean_loss(model, held_set) if held_set else None,
        "n_train": len(train_set),
        "n_holdout": len(held_set),
    }
    return model


def _mean_loss(model: ScorerModel, samples) -> float:
    total = 0.0
    for feats, y in samples:
        p = model.score(feats)
        total += -(y * math.log(p) + (1 - y) * math.log(1.0 - p))
    return total / len(samples)


def decide(candidates: CandidateSet, model=None, mode: str = "voting",
           linked: LinkedStatement | None = None,
           tie_break: Label = Label.REFUTED) -> Verdict:
    """Turn a candidate set into a verdict.

    `linked` is required for the score-based modes (features depend on
    the statement). An empty candidate set yields REFUTED at zero
    confidence: the default guess.
    """
    if mode not in ("voting", "weighted", "ranking"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "voting" and model is None:
        raise ModelMissing(f"mode {mode!r} needs a scorer model")
    if not candidates.items:
        return Verdict(Label.REFUTED, 0.0, None)

    if mode == "voting":
        t = sum(1 for _, r in candidates.items if r)
        f = len(candidates.items) - t
        if t == f:
            label = tie_break
        else:
            label = Label.ENTAILED if t > f else Label.REFUTED
        return Verdict(label, abs(t - f) / len(candidates.items), None)

    use_caption = getattr(model, "use_caption", False)
    scores = []
    for program, _ in candidates.items:
        if linked is not None:
            feats = featurize(linked, program, use_caption)
        else:
            feats = _feature_values([], "", [], program, False)
        scores.append(model.score(feats))

    if mode == "weighted":
        signed = sum(s * (1.0 if r else -1.0)
                     for s, (_, r) in zip(scores, candidates.items))
        mass = sum(scores)
        if signed == 0.0:
            return Verdict(tie_break, 0.0, None)
        label = Label.ENTAILED if signed > 0 else Label.REFUTED
        return Verdict(label, abs(signed) / mass if mass else 0.0, None)

    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    program, result = candidates.items[best]
    label = Label.ENTAILED if result else Label.REFUTED
    return Verdict(label, scores[best], program)
