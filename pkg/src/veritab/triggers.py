"""Trigger lexicon: lexical cues that admit functions into a search.

The lexicon is data (data/triggers.json, versioned) so it can be tuned
without code changes. Single words match statement tokens (raw or
lemmatized); phrases match on the normalized statement text; the
"numeral" entry fires when the statement carries any numeric token.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load_lexicon() -> dict:
    text = resources.files("veritab").joinpath("data/triggers.json").read_text("utf-8")
    lex = json.loads(text)
    for key in ("version", "words", "phrases", "numeral"):
        if key not in lex:
            raise ValueError(f"trigger lexicon missing {key!r}")
    return lex


@lru_cache(maxsize=None)
def triggers_for_function(name: str) -> frozenset[str]:
    """Inverted lexicon: the words/phrases that admit `name`."""
    lex = load_lexicon()
    hits = set()
    for word, fns in lex["words"].items():
        if name in fns:
            hits.add(word)
    for phrase, fns in lex["phrases"].items():
        if name in fns:
            hits.add(phrase)
    if name in lex["numeral"]:
        hits.add("<numeral>")
    return frozenset(hits)


def triggered_functions(raw_tokens: list[str], lemmas: list[str],
                        text: str, has_numeral: bool) -> set[str]:
    """Function names admitted by the statement's lexical cues."""
    lex = load_lexicon()
    words = lex["words"]
    out: set[str] = set()
    for tok in raw_tokens:
        if tok in words:
            out.update(words[tok])
    for tok in lemmas:
        if tok in words:
            out.update(words[tok])
    padded = f" {text} "
    for phrase, fns in lex["phrases"].items():
        if f" {phrase} " in padded:
            out.update(fns)
    if has_numeral:
        out.update(lex["numeral"])
    return out
