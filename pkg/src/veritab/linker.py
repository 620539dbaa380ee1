"""Bind statement phrases to table cells, columns and the caption.

Matching is greedy longest-match, left to right, over lemmatized
(and numeral-mapped) token n-grams: a gram matches a target when its
tokens form an order-preserving subsequence of the target's tokens,
where two tokens agree if their lemmas are equal or one is a >=4-char
prefix of the other. Among equal-length candidates, cells win over
columns over the caption, and the cell with the minimum edit distance
between the statement surface and the raw cell text is chosen.
Caption-bound spans are masked with a placeholder in `masked_text`.

The lemmatizer is a fixed suffix-rule normalizer (plural and verb
inflections, no dictionary): determinism matters more than linguistic
coverage, and the same rules run on both statement and table tokens.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from veritab import kernels as K
from veritab.table import Table, parse_number

PLACEHOLDER = "<caption>"
MAX_GRAM = 6

_TOKEN_RE = re.compile(
    r"[0-9]+(?:st|nd|rd|th)\b|[0-9]+(?:[.,][0-9]+)*|[a-z]+(?:[-'][a-z]+)*",
    re.IGNORECASE,
)

_WORD2NUM = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20,
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
    "sixth": 6, "seventh": 7, "eighth": 8, "ninth": 9, "tenth": 10,
}

_ORDINAL_RE = re.compile(r"([0-9]+)(?:st|nd|rd|th)$")

# single tokens never linked on their own; n-grams need a content word
_STOPWORDS = frozenset(
    "the a an of in on at to is are was were be been and or there that "
    "this it by for with as from than who which what when it's its".split()
)

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        v = not _is_cons(stem, i)
        if prev_vowel and not v:
            m += 1
        prev_vowel = v
    return m


def _ends_cvc(stem: str) -> bool:
    if len(stem) < 3:
        return False
    return (_is_cons(stem, len(stem) - 3)
            and not _is_cons(stem, len(stem) - 2)
            and _is_cons(stem, len(stem) - 1)
            and stem[-1] not in "wxy")


def _fix_verb_stem(stem: str, original: str) -> str:
    if len(stem) < 2 or all(_is_cons(stem, i) for i in range(len(stem))):
        return original
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in "bgmnprt":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _lemma_word(w: str) -> str:
    if len(w) < 4 or not w.isalpha():
        return w
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-3] + "y" if len(w) >= 5 else w
    if w.endswith(("xes", "zes", "ches", "shes")):
        return w[:-2]
    if w.endswith(("ss", "us", "is")):
        return w
    if w.endswith("s"):
        return w[:-1]
    if w.endswith("eed"):
        return w[:-1] if len(w) >= 5 else w
    if w.endswith("ed") and len(w) >= 5:
        return _fix_verb_stem(w[:-2], w)
    if w.endswith("ing"):
        return _fix_verb_stem(w[:-3], w)
    return w


def lemmatize(token: str) -> str:
    """Deterministic suffix-rule normal form; idempotent."""
    token = token.lower()
    if "-" in token:
        head, _, tail = token.rpartition("-")
        return f"{head}-{_lemma_word(tail)}"
    return _lemma_word(token)


def map_numeral(token: str) -> str:
    """'three' -> '3', '2nd' -> '2'; other tokens pass through."""
    if token in _WORD2NUM:
        return str(_WORD2NUM[token])
    m = _ORDINAL_RE.fullmatch(token)
    if m:
        return m.group(1)
    return token


def numeric_value(token: str) -> float | None:
    return parse_number(map_numeral(token))


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """(lowercased token, start, end) spans over the original text."""
    return [(m.group(0).lower(), m.start(), m.end())
            for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class EntityLink:
    span: tuple[int, int]          # token range [start, end)
    kind: str                      # "cell" | "column" | "caption"
    row: int | None
    col: int | None
    surface: str

    @property
    def length(self) -> int:
        return self.span[1] - self.span[0]


@dataclass
class LinkedStatement:
    original: str
    tokens: list[str]              # normalized, numeral-mapped
    links: list[EntityLink]
    masked_text: str
    caption: str = ""
    raw_tokens: list[str] = field(default_factory=list)
    lemmas: list[str] = field(default_factory=list)
    num_seeds: list[float] = field(default_factory=list)
    str_seeds: list[str] = field(default_factory=list)

    @property
    def has_numeral(self) -> bool:
        return any(numeric_value(t) is not None for t in self.tokens)

    def to_record(self) -> dict:
        return {
            "statement": self.original,
            "tokens": self.tokens,
            "masked_text": self.masked_text,
            "links": [
                {"span": list(l.span), "kind": l.kind, "row": l.row,
                 "col": l.col, "surface": l.surface}
                for l in self.links
            ],
            "num_seeds": self.num_seeds,
            "str_seeds": self.str_seeds,
        }


@dataclass(frozen=True)
class _Target:
    kind: str
    row: int | None
    col: int | None
    tokens: tuple[str, ...]       # lemmatized, numeral-mapped
    raw: str
    number: float | None = None   # parsed cell number, cells only


def _prep_tokens(text: str) -> tuple[str, ...]:
    return tuple(lemmatize(map_numeral(tok)) for tok, _, _ in tokenize(text))


def _tok_match(a: str, b: str) -> bool:
    if a == b:
        return True
    if len(a) >= 4 and len(b) >= 4:
        return a.startswith(b) or b.startswith(a)
    return False


def _is_subsequence(gram: tuple[str, ...], target: tuple[str, ...]) -> bool:
    it = 0
    for g in gram:
        while it < len(target) and not _tok_match(g, target[it]):
            it += 1
        if it == len(target):
            return False
        it += 1
    return True


def build_targets(table: Table) -> list[_Target]:
    targets = []
    for i, row in enumerate(table.rows):
        for j, cell in enumerate(row):
            toks = _prep_tokens(cell.raw)
            if toks:
                targets.append(_Target("cell", i, j, toks, cell.raw, cell.number))
    for j, col in enumerate(table.columns):
        toks = _prep_tokens(col.raw_name)
        if toks:
            targets.append(_Target("column", None, j, toks, col.raw_name))
    cap_toks = _prep_tokens(table.caption)
    if cap_toks:
        targets.append(_Target("caption", None, None, cap_toks, table.caption))
    return targets


def _gram_allowed(raw_toks: list[str], i: int, n: int) -> bool:
    window = raw_toks[i:i + n]
    if n == 1:
        return window[0] not in _STOPWORDS
    return any(t not in _STOPWORDS for t in window)


_KIND_RANK = {"cell": 0, "column": 1, "caption": 2}


def _best_candidate(cands: list[_Target], surface: str) -> _Target:
    surface_l = surface.lower()
    best_kind = min(_KIND_RANK[t.kind] for t in cands)
    pool = [t for t in cands if _KIND_RANK[t.kind] == best_kind]
    if len(pool) == 1:
        return pool[0]

    def sort_key(t: _Target):
        dist = K.levenshtein(surface_l, t.raw.lower())
        return (dist, t.row if t.row is not None else -1,
                t.col if t.col is not None else -1)

    return min(pool, key=sort_key)


def link(statement: str, table: Table) -> LinkedStatement:
    """Bind statement phrases to the table; pure in (statement, table).

    Zero links is a valid outcome. Cell links seed the typed search
    caches (numbers from numeric cells, normalized text otherwise), and
    unlinked numeric literals seed numbers, one entry per occurrence.
    """
    spans = tokenize(statement)
    raw_tokens = [t for t, _, _ in spans]
    mapped = [map_numeral(t) for t in raw_tokens]
    lemmas = [lemmatize(t) for t in mapped]
    targets = build_targets(table)

    links: list[EntityLink] = []
    i = 0
    n_tok = len(spans)
    while i < n_tok:
        found = None
        for n in range(min(MAX_GRAM, n_tok - i), 0, -1):
            if not _gram_allowed(raw_tokens, i, n):
                continue
            gram = tuple(lemmas[i:i + n])
            val = numeric_value(raw_tokens[i]) if n == 1 else None
            if val is not None:
                # a lone number binds only to a numeric cell of that value;
                # otherwise it stays a literal and seeds the number cache
                cands = [t for t in targets
                         if t.number is not None and t.number == val]
            else:
                cands = [t for t in targets if _is_subsequence(gram, t.tokens)]
            if cands:
                start_char = spans[i][1]
                end_char = spans[i + n - 1][2]
                surface = statement[start_char:end_char]
                best = _best_candidate(cands, surface)
                found = EntityLink((i, i + n), best.kind, best.row, best.col, surface)
                break
        if found is not None:
            links.append(found)
            i = found.span[1]
        else:
            i += 1

    masked = _mask_caption_spans(statement, spans, links)

    num_seeds: list[float] = []
    str_seeds: list[str] = []
    link_at = {l.span[0]: l for l in links}
    pos = 0
    while pos < n_tok:
        l = link_at.get(pos)
        if l is not None:
            if l.kind == "cell":
                cell = table.rows[l.row][l.col]
                if cell.is_number:
                    num_seeds.append(cell.number)
                else:
                    str_seeds.append(cell.text)
            pos = l.span[1]
            continue
        val = numeric_value(raw_tokens[pos])
        if val is not None:
            num_seeds.append(val)
        pos += 1

    return LinkedStatement(
        original=statement,
        tokens=mapped,
        links=links,
        masked_text=masked,
        caption=table.caption,
        raw_tokens=raw_tokens,
        lemmas=lemmas,
        num_seeds=num_seeds,
        str_seeds=str_seeds,
    )


def _mask_caption_spans(statement: str, spans, links) -> str:
    out = []
    cursor = 0
    for l in links:
        if l.kind != "caption":
            continue
        start_char = spans[l.span[0]][1]
        end_char = spans[l.span[1] - 1][2]
        out.append(statement[cursor:start_char])
        out.append(PLACEHOLDER)
        cursor = end_char
    out.append(statement[cursor:])
    return "".join(out)
