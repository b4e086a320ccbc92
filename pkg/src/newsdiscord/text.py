"""Text normalization, sentence segmentation, and token-level similarity.

Everything here is rule-based and pure so that downstream outputs are
byte-stable across runs and machines.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from importlib import resources

_WHITESPACE_RE = re.compile(r"\s+")
_TOKEN_RE = re.compile(r"[a-z0-9]+")
_WORD_BEFORE_RE = re.compile(r"[A-Za-z0-9.]+$")

# Classic English function-word list; wh-words are included on purpose so
# question start words never count as content overlap.
STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can could did do does doing
    down during each few for from further had has have having he her here hers
    herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own s same she should so some such t than that the
    their theirs them themselves then there these they this those through to
    too under until up very was we were what when where which while who whom
    why will with would you your yours yourself yourselves
    """.split()
)


def _load_abbreviations() -> frozenset[str]:
    raw = resources.files("newsdiscord").joinpath("data/abbreviations.txt").read_text("utf-8")
    entries = (line.strip().lower() for line in raw.splitlines())
    return frozenset(e for e in entries if e and not e.startswith("#"))


ABBREVIATIONS = _load_abbreviations()


def normalize_text(text: str) -> str:
    """Unicode NFC plus whitespace collapsed to single spaces.

    All character offsets elsewhere in the package refer to text in this
    normalized form.
    """
    return _WHITESPACE_RE.sub(" ", unicodedata.normalize("NFC", text)).strip()


def tokens(text: str) -> list[str]:
    """Lowercased alphanumeric tokens, punctuation stripped."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    return [t for t in tokens(text) if t not in STOPWORDS]


def token_f1(a: str, b: str) -> float:
    """Multiset token F1 between two strings, in [0, 1]."""
    ca, cb = Counter(tokens(a)), Counter(tokens(b))
    common = sum((ca & cb).values())
    if common == 0:
        return 0.0
    precision = common / sum(ca.values())
    recall = common / sum(cb.values())
    return 2 * precision * recall / (precision + recall)


def normalized_key(text: str) -> str:
    """Canonical key for exact-duplicate detection."""
    return " ".join(tokens(text))


def _ends_abbreviation(text: str, dot_index: int) -> bool:
    match = _WORD_BEFORE_RE.search(text[: dot_index + 1])
    if match is None:
        return False
    word = match.group(0).lower()
    if word in ABBREVIATIONS:
        return True
    # Single-letter initials such as "J." in "J. Smith".
    core = word.rstrip(".")
    return len(core) == 1 and core.isalpha()


def _is_boundary(text: str, punct_index: int, run_end: int) -> bool:
    ch = text[punct_index]
    if ch == ".":
        before = text[punct_index - 1] if punct_index > 0 else ""
        after = text[punct_index + 1] if punct_index + 1 < len(text) else ""
        if before.isdigit() and after.isdigit():
            return False
        if _ends_abbreviation(text, punct_index):
            return False
    if run_end + 1 >= len(text):
        return True
    if text[run_end + 1] != " ":
        return False
    nxt = text[run_end + 2] if run_end + 2 < len(text) else ""
    return bool(nxt) and (nxt.isupper() or nxt.isdigit() or nxt in "\"'(")


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Half-open (start, end) sentence spans over normalized text.

    Splits on terminal punctuation, guarded by the shipped abbreviation
    list, decimal numbers, and single-letter initials. Spans slice the
    input verbatim, which keeps extracted answers offset-faithful.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in ".!?":
            run_end = i
            while run_end + 1 < n and text[run_end + 1] in ".!?\"')]":
                run_end += 1
            if _is_boundary(text, i, run_end):
                spans.append((start, run_end + 1))
                start = run_end + 1
                while start < n and text[start] == " ":
                    start += 1
                i = start
                continue
            i = run_end + 1
            continue
        i += 1
    if start < n:
        spans.append((start, n))
    return [(s, e) for s, e in spans if text[s:e].strip()]


def split_sentences(text: str) -> list[str]:
    return [text[s:e] for s, e in sentence_spans(text)]
