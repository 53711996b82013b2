"""Sentence boundary detection and tokenization for clinical notes.

Boundaries are ``.``, ``!``, ``;`` and newline sequences. A ``?`` never ends
a sentence: in clinical shorthand it precedes a diagnosis under consideration.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .core import Span, TokenTable

_STANDALONE = ",?+()/:;!\""
_LINE_CONTINUERS = (",", "and", "or")
_BOUNDARY_RE = re.compile(r"[.!;]|\n\s*")
# shared placeholder until tokenize() runs; tuple columns cannot be mutated
_NO_TOKENS = TokenTable((), (), ())


@dataclass
class SentenceBuffer:
    raw: str
    span: Span
    tokens: TokenTable = field(default_factory=lambda: _NO_TOKENS)

    @property
    def index(self) -> int:
        return self.span.sentence_index


def load_abbreviations(path: str | Path | None = None) -> frozenset[str]:
    """Read an abbreviation list: one lowercase entry per line, ``#`` comments.

    With no path, the packaged default list is returned.
    """
    if path is None:
        text = resources.files("narrex.data").joinpath("abbreviations.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            entries.add(line)
    return frozenset(entries)


DEFAULT_ABBREVIATIONS = load_abbreviations()


def _word_around(note: str, pos: int) -> str:
    start = pos
    while start > 0 and not note[start - 1].isspace():
        start -= 1
    end = pos + 1
    while end < len(note) and not note[end].isspace():
        end += 1
    return note[start:end].lower().rstrip(_STANDALONE)


def _is_period_boundary(note: str, i: int, abbreviations: frozenset[str]) -> bool:
    if 0 < i < len(note) - 1 and note[i - 1].isdigit() and note[i + 1].isdigit():
        return False
    word = _word_around(note, i)
    # the period may sit inside an abbreviation such as "b.i.d."
    return word not in abbreviations


def _line_continues(line: str) -> bool:
    stripped = line.rstrip().lower()
    if stripped.endswith(","):
        return True
    words = stripped.split()
    return bool(words) and words[-1] in _LINE_CONTINUERS


def split_sentences(
    note: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[SentenceBuffer]:
    """Split ``note`` into sentence buffers with empty token lists.

    Sentence raws are trimmed of surrounding whitespace, so raws plus the gaps
    between them reconstruct the note.
    """
    cuts: list[tuple[int, int]] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(note):
        i = m.start()
        if i < start:
            continue
        ch = note[i]
        if ch == "\n":
            if m.group().count("\n") >= 2 or not _line_continues(note[start:i]):
                cuts.append((start, i))
                start = m.end()
        elif ch != "." or _is_period_boundary(note, i, abbreviations):
            cuts.append((start, i + 1))
            start = i + 1
    cuts.append((start, len(note)))

    sentences = []
    for a, b in cuts:
        while a < b and note[a].isspace():
            a += 1
        while b > a and note[b - 1].isspace():
            b -= 1
        if a < b:
            sentences.append(SentenceBuffer(note[a:b], Span(a, b, len(sentences))))
    return sentences


_SEP = re.escape(_STANDALONE)
# a word never keeps trailing periods here; abbreviations are rejoined after
_TOKEN_RE = re.compile(rf"[{_SEP}]|[^\s{_SEP}]*[^\s{_SEP}.]|\.")


@lru_cache(maxsize=16)
def _abbreviation_stems(abbreviations: frozenset[str]) -> frozenset[str]:
    return frozenset(a[:-1] for a in abbreviations if len(a) > 1 and a.endswith(".") and a[-2] != ".")


def _rejoin_abbreviations(raw: str, texts: list, starts: list, ends: list, abbreviations) -> None:
    i = 0
    while i < len(texts) - 1:
        after = ends[i + 1]
        if (
            texts[i + 1] == "."
            and starts[i + 1] == ends[i]
            and texts[i] + "." in abbreviations
            and (after == len(raw) or raw[after].isspace() or raw[after] in _STANDALONE)
        ):
            texts[i] += "."
            ends[i] = after
            del texts[i + 1], starts[i + 1], ends[i + 1]
        i += 1


def tokenize(
    sentence: SentenceBuffer, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> SentenceBuffer:
    """Fill ``sentence.tokens`` with lowercased tokens.

    Trailing periods are split off a word unless the word is a listed
    abbreviation.
    """
    raw = sentence.raw
    lowered = raw.lower()
    if len(lowered) == len(raw):
        matches = list(_TOKEN_RE.finditer(lowered))
        texts = [m[0] for m in matches]
    else:
        # lowercasing changed the length (e.g. "İ"); match the raw text
        matches = list(_TOKEN_RE.finditer(raw))
        texts = [m[0].lower() for m in matches]
    starts = [m.start() for m in matches]
    ends = [m.end() for m in matches]
    if not _abbreviation_stems(abbreviations).isdisjoint(texts):
        _rejoin_abbreviations(raw, texts, starts, ends, abbreviations)
    sentence.tokens = TokenTable(texts, starts, ends, raw, sentence.span.start, sentence.span.sentence_index)
    return sentence


def tokenize_text(text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Normalized token strings of ``text`` treated as a single sentence."""
    if not text.strip():
        return []
    buf = SentenceBuffer(text, Span(0, len(text)))
    return [t.text for t in tokenize(buf, abbreviations).tokens]


def preprocess(note: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[SentenceBuffer]:
    return [tokenize(s, abbreviations) for s in split_sentences(note, abbreviations)]
