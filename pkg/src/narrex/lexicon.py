"""Token-keyed prefix tree dictionary.

Each edge is a whole normalized token; a node that completes a phrase carries
a :class:`PhrasePayload`. Children are plain dicts, so one lookup step costs a
hash probe no matter how many phrases are stored.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .core import SemanticRole
from .preprocess import DEFAULT_ABBREVIATIONS, tokenize_text


class LexiconError(ValueError):
    """Malformed term file or conflicting dictionary entry."""


@dataclass(frozen=True)
class PhrasePayload:
    codes: frozenset[str]
    role: SemanticRole


class TrieNode:
    __slots__ = ("children", "payload")

    def __init__(self):
        self.children: dict[str, TrieNode] = {}
        self.payload: PhrasePayload | None = None


class Lexicon:
    def __init__(self):
        self.root = TrieNode()
        self.term_count = 0
        self.role_index: dict[str, SemanticRole] = {}
        self._frozen = False

    def __len__(self) -> int:
        return self.term_count

    def __contains__(self, phrase) -> bool:
        tokens = phrase.split(" ") if isinstance(phrase, str) else phrase
        return self.lookup(tokens) is not None

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> Lexicon:
        self._frozen = True
        return self

    def add_term(self, phrase_tokens: Sequence[str], code: str, role: SemanticRole) -> Lexicon:
        """Insert one (phrase, code, role) entry.

        Re-adding a phrase with the same role unions its codes; a different
        role raises :class:`LexiconError`.
        """
        if self._frozen:
            raise LexiconError("lexicon is frozen")
        if not phrase_tokens:
            raise LexiconError("empty phrase")
        if not code:
            raise LexiconError("empty concept code")
        node = self.root
        for tok in phrase_tokens:
            if not tok or tok != tok.lower():
                raise LexiconError(f"phrase tokens must be non-empty lowercase: {tok!r}")
            child = node.children.get(tok)
            if child is None:
                child = node.children[tok] = TrieNode()
            node = child
        phrase = " ".join(phrase_tokens)
        if node.payload is None:
            node.payload = PhrasePayload(frozenset((code,)), role)
            self.term_count += 1
            self.role_index[phrase] = role
        elif node.payload.role is not role:
            raise LexiconError(
                f"{phrase!r} already has role {node.payload.role.value}, "
                f"cannot add role {role.value}"
            )
        else:
            node.payload = PhrasePayload(node.payload.codes | {code}, role)
        return self

    def lookup(self, phrase_tokens: Iterable[str]) -> PhrasePayload | None:
        node = self.root
        for tok in phrase_tokens:
            node = node.children.get(tok)
            if node is None:
                return None
        return node.payload

    def walk(self, tokens: Sequence[str], start: int, stop: int | None = None) -> int:
        """Number of tokens from ``start`` that can be followed in the tree.

        A result ``k`` with no payload at depth ``k`` is a stalled partial match.
        """
        stop = len(tokens) if stop is None else stop
        node = self.root
        depth = 0
        for i in range(start, stop):
            node = node.children.get(tokens[i])
            if node is None:
                break
            depth += 1
        return depth

    def longest_match(self, tokens: Sequence[str], start: int) -> tuple[int, PhrasePayload] | None:
        """Longest phrase starting at ``start``.

        Returns ``(end, payload)`` with ``end`` exclusive, or ``None``.
        """
        children = self.root.children
        best = None
        i = start
        n = len(tokens)
        while i < n:
            node = children.get(tokens[i])
            if node is None:
                break
            i += 1
            if node.payload is not None:
                best = (i, node.payload)
            children = node.children
        return best

    def entries(self):
        """Yield ``(phrase, code, role)`` for every stored code, in sorted order."""
        stack = [((), self.root)]
        out = []
        while stack:
            path, node = stack.pop()
            if node.payload is not None:
                for code in node.payload.codes:
                    out.append((" ".join(path), code, node.payload.role))
            for tok, child in node.children.items():
                stack.append((path + (tok,), child))
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def to_tsv(self) -> str:
        buf = io.StringIO()
        for phrase, code, role in self.entries():
            buf.write(f"{phrase}\t{code}\t{role.value}\n")
        return buf.getvalue()


def _load_tsv(lexicon: Lexicon, lines: Iterable[str], source: str, abbreviations) -> Lexicon:
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise LexiconError(f"{source}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        phrase, code, role_name = (f.strip() for f in fields)
        try:
            role = SemanticRole.parse(role_name)
        except ValueError as exc:
            raise LexiconError(f"{source}:{lineno}: {exc}") from None
        tokens = tokenize_text(phrase, abbreviations)
        if not tokens or not code:
            raise LexiconError(f"{source}:{lineno}: empty phrase or code")
        try:
            lexicon.add_term(tokens, code, role)
        except LexiconError as exc:
            raise LexiconError(f"{source}:{lineno}: {exc}") from None
    return lexicon


def load_term_file(
    lexicon: Lexicon, path: str | Path, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> Lexicon:
    """Add every ``phrase<TAB>code<TAB>role`` line of a UTF-8 TSV file."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return _load_tsv(lexicon, fh, str(path), abbreviations)


def load_term_text(
    lexicon: Lexicon, text: str, source: str = "<string>",
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> Lexicon:
    return _load_tsv(lexicon, text.splitlines(), source, abbreviations)


def load_base_dictionary() -> Lexicon:
    """Fresh lexicon holding the built-in grammatical words and meaning cues."""
    text = resources.files("narrex.data").joinpath("base_dictionary.tsv").read_text("utf-8")
    return load_term_text(Lexicon(), text, "base_dictionary.tsv")


def load_hierarchy(path: str | Path) -> dict[str, frozenset[str]]:
    """Read ``child_phrase<TAB>parent_phrase`` pairs into child -> parents."""
    table: dict[str, set[str]] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise LexiconError(f"{path}:{lineno}: expected child<TAB>parent")
            child, parent = (" ".join(tokenize_text(c)) for c in row)
            table.setdefault(child, set()).add(parent)
    return {k: frozenset(v) for k, v in table.items()}
