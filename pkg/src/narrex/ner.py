"""Dictionary-driven recognition: greedy longest-leftmost matching followed by
conjunction prefix/suffix sharing expansion."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import AnnotatedSentence, RoleFamily, SemanticObject, SemanticRole, Span, TokenTable, new_semantic_object
from .lexicon import Lexicon, PhrasePayload
from .preprocess import SentenceBuffer

LIST_CONJUNCTIONS = frozenset({"and", "or"})
# longest list item the expansion search will consider, in tokens
MAX_ITEM_TOKENS = 6
_ALNUM_RE = re.compile(r"[^\W_]")


@dataclass(frozen=True)
class MatchCandidate:
    """A token range ``[start, end)`` that is a list item in a conjunction group.

    ``payload`` is set when the item is itself a complete phrase;
    ``partial_depth`` counts how far the item walks into the tree.
    """

    start: int
    end: int
    payload: PhrasePayload | None = None
    partial_depth: int = 0


def recognize(lexicon: Lexicon, sentence: SentenceBuffer) -> AnnotatedSentence:
    """Scan tokens left to right, emitting one object per longest match."""
    base = sentence.span.start
    raw = sentence.raw
    idx = sentence.span.sentence_index
    tokens = sentence.tokens
    if not isinstance(tokens, TokenTable):
        tokens = TokenTable.from_tokens(tokens, raw, base, idx)
    texts = tokens.texts
    starts = tokens.starts
    ends = tokens.ends
    objects = []
    new = tuple.__new__
    root_get = lexicon.root.children.get
    n = len(texts)
    i = 0
    while i < n:
        # inlined longest_match; most tokens start no phrase at all
        node = root_get(texts[i])
        if node is None:
            i += 1
            continue
        payload = node.payload
        best = i + 1 if payload is not None else 0
        children = node.children
        j = i + 1
        while children and j < n:
            node = children.get(texts[j])
            if node is None:
                break
            j += 1
            if node.payload is not None:
                best = j
                payload = node.payload
            children = node.children
        if not best:
            i += 1
            continue
        a = starts[i]
        b = ends[best - 1]
        objects.append(
            SemanticObject(
                raw[a:b],
                payload.codes,
                payload.role,
                new(Span, (base + a, base + b, idx)),
                (i, best - 1),
            )
        )
        i = best
    return AnnotatedSentence(idx, raw, sentence.span, tokens, objects)


def _classify_tokens(annotated: AnnotatedSentence):
    """Per token: 'sep' for list separators, 'conj' for and/or, 'content' for
    medical or unmatched word tokens, None otherwise."""
    search = _ALNUM_RE.search
    kinds: list[str | None] = [
        "content" if text.isalnum() or search(text) else None for text in annotated.tokens.texts
    ]
    for obj in annotated.objects:
        if obj.synthetic:
            continue
        role = obj.role
        if role is SemanticRole.COMMA:
            kind = "sep"
        elif role is SemanticRole.CONJUNCTION and obj.text.lower() in LIST_CONJUNCTIONS:
            kind = "conj"
        elif role.family is RoleFamily.MEDICAL_TERM:
            continue
        else:
            kind = None
        first, last = obj.token_range
        kinds[first:last + 1] = [kind] * (last - first + 1)
    return kinds


def _runs(kinds):
    """Maximal runs of content tokens as ``(start, end)``."""
    runs = []
    i = 0
    while i < len(kinds):
        if kinds[i] == "content":
            j = i
            while j < len(kinds) and kinds[j] == "content":
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


def _groups(kinds):
    """Yield candidate lists as ``(x1_run, middle_runs, xn_run)``.

    For every list conjunction, the longest comma chain to its left is
    yielded first, then successively shorter ones.
    """
    runs = _runs(kinds)
    run_ending = {e: (s, e) for s, e in runs}
    run_starting = {s: (s, e) for s, e in runs}
    for c, kind in enumerate(kinds):
        if kind != "conj":
            continue
        xn = run_starting.get(c + 1)
        if xn is None:
            continue
        left = c - 1 if c > 0 and kinds[c - 1] == "sep" else c
        items = []
        pos = left
        while pos in run_ending:
            run = run_ending[pos]
            items.append(run)
            before = run[0] - 1
            if before >= 0 and kinds[before] == "sep" and before in run_ending:
                pos = before
            else:
                break
        items.reverse()
        # items[0] is X1; anything after it is a middle item
        for k in range(len(items)):
            yield items[k], items[k + 1:], xn


def _solve(lexicon: Lexicon, texts, x1_run, middles, xn_run):
    """Find a (prefix, suffix) sharing that makes every item a phrase.

    Returns a list of ``(token_start, token_end, phrase_tokens)`` or None.
    """
    lookup = lexicon.lookup
    mids = [tuple(texts[s:e]) for s, e in middles]
    if any(len(m) > MAX_ITEM_TOKENS for m in mids):
        return None
    xn_max = min(xn_run[1] - xn_run[0], MAX_ITEM_TOKENS)
    x1_max = min(x1_run[1] - x1_run[0], MAX_ITEM_TOKENS)
    x1_options = [
        (x1_run[1] - n, tuple(texts[x1_run[1] - n:x1_run[1]])) for n in range(x1_max, 0, -1)
    ]
    for xn_len in range(xn_max, 0, -1):
        xn = tuple(texts[xn_run[0]:xn_run[0] + xn_len])
        # suffix lengths: shortest shared tail first, then prefix-only (0)
        for s_len in list(range(1, xn_len)) + [0]:
            suffix = xn[xn_len - s_len:]
            for x1_start, x1 in x1_options:
                first = x1 + suffix
                if s_len and lookup(first) is None:
                    continue
                for p_len in range(0 if s_len else 1, len(x1)):
                    prefix = x1[:p_len]
                    last = prefix + xn
                    if lookup(last) is None:
                        continue
                    if not s_len and lookup(first) is None:
                        break
                    out = [(x1_start, x1_run[1], first)]
                    for (s, e), mid in zip(middles, mids):
                        phrase = prefix + mid + suffix
                        if lookup(phrase) is None:
                            break
                        out.append((s, e, phrase))
                    else:
                        out.append((xn_run[0], xn_run[0] + xn_len, last))
                        return out
    return None


def expand_conjunctions(lexicon: Lexicon, annotated: AnnotatedSentence) -> AnnotatedSentence:
    """Distribute shared leading/trailing tokens across coordinated list items.

    "no mediastinal, hilar, or axillary lymphadenopathy" gains synthetic
    objects for the mediastinal and hilar lymphadenopathy. Nothing is added
    unless every generated item is a complete dictionary phrase.
    """
    texts = annotated.tokens.texts
    if LIST_CONJUNCTIONS.isdisjoint(texts):
        return annotated
    kinds = _classify_tokens(annotated)
    existing = {(o.token_range, o.key) for o in annotated.objects}
    added = []
    claimed: set[int] = set()
    for x1_run, middles, xn_run in _groups(kinds):
        if xn_run[0] in claimed:
            continue
        solution = _solve(lexicon, texts, x1_run, middles, xn_run)
        if solution is None:
            continue
        claimed.add(xn_run[0])
        for start, end, phrase in solution:
            text = " ".join(phrase)
            token_range = (start, end - 1)
            if (token_range, text) in existing:
                continue
            payload = lexicon.lookup(phrase)
            toks = annotated.tokens
            span = Span(toks.base + toks.starts[start], toks.base + toks.ends[end - 1], annotated.index)
            obj = new_semantic_object(text, payload.codes, payload.role, span, token_range, synthetic=True)
            existing.add((token_range, text))
            added.append(obj)
    if added:
        merged = annotated.objects + added
        merged.sort(key=lambda o: (o.first, o.synthetic, o.last))
        annotated.objects = merged
    return annotated
