"""Shared domain vocabulary: spans, tokens, semantic roles and semantic objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from collections.abc import Sequence
from typing import Any, NamedTuple


class RoleFamily(Enum):
    GRAMMATICAL = "grammatical"
    MEANING_CUE = "meaning_cue"
    MEDICAL_TERM = "medical_term"


class SemanticRole(Enum):
    """Functional category of a dictionary phrase.

    The value is the spelling used in term files (``Fact:Disorder``,
    ``NegationCue``, ...).
    """

    # grammatical words
    PRONOUN = "Pronoun"
    CONJUNCTION = "Conjunction"
    PREPOSITION = "Preposition"
    LINK_VERB_POSITIVE = "LinkVerbPositive"
    LINK_VERB_NEGATIVE = "LinkVerbNegative"
    AUX_VERB_POSITIVE = "AuxVerbPositive"
    AUX_VERB_NEGATIVE = "AuxVerbNegative"
    ARTICLE = "Article"
    COMMA = "Comma"
    PARTICIPLE_CONFIRMATION = "ParticipleConfirmation"
    # meaning cues
    CONFIRMATION_CUE = "ConfirmationCue"
    NEGATION_CUE = "NegationCue"
    BACKWARD_CONFIRMATION_CUE = "BackwardConfirmationCue"
    BACKWARD_NEGATION_CUE = "BackwardNegationCue"
    SPECULATION_CUE = "SpeculationCue"
    IGNORE_CUE = "IgnoreCue"
    # medical terms
    FACT_DISORDER = "Fact:Disorder"
    FACT_FINDING = "Fact:Finding"
    FACT_PROCEDURE = "Fact:Procedure"
    FACT_TEST = "Fact:Test"
    FACT_SUBSTANCE = "Fact:Substance"
    MODIFIER = "Modifier"
    FACT_ATTRIBUTE = "FactAttribute"
    LOCATION = "Location"
    RELATIVE = "Relative"

    # identity hashing; Enum's default hashes the member name in Python code
    __hash__ = object.__hash__

    # set per member below: ``family`` (RoleFamily), ``is_fact`` (bool) and
    # ``fact_kind`` ("Disorder" for Fact:Disorder, None for non-facts)
    family: RoleFamily
    is_fact: bool
    fact_kind: str | None

    @classmethod
    def parse(cls, spelling: str) -> SemanticRole:
        """Parse a term-file role spelling, tolerating case and ``Fact`` alone."""
        key = spelling.strip()
        try:
            return _BY_LOWER[key.lower()]
        except KeyError:
            raise ValueError(f"unknown semantic role {spelling!r}") from None


FACT_ROLES = frozenset(
    {
        SemanticRole.FACT_DISORDER,
        SemanticRole.FACT_FINDING,
        SemanticRole.FACT_PROCEDURE,
        SemanticRole.FACT_TEST,
        SemanticRole.FACT_SUBSTANCE,
    }
)

_GRAMMATICAL = {
    SemanticRole.PRONOUN,
    SemanticRole.CONJUNCTION,
    SemanticRole.PREPOSITION,
    SemanticRole.LINK_VERB_POSITIVE,
    SemanticRole.LINK_VERB_NEGATIVE,
    SemanticRole.AUX_VERB_POSITIVE,
    SemanticRole.AUX_VERB_NEGATIVE,
    SemanticRole.ARTICLE,
    SemanticRole.COMMA,
    SemanticRole.PARTICIPLE_CONFIRMATION,
}
_CUES = {
    SemanticRole.CONFIRMATION_CUE,
    SemanticRole.NEGATION_CUE,
    SemanticRole.BACKWARD_CONFIRMATION_CUE,
    SemanticRole.BACKWARD_NEGATION_CUE,
    SemanticRole.SPECULATION_CUE,
    SemanticRole.IGNORE_CUE,
}
_FAMILY = {
    role: (
        RoleFamily.GRAMMATICAL
        if role in _GRAMMATICAL
        else RoleFamily.MEANING_CUE
        if role in _CUES
        else RoleFamily.MEDICAL_TERM
    )
    for role in SemanticRole
}
for _role in SemanticRole:
    _role.family = _FAMILY[_role]
    _role.is_fact = _role in FACT_ROLES
    _role.fact_kind = _role.value.split(":", 1)[1] if _role.is_fact else None
_BY_LOWER = {role.value.lower(): role for role in SemanticRole}
_BY_LOWER["fact"] = SemanticRole.FACT_FINDING


class Presence(Enum):
    YES = "YES"
    NO = "NO"
    MAYBE = "MAYBE"

    __hash__ = object.__hash__


class Experiencer(Enum):
    SELF = "SELF"
    FAMILY = "FAMILY"

    __hash__ = object.__hash__


class Span(NamedTuple):
    """Half-open character range ``[start, end)`` in the source note."""

    start: int
    end: int
    sentence_index: int = 0

    def check(self) -> Span:
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")
        return self


class Token(NamedTuple):
    text: str
    raw: str
    span: Span
    index: int


class TokenTable(Sequence):
    """Tokens of one sentence stored as parallel columns.

    ``starts`` and ``ends`` are offsets into ``source`` (the sentence text);
    add ``base`` for note offsets. ``Token`` tuples, which carry note
    offsets, are only built when the table is indexed or iterated.
    """

    __slots__ = ("texts", "starts", "ends", "source", "base", "sentence_index", "_tokens")

    def __init__(self, texts, starts, ends, source: str = "", base: int = 0, sentence_index: int = 0):
        if not len(texts) == len(starts) == len(ends):
            raise ValueError("token columns differ in length")
        self.texts = texts
        self.starts = starts
        self.ends = ends
        self.source = source
        self.base = base
        self.sentence_index = sentence_index
        self._tokens = None

    @classmethod
    def from_tokens(cls, tokens, source: str = "", base: int = 0, sentence_index: int = 0) -> TokenTable:
        table = cls(
            [t.text for t in tokens],
            [t.span.start - base for t in tokens],
            [t.span.end - base for t in tokens],
            source,
            base,
            sentence_index,
        )
        table._tokens = [Token(t.text, t.raw, t.span, i) for i, t in enumerate(tokens)]
        return table

    def _build(self) -> list[Token]:
        if self._tokens is None:
            src, base, idx = self.source, self.base, self.sentence_index
            self._tokens = [
                Token(text, src[a:b], Span(base + a, base + b, idx), i)
                for i, (text, a, b) in enumerate(zip(self.texts, self.starts, self.ends))
            ]
        return self._tokens

    def __len__(self) -> int:
        return len(self.texts)

    def __getitem__(self, i):
        return self._build()[i]

    def __iter__(self):
        return iter(self._build())

    def __eq__(self, other):
        if isinstance(other, (TokenTable, list, tuple)):
            return list(self) == list(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"TokenTable({self.texts!r})"


@dataclass(eq=True, slots=True)
class SemanticObject:
    """One recognized phrase occurrence plus the attributes analyzers fill in.

    ``token_range`` is inclusive on both ends. ``governed_by`` records the cue
    role that decided presence, if any; the ignore analyzer consults it.
    """

    text: str
    codes: frozenset[str]
    role: SemanticRole
    span: Span
    token_range: tuple[int, int]
    presence: Presence = Presence.YES
    experiencer: Experiencer = Experiencer.SELF
    ignored: bool = False
    modifiers: list[SemanticObject] = field(default_factory=list)
    synthetic: bool = False
    governed_by: SemanticRole | None = None

    @property
    def first(self) -> int:
        return self.token_range[0]

    @property
    def last(self) -> int:
        return self.token_range[1]

    @property
    def family(self) -> RoleFamily:
        return self.role.family

    @property
    def key(self) -> str:
        """Whitespace-collapsed lowercase text, the form used for display."""
        return " ".join(self.text.lower().split())

    def attach(self, child: SemanticObject) -> None:
        """Append ``child`` to modifiers unless already present (by identity)."""
        if child is self:
            raise ValueError("an object cannot modify itself")
        if not any(m is child for m in self.modifiers):
            self.modifiers.append(child)

    def to_dict(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "codes": sorted(self.codes),
            "role": self.role.value,
            "span": [self.span.start, self.span.end, self.span.sentence_index],
            "token_range": list(self.token_range),
            "presence": self.presence.value,
            "experiencer": self.experiencer.value,
            "ignored": self.ignored,
            "modifiers": [m.to_dict() for m in self.modifiers],
            "synthetic": self.synthetic,
            "governed_by": self.governed_by.value if self.governed_by else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SemanticObject:
        start, end, sent = data["span"]
        governed = data.get("governed_by")
        return cls(
            text=data["text"],
            codes=frozenset(data["codes"]),
            role=SemanticRole(data["role"]),
            span=Span(start, end, sent),
            token_range=(data["token_range"][0], data["token_range"][1]),
            presence=Presence(data["presence"]),
            experiencer=Experiencer(data["experiencer"]),
            ignored=data["ignored"],
            modifiers=[cls.from_dict(m) for m in data["modifiers"]],
            synthetic=data["synthetic"],
            governed_by=SemanticRole(governed) if governed else None,
        )


def new_semantic_object(
    text: str,
    codes,
    role: SemanticRole,
    span: Span,
    token_range: tuple[int, int],
    *,
    synthetic: bool = False,
) -> SemanticObject:
    """Build a semantic object with default analysis attributes."""
    if not text:
        raise ValueError("semantic object text must be non-empty")
    span.check()
    codes = frozenset(codes)
    if not codes:
        raise ValueError(f"no concept codes given for {text!r}")
    first, last = token_range
    if not 0 <= first <= last:
        raise ValueError(f"invalid token range {token_range!r}")
    return SemanticObject(
        text=text,
        codes=codes,
        role=role,
        span=span,
        token_range=(first, last),
        synthetic=synthetic,
    )


@dataclass
class AnnotatedSentence:
    """Tokens of one sentence plus the semantic objects found in it.

    NER fills ``objects`` in left-to-right order; analyzers mutate them.
    """

    index: int
    raw: str
    span: Span | None
    tokens: TokenTable
    objects: list[SemanticObject] = field(default_factory=list)

    def facts(self) -> list[SemanticObject]:
        return [o for o in self.objects if o.role.is_fact]

    def to_dict(self) -> dict[str, Any]:
        """Flat form; modifier references become indices into ``objects``."""
        position = {id(o): i for i, o in enumerate(self.objects)}
        objects = []
        for obj in self.objects:
            d = obj.to_dict()
            d["modifiers"] = [position[id(m)] for m in obj.modifiers]
            objects.append(d)
        return {
            "index": self.index,
            "raw": self.raw,
            "span": [self.span.start, self.span.end] if self.span else None,
            "tokens": [
                [t.text, t.raw, t.span.start, t.span.end, t.index] for t in self.tokens
            ],
            "objects": objects,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AnnotatedSentence:
        idx = data["index"]
        objects = []
        for d in data["objects"]:
            flat = dict(d, modifiers=[])
            objects.append(SemanticObject.from_dict(flat))
        for obj, d in zip(objects, data["objects"]):
            obj.modifiers = [objects[i] for i in d["modifiers"]]
        span = Span(data["span"][0], data["span"][1], idx) if data["span"] else None
        tokens = [Token(t, r, Span(s, e, idx), i) for t, r, s, e, i in data["tokens"]]
        base = span.start if span else 0
        table = TokenTable.from_tokens(tokens, data["raw"], base, idx)
        return cls(index=idx, raw=data["raw"], span=span, tokens=table, objects=objects)
