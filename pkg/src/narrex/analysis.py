"""Per-sentence analyzer pipeline.

Every analyzer is a small finite-state machine that reads the semantic
objects of one sentence left to right, switching state on semantic role,
token distance and occasionally the phrase text, and mutating object
attributes in place. Analyzers keep no state between sentences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping

from .core import (
    AnnotatedSentence,
    Experiencer,
    Presence,
    RoleFamily,
    SemanticObject,
    SemanticRole,
    Span,
)

R = SemanticRole


class ConfigError(ValueError):
    pass


class Mode(Enum):
    POSITIVE = "positive"
    NEGATED = "negated"
    SPECULATED = "speculated"


@dataclass(slots=True)
class AnalyzerState:
    """Scratch state of one analyzer over one sentence.

    ``transitions`` counts objects consumed by the main loop; pass an
    instance to an analyzer to inspect it afterwards.
    """

    mode: Mode = Mode.POSITIVE
    last_cue: SemanticObject | None = None
    last_index: int = -1
    pending: list = field(default_factory=list)
    transitions: int = 0

    def reset(self) -> None:
        self.mode = Mode.POSITIVE
        self.last_cue = None
        self.last_index = -1
        self.pending = []
        self.transitions = 0


DEFAULT_ORDER = ("merge_cues", "presence", "locations", "modifiers", "ignore", "family")


@dataclass(frozen=True)
class PipelineConfig:
    analyzers: tuple[str, ...] = DEFAULT_ORDER
    forward_scope_max_gap: int = 8
    # child location phrase -> parent location phrases
    location_hierarchy: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "analyzers", tuple(self.analyzers))
        unknown = [a for a in self.analyzers if a not in DEFAULT_ORDER]
        if unknown:
            raise ConfigError(f"unknown analyzer(s): {', '.join(unknown)}")
        if len(set(self.analyzers)) != len(self.analyzers):
            raise ConfigError("analyzer listed twice")
        pos = {name: i for i, name in enumerate(self.analyzers)}
        for before, after in (("merge_cues", "presence"), ("presence", "locations")):
            if before in pos and after in pos and pos[before] > pos[after]:
                raise ConfigError(f"{before} must run before {after}")
        if self.forward_scope_max_gap < 0:
            raise ConfigError("forward_scope_max_gap must be non-negative")

    @classmethod
    def from_dict(cls, data: Mapping) -> PipelineConfig:
        known = {"analyzers", "forward_scope_max_gap"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(extra))}")
        return cls(**data)


DEFAULT_CONFIG = PipelineConfig()


_PARTICIPLE = frozenset({R.PARTICIPLE_CONFIRMATION})
_LOCATION = frozenset({R.LOCATION})
_LOOSE = frozenset({R.MODIFIER, R.FACT_ATTRIBUTE})
_IGNORE = frozenset({R.IGNORE_CUE})
_RELATIVE = frozenset({R.RELATIVE})


def _has_role(objects, roles) -> bool:
    for o in objects:
        if o.role in roles:
            return True
    return False


def _adjacent(a: SemanticObject, b: SemanticObject) -> bool:
    return a.last + 1 == b.first


def _fuse(parts: list[SemanticObject], role: SemanticRole, raw: str, base: int) -> SemanticObject:
    first, last = parts[0], parts[-1]
    codes = frozenset().union(*(p.codes for p in parts))
    return SemanticObject(
        text=raw[first.span.start - base:last.span.end - base],
        codes=codes,
        role=role,
        span=Span(first.span.start, last.span.end, first.span.sentence_index),
        token_range=(first.first, last.last),
    )


_VERB_ROLES = frozenset({R.AUX_VERB_POSITIVE, R.AUX_VERB_NEGATIVE, R.LINK_VERB_POSITIVE, R.LINK_VERB_NEGATIVE})


def _is_verb_part(obj: SemanticObject) -> bool:
    return obj.role in _VERB_ROLES or (obj.role is R.NEGATION_CUE and obj.key == "not")


def _merged_role(parts: list[SemanticObject]) -> SemanticRole:
    roles = {p.role for p in parts}
    has_aux = bool(roles & {R.AUX_VERB_POSITIVE, R.AUX_VERB_NEGATIVE})
    has_link = bool(roles & {R.LINK_VERB_POSITIVE, R.LINK_VERB_NEGATIVE})
    negative = bool(roles & {R.AUX_VERB_NEGATIVE, R.LINK_VERB_NEGATIVE, R.NEGATION_CUE})
    if len(parts) == 1:
        return R.CONFIRMATION_CUE
    if has_aux and not has_link:
        return R.NEGATION_CUE if negative else R.CONFIRMATION_CUE
    return R.BACKWARD_NEGATION_CUE if negative else R.BACKWARD_CONFIRMATION_CUE


def merge_cues(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    """Fuse auxiliary/link verbs and "not" with a following confirmation
    participle into one cue object.

    found -> ConfirmationCue, is found -> BackwardConfirmationCue,
    haven't found -> NegationCue, haven't been found -> BackwardNegationCue.
    """
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    if not _has_role(annotated.objects, _PARTICIPLE):
        return annotated
    base = annotated.span.start if annotated.span else 0
    out: list[SemanticObject] = []
    pending: list[SemanticObject] = state.pending
    for obj in annotated.objects:
        if _is_verb_part(obj):
            if pending and not _adjacent(pending[-1], obj):
                out.extend(pending)
                pending.clear()
            pending.append(obj)
        elif obj.role is R.PARTICIPLE_CONFIRMATION:
            if pending and not _adjacent(pending[-1], obj):
                out.extend(pending)
                pending.clear()
            parts = pending + [obj]
            out.append(_fuse(parts, _merged_role(parts), annotated.raw, base))
            pending.clear()
        else:
            out.extend(pending)
            pending.clear()
            out.append(obj)
    out.extend(pending)
    pending.clear()
    state.transitions = len(annotated.objects)
    annotated.objects = out
    return annotated


_FORWARD_NEGATIONS = frozenset({R.NEGATION_CUE, R.LINK_VERB_NEGATIVE, R.AUX_VERB_NEGATIVE})
_PRESENCE_CUES = _FORWARD_NEGATIONS | {
    R.CONFIRMATION_CUE, R.SPECULATION_CUE, R.BACKWARD_NEGATION_CUE, R.BACKWARD_CONFIRMATION_CUE,
}
_PRESENCE_TARGETS = frozenset(
    {R.FACT_DISORDER, R.FACT_FINDING, R.FACT_PROCEDURE, R.FACT_TEST, R.FACT_SUBSTANCE, R.FACT_ATTRIBUTE}
)
_GROUP_GLUE = frozenset({R.COMMA, R.CONJUNCTION, R.ARTICLE, R.MODIFIER, R.LOCATION, R.PREPOSITION})
# roles that neither change the mode nor break a fact group
_QUIET = frozenset({R.COMMA, R.ARTICLE, R.MODIFIER, R.LOCATION, R.PREPOSITION})
SPECULATION_VERBS = frozenset({"suggest", "suggests", "suggesting", "indicate", "indicates", "indicating"})


def _attribute_scope(objects: list[SemanticObject], k: int):
    """Match NegationCue FactAttribute Preposition Article* Fact at ``k``.

    Returns ``(attribute, fact)`` or None.
    """
    n = len(objects)
    if k + 2 >= n:
        return None
    attr, prep = objects[k + 1], objects[k + 2]
    if attr.role is not R.FACT_ATTRIBUTE or prep.role is not R.PREPOSITION:
        return None
    j = k + 3
    while j < n and objects[j].role is R.ARTICLE:
        j += 1
    if j < n and objects[j].role.is_fact:
        return attr, objects[j]
    return None


def _opens_clause(prev: SemanticObject | None, prev2: SemanticObject | None, cue: SemanticObject) -> bool:
    if cue.key not in SPECULATION_VERBS:
        return False
    if prev is not None and prev.role is R.COMMA and cue.key.endswith("ing"):
        return True
    return (
        prev is not None
        and prev2 is not None
        and prev.role is R.PRONOUN
        and prev2.role is R.CONJUNCTION
    )


def analyze_presence(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    """Assign YES/NO/MAYBE to facts and fact attributes.

    Forward cues open a scope that lasts until "but", another forward cue,
    the end of the sentence or a gap longer than ``forward_scope_max_gap``
    tokens since the previous in-scope term. Backward cues act on the
    nearest preceding group of coordinated facts.
    """
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    objects = annotated.objects
    has_cue = False
    for obj in objects:
        if obj.family is RoleFamily.MEDICAL_TERM:
            obj.presence = Presence.YES
            obj.governed_by = None
        elif obj.role in _PRESENCE_CUES:
            has_cue = True
    if not has_cue:
        state.transitions = len(objects)
        return annotated

    max_gap = config.forward_scope_max_gap
    group: list[SemanticObject] = []
    glue_only = True  # nothing but list glue since the last group member
    shielded: set[int] = set()
    prev = prev2 = None

    for k, obj in enumerate(objects):
        role = obj.role

        if role in _QUIET:
            pass

        elif role in _FORWARD_NEGATIONS:
            scoped = _attribute_scope(objects, k) if role is R.NEGATION_CUE else None
            if scoped is not None:
                attr, fact = scoped
                attr.presence = Presence.NO
                attr.governed_by = R.NEGATION_CUE
                fact.attach(attr)
                shielded.add(id(attr))
                state.mode, state.last_cue = Mode.POSITIVE, None
            else:
                state.mode, state.last_cue = Mode.NEGATED, obj
            state.last_index = obj.last
            group, glue_only = [], True

        elif role is R.CONFIRMATION_CUE:
            state.mode, state.last_cue, state.last_index = Mode.POSITIVE, obj, obj.last
            group, glue_only = [], True

        elif role is R.SPECULATION_CUE:
            if (
                state.mode is Mode.NEGATED
                and prev is not None
                and prev.role is R.PREPOSITION
                and prev.key == "to"
                and _adjacent(prev, obj)
            ):
                pass  # infinitival "to suggest" stays inside the negation
            elif _opens_clause(prev, prev2, obj):
                state.mode, state.last_cue = Mode.POSITIVE, obj
            else:
                state.mode, state.last_cue = Mode.SPECULATED, obj
            state.last_index = obj.last
            group, glue_only = [], True

        elif role in (R.BACKWARD_NEGATION_CUE, R.BACKWARD_CONFIRMATION_CUE):
            if group and obj.first - group[-1].last - 1 <= max_gap:
                for target in group:
                    if role is R.BACKWARD_NEGATION_CUE:
                        target.presence = Presence.NO
                        target.governed_by = role
                    elif target.presence is not Presence.NO:
                        target.presence = Presence.YES
                        target.governed_by = role
                    elif target.governed_by is None:
                        target.governed_by = role
            group, glue_only = [], True

        elif role is R.CONJUNCTION and obj.key == "but":
            state.mode, state.last_cue = Mode.POSITIVE, None
            group, glue_only = [], True

        elif role in _PRESENCE_TARGETS:
            if id(obj) not in shielded:
                if state.last_cue is not None and obj.first - state.last_index - 1 > max_gap:
                    state.mode, state.last_cue = Mode.POSITIVE, None
                if state.mode is Mode.NEGATED:
                    obj.presence = Presence.NO
                elif state.mode is Mode.SPECULATED:
                    obj.presence = Presence.MAYBE
                else:
                    obj.presence = Presence.YES
                if state.last_cue is not None:
                    obj.governed_by = state.last_cue.role
                    state.last_index = obj.last
            if group and glue_only:
                group.append(obj)
            else:
                group = [obj]
            glue_only = True

        elif role not in _GROUP_GLUE or (role is R.CONJUNCTION and obj.key not in ("and", "or")):
            glue_only = False

        prev2, prev = prev, obj
    state.transitions = len(objects)
    return annotated


_NESTING_PREPOSITIONS = frozenset({"of", "in", "within"})
# unmatched tokens tolerated between two adjacent locations
_MAX_LOCATION_GAP = 2


class _LocationParser:
    """Recursive-descent reader for location lists starting at one object.

    Grammar, over semantic objects::

        list := phrase (separator+ phrase)*
        phrase := chain (PREP_of|in|within ARTICLE* chain)*
        chain := MODIFIER* LOCATION (LOCATION)*      # adjacent locations
    """

    def __init__(self, objects, hierarchy):
        self.objects = objects
        self.hierarchy = hierarchy
        # trailing None marks the end; indices never run more than one past it
        self.roles = [o.role for o in objects]
        self.roles.append(None)

    def starts_chain(self, k: int) -> bool:
        roles = self.roles
        while roles[k] is R.MODIFIER:
            k += 1
        return roles[k] is R.LOCATION

    def chain(self, k: int, mods: list):
        objs = self.objects
        while objs[k].role is R.MODIFIER:
            mods.append(objs[k])
            k += 1
        locs = [objs[k]]
        k += 1
        while (
            k < len(objs)
            and objs[k].role is R.LOCATION
            and 0 <= objs[k].first - locs[-1].last - 1 <= _MAX_LOCATION_GAP
        ):
            locs.append(objs[k])
            k += 1
        # "A B C" reads as C(B(A))
        for inner, outer in zip(locs, locs[1:]):
            outer.attach(inner)
        return locs[-1], k

    def phrase(self, k: int, mods: list):
        head, k = self.chain(k, mods)
        heads = [head]
        roles = self.roles
        while roles[k] is R.PREPOSITION and self.objects[k].key in _NESTING_PREPOSITIONS:
            j = k + 1
            while roles[j] is R.ARTICLE:
                j += 1
            if not self.starts_chain(j):
                break
            nested, k = self.chain(j, mods)
            # "A of B of C" reads as A(B(C))
            heads[-1].attach(nested)
            heads.append(nested)
        return heads, k

    def parse(self, k: int):
        """Return ``(trees, flat_modifiers, next_index)``."""
        mods: list[SemanticObject] = []
        phrases = []
        roles = self.roles
        heads, k = self.phrase(k, mods)
        phrases.append(heads)
        while True:
            j = k
            saw_sep = False
            while (roles[j] is R.COMMA or roles[j] is R.CONJUNCTION) and self.objects[j].key in (",", "and", "or"):
                saw_sep = True
                j += 1
            while roles[j] is R.ARTICLE:
                j += 1
            if not saw_sep or not self.starts_chain(j):
                break
            heads, k = self.phrase(j, mods)
            phrases.append(heads)
        self._apply_hierarchy(phrases)
        return [p[0] for p in phrases], mods, k

    def _apply_hierarchy(self, phrases) -> None:
        # "A and B of C": when A is known to sit inside C, A gets C too
        if not self.hierarchy:
            return
        for bare, nested in zip(phrases, phrases[1:]):
            if len(bare) != 1 or len(nested) < 2:
                continue
            parents = self.hierarchy.get(bare[0].key, ())
            target = nested[1]
            if target.key in parents:
                bare[0].attach(target)


def analyze_locations(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    """Build nested location trees and attach them to facts.

    Locations introduced by a preposition right after a fact
    ("defects in the right upper lobe") attach to that fact. Other
    locations wait in a buffer for the next fact; leftovers at sentence end
    go to the nearest preceding fact or are dropped.
    """
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    objects = annotated.objects
    if not _has_role(objects, _LOCATION):
        return annotated
    parser = _LocationParser(objects, config.location_hierarchy)
    pending = state.pending
    last_fact: SemanticObject | None = None
    trailing = False  # only prepositions/articles since last_fact
    saw_prep = False
    k = 0
    while k < len(objects):
        obj = objects[k]
        role = obj.role
        if role.is_fact:
            for item in pending:
                obj.attach(item)
            pending.clear()
            last_fact, trailing, saw_prep = obj, True, False
            k += 1
        elif (role is R.LOCATION or role is R.MODIFIER) and parser.starts_chain(k):
            trees, mods, nxt = parser.parse(k)
            if trailing and saw_prep and last_fact is not None:
                for item in trees + mods:
                    last_fact.attach(item)
            else:
                pending.extend(trees + mods)
            trailing = False
            k = nxt
        else:
            if role is R.PREPOSITION:
                saw_prep = True
            elif role is not R.ARTICLE:
                trailing = False
            k += 1
    state.transitions = len(objects)
    if pending:
        first_pending = pending[0].first
        preceding = [f for f in objects if f.role.is_fact and f.first < first_pending]
        if preceding:
            for item in pending:
                preceding[-1].attach(item)
        pending.clear()
    return annotated


def _attached_ids(objects) -> set[int]:
    seen = set()
    for obj in objects:
        for m in obj.modifiers:
            seen.add(id(m))
    return seen


def analyze_modifiers(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    """Attach loose modifiers and fact attributes, un-nested, to the nearest
    following fact, falling back to the nearest preceding one."""
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    if not _has_role(annotated.objects, _LOOSE):
        return annotated
    attached = _attached_ids(annotated.objects)
    pending = state.pending
    last_fact = None
    for obj in annotated.objects:
        if obj.role.is_fact:
            for m in pending:
                obj.attach(m)
            pending.clear()
            last_fact = obj
        elif obj.role in (R.MODIFIER, R.FACT_ATTRIBUTE) and id(obj) not in attached:
            pending.append(obj)
    if last_fact is not None:
        for m in pending:
            last_fact.attach(m)
    pending.clear()
    state.transitions = len(annotated.objects)
    return annotated


_IGNORE_EXEMPT = frozenset(
    {R.CONFIRMATION_CUE, R.NEGATION_CUE, R.BACKWARD_CONFIRMATION_CUE, R.BACKWARD_NEGATION_CUE}
)


def analyze_ignore(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    """An ignore cue ("assess for", "exam", ...) marks every fact of the
    sentence ignored with presence MAYBE, except facts whose presence was
    decided by a confirmation or negation cue."""
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    objects = annotated.objects
    state.transitions = len(objects)
    if _has_role(objects, _IGNORE):
        for obj in objects:
            if obj.role.is_fact:
                if obj.governed_by in _IGNORE_EXEMPT:
                    obj.ignored = False
                else:
                    obj.ignored = True
                    obj.presence = Presence.MAYBE
    else:
        for obj in objects:
            if obj.ignored:
                obj.ignored = False
    return annotated


def analyze_family(
    annotated: AnnotatedSentence,
    config: PipelineConfig = DEFAULT_CONFIG,
    state: AnalyzerState | None = None,
) -> AnnotatedSentence:
    if state is None:
        state = AnalyzerState()
    else:
        state.reset()
    objects = annotated.objects
    state.transitions = len(objects)
    experiencer = Experiencer.FAMILY if _has_role(objects, _RELATIVE) else Experiencer.SELF
    for obj in objects:
        if obj.role.is_fact:
            obj.experiencer = experiencer
    return annotated


Analyzer = Callable[..., AnnotatedSentence]

ANALYZERS: dict[str, Analyzer] = {
    "merge_cues": merge_cues,
    "presence": analyze_presence,
    "locations": analyze_locations,
    "modifiers": analyze_modifiers,
    "ignore": analyze_ignore,
    "family": analyze_family,
}


_CHAINS: dict[tuple[str, ...], tuple[Analyzer, ...]] = {}


def run_pipeline(annotated: AnnotatedSentence, config: PipelineConfig = DEFAULT_CONFIG) -> AnnotatedSentence:
    chain = _CHAINS.get(config.analyzers)
    if chain is None:
        chain = _CHAINS[config.analyzers] = tuple(ANALYZERS[name] for name in config.analyzers)
    state = AnalyzerState()  # each analyzer resets it on entry
    for analyze in chain:
        analyze(annotated, config, state)
    return annotated
