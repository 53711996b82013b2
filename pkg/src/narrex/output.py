"""Fact records: the public result of processing a note."""

from __future__ import annotations

import json
from json.encoder import encode_basestring
from dataclasses import dataclass, field
from typing import Any, Iterable

from .core import AnnotatedSentence, Experiencer, Presence, SemanticObject, SemanticRole


# enum member -> serialized spelling, avoiding the slower ``.value`` lookup
_LABEL = {m: m.value for enum in (SemanticRole, Presence, Experiencer) for m in enum}
# one shared encoder; json.dumps builds a new one per call when given options
_ENCODER = json.JSONEncoder(ensure_ascii=False, separators=(",", ":"))
_str = encode_basestring


def _strs(items) -> str:
    return ",".join(map(_str, items))


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


@dataclass
class ModifierNode:
    text: str
    codes: list[str]
    role: str
    presence: str
    children: list[ModifierNode] = field(default_factory=list)

    @classmethod
    def from_object(cls, obj: SemanticObject) -> ModifierNode:
        return cls(
            text=obj.text,
            codes=sorted(obj.codes),
            role=_LABEL[obj.role],
            presence=_LABEL[obj.presence],
            children=[cls.from_object(m) for m in obj.modifiers],
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "codes": list(self.codes),
            "role": self.role,
            "presence": self.presence,
            "children": [c.to_dict() for c in self.children],
        }

    def to_json(self) -> str:
        return (
            f'{{"text":{_str(self.text)},"codes":[{_strs(self.codes)}],"role":{_str(self.role)},'
            f'"presence":{_str(self.presence)},'
            f'"children":[{",".join(c.to_json() for c in self.children)}]}}'
        )

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModifierNode:
        return cls(
            text=data["text"],
            codes=list(data["codes"]),
            role=data["role"],
            presence=data["presence"],
            children=[cls.from_dict(c) for c in data["children"]],
        )


@dataclass
class FactRecord:
    note_id: str
    sentence_index: int
    text: str
    codes: list[str]
    kind: str
    presence: str
    experiencer: str
    ignored: bool
    modifiers: list[ModifierNode]
    span: list[int]
    synthetic: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "note_id": self.note_id,
            "sentence_index": self.sentence_index,
            "text": self.text,
            "codes": list(self.codes),
            "kind": self.kind,
            "presence": self.presence,
            "experiencer": self.experiencer,
            "ignored": self.ignored,
            "modifiers": [m.to_dict() for m in self.modifiers],
            "span": list(self.span),
            "synthetic": self.synthetic,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FactRecord:
        return cls(
            note_id=data["note_id"],
            sentence_index=data["sentence_index"],
            text=data["text"],
            codes=list(data["codes"]),
            kind=data["kind"],
            presence=data["presence"],
            experiencer=data["experiencer"],
            ignored=data["ignored"],
            modifiers=[ModifierNode.from_dict(m) for m in data["modifiers"]],
            span=list(data["span"]),
            synthetic=data["synthetic"],
        )

    def to_json(self) -> str:
        """Compact JSON, same bytes as encoding ``to_dict()``.

        Written out by hand because the generic encoder dominated batch runs.
        """
        try:
            return (
                f'{{"note_id":{_str(self.note_id)},"sentence_index":{int(self.sentence_index)},'
                f'"text":{_str(self.text)},"codes":[{_strs(self.codes)}],"kind":{_str(self.kind)},'
                f'"presence":{_str(self.presence)},"experiencer":{_str(self.experiencer)},'
                f'"ignored":{_bool(self.ignored)},'
                f'"modifiers":[{",".join(m.to_json() for m in self.modifiers)}],'
                f'"span":[{int(self.span[0])},{int(self.span[1])}],"synthetic":{_bool(self.synthetic)}}}'
            )
        except (TypeError, ValueError, IndexError):
            return _ENCODER.encode(self.to_dict())

    @classmethod
    def from_json(cls, line: str) -> FactRecord:
        return cls.from_dict(json.loads(line))


def to_records(note_id: str, sentences: Iterable[AnnotatedSentence]) -> list[FactRecord]:
    """One record per fact object, in sentence and then token order."""
    records = []
    for sentence in sentences:
        for obj in sentence.objects:
            if not obj.role.is_fact:
                continue
            records.append(
                FactRecord(
                    note_id=note_id,
                    sentence_index=sentence.index,
                    text=obj.text,
                    codes=sorted(obj.codes),
                    kind=obj.role.fact_kind,
                    presence=_LABEL[obj.presence],
                    experiencer=_LABEL[obj.experiencer],
                    ignored=obj.ignored,
                    modifiers=[ModifierNode.from_object(m) for m in obj.modifiers],
                    span=[obj.span.start, obj.span.end],
                    synthetic=obj.synthetic,
                )
            )
    return records


def _display(text: str) -> str:
    return " ".join(text.lower().split())


def _render_node(node: ModifierNode) -> str:
    if not node.children:
        return _display(node.text)
    inner = "; ".join(_render_node(c) for c in node.children)
    return f"{_display(node.text)} ({inner})"


def render_text(record: FactRecord) -> str:
    """``filling defects: YES (right upper lobe; superior segment (right lower lobe))``"""
    head = f"{_display(record.text)}: {record.presence}"
    if not record.modifiers:
        return head
    return f"{head} ({'; '.join(_render_node(m) for m in record.modifiers)})"


def write_jsonl(records: Iterable[FactRecord], fh) -> int:
    count = 0
    for rec in records:
        fh.write(rec.to_json())
        fh.write("\n")
        count += 1
    return count


def read_jsonl(fh) -> list[FactRecord]:
    return [FactRecord.from_json(line) for line in fh if line.strip()]
