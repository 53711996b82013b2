"""One-call note processing: preprocess, recognize, expand, analyze, emit."""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Iterable

from .analysis import DEFAULT_CONFIG, PipelineConfig, run_pipeline
from .core import AnnotatedSentence
from .lexicon import Lexicon, load_base_dictionary, load_hierarchy, load_term_file
from .ner import expand_conjunctions, recognize
from .output import FactRecord, to_records
from .preprocess import DEFAULT_ABBREVIATIONS, load_abbreviations, split_sentences, tokenize


@dataclasses.dataclass(frozen=True)
class Engine:
    lexicon: Lexicon
    pipeline: PipelineConfig = DEFAULT_CONFIG
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS

    def annotate(self, text: str) -> list[AnnotatedSentence]:
        """Fully analyzed sentences of ``text`` (the debug view)."""
        out = []
        for sentence in split_sentences(text, self.abbreviations):
            tokenize(sentence, self.abbreviations)
            annotated = recognize(self.lexicon, sentence)
            expand_conjunctions(self.lexicon, annotated)
            run_pipeline(annotated, self.pipeline)
            out.append(annotated)
        return out

    def process_note(self, note_id: str, text: str) -> list[FactRecord]:
        return to_records(note_id, self.annotate(text))


def build_engine(
    term_files: Iterable[str | Path] = (),
    config: PipelineConfig | None = None,
    *,
    abbreviations: str | Path | frozenset[str] | None = None,
    hierarchy: str | Path | None = None,
) -> Engine:
    """Base dictionary plus ``term_files``, frozen, with a validated pipeline.

    ``hierarchy`` names a ``child<TAB>parent`` location table that
    disambiguates coordinated locations.
    """
    if abbreviations is None:
        abbrevs = DEFAULT_ABBREVIATIONS
    elif isinstance(abbreviations, frozenset):
        abbrevs = abbreviations
    else:
        abbrevs = load_abbreviations(abbreviations)
    lexicon = load_base_dictionary()
    for path in term_files:
        load_term_file(lexicon, path, abbrevs)
    lexicon.freeze()
    config = config or DEFAULT_CONFIG
    if hierarchy is not None:
        config = dataclasses.replace(config, location_hierarchy=load_hierarchy(hierarchy))
    return Engine(lexicon, config, abbrevs)


def process_note(engine: Engine, note_id: str, text: str) -> list[FactRecord]:
    return engine.process_note(note_id, text)
