"""Dictionary-driven information extraction from clinical narrative text.

    >>> from narrex import build_engine
    >>> engine = build_engine(["terms.tsv"])
    >>> records = engine.process_note("n1", "No pulmonary embolism.")
"""

from .analysis import ConfigError, PipelineConfig, run_pipeline
from .core import (
    AnnotatedSentence,
    Experiencer,
    Presence,
    RoleFamily,
    SemanticObject,
    SemanticRole,
    Span,
    Token,
)
from .engine import Engine, build_engine, process_note
from .lexicon import Lexicon, LexiconError, load_base_dictionary, load_term_file
from .ner import expand_conjunctions, recognize
from .output import FactRecord, ModifierNode, read_jsonl, render_text, to_records, write_jsonl
from .preprocess import split_sentences, tokenize

__all__ = [
    "AnnotatedSentence",
    "ConfigError",
    "Engine",
    "Experiencer",
    "FactRecord",
    "Lexicon",
    "LexiconError",
    "ModifierNode",
    "PipelineConfig",
    "Presence",
    "RoleFamily",
    "SemanticObject",
    "SemanticRole",
    "Span",
    "Token",
    "build_engine",
    "expand_conjunctions",
    "load_base_dictionary",
    "load_term_file",
    "process_note",
    "read_jsonl",
    "recognize",
    "render_text",
    "run_pipeline",
    "split_sentences",
    "to_records",
    "tokenize",
    "write_jsonl",
]

__version__ = "0.1.0"
