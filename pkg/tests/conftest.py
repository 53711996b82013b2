from importlib import resources
from pathlib import Path

import pytest

from narrex import build_engine
from narrex.preprocess import SentenceBuffer, tokenize
from narrex.core import Span

DATA = resources.files("narrex.data")
CTPA_TERMS = Path(str(DATA.joinpath("ctpa_terms.tsv")))
CTPA_HIERARCHY = Path(str(DATA.joinpath("ctpa_hierarchy.tsv")))

# filled by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ctpa_engine():
    return build_engine([CTPA_TERMS])


@pytest.fixture(scope="session")
def hierarchy_engine():
    return build_engine([CTPA_TERMS], hierarchy=CTPA_HIERARCHY)


def sentence(text: str) -> SentenceBuffer:
    """A single tokenized sentence, bypassing boundary detection."""
    return tokenize(SentenceBuffer(text, Span(0, len(text))))


def annotate_one(engine, text: str):
    """Run the whole per-sentence chain on ``text`` taken as one sentence."""
    from narrex.analysis import run_pipeline
    from narrex.ner import expand_conjunctions, recognize

    annotated = recognize(engine.lexicon, sentence(text))
    expand_conjunctions(engine.lexicon, annotated)
    return run_pipeline(annotated, engine.pipeline)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
