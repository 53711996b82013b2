import random

import pytest
from hypothesis import given, strategies as st

from narrex.core import SemanticRole
from narrex.lexicon import (
    Lexicon,
    LexiconError,
    load_base_dictionary,
    load_hierarchy,
    load_term_file,
    load_term_text,
)
from narrex.preprocess import tokenize_text

DISORDER = SemanticRole.FACT_DISORDER


def oracle_longest(phrases: set[tuple[str, ...]], tokens, start):
    """Try every prefix length from ``start`` and keep the longest phrase."""
    best = None
    for end in range(start + 1, len(tokens) + 1):
        if tuple(tokens[start:end]) in phrases:
            best = end
    return best


def test_add_and_lookup():
    lex = Lexicon().add_term(["heart", "attack"], "C-MI", DISORDER)
    assert lex.lookup(["heart", "attack"]).codes == {"C-MI"}
    assert lex.lookup(["heart"]) is None
    assert "heart attack" in lex and len(lex) == 1


def test_role_conflict_rejected():
    lex = Lexicon().add_term(["pe"], "C-PE", DISORDER)
    with pytest.raises(LexiconError):
        lex.add_term(["pe"], "C-PhysExam", SemanticRole.FACT_TEST)


def test_codes_union_under_one_role():
    lex = Lexicon().add_term(["pe"], "C-PE", DISORDER).add_term(["pe"], "C-PE2", DISORDER)
    assert lex.lookup(["pe"]).codes == {"C-PE", "C-PE2"}
    assert lex.term_count == 1


@pytest.mark.parametrize("tokens", [[], ["Heart"], ["heart", ""]])
def test_bad_phrases(tokens):
    with pytest.raises(LexiconError):
        Lexicon().add_term(tokens, "C", DISORDER)


def test_frozen_lexicon_is_read_only():
    lex = Lexicon().freeze()
    with pytest.raises(LexiconError):
        lex.add_term(["pe"], "C", DISORDER)


def test_longest_match_prefers_longer_phrase():
    lex = Lexicon().add_term(["heart"], "C-H", SemanticRole.LOCATION)
    lex.add_term(["heart", "attack"], "C-MI", DISORDER)
    tokens = tokenize_text("patient had a heart attack in 2006")
    end, payload = lex.longest_match(tokens, 3)
    assert end == 5 and payload.codes == {"C-MI"}
    assert lex.longest_match(tokens, 0) is None
    assert lex.walk(["heart", "failure"], 0) == 1


vocab = st.sampled_from("a b c d e".split())
phrase_sets = st.sets(st.lists(vocab, min_size=1, max_size=4).map(tuple), min_size=1, max_size=15)


@given(phrase_sets, st.lists(vocab, min_size=1, max_size=14), st.data())
def test_longest_match_equals_prefix_oracle(phrases, tokens, data):
    lex = Lexicon()
    for p in phrases:
        lex.add_term(p, "C", DISORDER)
    start = data.draw(st.integers(0, len(tokens) - 1))
    got = lex.longest_match(tokens, start)
    expected = oracle_longest(phrases, tokens, start)
    assert (got[0] if got else None) == expected


@given(phrase_sets)
def test_every_phrase_matches_itself(phrases):
    lex = Lexicon()
    for p in phrases:
        lex.add_term(p, "C", DISORDER)
    for p in phrases:
        assert lex.longest_match(list(p), 0)[0] == len(p)


def test_base_dictionary_roles():
    base = load_base_dictionary()

    def role(phrase):
        return base.lookup(tokenize_text(phrase)).role

    R = SemanticRole
    expected = {
        "found": R.PARTICIPLE_CONFIRMATION,
        ",": R.COMMA,
        "exam": R.IGNORE_CUE,
        "no": R.NEGATION_CUE, "not": R.NEGATION_CUE, "without": R.NEGATION_CUE, "denies": R.NEGATION_CUE,
        "is": R.LINK_VERB_POSITIVE, "been": R.LINK_VERB_POSITIVE, "are": R.LINK_VERB_POSITIVE,
        "is not": R.LINK_VERB_NEGATIVE, "isn't": R.LINK_VERB_NEGATIVE,
        "have": R.AUX_VERB_POSITIVE, "has": R.AUX_VERB_POSITIVE,
        "have not": R.AUX_VERB_NEGATIVE, "haven't": R.AUX_VERB_NEGATIVE,
        "suggest": R.SPECULATION_CUE, "suggests": R.SPECULATION_CUE, "suggesting": R.SPECULATION_CUE,
        "assess for": R.IGNORE_CUE, "in case of": R.IGNORE_CUE, "study": R.IGNORE_CUE,
        "evaluate": R.IGNORE_CUE, "diff diagnosis": R.IGNORE_CUE,
        "mother": R.RELATIVE, "father": R.RELATIVE, "uncle": R.RELATIVE,
        "aunt": R.RELATIVE, "brother": R.RELATIVE, "sister": R.RELATIVE,
        "and": R.CONJUNCTION, "or": R.CONJUNCTION, "but": R.CONJUNCTION,
        "of": R.PREPOSITION, "in": R.PREPOSITION, "within": R.PREPOSITION,
        "change": R.FACT_ATTRIBUTE,
    }
    assert {p: role(p) for p in expected} == expected


def test_base_dictionary_exports_to_tsv_and_back():
    base = load_base_dictionary()
    again = load_term_text(Lexicon(), base.to_tsv())
    assert again.entries() == base.entries()
    assert again.term_count == base.term_count


def test_term_file_line(tmp_path):
    path = tmp_path / "terms.tsv"
    path.write_text("# header\npulmonary embolism\tC-PE\tFact:Disorder\n", encoding="utf-8")
    lex = load_term_file(Lexicon(), path)
    assert lex.lookup(["pulmonary", "embolism"]).role is DISORDER


@pytest.mark.parametrize(
    "body, line",
    [
        ("ok\tC1\tLocation\npe\tC-PE\n", 2),
        ("ok\tC1\tLocation\n\nbad\tC2\tNotARole\n", 3),
        ("pe\tC1\tFact:Disorder\npe\tC2\tFact:Test\n", 2),
    ],
)
def test_term_file_errors_name_the_line(tmp_path, body, line):
    path = tmp_path / "bad.tsv"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(LexiconError, match=rf"bad.tsv:{line}:"):
        load_term_file(Lexicon(), path)


def test_ten_thousand_line_file(tmp_path):
    rng = random.Random(3)
    syllables = ["ka", "lo", "mi", "ne", "pu", "ra", "si", "to"]
    lines, phrases = [], set()
    for i in range(10_000):
        words = ["".join(rng.choices(syllables, k=3)) for _ in range(rng.randint(1, 3))]
        phrase = " ".join(words)
        lines.append(f"{phrase}\tC{i % 500}\tFact:Finding")
        phrases.add(phrase)
    path = tmp_path / "big.tsv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    lex = load_term_file(Lexicon(), path)
    assert len(phrases) < 10_000  # the fixture really does contain repeats
    assert lex.term_count == len(phrases)


def test_hierarchy_file(tmp_path):
    path = tmp_path / "h.tsv"
    path.write_text("# child\tparent\nSuperior Segment\tright lower lobe\nsuperior segment\tleft lower lobe\n")
    assert load_hierarchy(path) == {"superior segment": frozenset({"right lower lobe", "left lower lobe"})}
    path.write_text("a\tb\tc\n")
    with pytest.raises(LexiconError):
        load_hierarchy(path)
