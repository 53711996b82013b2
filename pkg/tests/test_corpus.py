import json
import random

import pytest

from narrex.corpus import generate_note, generate_synthetic_corpus


def test_same_seed_same_bytes(tmp_path):
    a = generate_synthetic_corpus(10, 1, tmp_path / "a.jsonl").read_bytes()
    b = generate_synthetic_corpus(10, 1, tmp_path / "b.jsonl").read_bytes()
    c = generate_synthetic_corpus(10, 2, tmp_path / "c.jsonl").read_bytes()
    assert a == b != c


def test_every_note_has_a_fact(tmp_path, ctpa_engine):
    path = generate_synthetic_corpus(50, 11, tmp_path / "c.jsonl")
    for line in path.read_text(encoding="utf-8").splitlines():
        note = json.loads(line)
        assert ctpa_engine.process_note(note["id"], note["text"])


def test_note_size_tracks_target():
    rng = random.Random(0)
    sizes = [len(generate_note(rng, 2000)) for _ in range(400)]
    # per-note lengths vary by design; the mean stays near the target
    assert all(1300 <= s <= 2800 for s in sizes)
    assert 1900 <= sum(sizes) / len(sizes) <= 2200


def test_rejects_empty_corpus(tmp_path):
    with pytest.raises(ValueError):
        generate_synthetic_corpus(0, 1, tmp_path / "x.jsonl")
