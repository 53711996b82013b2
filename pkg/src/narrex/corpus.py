"""Seeded generator of radiology-style notes for throughput runs.

At the default size, 10330 notes come to about 18 MB of JSONL.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

DEFAULT_NOTE_BYTES = 1742

_FACTS = [
    "pulmonary embolism", "pulmonary emboli", "PE", "filling defects", "pleural effusion",
    "pneumonia", "atelectasis", "consolidation", "pulmonary nodules", "pneumothorax",
    "cardiomegaly", "lymphadenopathy", "mass",
]
_LOCATIONS = [
    "right upper lobe", "right middle lobe", "right lower lobe", "left upper lobe",
    "left lower lobe", "lingula", "superior segment of the right lower lobe",
    "posterior basal segment of the left lower lobe", "main pulmonary artery",
    "left lower lobe pulmonary arteries", "right lung", "lung bases",
]
_MODIFIERS = ["segmental", "subsegmental", "lobar", "small", "large", "mild", "moderate", "acute", "chronic"]

_OPENERS = [
    "There are {mod} filling defects in the {loc}.",
    "{Mod} {fact} in the {loc}.",
    "Findings are consistent with {fact} in the {loc} and {loc2}.",
    "Impression: {mod} {fact} of the {loc}.",
    "There is {mod} {fact} within the {loc}.",
]
_TEMPLATES = _OPENERS + [
    "No filling defects are seen to suggest pulmonary embolism.",
    "No filling defects are seen, suggesting {fact}.",
    "No filling defects are seen and it suggests {fact}.",
    "No {fact} is identified.",
    "No {fact} has been found in the {loc}.",
    "The {loc} is clear without {fact}.",
    "No mediastinal, hilar, or axillary lymphadenopathy.",
    "No change in the pleural effusion.",
    "Nodules in the right upper, middle, and lower lobes.",
    "Mother had breast cancer.",
    "CT exam to assess for {fact}.",
    "The heart is normal in size.",
    "{Fact} is not seen in the {loc}.",
    "Possible {fact} in the {loc}, chronic.",
    "There are {mod} and {mod2} filling defects in the {loc}, {loc2}, and {mod} filling defect in the {loc3}.",
    "The previously described mass was removed.",
    "Technique: axial images were obtained through the chest following intravenous contrast "
    "administration with sagittal and coronal reformations.",
    "Comparison is made with the prior study dated 03/14 which showed {fact}.",
    "The visualized portions of the upper abdomen are unremarkable.",
    "Osseous structures demonstrate degenerative change without acute abnormality.",
]
_HEADER = "EXAM: CT PULMONARY ANGIOGRAPHY\nHISTORY: shortness of breath, evaluate for PE\n\nFINDINGS:\n"


def _fill(template: str, rng: random.Random) -> str:
    fact = rng.choice(_FACTS)
    mod = rng.choice(_MODIFIERS)
    return template.format(
        fact=fact,
        Fact=fact[0].upper() + fact[1:],
        mod=mod,
        Mod=mod.capitalize(),
        mod2=rng.choice(_MODIFIERS),
        loc=rng.choice(_LOCATIONS),
        loc2=rng.choice(_LOCATIONS),
        loc3=rng.choice(_LOCATIONS),
    )


def generate_note(rng: random.Random, target_bytes: int = DEFAULT_NOTE_BYTES) -> str:
    """One note; the first findings sentence always names a fact."""
    budget = int(target_bytes * rng.uniform(0.7, 1.3))
    parts = [_HEADER, _fill(rng.choice(_OPENERS), rng)]
    size = sum(len(p) for p in parts)
    while size < budget:
        sentence = _fill(rng.choice(_TEMPLATES), rng)
        sep = "\n" if rng.random() < 0.25 else " "
        parts.append(sep + sentence)
        size += len(sentence) + 1
    return "".join(parts)


def generate_synthetic_corpus(
    n_notes: int,
    seed: int,
    path: str | Path,
    target_bytes: int = DEFAULT_NOTE_BYTES,
) -> Path:
    """Write ``n_notes`` notes as JSONL lines ``{"id": ..., "text": ...}``.

    Output depends only on the arguments.
    """
    if n_notes <= 0:
        raise ValueError("n_notes must be positive")
    rng = random.Random(seed)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for i in range(n_notes):
            note = {"id": f"note-{i:06d}", "text": generate_note(rng, target_bytes)}
            fh.write(json.dumps(note, ensure_ascii=False))
            fh.write("\n")
    return path
