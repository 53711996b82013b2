"""How cue words decide presence.

Cue words first get merged into compound cues, then a small state machine
walks each sentence and stamps every medical term with YES, NO or MAYBE.
"""

# %%
from importlib import resources
from pathlib import Path

from narrex import build_engine, recognize
from narrex.analysis import merge_cues
from narrex.preprocess import SentenceBuffer, tokenize
from narrex.core import Span

terms = Path(str(resources.files("narrex.data").joinpath("ctpa_terms.tsv")))
engine = build_engine([terms])


def one_sentence(text):
    return tokenize(SentenceBuffer(text, Span(0, len(text))))


# %% [markdown]
# ## Merging verb groups
#
# "not found" looks backwards at what came before it, while "haven't found" looks forward.
# The merge step turns auxiliaries, link verbs and participles into a single cue.

# %%
for text in ["pe found", "pe not found", "pe is found", "haven't found pe", "pe haven't been found"]:
    annotated = merge_cues(recognize(engine.lexicon, one_sentence(text)))
    cues = [(o.text, o.role.value) for o in annotated.objects if not o.role.is_fact]
    print(f"{text:24} -> {cues}")

# %% [markdown]
# ## Scope of a negation
#
# A speculation verb inside the negated clause inherits the negation. A comma or a
# new clause breaks it.

# %%
for text in [
    "No filling defects are seen to suggest pulmonary embolism.",
    "No filling defects are seen, suggesting pulmonary embolism.",
    "No filling defects are seen and it suggests pulmonary embolism.",
]:
    print(text)
    for rec in engine.process_note("n", text):
        print("   ", rec.text, "->", rec.presence)

# %% [markdown]
# ## Negating an attribute instead of the finding

# %%
(rec,) = engine.process_note("n", "No change in the pleural effusion.")
print(rec.text, rec.presence, [(m.text, m.presence) for m in rec.modifiers])

# %% [markdown]
# ## Ignore cues and relatives

# %%
for text in ["assess for PE", "CT exam for PE, no PE seen.", "Mother had PE."]:
    for rec in engine.process_note("n", text):
        print(f"{text:30} {rec.text:4} {rec.presence:5} ignored={rec.ignored} {rec.experiencer}")
