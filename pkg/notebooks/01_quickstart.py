"""Quickstart: from a raw report to fact records."""

# %% [markdown]
# Build an engine from the packaged radiology term list. The base dictionary of
# cue words (negations, link verbs, relatives and so on) is always loaded first.

# %%
from importlib import resources
from pathlib import Path

from narrex import build_engine, render_text

terms = Path(str(resources.files("narrex.data").joinpath("ctpa_terms.tsv")))
engine = build_engine([terms])
print(len(engine.lexicon), "phrases in the dictionary")

# %% [markdown]
# A note is just a string. Each fact comes back as a record with a presence
# value, who experienced it, and any attached modifiers.

# %%
note = """FINDINGS: No filling defects are seen to suggest pulmonary embolism.
Small right pleural effusion. Mother had breast cancer.

IMPRESSION: No PE."""

for rec in engine.process_note("demo-1", note):
    print(f"{rec.sentence_index}  {rec.presence:5} {rec.experiencer:6} {rec.text}")

# %% [markdown]
# The display format flattens the modifier tree into nested parentheses.

# %%
for rec in engine.process_note("demo-1", note):
    print(render_text(rec))

# %% [markdown]
# Records serialize to one JSON object per line.

# %%
first = engine.process_note("demo-1", note)[0]
print(first.to_json())
