"""Location nesting and the optional hierarchy table."""

# %%
from importlib import resources
from pathlib import Path

from narrex import build_engine, render_text

data = resources.files("narrex.data")
terms = Path(str(data.joinpath("ctpa_terms.tsv")))
hierarchy = Path(str(data.joinpath("ctpa_hierarchy.tsv")))

plain = build_engine([terms])
aware = build_engine([terms], hierarchy=hierarchy)

# %% [markdown]
# Locations chain through "of" and through plain juxtaposition, so both orders
# below give the same tree.

# %%
for text in ["Nodules in left upper lobe arteries.", "Nodules in arteries of the left upper lobe."]:
    print([render_text(r) for r in plain.process_note("n", text)])

# %% [markdown]
# A longer report sentence. "anterolateral segment" is not in the term list, so
# only "segment" is recognized there.

# %%
report = (
    "There are segmental and subsegmental filling defects in the right upper lobe, superior "
    "segment of the right lower lobe, and subsegmental filling defect in the in the "
    "anterolateral segment of the left lower lobe pulmonary arteries."
)
for rec in plain.process_note("n", report):
    print(render_text(rec))

# %% [markdown]
# Coordinated locations are ambiguous. With no extra knowledge the trailing
# "of the right lower lobe" only attaches to the nearest segment. A child/parent
# table lets the other segment share the parent when it is a valid one.

# %%
text = "There are filling defects in the anterior basal segment and superior segment of the right lower lobe."
print("plain:", render_text(plain.process_note("n", text)[0]))
print("aware:", render_text(aware.process_note("n", text)[0]))

# %%
text = "There are filling defects in the right upper lobe and superior segment of the right lower lobe."
print("plain:", render_text(plain.process_note("n", text)[0]))
print("aware:", render_text(aware.process_note("n", text)[0]))

# %% [markdown]
# Shared prefixes and suffixes in lists are spread over every item.

# %%
print(render_text(plain.process_note("n", "Nodules in the right upper, middle, and lower lobes.")[0]))
