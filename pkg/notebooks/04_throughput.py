"""Throughput on a synthetic corpus.

Generates a seeded corpus, runs the batch driver single-threaded and prints the
bench statistics. Pass a note count as the first argument (default 1000).
"""

# %%
import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

n_notes = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
work = Path(tempfile.mkdtemp())
corpus = work / "corpus.jsonl"

# %%
t0 = time.perf_counter()
subprocess.run([sys.executable, "-m", "narrex.cli", "--generate-corpus", str(n_notes),
                "--seed", "7", "--output", str(corpus)], check=True)
print(f"{n_notes} notes, {corpus.stat().st_size / 1e6:.2f} MB in {time.perf_counter() - t0:.1f} s")

# %%
proc = subprocess.run(
    [sys.executable, "-m", "narrex.cli", "--dict", "builtin:ctpa", "--input", str(corpus),
     "--output", str(work / "facts.jsonl"), "--bench"],
    check=True, capture_output=True, text=True,
)
stats = json.loads(proc.stderr.strip().splitlines()[-1])
for k, v in stats.items():
    print(f"{k:18} {v:,.1f}" if isinstance(v, float) else f"{k:18} {v:,}")

# %% [markdown]
# Notes per second and megabytes per second, in-engine and end to end.

# %%
mb = stats["bytes_processed"] / 1e6
print(f"engine: {stats['notes_processed'] / stats['engine_ms'] * 1000:,.0f} notes/s, {mb / stats['engine_ms'] * 1000:.2f} MB/s")
print(f"total:  {stats['notes_processed'] / stats['wall_ms'] * 1000:,.0f} notes/s, {mb / stats['wall_ms'] * 1000:.2f} MB/s")
