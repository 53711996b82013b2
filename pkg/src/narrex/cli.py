"""Batch driver: read notes, extract facts, write JSONL or rendered text.

Examples::

    narrex --dict terms.tsv --input notes.jsonl --output facts.jsonl
    narrex --dict builtin:ctpa --input report.txt --render
    narrex --generate-corpus 10330 --seed 7 --output corpus.jsonl
    narrex --dict builtin:ctpa --input corpus.jsonl --output /dev/null --bench
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator

from .analysis import ConfigError, PipelineConfig
from .corpus import generate_synthetic_corpus
from .engine import Engine, build_engine
from .lexicon import LexiconError
from .output import FactRecord, render_text

log = logging.getLogger("narrex")

BUILTIN = {
    "builtin:ctpa": "ctpa_terms.tsv",
    "builtin:ctpa-hierarchy": "ctpa_hierarchy.tsv",
}


@dataclass
class RunStats:
    notes_processed: int = 0
    bytes_processed: int = 0
    wall_ms: float = 0.0
    engine_ms: float = 0.0
    skipped_lines: int = 0
    records_written: int = 0


class InputError(Exception):
    pass


def _resolve(name: str) -> Path:
    if name in BUILTIN:
        return Path(str(resources.files("narrex.data").joinpath(BUILTIN[name])))
    path = Path(name)
    if not path.is_file():
        raise FileNotFoundError(name)
    return path


def _read_jsonl(lines, source: str, stats: RunStats) -> Iterator[tuple[str, str]]:
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            note_id, text = obj["id"], obj["text"]
            if not isinstance(text, str):
                raise TypeError("text is not a string")
        except (ValueError, KeyError, TypeError) as exc:
            print(f"warning: {source}:{lineno}: skipping malformed line ({exc})", file=sys.stderr)
            stats.skipped_lines += 1
            continue
        yield str(note_id), text


def iter_notes(source: str, stats: RunStats) -> Iterator[tuple[str, str]]:
    """Yield ``(note_id, text)`` from stdin, a directory, a JSONL file or a text file."""
    if source == "-":
        yield from _read_jsonl(sys.stdin, "<stdin>", stats)
        return
    path = Path(source)
    if path.is_dir():
        for child in sorted(p for p in path.iterdir() if p.is_file()):
            yield child.name, child.read_text(encoding="utf-8")
    elif path.is_file():
        if path.suffix.lower() in (".jsonl", ".ndjson"):
            with path.open(encoding="utf-8") as fh:
                yield from _read_jsonl(fh, str(path), stats)
        else:
            yield path.name, path.read_text(encoding="utf-8")
    else:
        raise InputError(f"input not found: {source}")


_worker_engine: Engine | None = None


def _init_worker(dicts, config, abbrev, hierarchy):
    global _worker_engine
    _worker_engine = build_engine(dicts, config, abbreviations=abbrev, hierarchy=hierarchy)


def _work(item):
    note_id, text = item
    t0 = time.perf_counter()
    records = _worker_engine.process_note(note_id, text)
    return note_id, len(text.encode("utf-8")), records, (time.perf_counter() - t0) * 1000.0


def _process_serial(engine: Engine, notes):
    for note_id, text in notes:
        t0 = time.perf_counter()
        records = engine.process_note(note_id, text)
        yield note_id, len(text.encode("utf-8")), records, (time.perf_counter() - t0) * 1000.0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="narrex", description=__doc__.split("\n\n")[0])
    p.add_argument("--dict", action="append", default=[], metavar="TSV",
                   help="term file (repeatable); builtin:ctpa selects the packaged radiology terms")
    p.add_argument("--input", default="-", help="text file, directory, JSONL file, or - for JSONL on stdin")
    p.add_argument("--output", default="-", help="output path, - for stdout")
    p.add_argument("--render", action="store_true", help="write display strings instead of JSONL")
    p.add_argument("--include-ignored", action="store_true", help="keep facts marked ignored")
    p.add_argument("--abbrev", help="abbreviation list file")
    p.add_argument("--hierarchy", help="child<TAB>parent location table")
    p.add_argument("--config", help="JSON pipeline config (analyzers, forward_scope_max_gap)")
    p.add_argument("--bench", action="store_true", help="print run statistics to stderr")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--sorted", action="store_true",
                   help="emit notes in input order (always true; kept for scripts)")
    p.add_argument("--generate-corpus", type=int, metavar="N",
                   help="write N synthetic notes as JSONL to --output and exit")
    p.add_argument("--seed", type=int, default=7, help="seed for --generate-corpus")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.generate_corpus is not None:
        if args.output == "-":
            print("error: --generate-corpus needs --output PATH", file=sys.stderr)
            return 2
        try:
            generate_synthetic_corpus(args.generate_corpus, args.seed, args.output)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    try:
        dicts = [_resolve(d) for d in args.dict]
        hierarchy = _resolve(args.hierarchy) if args.hierarchy else None
        abbrev = _resolve(args.abbrev) if args.abbrev else None
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc}", file=sys.stderr)
        return 2

    try:
        config = None
        if args.config:
            config = PipelineConfig.from_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))
        engine = build_engine(dicts, config, abbreviations=abbrev, hierarchy=hierarchy)
    except (LexiconError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    stats = RunStats()
    t_start = time.perf_counter()
    out = sys.stdout if args.output == "-" else None
    try:
        if out is None:
            out = open(args.output, "w", encoding="utf-8", newline="\n")
        notes = iter_notes(args.input, stats)
        if args.threads > 1:
            pool = ProcessPoolExecutor(
                max_workers=args.threads,
                initializer=_init_worker,
                initargs=(dicts, config, abbrev, hierarchy),
            )
            results = pool.map(_work, notes, chunksize=64)
        else:
            pool = None
            results = _process_serial(engine, notes)
        for _note_id, nbytes, records, ms in results:
            stats.notes_processed += 1
            stats.bytes_processed += nbytes
            stats.engine_ms += ms
            stats.records_written += _write(out, records, args)
        if pool is not None:
            pool.shutdown()
    except (InputError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if out is not None and out is not sys.stdout:
            out.close()
    stats.wall_ms = (time.perf_counter() - t_start) * 1000.0
    if args.bench:
        print(json.dumps(asdict(stats)), file=sys.stderr)
    return 0


def _write(out, records: list[FactRecord], args) -> int:
    fmt = render_text if args.render else FactRecord.to_json
    lines = [fmt(rec) for rec in records if args.include_ignored or not rec.ignored]
    if lines:
        out.write("\n".join(lines))
        out.write("\n")
    return len(lines)


if __name__ == "__main__":
    sys.exit(main())
