"""File formats: provenance-headed TSV and JSONL, score/trial/QMF readers."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__
from .metrics import TrialRecord


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()[:12]


def provenance_line(subcommand: str, seed: int | None = None, inputs=()) -> str:
    """Comment header embedded in every output file; no timestamps, byte-stable."""
    parts = [f"# phonrich={__version__}", f"cmd={subcommand}"]
    if seed is not None:
        parts.append(f"seed={seed}")
    if inputs:
        digests = ",".join(f"{Path(p).name}:{file_digest(p)}" for p in inputs)
        parts.append(f"inputs={digests}")
    return " ".join(parts)


def write_tsv(path: str | Path, header: list[str], rows, provenance: str | None = None) -> None:
    lines = []
    if provenance:
        lines.append(provenance)
    lines.append("\t".join(header))
    for row in rows:
        lines.append("\t".join(str(c) for c in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_tsv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        cells = line.split("\t")
        if header is None:
            header = cells
        else:
            rows.append(cells)
    if header is None:
        raise ValueError(f"{path}: no header line found")
    return header, rows


def write_jsonl(path: str | Path, records, provenance: str | None = None) -> None:
    lines = []
    if provenance:
        lines.append(provenance)
    for rec in records:
        lines.append(json.dumps(rec, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{lineno}: malformed JSONL line: {exc}") from exc
    return records


def write_scores(path: str | Path, trials: list[TrialRecord], provenance: str | None = None) -> None:
    rows = [(t.model_id, t.test_id, t.label, f"{t.raw_score:.17g}") for t in trials]
    write_tsv(path, ["model_id", "test_id", "label", "raw_score"], rows, provenance)


def read_scores(path: str | Path) -> list[TrialRecord]:
    header, rows = read_tsv(path)
    expected = ["model_id", "test_id", "label", "raw_score"]
    if header != expected:
        raise ValueError(f"{path}: expected columns {expected}, got {header}")
    return [TrialRecord(m, t, lab, float(s)) for m, t, lab, s in rows]


def read_qmfs(path: str | Path) -> dict[str, dict[str, float]]:
    """QMF JSONL: one object per test utterance, keyed by test_id."""
    qmfs = {}
    for rec in read_jsonl(path):
        test_id = rec.pop("test_id")
        qmfs[test_id] = {k: float(v) for k, v in rec.items() if isinstance(v, (int, float))}
    return qmfs
