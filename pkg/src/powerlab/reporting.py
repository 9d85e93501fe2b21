"""Machine-readable reports: CSV/JSON emission and run manifests.

Numbers print with 12 significant digits so audited constants round-trip;
row order is deterministic (insertion order of the producing module), and
identical runs emit byte-identical data files.  Each emitted file gets a
sidecar manifest recording the command line, configuration snapshot, code
version, input checksums and wall time; the manifest carries the volatile
fields so the data files stay reproducible.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

from . import __version__

__all__ = ["format_number", "rows_to_csv", "rows_to_json", "emit_report",
           "RunManifest", "write_manifest"]


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_number(row[h]) for h in header))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[dict]) -> str:
    if not rows:
        raise ValueError("no rows to emit")

    def norm(v):
        if isinstance(v, bool):
            return v
        if isinstance(v, float):
            return float(f"{v:.12g}")
        return v

    return json.dumps([{k: norm(v) for k, v in r.items()} for r in rows],
                      indent=1) + "\n"


def emit_report(rows: list[dict], path: str | None, fmt: str = "csv") -> str:
    """Render rows and optionally write them; returns the rendered text."""
    text = rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        write_manifest(path)
    return text


@dataclass
class RunManifest:
    command: str
    code_version: str
    data_checksums: dict[str, str]
    outputs: dict[str, str]
    wall_time: float
    config: dict = field(default_factory=dict)
    accuracy_flags: dict = field(default_factory=dict)

    @property
    def manifest_id(self) -> str:
        body = json.dumps(self.outputs, sort_keys=True)
        return hashlib.sha256(body.encode()).hexdigest()[:16]


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _data_checksums() -> dict[str, str]:
    out = {}
    data = resources.files("powerlab").joinpath("data")
    for entry in sorted(data.iterdir(), key=lambda e: e.name):
        if entry.is_file():
            out[entry.name] = hashlib.sha256(entry.read_bytes()).hexdigest()
    return out


def write_manifest(output_path: str, config: dict | None = None,
                   flags: dict | None = None) -> str:
    """Write <output>.manifest.json binding the file to one manifest id."""
    manifest = RunManifest(
        command=" ".join(sys.argv),
        code_version=__version__,
        data_checksums=_data_checksums(),
        outputs={output_path: _sha256_file(output_path)},
        wall_time=time.time(),
        config=config or {},
        accuracy_flags=flags or {},
    )
    path = output_path + ".manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"manifest_id": manifest.manifest_id,
                   "command": manifest.command,
                   "code_version": manifest.code_version,
                   "data_checksums": manifest.data_checksums,
                   "outputs": manifest.outputs,
                   "wall_time": manifest.wall_time,
                   "config": manifest.config,
                   "accuracy_flags": manifest.accuracy_flags}, fh, indent=1)
    return path
