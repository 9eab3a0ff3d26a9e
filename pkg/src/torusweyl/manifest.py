"""Run manifests and bit-stable CSV output.

Floats are written with Python's repr, the shortest decimal string that
parses back to the same IEEE double, so re-running an experiment with the
parameters recorded in its manifest reproduces every CSV byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["RunManifest", "write_csv", "sha256_file",
           "write_run_manifest", "load_manifest"]


@dataclass
class RunManifest:
    tool_version: str
    subcommand: str
    params: dict
    wall_time_s: float
    outputs: list[dict] = field(default_factory=list)


def _fmt(v) -> str:
    # bool is an int subclass; keep it readable
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    """Write rows with round-trip float formatting and '\\n' line endings."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def write_run_manifest(prefix, subcommand: str, params: dict, outputs,
                       wall_time_s: float, tool_version: str) -> Path:
    """One manifest JSON per run: the full resolved parameter record plus
    digests of every output file."""
    manifest = RunManifest(
        tool_version=tool_version,
        subcommand=subcommand,
        params=params,
        wall_time_s=wall_time_s,
        outputs=[{"path": str(Path(p).name), "sha256": sha256_file(p)} for p in outputs],
    )
    path = Path(f"{prefix}.manifest.json")
    path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")
    return path


def load_manifest(path) -> RunManifest:
    doc = json.loads(Path(path).read_text())
    return RunManifest(**doc)
