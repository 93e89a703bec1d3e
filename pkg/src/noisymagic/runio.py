"""Deterministic result persistence: CSV/JSON tables, run manifests, checksums.

Every CLI command resolves its configuration (defaults < JSON config file <
flags), writes data files whose bytes depend only on (config, seed), and
finishes with a manifest recording per-file SHA-256 checksums.  Timestamps
live only in the manifest, never in data files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

OUTPUT_DIR_ENV = "NOISYMAGIC_OUT"
MANIFEST_NAME = "manifest.json"


def tool_version() -> str:
    try:
        from importlib.metadata import version

        return version("noisymagic")
    except Exception:
        return "0.1.0"


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fmt_value(value) -> str:
    """Round-trip-exact text for floats; plain str for everything else."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path, header, rows, fmt: str = "csv") -> Path:
    """Write a table as RFC-4180 CSV or as a JSON array of row objects."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        path = path.with_suffix(".json")
        path.write_text(json.dumps(payload, indent=1), encoding="utf-8")
        return path
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_value(v) for v in row])
    return path


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    version: str = field(default_factory=tool_version)
    started: str = ""
    finished: str = ""
    outputs: list = field(default_factory=list)
    excluded_trajectories: int = 0

    def add_output(self, path) -> None:
        self.outputs.append({"path": str(Path(path).name), "sha256": sha256_file(path)})

    def write(self, out_dir) -> Path:
        payload = {
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "started": self.started,
            "finished": self.finished,
            "outputs": self.outputs,
            "excluded_trajectories": self.excluded_trajectories,
        }
        path = Path(out_dir) / MANIFEST_NAME
        path.write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")
        return path


def utc_stamp() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def resolve_out_dir(flag_value, command: str) -> Path:
    """Flag beats the environment override beats ./results/<command>."""
    if flag_value:
        base = Path(flag_value)
    elif os.environ.get(OUTPUT_DIR_ENV):
        base = Path(os.environ[OUTPUT_DIR_ENV]) / command
    else:
        base = Path("results") / command
    base.mkdir(parents=True, exist_ok=True)
    return base


def resolve_config(defaults: dict, config_file, flag_values: dict) -> dict:
    """Precedence: defaults < JSON config file < explicit command-line flags.

    flag_values entries equal to None mean "not given on the command line".
    """
    merged = dict(defaults)
    if config_file:
        loaded = json.loads(Path(config_file).read_text(encoding="utf-8"))
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        merged.update(loaded)
    for key, value in flag_values.items():
        if value is not None:
            merged[key] = value
    return merged
