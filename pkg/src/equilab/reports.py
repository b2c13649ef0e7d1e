"""Report serialization and run manifests."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if type(obj).__module__.startswith("mpmath"):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_default, ensure_ascii=False) + "\n"


def csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def flat_rows(report: dict) -> list[list]:
    """key,value rows for the scalar entries of a report."""
    rows = [["key", "value"]]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, (list, tuple)) and any(isinstance(v, (dict, list)) for v in obj):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            rows.append([prefix, json.dumps(obj, default=_default) if isinstance(obj, (list, tuple)) else obj])

    walk("", json.loads(dumps(report)))
    return rows


@dataclass
class RunManifest:
    subcommand: str
    argv: list[str]
    parameters: dict
    outputs: list[str]
    wall_time_s: float
    exit_code: int
    version: str = __version__
    started: str = field(default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%S%z"))

    def to_json(self) -> dict:
        return {
            "subcommand": self.subcommand, "argv": self.argv, "parameters": self.parameters,
            "outputs": self.outputs, "wall_time_s": self.wall_time_s, "exit_code": self.exit_code,
            "version": self.version, "started": self.started,
        }

    def write(self, report_path: Path) -> Path:
        path = manifest_path(report_path)
        path.write_text(dumps(self.to_json()), encoding="utf-8")
        return path


def manifest_path(report_path: Path) -> Path:
    return report_path.with_name(report_path.name + ".manifest.json")


def load_manifest(path: Path) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "argv" not in data or "subcommand" not in data:
        raise ValueError(f"{path}: not a run manifest")
    return data
