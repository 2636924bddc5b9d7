"""Run manifests and JSON reports checked against the bundled schema."""

from __future__ import annotations

import json
import platform
from datetime import datetime, timezone
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from importlib.metadata import PackageNotFoundError, version

import jsonschema

SCHEMA_ID = "odd-ramsey-report/1"


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def manifest(command: str, parameters: dict, threads: int = 1, started: str | None = None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "tool_version": tool_version(),
        "python": platform.python_version(),
        "threads": threads,
        "started": started or now(),
        "finished": now(),
    }


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("oddramsey").joinpath("schemas/report-v1.json").read_text()
    return json.loads(text)


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_report(command: str, run_manifest: dict, result: dict, checks=None, timing=None) -> dict:
    report = {"schema": SCHEMA_ID, "command": command, "manifest": run_manifest, "result": result}
    if checks is not None:
        report["checks"] = checks
    if timing is not None:
        report["timing"] = timing
    # round-trip so the validated object is exactly what gets written
    report = json.loads(json.dumps(report, default=_plain))
    jsonschema.validate(report, schema())
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
