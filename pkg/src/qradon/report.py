"""Structured run records with a strict ``key=value`` line grammar."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["RunReport", "parse_report"]

_KEY_RE = re.compile(r"^[A-Za-z0-9_.]+$")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


@dataclass
class RunReport:
    """Record of one pipeline run: parameters, seeds, timings, metrics, artifacts."""

    command: str
    parameters: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)

    def add_timing(self, stage: str, seconds: float) -> None:
        if seconds < 0:
            raise ValueError(f"timing for {stage!r} is negative")
        self.timings[stage] = seconds

    def to_text(self) -> str:
        lines = [f"command={self.command}"]
        for prefix, mapping in (
            ("param", self.parameters),
            ("seed", self.seeds),
            ("timing", self.timings),
            ("metric", self.metrics),
            ("artifact", self.artifacts),
        ):
            for key in sorted(mapping):
                full = f"{prefix}.{key}"
                if not _KEY_RE.match(full):
                    raise ValueError(f"invalid report key {full!r}")
                lines.append(f"{full}={_fmt(mapping[key])}")
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text())


def parse_report(text: str) -> dict[str, str]:
    """Parse the key=value grammar back into a flat dict; rejects bad lines."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep or not _KEY_RE.match(key):
            raise ValueError(f"line {lineno}: not a key=value record: {line!r}")
        out[key] = value
    return out
