"""Delimited serialization shared by the transform tables.

Format: one header line ``n,<n>`` followed by one CSV row per slope index
(k, or theta for the interpolation transform), intercepts l across columns.
Values are written with 17 significant digits and round-trip exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DimensionError, ParseError


def write_table(path, n: int, values: np.ndarray) -> None:
    path = Path(path)
    with open(path, "w") as fh:
        fh.write(f"n,{n}\n")
        for row in values:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_table(path) -> tuple[int, np.ndarray]:
    path = Path(path)
    with open(path, "r") as fh:
        header = fh.readline().strip()
        parts = header.split(",")
        if len(parts) != 2 or parts[0] != "n":
            raise ParseError(f"{path}: line 1: expected header 'n,<n>', got {header!r}")
        try:
            n = int(parts[1])
        except ValueError:
            raise ParseError(f"{path}: line 1: non-integer size {parts[1]!r}") from None
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DimensionError(f"{path}: ragged rows with lengths {sorted(widths)}")
    return n, np.array(rows, dtype=float)
