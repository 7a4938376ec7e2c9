"""Deterministic CSV tables.

Floats are written with 17 significant digits so that a value survives a
round trip and identical runs give byte-identical files.
"""
from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


@dataclass
class CsvTable:
    header: tuple[str, ...]
    rows: list[tuple]

    def lines(self):
        yield ",".join(self.header)
        for row in self.rows:
            if len(row) != len(self.header):
                raise DomainError(f"row {row!r} does not match header {self.header}")
            yield ",".join(format_value(v) for v in row)

    def write(self, path):
        """Write atomically: the target appears only once fully written."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                for line in self.lines():
                    fh.write(line + "\n")
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def read_columns(path, ncols=2):
    """Read a numeric CSV with an optional header row into column lists."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"input file not found: {path}")
    cols = [[] for _ in range(ncols)]
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < ncols:
                raise DomainError(f"{path}:{lineno}: expected {ncols} columns")
            try:
                vals = [float(c) for c in row[:ncols]]
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise DomainError(f"{path}:{lineno}: non-numeric value") from None
            for c, v in zip(cols, vals):
                c.append(v)
    return cols
