"""Deterministic CSV/JSON emission helpers.

CSV files carry a header row and 17-significant-digit decimal floats, so
identical inputs always produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from typing import Iterable


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def csv_lines(header: Iterable[str], rows: Iterable[Iterable[float]]) -> list[str]:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return lines


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(csv_lines(header, rows)) + "\n")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_json(obj) + "\n")
