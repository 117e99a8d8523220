"""Sample file formats.

CSV: header ``value,count`` then one category per row.
JSON: ``{"values": [...], "counts": [...]}``.

Unsorted and repeated values are accepted; they are normalized on read.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .bounds import CategorizedSample, normalize_sample


class SampleParseError(ValueError):
    """Malformed sample file; the message names the offending line or field."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_csv(text: str) -> tuple[list[float], list[int]]:
    reader = csv.reader(io.StringIO(text))
    header = None
    values: list[float] = []
    counts: list[int] = []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if header is None:
            header = [c.lower() for c in cells]
            if header != ["value", "count"]:
                raise SampleParseError(
                    f"line {lineno}: expected header 'value,count', got {','.join(cells)!r}"
                )
            continue
        if len(cells) != 2:
            raise SampleParseError(f"line {lineno}: expected 2 fields, got {len(cells)}")
        try:
            v = float(cells[0])
        except ValueError:
            raise SampleParseError(f"line {lineno}, field 'value': not a number: {cells[0]!r}") from None
        if not math.isfinite(v):
            raise SampleParseError(f"line {lineno}, field 'value': must be finite")
        try:
            k = int(cells[1])
        except ValueError:
            raise SampleParseError(f"line {lineno}, field 'count': not an integer: {cells[1]!r}") from None
        if k < 0:
            raise SampleParseError(f"line {lineno}, field 'count': must be nonnegative")
        values.append(v)
        counts.append(k)
    if header is None:
        raise SampleParseError("line 1: empty input, expected header 'value,count'")
    if not values:
        raise SampleParseError("no data rows after header")
    return values, counts


def parse_json(text: str) -> tuple[list[float], list[int]]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SampleParseError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise SampleParseError("JSON input must be an object with 'values' and 'counts'")
    for key in ("values", "counts"):
        if key not in obj:
            raise SampleParseError(f"field {key!r}: missing")
        if not isinstance(obj[key], list):
            raise SampleParseError(f"field {key!r}: must be a list")
    values, counts = obj["values"], obj["counts"]
    if len(values) != len(counts):
        raise SampleParseError("fields 'values' and 'counts' differ in length")
    out_v, out_k = [], []
    for i, (v, k) in enumerate(zip(values, counts)):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SampleParseError(f"field 'values'[{i}]: not a finite number: {v!r}")
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise SampleParseError(f"field 'counts'[{i}]: not a nonnegative integer: {k!r}")
        out_v.append(float(v))
        out_k.append(k)
    return out_v, out_k


def read_sample(path) -> CategorizedSample:
    """Read and normalize a CSV or JSON sample file.

    Raises :class:`SampleParseError` for malformed content and ``OSError``
    when the file cannot be read.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        values, counts = parse_json(text)
    else:
        values, counts = parse_csv(text)
    try:
        return normalize_sample(counts, values)
    except ValueError as exc:
        raise SampleParseError(str(exc)) from None


def write_sample_csv(path, sample: CategorizedSample) -> None:
    lines = ["value,count"]
    lines += [f"{fmt(v)},{int(k)}" for v, k in zip(sample.values, sample.counts)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_sample_json(path, sample: CategorizedSample) -> None:
    obj = {"values": [float(v) for v in sample.values], "counts": [int(k) for k in sample.counts]}
    Path(path).write_text(json.dumps(obj) + "\n", encoding="utf-8")
