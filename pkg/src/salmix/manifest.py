"""Per-sample augmentation records, one JSON object per line.

A manifest is sufficient to replay or audit a run: every field of every
augmentation decision is serialized at full precision (floats round-trip
exactly) and records are ordered by sample index with no gaps.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ManifestParseError, NumericDomainError
from .mixer import PatchRect

# Serialized field order is part of the format.
_FIELDS = (
    "index",
    "source_id",
    "target_id",
    "lambda_raw",
    "lambda_eff",
    "src_rect",
    "tgt_rect",
    "scheme",
    "method",
    "seed",
)


@dataclass(frozen=True)
class ManifestRecord:
    index: int
    source_id: str
    target_id: str
    lambda_raw: float
    lambda_eff: float
    src_rect: PatchRect
    tgt_rect: PatchRect
    scheme: str
    method: str
    seed: int

    def validate(self) -> None:
        for name in ("lambda_raw", "lambda_eff"):
            value = getattr(self, name)
            if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                raise NumericDomainError(f"{name} = {value!r} is not a valid ratio")


def _rect_to_obj(rect: PatchRect) -> dict:
    return {"x": rect.x, "y": rect.y, "w": rect.w, "h": rect.h}


def _rect_from_obj(obj) -> PatchRect:
    return PatchRect(int(obj["x"]), int(obj["y"]), int(obj["w"]), int(obj["h"]))


def record_to_line(record: ManifestRecord) -> str:
    record.validate()
    payload = {
        "index": record.index,
        "source_id": record.source_id,
        "target_id": record.target_id,
        "lambda_raw": record.lambda_raw,
        "lambda_eff": record.lambda_eff,
        "src_rect": _rect_to_obj(record.src_rect),
        "tgt_rect": _rect_to_obj(record.tgt_rect),
        "scheme": record.scheme,
        "method": record.method,
        "seed": record.seed,
    }
    return json.dumps(payload, allow_nan=False)


def record_from_line(line: str, line_number: int) -> ManifestRecord:
    try:
        obj = json.loads(line)
        if not isinstance(obj, dict):
            raise ValueError("record is not an object")
        missing = [name for name in _FIELDS if name not in obj]
        if missing:
            raise ValueError(f"missing fields {missing}")
        return ManifestRecord(
            index=int(obj["index"]),
            source_id=str(obj["source_id"]),
            target_id=str(obj["target_id"]),
            lambda_raw=float(obj["lambda_raw"]),
            lambda_eff=float(obj["lambda_eff"]),
            src_rect=_rect_from_obj(obj["src_rect"]),
            tgt_rect=_rect_from_obj(obj["tgt_rect"]),
            scheme=str(obj["scheme"]),
            method=str(obj["method"]),
            seed=int(obj["seed"]),
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise ManifestParseError(line_number, str(exc)) from None


class ManifestWriter:
    """Writes records to a stream in index order starting at 0.

    Records may arrive out of order; they are buffered until their index is
    next. close() fails if a gap remains.
    """

    def __init__(self, stream: IO[str]):
        self._stream = stream
        self._pending: dict[int, ManifestRecord] = {}
        self._next = 0

    def add(self, record: ManifestRecord) -> None:
        if record.index < self._next or record.index in self._pending:
            raise ValueError(f"duplicate manifest index {record.index}")
        self._pending[record.index] = record
        while self._next in self._pending:
            rec = self._pending.pop(self._next)
            self._stream.write(record_to_line(rec) + "\n")
            self._next += 1

    def close(self) -> None:
        if self._pending:
            missing = min(self._pending)
            raise ValueError(
                f"manifest has a gap: index {self._next} missing before {missing}"
            )


def write_manifest(records: Iterable[ManifestRecord], path: str) -> None:
    """Write records as one JSON line each, sorted by index; empty input
    produces an empty file."""
    ordered = sorted(records, key=lambda r: r.index)
    lines = [record_to_line(r) for r in ordered]
    indices = [r.index for r in ordered]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate indices in manifest records")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("".join(line + "\n" for line in lines))
    os.replace(tmp, path)


def read_manifest(path: str) -> list[ManifestRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            records.append(record_from_line(line, line_no))
    return records
