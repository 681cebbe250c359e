# app/pipeline/export.py
"""JSON Lines (канонический формат) и CSV с фиксированным порядком столбцов."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import IO, Iterable

from app.errors import FormatError, InputIOError, RangeError
from app.models import LabelSubset
from app.pipeline.records import LabelRecord, all_label_names, subset_names

CSV_PREFIX = ("clip_id", "source", "frame_start", "frame_end")


def record_line(record: LabelRecord) -> str:
    return json.dumps(record.to_dict(), ensure_ascii=False)


def write_jsonl(records: Iterable[LabelRecord], path: str | Path) -> int:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record_line(record) + "\n")
            count += 1
    return count


class JsonlWriter:
    """Построчная запись по мере готовности записей."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh: IO[str] | None = None
        self.count = 0

    def __enter__(self) -> "JsonlWriter":
        self._fh = self.path.open("w", encoding="utf-8", newline="\n")
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def write(self, record: LabelRecord) -> None:
        if self._fh is None:
            raise RuntimeError("JsonlWriter is not open")
        self._fh.write(record_line(record) + "\n")
        self.count += 1


def read_jsonl(path: str | Path) -> list[LabelRecord]:
    src = Path(path)
    try:
        lines = src.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InputIOError(str(src), e.strerror or str(e)) from e
    records = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(LabelRecord.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as e:
            raise FormatError(f"{src.name}:{n}: bad label record: {e}") from e
    return records


def read_record_line(path: str | Path, line_number: int) -> dict:
    """Запись по номеру строки (с 1)."""
    src = Path(path)
    if line_number < 1:
        raise RangeError(f"line numbers start at 1, got {line_number}")
    try:
        with src.open(encoding="utf-8") as fh:
            for n, line in enumerate(fh, start=1):
                if n == line_number:
                    return json.loads(line)
    except OSError as e:
        raise InputIOError(str(src), e.strerror or str(e)) from e
    except ValueError as e:
        raise FormatError(f"{src.name}:{line_number}: {e}") from e
    raise RangeError(f"{src.name} has fewer than {line_number} lines")


def csv_columns(subset: LabelSubset = LabelSubset.ALL) -> tuple[str, ...]:
    return CSV_PREFIX + subset_names(subset)


def write_csv(
    records: Iterable[LabelRecord],
    path: str | Path,
    subset: LabelSubset = LabelSubset.ALL,
    normalize: bool = False,
) -> int:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    names = subset_names(subset)
    count = 0
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_columns(subset))
        for record in records:
            values = record.normalized() if normalize else record.values()
            by_name = dict(zip(all_label_names(), values))
            writer.writerow(
                [record.clip_id, record.source, *record.frame_range, *(by_name[n] for n in names)]
            )
            count += 1
    return count
