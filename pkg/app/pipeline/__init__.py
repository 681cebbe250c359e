"""Сквозной конвейер: источники → клипы → метки → экспорт."""

from app.pipeline.export import JsonlWriter, read_jsonl, write_csv, write_jsonl
from app.pipeline.extract import ExtractionResult, label_clip, prepare_clip, run_extraction
from app.pipeline.records import LabelRecord, denormalize_labels, label_names, normalize_labels

__all__ = [
    "ExtractionResult",
    "JsonlWriter",
    "LabelRecord",
    "denormalize_labels",
    "label_clip",
    "label_names",
    "normalize_labels",
    "prepare_clip",
    "read_jsonl",
    "run_extraction",
    "write_csv",
    "write_jsonl",
]
