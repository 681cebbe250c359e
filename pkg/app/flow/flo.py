# app/flow/flo.py
"""Формат .flo (Middlebury, «PIEH»): magic float, width, height, пары (u, v) float32."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from app.errors import FormatError, InputIOError, TruncationError
from app.flow.field import FlowField

FLO_MAGIC = 202021.25


def write_flo(flow: FlowField, path: str | Path) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    data = np.stack([flow.u, flow.v], axis=-1).astype("<f4")
    with out.open("wb") as fh:
        np.array([FLO_MAGIC], dtype="<f4").tofile(fh)
        np.array([flow.width, flow.height], dtype="<i4").tofile(fh)
        data.tofile(fh)
    return out


def read_flo(path: str | Path) -> FlowField:
    src = Path(path)
    try:
        raw = src.read_bytes()
    except OSError as e:
        raise InputIOError(str(src), e.strerror or str(e)) from e

    if len(raw) < 12:
        raise FormatError(f"{src.name}: too short for a .flo header")
    magic = np.frombuffer(raw, dtype="<f4", count=1)[0]
    if magic != np.float32(FLO_MAGIC):
        raise FormatError(f"{src.name}: bad .flo magic {magic!r}")
    width, height = (int(x) for x in np.frombuffer(raw, dtype="<i4", count=2, offset=4))
    if width < 1 or height < 1:
        raise FormatError(f"{src.name}: bad .flo dimensions {width}x{height}")

    expected = 2 * width * height * 4
    payload = raw[12:12 + expected]
    if len(payload) < expected:
        raise TruncationError(0, expected, len(payload))
    data = np.frombuffer(payload, dtype="<f4").reshape(height, width, 2)
    return FlowField(data[..., 0].astype(np.float64), data[..., 1].astype(np.float64))


def load_flow_dir(directory: str | Path) -> list[FlowField]:
    """Все *.flo каталога в лексикографическом порядке."""
    root = Path(directory)
    paths = sorted(p for p in root.glob("*.flo") if p.is_file())
    return [read_flo(p) for p in paths]
