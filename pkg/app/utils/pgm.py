# app/utils/pgm.py
"""Отладочные PGM (P5, 8 бит)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image


def rescale_to_u8(values: np.ndarray) -> np.ndarray:
    """Линейно в 0..255; постоянный массив даёт нули."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    if hi <= lo:
        return np.zeros(v.shape, dtype=np.uint8)
    return np.floor((v - lo) * (255.0 / (hi - lo)) + 0.5).astype(np.uint8)


def write_pgm(path: str | Path, gray: np.ndarray) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(gray, dtype=np.uint8)).save(out, format="PPM")
    return out


def read_pgm(path: str | Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.uint8)
