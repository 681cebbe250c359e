# app/video/images.py
"""Последовательности кадров PPM/PNG и сырой RGB24 с текстовым заголовком."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from app.errors import EmptyInputError, FormatError, InputIOError, TruncationError
from app.video.frames import Frame, ensure_same_size

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".ppm", ".png")


def read_image(path: Path) -> Frame:
    try:
        with Image.open(path) as img:
            if img.mode not in ("RGB", "RGBA", "L", "P", "LA"):
                raise FormatError(f"{path.name}: unsupported image mode {img.mode}")
            rgb = img.convert("RGB")
            return Frame(np.asarray(rgb, dtype=np.uint8))
    except (OSError, UnidentifiedImageError) as e:
        raise InputIOError(str(path), str(e)) from e


def load_frame_sequence(directory: str | Path) -> list[Frame]:
    """Кадры каталога в лексикографическом порядке имён (имена с ведущими нулями)."""
    root = Path(directory)
    if not root.is_dir():
        raise InputIOError(str(root), "not a directory")

    paths = sorted(
        (p for p in root.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.name,
    )
    if not paths:
        raise EmptyInputError(f"{root}: no PPM/PNG frames found")

    frames = [read_image(p) for p in paths]
    ensure_same_size(frames, [p.name for p in paths])
    logger.debug("🖼️ %s: загружено %d кадров", root, len(frames))
    return frames


def save_frame_sequence(frames: Sequence[Frame], directory: str | Path) -> list[Path]:
    """Записать кадры как 000.ppm, 001.ppm, … (P6, maxval 255)."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    digits = max(3, len(str(len(frames) - 1)))
    written = []
    for i, frame in enumerate(frames):
        path = root / f"{i:0{digits}d}.ppm"
        Image.fromarray(frame.pixels).save(path, format="PPM")
        written.append(path)
    return written


# ═══════════════════════════════════════════════════════════
# Сырой RGB24
# ═══════════════════════════════════════════════════════════

def sidecar_path(raw_path: Path) -> Path:
    return raw_path.with_name(raw_path.name + ".txt")


def _parse_sidecar(path: Path) -> dict[str, int]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputIOError(str(path), e.strerror or str(e)) from e

    values: dict[str, int] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"{path.name}: bad sidecar line {line!r}")
        try:
            values[key.strip().lower()] = int(value.strip())
        except ValueError as e:
            raise FormatError(f"{path.name}: non-integer value in {line!r}") from e

    missing = {"width", "height", "frames"} - values.keys()
    if missing:
        raise FormatError(f"{path.name}: sidecar misses {', '.join(sorted(missing))}")
    return values


def read_raw_rgb(path: str | Path) -> list[Frame]:
    raw = Path(path)
    meta = _parse_sidecar(sidecar_path(raw))
    width, height, count = meta["width"], meta["height"], meta["frames"]
    if width < 2 or height < 2:
        raise FormatError(f"{raw.name}: bad dimensions {width}x{height}")
    if count < 1:
        raise EmptyInputError(f"{raw.name}: sidecar declares no frames")

    try:
        data = raw.read_bytes()
    except OSError as e:
        raise InputIOError(str(raw), e.strerror or str(e)) from e

    size = width * height * 3
    frames = []
    for i in range(count):
        chunk = data[i * size:(i + 1) * size]
        if len(chunk) < size:
            raise TruncationError(i, size, len(chunk))
        frames.append(Frame(np.frombuffer(chunk, dtype=np.uint8).reshape(height, width, 3)))
    return frames


def write_raw_rgb(frames: Sequence[Frame], path: str | Path) -> Path:
    raw = Path(path)
    raw.parent.mkdir(parents=True, exist_ok=True)
    ensure_same_size(frames)
    with raw.open("wb") as fh:
        for frame in frames:
            fh.write(frame.pixels.tobytes())
    first = frames[0]
    sidecar_path(raw).write_text(
        f"width={first.width}\nheight={first.height}\nframes={len(frames)}\n",
        encoding="utf-8",
    )
    return raw
