# app/video/frames.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.errors import DimensionMismatchError, RangeError


@dataclass(frozen=True, slots=True)
class Frame:
    """RGB-кадр: массив (H, W, 3) uint8, только для чтения."""

    pixels: np.ndarray

    def __post_init__(self):
        px = self.pixels
        if px.ndim != 3 or px.shape[2] != 3:
            raise DimensionMismatchError(f"frame must be HxWx3, got shape {px.shape}")
        if px.shape[0] < 2 or px.shape[1] < 2:
            raise RangeError(f"frame must be at least 2x2, got {px.shape[1]}x{px.shape[0]}")
        arr = np.ascontiguousarray(px, dtype=np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @classmethod
    def filled(cls, height: int, width: int, rgb: tuple[int, int, int]) -> "Frame":
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[...] = rgb
        return cls(px)


@dataclass(frozen=True, slots=True)
class GrayFrame:
    """Яркость в [0, 1], массив (H, W) float64."""

    luma: np.ndarray

    def __post_init__(self):
        if self.luma.ndim != 2:
            raise DimensionMismatchError(f"gray frame must be 2-D, got shape {self.luma.shape}")
        arr = np.ascontiguousarray(self.luma, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "luma", arr)

    @property
    def height(self) -> int:
        return self.luma.shape[0]

    @property
    def width(self) -> int:
        return self.luma.shape[1]


@dataclass(frozen=True, slots=True)
class Clip:
    frames: tuple[Frame, ...]
    start: int = 0

    def __post_init__(self):
        frames = tuple(self.frames)
        if len(frames) < 2:
            raise RangeError(f"clip needs at least 2 frames, got {len(frames)}")
        shape = frames[0].pixels.shape
        for i, f in enumerate(frames):
            if f.pixels.shape != shape:
                raise DimensionMismatchError(
                    f"frame {i} is {f.width}x{f.height}, expected {shape[1]}x{shape[0]}"
                )
        object.__setattr__(self, "frames", frames)

    @classmethod
    def from_array(cls, stack: np.ndarray, start: int = 0) -> "Clip":
        """(N, H, W, 3) uint8 → Clip."""
        return cls(tuple(Frame(f) for f in stack), start=start)

    @property
    def count(self) -> int:
        return len(self.frames)

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def width(self) -> int:
        return self.frames[0].width

    def stack(self) -> np.ndarray:
        return np.stack([f.pixels for f in self.frames])


def ensure_same_size(frames: Sequence[Frame], names: Sequence[str] | None = None) -> None:
    if not frames:
        return
    first = frames[0]
    for i, f in enumerate(frames[1:], start=1):
        if f.pixels.shape != first.pixels.shape:
            label = names[i] if names else f"frame {i}"
            raise DimensionMismatchError(
                f"{label} is {f.width}x{f.height}, expected {first.width}x{first.height}"
            )
