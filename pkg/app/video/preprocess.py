# app/video/preprocess.py
"""Геометрия входа: ресайз, нарезка на клипы, кроп, отражение, яркость."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from app.errors import RangeError
from app.video.frames import Clip, Frame, GrayFrame

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)


def _axis_weights(src: int, dst: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # центры пикселей: src = (dst + 0.5) * src/dst - 0.5, затем прижатие к [0, src-1]
    pos = (np.arange(dst, dtype=np.float64) + 0.5) * (src / dst) - 0.5
    pos = np.clip(pos, 0.0, src - 1.0)
    lo = np.floor(pos).astype(np.intp)
    hi = np.minimum(lo + 1, src - 1)
    return lo, hi, pos - lo


def resize_plane(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    """Билинейный ресайз (H, W) или (H, W, C) массива в float64."""
    src = plane.astype(np.float64, copy=False)
    y0, y1, wy = _axis_weights(src.shape[0], height)
    x0, x1, wx = _axis_weights(src.shape[1], width)

    extra = (slice(None),) + (None,) * (src.ndim - 2)
    wx = wx[extra]
    wy = wy[(slice(None), None) + (None,) * (src.ndim - 2)]

    top = (1.0 - wx) * src[y0][:, x0] + wx * src[y0][:, x1]
    bottom = (1.0 - wx) * src[y1][:, x0] + wx * src[y1][:, x1]
    return (1.0 - wy) * top + wy * bottom


def resize_bilinear(frame: Frame, height: int, width: int) -> Frame:
    if height < 2 or width < 2:
        raise RangeError(f"resize target must be at least 2x2, got {width}x{height}")
    if (height, width) == (frame.height, frame.width):
        return frame
    out = resize_plane(frame.pixels, height, width)
    return Frame(np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8))


def extract_clips(frames: Sequence[Frame], clip_len: int = 16, stride: int = 16) -> list[Clip]:
    """Клипы со смещениями 0, stride, 2·stride, …; неполный хвост отбрасывается."""
    if clip_len < 2:
        raise RangeError(f"clip length must be >= 2, got {clip_len}")
    if stride < 1:
        raise RangeError(f"stride must be >= 1, got {stride}")
    return [
        Clip(tuple(frames[start:start + clip_len]), start=start)
        for start in range(0, len(frames) - clip_len + 1, stride)
    ]


def center_crop_window(height: int, width: int, crop_height: int, crop_width: int) -> tuple[int, int]:
    """(top, left) центрального окна."""
    if crop_height > height or crop_width > width:
        raise RangeError(f"crop {crop_width}x{crop_height} exceeds frame {width}x{height}")
    return (height - crop_height) // 2, (width - crop_width) // 2


def crop(clip: Clip, top: int, left: int, crop_height: int, crop_width: int) -> Clip:
    if top < 0 or left < 0 or crop_height < 1 or crop_width < 1:
        raise RangeError(f"bad crop window top={top} left={left} {crop_width}x{crop_height}")
    if top + crop_height > clip.height or left + crop_width > clip.width:
        raise RangeError(
            f"crop window top={top} left={left} {crop_width}x{crop_height} "
            f"exceeds frame {clip.width}x{clip.height}"
        )
    if (top, left, crop_height, crop_width) == (0, 0, clip.height, clip.width):
        return clip
    return Clip(
        tuple(Frame(f.pixels[top:top + crop_height, left:left + crop_width]) for f in clip.frames),
        start=clip.start,
    )


def horizontal_flip(clip: Clip) -> Clip:
    return Clip(tuple(Frame(f.pixels[:, ::-1]) for f in clip.frames), start=clip.start)


def to_grayscale(frame: Frame) -> GrayFrame:
    return GrayFrame(frame.pixels.astype(np.float64) @ LUMA_WEIGHTS / 255.0)
