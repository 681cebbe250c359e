# app/flow/pyramid.py
"""Пирамида, билинейный варпинг и производные для решателя."""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from app.errors import DimensionMismatchError, RangeError
from app.flow.field import FlowField
from app.video.frames import GrayFrame
from app.video.preprocess import resize_plane

# [1, -8, 0, 8, -1] / 12
FIVE_POINT = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def pyramid_sigma(factor: float) -> float:
    return 0.6 * math.sqrt(1.0 / (factor * factor) - 1.0)


def _scaled(size: int, factor: float) -> int:
    return int(math.floor(size * factor + 0.5))


def pyramid_plane_levels(plane: np.ndarray, factor: float, min_size: int) -> list[np.ndarray]:
    if not 0.0 < factor < 1.0:
        raise RangeError(f"pyramid factor must be in (0, 1), got {factor}")
    sigma = pyramid_sigma(factor)
    levels = [np.asarray(plane, dtype=np.float64)]
    while True:
        prev = levels[-1]
        h, w = _scaled(prev.shape[0], factor), _scaled(prev.shape[1], factor)
        if h < min_size or w < min_size or h < 2 or w < 2:
            break
        smoothed = ndimage.gaussian_filter(prev, sigma=sigma, mode="nearest")
        levels.append(resize_plane(smoothed, h, w))
    return levels


def gaussian_pyramid(image: GrayFrame, factor: float, min_size: int) -> list[GrayFrame]:
    """Уровень 0 — вход; дальше сглаживание и билинейное уменьшение в factor раз."""
    if image.height < min_size or image.width < min_size:
        return [image]
    return [GrayFrame(p) for p in pyramid_plane_levels(image.luma, factor, min_size)]


def warp_plane(plane: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """out(x, y) = plane(x + u, y + v); выход за край прижимается к границе."""
    h, w = plane.shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    coords = np.stack([yy + v, xx + u])
    return ndimage.map_coordinates(plane, coords, order=1, mode="nearest")


def warp_bilinear(image: GrayFrame, flow: FlowField) -> GrayFrame:
    if image.luma.shape != flow.shape:
        raise DimensionMismatchError(
            f"image {image.width}x{image.height} vs flow {flow.width}x{flow.height}"
        )
    return GrayFrame(warp_plane(image.luma, flow.u, flow.v))


def dx(plane: np.ndarray) -> np.ndarray:
    return ndimage.correlate1d(plane, FIVE_POINT, axis=1, mode="nearest")


def dy(plane: np.ndarray) -> np.ndarray:
    return ndimage.correlate1d(plane, FIVE_POINT, axis=0, mode="nearest")


def upsample_flow(u: np.ndarray, v: np.ndarray, height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Перенос потока на более мелкий уровень с масштабированием значений."""
    sy = height / u.shape[0]
    sx = width / u.shape[1]
    return resize_plane(u, height, width) * sx, resize_plane(v, height, width) * sy
