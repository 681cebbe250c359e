# app/stats/partition.py
"""
Шаблоны разбиения кадра на области.

Grid4x4 — блоки 4x4 построчно; Rings4 — вложенные прямоугольные кольца
с одинаковым шагом (0 — внешнее); Wedges8 — 8 секторов, заданных
центральными линиями и диагоналями кадра, нумерация против часовой
стрелки (ось y вверх) от положительной полуоси x.
Пиксель на границе секторов относится к меньшему индексу.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from app.errors import GeometryError, RangeError
from app.models import PatternId

MIN_SIDE = 8


@dataclass(frozen=True, slots=True)
class RegionMap:
    pattern: PatternId
    labels: np.ndarray  # (H, W) int64, только для чтения
    region_count: int

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.region_count)


def _grid4x4(h: int, w: int) -> np.ndarray:
    yy, xx = np.indices((h, w))
    return 4 * ((4 * yy) // h) + (4 * xx) // w


def _rings4(h: int, w: int) -> np.ndarray:
    gap = min(h, w) // 8
    if gap == 0:
        raise GeometryError(f"frame {w}x{h} too small for rings pattern")
    yy, xx = np.indices((h, w))
    depth = np.minimum(np.minimum(xx, yy), np.minimum(w - 1 - xx, h - 1 - yy))
    return np.minimum(depth // gap, 3)


def _wedges8(h: int, w: int) -> np.ndarray:
    a, b = w - 1, h - 1
    yy, xx = np.indices((h, w))
    # удвоенные координаты относительно центра, ось y вверх: всё в целых
    x = 2 * xx - a
    y = b - 2 * yy

    cross_d1 = a * y - b * x     # > 0: против часовой от направления (a, b)
    cross_d2 = -a * y - b * x    # > 0: против часовой от (-a, b)
    cross_d3 = -a * y + b * x    # > 0: против часовой от (-a, -b)
    cross_d4 = a * y + b * x     # > 0: против часовой от (a, -b)

    conditions = [
        (x == 0) & (y == 0),
        (y >= 0) & (x > 0) & (cross_d1 <= 0),
        (y > 0) & (x >= 0) & (cross_d1 > 0),
        (y > 0) & (x < 0) & (cross_d2 <= 0),
        (y >= 0) & (x < 0) & (cross_d2 > 0),
        (y < 0) & (x < 0) & (cross_d3 <= 0),
        (y < 0) & (x <= 0) & (cross_d3 > 0),
        (y < 0) & (x > 0) & (cross_d4 <= 0),
        (y < 0) & (x > 0) & (cross_d4 > 0),
    ]
    choices = [0, 0, 1, 2, 3, 4, 5, 6, 7]
    return np.select(conditions, choices, default=-1)


_BUILDERS = {
    PatternId.GRID4X4: _grid4x4,
    PatternId.RINGS4: _rings4,
    PatternId.WEDGES8: _wedges8,
}


@lru_cache(maxsize=64)
def region_map(pattern: PatternId, height: int, width: int) -> RegionMap:
    """Карта областей; кешируется по (pattern, H, W)."""
    pattern = PatternId(pattern)
    if height < MIN_SIDE or width < MIN_SIDE:
        raise GeometryError(f"frame {width}x{height} is below the {MIN_SIDE}x{MIN_SIDE} minimum")
    labels = _BUILDERS[pattern](height, width).astype(np.int64)
    labels.flags.writeable = False
    return RegionMap(pattern=pattern, labels=labels, region_count=pattern.region_count)


def region_pixels(rmap: RegionMap, index: int) -> np.ndarray:
    """Плоские индексы (y·W + x) пикселей области."""
    if not 0 <= index < rmap.region_count:
        raise RangeError(f"region {index} outside [0, {rmap.region_count})")
    return np.flatnonzero(rmap.labels.ravel() == index)


def all_region_maps(height: int, width: int) -> tuple[RegionMap, RegionMap, RegionMap]:
    return tuple(region_map(p, height, width) for p in PatternId)  # type: ignore[return-value]
