# app/synth/shapes.py
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.errors import BoundsError

SIN60 = math.sqrt(3.0) / 2.0


class ShapeKind(str, Enum):
    CIRCLE = "circle"
    TRIANGLE = "triangle"
    RECTANGLE = "rectangle"


@dataclass(frozen=True, slots=True)
class ShapeSpec:
    """
    Фигура с постоянной скоростью.

    center   — (x, y) центра в кадре 0, субпиксельно
    velocity — (dx, dy) пикселей за кадр, y вниз
    size     — радиус круга, радиус описанной окружности треугольника,
               половина стороны квадрата
    """

    kind: ShapeKind
    color: tuple[int, int, int]
    center: tuple[float, float]
    velocity: tuple[float, float]
    size: float

    def center_at(self, k: int) -> tuple[float, float]:
        return self.center[0] + k * self.velocity[0], self.center[1] + k * self.velocity[1]

    @property
    def speed(self) -> float:
        return math.hypot(*self.velocity)

    @property
    def is_static(self) -> bool:
        return self.velocity == (0.0, 0.0) or self.speed == 0.0

    def extent_at(self, k: int) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) в кадре k."""
        cx, cy = self.center_at(k)
        s = self.size
        if self.kind is ShapeKind.TRIANGLE:
            return cx - s * SIN60, cx + s * SIN60, cy - s, cy + s / 2.0
        return cx - s, cx + s, cy - s, cy + s

    def check_bounds(self, frames: int, height: int, width: int) -> None:
        for k in range(frames):
            xmin, xmax, ymin, ymax = self.extent_at(k)
            if xmin < 0 or ymin < 0 or xmax > width - 1 or ymax > height - 1:
                raise BoundsError(
                    f"{self.kind.value} leaves the {width}x{height} frame at frame {k}"
                )

    def mask_at(self, k: int, height: int, width: int) -> np.ndarray:
        """Жёсткая растеризация без сглаживания."""
        cx, cy = self.center_at(k)
        yy, xx = np.indices((height, width), dtype=np.float64)
        s = self.size
        if self.kind is ShapeKind.CIRCLE:
            return (xx - cx) ** 2 + (yy - cy) ** 2 <= s * s
        if self.kind is ShapeKind.RECTANGLE:
            return (np.abs(xx - cx) <= s) & (np.abs(yy - cy) <= s)

        # треугольник вершиной вверх; точка внутри, если знаки рёбер согласованы
        ax, ay = cx, cy - s
        bx, by = cx - s * SIN60, cy + s / 2.0
        qx, qy = cx + s * SIN60, cy + s / 2.0

        def edge(x1, y1, x2, y2):
            return (xx - x2) * (y1 - y2) - (x1 - x2) * (yy - y2)

        d1 = edge(ax, ay, bx, by)
        d2 = edge(bx, by, qx, qy)
        d3 = edge(qx, qy, ax, ay)
        has_neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
        has_pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
        return ~(has_neg & has_pos)


def velocity_from_angle(speed: float, angle_deg: float) -> tuple[float, float]:
    """Угол против часовой от +x при оси y вверх → (dx, dy) в координатах изображения."""
    rad = math.radians(angle_deg)
    return speed * math.cos(rad), -speed * math.sin(rad)
