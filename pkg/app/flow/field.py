# app/flow/field.py
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from app.errors import DimensionMismatchError


@dataclass(frozen=True, slots=True)
class FlowField:
    """Смещения (u вправо, v вниз) в пикселях, массивы (H, W) float64."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.float64)
        v = np.ascontiguousarray(self.v, dtype=np.float64)
        if u.ndim != 2 or u.shape != v.shape:
            raise DimensionMismatchError(f"flow components differ: {u.shape} vs {v.shape}")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def height(self) -> int:
        return self.u.shape[0]

    @property
    def width(self) -> int:
        return self.u.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    @classmethod
    def constant(cls, height: int, width: int, du: float, dv: float) -> "FlowField":
        return cls(np.full((height, width), float(du)), np.full((height, width), float(dv)))

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.u).all() and np.isfinite(self.v).all())

    def endpoint_error(self, other: "FlowField", border: float = 0.0) -> float:
        """Средняя ошибка конечной точки; border — доля кадра, отрезаемая с каждого края."""
        if self.shape != other.shape:
            raise DimensionMismatchError(f"flow shapes differ: {self.shape} vs {other.shape}")
        by = int(self.height * border)
        bx = int(self.width * border)
        win = (slice(by, self.height - by), slice(bx, self.width - bx))
        err = np.hypot(self.u[win] - other.u[win], self.v[win] - other.v[win])
        return float(err.mean())
