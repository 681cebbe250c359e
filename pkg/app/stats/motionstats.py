# app/stats/motionstats.py
"""
Метки движения: суммарные границы движения M_u, M_v, место наибольшего
движения и доминирующее направление по каждому шаблону, глобальная пара кадров.

Вектор из 14 элементов:
    [p1: u_l, u_o, v_l, v_o,  p2: …,  p3: …,  g_u, g_v]
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.errors import DimensionMismatchError, EmptyInputError
from app.flow.field import FlowField
from app.stats.partition import RegionMap

logger = logging.getLogger(__name__)

ORIENTATION_BINS = 8
BIN_WIDTH_DEG = 360.0 / ORIENTATION_BINS


@dataclass(frozen=True, slots=True)
class SummedBoundaries:
    mu_x: np.ndarray
    mu_y: np.ndarray
    mv_x: np.ndarray
    mv_y: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.mu_x.shape


@dataclass(frozen=True, slots=True)
class PolarField:
    magnitude: np.ndarray
    orientation: np.ndarray  # градусы в [0, 360), ось y вверх


@dataclass(frozen=True, slots=True)
class PatternMotion:
    u_l: int
    u_o: int
    v_l: int
    v_o: int


@dataclass(frozen=True, slots=True)
class MotionLabels:
    patterns: tuple[PatternMotion, PatternMotion, PatternMotion]
    g_u: int
    g_v: int

    def as_vector(self) -> list[int]:
        out: list[int] = []
        for p in self.patterns:
            out.extend((p.u_l, p.u_o, p.v_l, p.v_o))
        out.extend((self.g_u, self.g_v))
        return out

    @classmethod
    def from_vector(cls, values: Sequence[int]) -> "MotionLabels":
        if len(values) != 14:
            raise ValueError(f"motion vector must have 14 entries, got {len(values)}")
        v = [int(x) for x in values]
        pats = tuple(PatternMotion(*v[4 * i:4 * i + 4]) for i in range(3))
        return cls(patterns=pats, g_u=v[12], g_v=v[13])  # type: ignore[arg-type]


def spatial_gradients(field: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Центральные разности с повтором границы."""
    p = np.pad(np.asarray(field, dtype=np.float64), 1, mode="edge")
    gx = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    gy = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    return gx, gy


def _check_flows(flows: Sequence[FlowField]) -> tuple[int, int]:
    if not flows:
        raise EmptyInputError("at least one flow field is required")
    shape = flows[0].shape
    for i, f in enumerate(flows):
        if f.shape != shape:
            raise DimensionMismatchError(f"flow {i} is {f.shape}, expected {shape}")
    return shape


def sum_motion_boundaries(flows: Sequence[FlowField]) -> SummedBoundaries:
    shape = _check_flows(flows)
    mu_x = np.zeros(shape)
    mu_y = np.zeros(shape)
    mv_x = np.zeros(shape)
    mv_y = np.zeros(shape)
    for f in flows:
        ux, uy = spatial_gradients(f.u)
        vx, vy = spatial_gradients(f.v)
        mu_x += ux
        mu_y += uy
        mv_x += vx
        mv_y += vy
    return SummedBoundaries(mu_x, mu_y, mv_x, mv_y)


def to_polar(a: np.ndarray, b: np.ndarray) -> PolarField:
    """(a, b) в координатах изображения → модуль и угол против часовой от +x, ось y вверх."""
    magnitude = np.sqrt(a * a + b * b)
    deg = np.degrees(np.arctan2(-b, a))
    deg = np.where(deg < 0.0, deg + 360.0, deg)
    deg = np.where((deg >= 360.0) | (magnitude == 0.0), 0.0, deg)
    return PolarField(magnitude=magnitude, orientation=deg + 0.0)


def orientation_bins(orientation: np.ndarray) -> np.ndarray:
    return np.minimum((orientation // BIN_WIDTH_DEG).astype(np.int64), ORIENTATION_BINS - 1)


def largest_motion_block(polar: PolarField, rmap: RegionMap) -> int:
    if polar.magnitude.shape != rmap.labels.shape:
        raise DimensionMismatchError(f"polar {polar.magnitude.shape} vs map {rmap.labels.shape}")
    labels = rmap.labels.ravel()
    sums = np.bincount(labels, weights=polar.magnitude.ravel(), minlength=rmap.region_count)
    means = sums / rmap.sizes()
    return int(np.argmax(means))


def dominant_orientation(polar: PolarField, rmap: RegionMap, region: int) -> int:
    """Гистограмма углов, взвешенная модулем, без нормировки; нулевой модуль не участвует."""
    mask = (rmap.labels == region) & (polar.magnitude > 0.0)
    if not mask.any():
        return 0
    hist = np.bincount(
        orientation_bins(polar.orientation[mask]),
        weights=polar.magnitude[mask],
        minlength=ORIENTATION_BINS,
    )
    return int(np.argmax(hist))


def global_largest_motion_frame(flows: Sequence[FlowField]) -> tuple[int, int]:
    _check_flows(flows)
    u_scores = []
    v_scores = []
    for f in flows:
        ux, uy = spatial_gradients(f.u)
        vx, vy = spatial_gradients(f.v)
        u_scores.append(np.sqrt(ux * ux + uy * uy).mean())
        v_scores.append(np.sqrt(vx * vx + vy * vy).mean())
    return int(np.argmax(u_scores)), int(np.argmax(v_scores))


def _pattern_motion(polar_u: PolarField, polar_v: PolarField, rmap: RegionMap) -> PatternMotion:
    u_l = largest_motion_block(polar_u, rmap)
    v_l = largest_motion_block(polar_v, rmap)
    return PatternMotion(
        u_l=u_l,
        u_o=dominant_orientation(polar_u, rmap, u_l),
        v_l=v_l,
        v_o=dominant_orientation(polar_v, rmap, v_l),
    )


def motion_labels(flows: Sequence[FlowField], region_maps: Sequence[RegionMap]) -> MotionLabels:
    shape = _check_flows(flows)
    if len(region_maps) != 3:
        raise ValueError(f"expected 3 region maps, got {len(region_maps)}")
    for rmap in region_maps:
        if rmap.labels.shape != shape:
            raise DimensionMismatchError(f"region map {rmap.labels.shape} vs flows {shape}")

    mb = sum_motion_boundaries(flows)
    polar_u = to_polar(mb.mu_x, mb.mu_y)
    polar_v = to_polar(mb.mv_x, mb.mv_y)
    patterns = tuple(_pattern_motion(polar_u, polar_v, rmap) for rmap in region_maps)
    g_u, g_v = global_largest_motion_frame(flows)
    return MotionLabels(patterns=patterns, g_u=g_u, g_v=g_v)  # type: ignore[arg-type]
