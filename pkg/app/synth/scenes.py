# app/synth/scenes.py
"""
Синтетические клипы с известным потоком и аналитическими метками.

Метки «истины» считаются по кадрам, аналитическому потоку и прямым подсчётом пикселей,
без motionstats и appearancestats. Маска отмечает поля, для которых значение выводится
однозначно; остальные поля в истине — None.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from app.errors import RangeError
from app.flow.field import FlowField
from app.models import Scenario
from app.pipeline.records import label_names
from app.synth.shapes import ShapeSpec
from app.video.frames import Clip

logger = logging.getLogger(__name__)

MOTION_FIELDS = 14
APPEARANCE_FIELDS = 13


@dataclass(frozen=True, slots=True)
class Window:
    """Прямоугольник кадра, в котором определены метки (после обрезки)."""

    top: int
    left: int
    height: int
    width: int


@dataclass(frozen=True, slots=True)
class SynthTruth:
    motion: tuple[int | None, ...]
    appearance: tuple[int | None, ...]

    def __post_init__(self):
        if len(self.motion) != MOTION_FIELDS or len(self.appearance) != APPEARANCE_FIELDS:
            raise ValueError("truth vectors must have 14 motion and 13 appearance entries")

    @property
    def motion_mask(self) -> tuple[bool, ...]:
        return tuple(v is not None for v in self.motion)

    @property
    def appearance_mask(self) -> tuple[bool, ...]:
        return tuple(v is not None for v in self.appearance)

    def mismatches(self, motion: Sequence[int], appearance: Sequence[int]) -> list[str]:
        """Имена полей, где вычисленные метки расходятся с утверждённой истиной."""
        names_m, names_a = label_names()
        out = [n for n, t, v in zip(names_m, self.motion, motion) if t is not None and t != v]
        out += [n for n, t, v in zip(names_a, self.appearance, appearance) if t is not None and t != v]
        return out


@dataclass(frozen=True, slots=True)
class SynthClip:
    name: str
    scenario: Scenario
    clip: Clip
    flows: tuple[FlowField, ...]
    truth: SynthTruth
    window: Window
    params: dict = field(default_factory=dict)


# ═══════════════════════════════════════════════
# 🎨 Рендер
# ═══════════════════════════════════════════════


def render_shapes(
    specs: Sequence[ShapeSpec],
    background: tuple[int, int, int],
    frames: int,
    height: int,
    width: int,
) -> tuple[Clip, tuple[FlowField, ...]]:
    """Кадры и поток: фигуры рисуются по порядку, последующая перекрывает предыдущую."""
    if frames < 2:
        raise RangeError(f"a clip needs at least 2 frames, got {frames}")
    for spec in specs:
        spec.check_bounds(frames, height, width)

    stack = np.empty((frames, height, width, 3), dtype=np.uint8)
    flows: list[FlowField] = []
    for k in range(frames):
        stack[k] = background
        u = np.zeros((height, width))
        v = np.zeros((height, width))
        for spec in specs:
            mask = spec.mask_at(k, height, width)
            stack[k][mask] = spec.color
            u[mask] = spec.velocity[0]
            v[mask] = spec.velocity[1]
        if k < frames - 1:
            flows.append(FlowField(u, v))
    return Clip.from_array(stack), tuple(flows)


# ═══════════════════════════════════════════════
# 🧮 Аналитическая истина
# ═══════════════════════════════════════════════
# Геометрия областей считается здесь, без app.stats.partition.

OCTANT_LEVELS = (0, 255)


def _octant_majority(pixels: np.ndarray) -> int:
    px = pixels.reshape(-1, 3)
    counts = [0] * 8
    for code in range(8):
        r_hi, g_hi, b_hi = bool(code & 4), bool(code & 2), bool(code & 1)
        sel = ((px[:, 0] >= 128) == r_hi) & ((px[:, 1] >= 128) == g_hi) & ((px[:, 2] >= 128) == b_hi)
        counts[code] = int(sel.sum())
    best = max(counts)
    return counts.index(best)


def _band(coord: int, size: int) -> int:
    """Номер полосы сетки 4x4 для строки или столбца."""
    return (4 * coord) // size


def _band_slice(index: int, size: int) -> slice:
    # полоса i: i·size ≤ 4·coord < (i+1)·size
    return slice(-(-index * size // 4), -(-(index + 1) * size // 4))


def grid_cell(block: int, height: int, width: int) -> tuple[slice, slice]:
    """Строки и столбцы блока сетки 4x4 (построчная нумерация)."""
    return _band_slice(block // 4, height), _band_slice(block % 4, width)


def outer_ring_mask(height: int, width: int) -> np.ndarray:
    """Внешнее кольцо шаблона колец: всё, кроме прямоугольника с отступом min(H, W) // 8."""
    gap = min(height, width) // 8
    mask = np.ones((height, width), dtype=bool)
    mask[gap:height - gap, gap:width - gap] = False
    return mask


def first_wedge_cover(height: int, width: int) -> np.ndarray:
    """Правая верхняя четверть с центральными линиями: содержит сектор 0 целиком."""
    yy, xx = np.indices((height, width))
    return (2 * xx >= width - 1) & (2 * yy <= height - 1)


def _window_stack(clip: Clip, window: Window) -> np.ndarray:
    s = clip.stack()
    return s[:, window.top:window.top + window.height, window.left:window.left + window.width, :]


def _window_flows(flows: Sequence[FlowField], window: Window) -> tuple[np.ndarray, np.ndarray]:
    rows = slice(window.top, window.top + window.height)
    cols = slice(window.left, window.left + window.width)
    u = np.stack([f.u[rows, cols] for f in flows])
    v = np.stack([f.v[rows, cols] for f in flows])
    return u, v


def _is_constant(block: np.ndarray) -> bool:
    return bool((block == block[0]).all())


def _spatially_flat(component: np.ndarray) -> bool:
    """Каждое поле компоненты постоянно по кадру: границ движения нет."""
    return bool((component == component[:, :1, :1]).all())


def _single_block_support(component: np.ndarray, height: int, width: int) -> int | None:
    """
    Блок сетки, в который целиком попадают ненулевые значения компоненты
    вместе с соседями по разностной схеме. Значения одного знака, так что
    сумма границ у края носителя не сокращается и блок однозначен.
    """
    moving = component != 0.0
    values = component[moving]
    if values.size == 0 or not ((values > 0.0).all() or (values < 0.0).all()):
        return None
    reach = ndimage.binary_dilation(moving.any(axis=0))
    rows = np.flatnonzero(reach.any(axis=1))
    cols = np.flatnonzero(reach.any(axis=0))
    top, bottom = _band(int(rows[0]), height), _band(int(rows[-1]), height)
    left, right = _band(int(cols[0]), width), _band(int(cols[-1]), width)
    if top != bottom or left != right:
        return None
    return 4 * top + left


def _single_block_change(stack: np.ndarray, height: int, width: int) -> int | None:
    """
    Блок сетки, в котором лежат все меняющиеся пиксели, если в нём
    меняется число пикселей с уровнем 255 хотя бы по одному каналу.
    Значения блока — только 0 и 255, поэтому при B ≥ 2 его IoU < 1.
    """
    changed = (stack != stack[0]).any(axis=(0, 3))
    if not changed.any():
        return None
    rows = np.flatnonzero(changed.any(axis=1))
    cols = np.flatnonzero(changed.any(axis=0))
    top, bottom = _band(int(rows[0]), height), _band(int(rows[-1]), height)
    left, right = _band(int(cols[0]), width), _band(int(cols[-1]), width)
    if top != bottom or left != right:
        return None
    r, c = grid_cell(4 * top + left, height, width)
    block = stack[:, r, c, :]
    if not np.isin(block, OCTANT_LEVELS).all():
        return None
    counts = (block == 255).sum(axis=(1, 2))
    if not (counts != counts[0]).any():
        return None
    return 4 * top + left


def derive_truth(clip: Clip, flows: Sequence[FlowField], window: Window) -> SynthTruth:
    """
    Истина по кадрам и аналитическому потоку в окне; всё прочее — None.

    Движение (по компоненте u; для v то же с v_l, v_o, g_v):
      - все поля u постоянны по кадру → u_l = u_o = 0 во всех шаблонах и g_u = 0;
      - ненулевые u одного знака и вместе с соседями лежат в одном блоке
        сетки → u_l первого шаблона = этот блок.
    Внешний вид:
      - c_g всегда;
      - область 0 не меняется во времени → p_s = 0, c_s по её пикселям
        (для секторов — если четверть, покрывающая сектор 0, одного цвета);
      - клип неподвижен → p_d = 0 и c_d = c_s;
      - все изменения в одном блоке сетки с цветами из {0, 255} → p_d и c_d
        первого шаблона (при числе бинов ≥ 2).
    """
    if not flows:
        raise RangeError("truth needs at least one flow field")
    stack = _window_stack(clip, window)
    h, w = window.height, window.width
    motion: list[int | None] = [None] * MOTION_FIELDS
    appearance: list[int | None] = [None] * APPEARANCE_FIELDS

    u, v = _window_flows(flows, window)
    for offset, component in ((0, u), (2, v)):
        if _spatially_flat(component):
            for base in (0, 4, 8):
                motion[base + offset] = 0
                motion[base + offset + 1] = 0
            motion[12 + offset // 2] = 0
        else:
            motion[offset] = _single_block_support(component, h, w)

    still = _is_constant(stack)
    r0, c0 = grid_cell(0, h, w)
    ring = outer_ring_mask(h, w)
    cover = first_wedge_cover(h, w)
    zero_regions = (
        stack[:, r0, c0, :].reshape(len(stack), -1, 3),
        stack[:, ring, :],
        stack[:, cover, :],
    )
    for base, pixels in zip((0, 4, 8), zero_regions):
        if not _is_constant(pixels):
            continue
        appearance[base + 2] = 0
        exact = base != 8 or _is_constant(pixels.reshape(-1, 3))
        if exact:
            appearance[base + 3] = _octant_majority(pixels)
        if still:
            appearance[base] = 0
            appearance[base + 1] = appearance[base + 3]

    if not still:
        block = _single_block_change(stack, h, w)
        if block is not None:
            r, c = grid_cell(block, h, w)
            appearance[0] = block
            appearance[1] = _octant_majority(stack[:, r, c, :])

    appearance[12] = _octant_majority(stack)
    return SynthTruth(motion=tuple(motion), appearance=tuple(appearance))


def gen_moving_shapes(
    specs: Sequence[ShapeSpec],
    background: tuple[int, int, int] = (255, 255, 255),
    frames: int = 16,
    height: int = 112,
    width: int = 112,
    window: Window | None = None,
    name: str = "shapes",
    scenario: Scenario = Scenario.RANDOM,
) -> SynthClip:
    clip, flows = render_shapes(specs, background, frames, height, width)
    window = window or Window(0, 0, height, width)
    if window.top + window.height > height or window.left + window.width > width:
        raise RangeError(f"truth window {window} outside {width}x{height}")
    truth = derive_truth(clip, flows, window)
    logger.debug("🎨 %s: %d кадров %dx%d, фигур %d", name, frames, width, height, len(specs))
    return SynthClip(
        name=name,
        scenario=scenario,
        clip=clip,
        flows=flows,
        truth=truth,
        window=window,
        params={
            "background": list(background),
            "shapes": [
                {
                    "kind": s.kind.value,
                    "color": list(s.color),
                    "center": list(s.center),
                    "velocity": list(s.velocity),
                    "size": s.size,
                }
                for s in specs
            ],
        },
    )
