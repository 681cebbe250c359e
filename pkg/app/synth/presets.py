# app/synth/presets.py
"""
Готовые сцены:
- fig2    — синий круг по диагонали и маленький жёлтый треугольник на белом фоне;
- pan     — гладкая периодическая текстура, сдвигаемая целиком;
- random  — случайные фигуры по seed;
- rotate  — текстура, поворачиваемая вокруг центра (проверка решателя потока).
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import ndimage

from app.errors import RangeError
from app.flow.field import FlowField
from app.models import Scenario
from app.synth.scenes import SynthClip, SynthTruth, Window, derive_truth, gen_moving_shapes
from app.synth.shapes import ShapeKind, ShapeSpec, velocity_from_angle
from app.video.frames import Clip

logger = logging.getLogger(__name__)

# Кадр генерации совпадает с размером после масштабирования по умолчанию;
# стандартная центральная обрезка 112x112 берёт окно с этим смещением.
FIG2_HEIGHT, FIG2_WIDTH = 128, 171
FIG2_WINDOW = Window(top=8, left=29, height=112, width=112)
FIG2_FRAMES = 5

MIN_PAN_SPEED = 0.5

OCTANT_COLORS: tuple[tuple[int, int, int], ...] = (
    (0, 0, 0), (0, 0, 255), (0, 255, 0), (0, 255, 255),
    (255, 0, 0), (255, 0, 255), (255, 255, 0), (255, 255, 255),
)


def fig2_scene() -> SynthClip:
    """
    Ожидаемые метки Grid4x4: u_l=6, u_o=4, p_d=6, c_d=1 (blue), p_s=0, c_s=7 (white).
    Круг и треугольник задевают несколько блоков, поэтому истина утверждает из них
    только p_s и c_s.
    """
    dx, dy = FIG2_WINDOW.left, FIG2_WINDOW.top
    circle = ShapeSpec(
        kind=ShapeKind.CIRCLE,
        color=(0, 0, 255),
        center=(104.0 + dx, 26.0 + dy),
        velocity=velocity_from_angle(8.0, 210.0),
        size=27.0,
    )
    triangle = ShapeSpec(
        kind=ShapeKind.TRIANGLE,
        color=(255, 255, 0),
        center=(90.0 + dx, 70.0 + dy),
        velocity=(-2.5, 0.0),
        size=7.0,
    )
    return gen_moving_shapes(
        [triangle, circle],
        background=(255, 255, 255),
        frames=FIG2_FRAMES,
        height=FIG2_HEIGHT,
        width=FIG2_WIDTH,
        window=FIG2_WINDOW,
        name="fig2",
        scenario=Scenario.FIG2,
    )


def periodic_texture(seed: int, height: int, width: int, sigma: float = 2.0) -> np.ndarray:
    """Гладкий шум с периодическими границами, значения в [20, 235]."""
    rng = np.random.default_rng(seed)
    noise = rng.random((height, width, 3))
    smooth = ndimage.gaussian_filter(noise, sigma=(sigma, sigma, 0.0), mode="wrap")
    lo = smooth.min(axis=(0, 1), keepdims=True)
    hi = smooth.max(axis=(0, 1), keepdims=True)
    return 20.0 + 215.0 * (smooth - lo) / np.maximum(hi - lo, 1e-12)


def gen_global_pan(
    seed: int,
    velocity: tuple[float, float],
    frames: int = 16,
    height: int = 112,
    width: int = 112,
) -> SynthClip:
    """Кадр k — текстура, сдвинутая на k·velocity по тору; поток постоянен."""
    speed = math.hypot(*velocity)
    if 0.0 < speed < MIN_PAN_SPEED:
        raise RangeError(f"pan speed {speed:.3f} below {MIN_PAN_SPEED} px/frame")
    if frames < 2:
        raise RangeError(f"a clip needs at least 2 frames, got {frames}")

    texture = periodic_texture(seed, height, width)
    vx, vy = velocity
    stack = np.empty((frames, height, width, 3), dtype=np.uint8)
    for k in range(frames):
        moved = np.stack(
            [
                ndimage.shift(texture[..., c], (k * vy, k * vx), order=1, mode="grid-wrap")
                for c in range(3)
            ],
            axis=-1,
        )
        stack[k] = np.clip(np.floor(moved + 0.5), 0, 255).astype(np.uint8)

    clip = Clip.from_array(stack)
    flows = tuple(FlowField.constant(height, width, vx, vy) for _ in range(frames - 1))
    window = Window(0, 0, height, width)
    truth = derive_truth(clip, flows, window)
    logger.debug("🎞 pan seed=%d v=(%.2f, %.2f) %dx%d", seed, vx, vy, width, height)
    return SynthClip(
        name=f"pan-{seed}",
        scenario=Scenario.PAN,
        clip=clip,
        flows=flows,
        truth=truth,
        window=window,
        params={"seed": seed, "velocity": [vx, vy]},
    )


def rotation_angle(max_displacement: float, height: int, width: int) -> float:
    """Угол (рад), при котором угол кадра смещается ровно на max_displacement."""
    radius = math.hypot((width - 1) / 2.0, (height - 1) / 2.0)
    return 2.0 * math.asin(min(max_displacement / (2.0 * radius), 1.0))


def gen_rotating_texture(
    seed: int,
    max_displacement: float = 2.0,
    frames: int = 2,
    height: int = 112,
    width: int = 112,
) -> SynthClip:
    """
    Текстура, поворачиваемая вокруг центра кадра на постоянный угол за кадр.
    Поток w(x) = R·(x − c) − (x − c) одинаков для всех пар кадров.
    Метки движения в истине не утверждаются; только c_g.
    """
    if frames < 2:
        raise RangeError(f"a clip needs at least 2 frames, got {frames}")
    theta = rotation_angle(max_displacement, height, width)
    texture = periodic_texture(seed, height, width)
    cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    dx, dy = xx - cx, yy - cy

    stack = np.empty((frames, height, width, 3), dtype=np.uint8)
    for k in range(frames):
        a = -k * theta
        sx = cx + math.cos(a) * dx - math.sin(a) * dy
        sy = cy + math.sin(a) * dx + math.cos(a) * dy
        sampled = np.stack(
            [
                ndimage.map_coordinates(texture[..., c], [sy, sx], order=1, mode="grid-wrap")
                for c in range(3)
            ],
            axis=-1,
        )
        stack[k] = np.clip(np.floor(sampled + 0.5), 0, 255).astype(np.uint8)

    u = math.cos(theta) * dx - math.sin(theta) * dy - dx
    v = math.sin(theta) * dx + math.cos(theta) * dy - dy
    flows = tuple(FlowField(u, v) for _ in range(frames - 1))
    clip = Clip.from_array(stack)
    window = Window(0, 0, height, width)
    c_g = derive_truth(clip, flows, window).appearance[12]
    truth = SynthTruth(motion=(None,) * 14, appearance=(None,) * 12 + (c_g,))
    logger.debug("🎞 rotate seed=%d θ=%.4f рад %dx%d", seed, theta, width, height)
    return SynthClip(
        name=f"rotate-{seed}",
        scenario=Scenario.ROTATE,
        clip=clip,
        flows=flows,
        truth=truth,
        window=window,
        params={"seed": seed, "max_displacement": max_displacement, "theta": theta},
    )


def _random_shape(
    rng: np.random.Generator,
    background: tuple[int, int, int],
    frames: int,
    height: int,
    width: int,
    static: bool,
) -> ShapeSpec:
    kind = list(ShapeKind)[int(rng.integers(0, len(ShapeKind)))]
    colors = [c for c in OCTANT_COLORS if c != background]
    color = colors[int(rng.integers(0, len(colors)))]
    size = float(rng.uniform(4.0, max(min(height, width) / 6.0, 5.0)))
    vx, vy = (0.0, 0.0) if static else tuple(float(x) for x in rng.integers(-2, 3, size=2))

    span = frames - 1
    x_lo, x_hi = size + max(0.0, -vx * span), width - 1 - size - max(0.0, vx * span)
    y_lo, y_hi = size + max(0.0, -vy * span), height - 1 - size - max(0.0, vy * span)
    if x_lo > x_hi or y_lo > y_hi:
        vx, vy = 0.0, 0.0
        x_lo, x_hi = size, width - 1 - size
        y_lo, y_hi = size, height - 1 - size
    center = (float(rng.uniform(x_lo, x_hi)), float(rng.uniform(y_lo, y_hi)))
    return ShapeSpec(kind=kind, color=color, center=center, velocity=(vx, vy), size=size)


def gen_random_scene(
    seed: int,
    frames: int = 16,
    height: int = 112,
    width: int = 112,
    max_shapes: int = 3,
    static: bool = False,
) -> SynthClip:
    if max_shapes < 1:
        raise RangeError(f"max_shapes must be ≥ 1, got {max_shapes}")
    if min(height, width) < 16:
        raise RangeError(f"random scenes need at least 16x16, got {width}x{height}")
    rng = np.random.default_rng(seed)
    background = OCTANT_COLORS[int(rng.integers(0, len(OCTANT_COLORS)))]
    count = int(rng.integers(1, max_shapes + 1))
    specs = [_random_shape(rng, background, frames, height, width, static) for _ in range(count)]
    synth = gen_moving_shapes(
        specs,
        background=background,
        frames=frames,
        height=height,
        width=width,
        name=f"random-{seed}",
        scenario=Scenario.RANDOM,
    )
    synth.params["seed"] = seed
    return synth
