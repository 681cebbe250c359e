# app/flow/solver.py
"""
Вариационный оптический поток «от грубого к точному».

Энергия:
    E(u, v) = Σ Ψ(|I₂(x+w) − I₁(x)|²)
            + γ · Σ Ψ(|∇I₂(x+w) − ∇I₁(x)|²)
            + α · Σ Ψ(|∇u|² + |∇v|²),     Ψ(s²) = sqrt(s² + ε²)

Схема: на каждом уровне пирамиды несколько варпингов; внутри варпинга
фиксированная точка по весам Ψ' (ленивые коэффициенты) и red-black SOR
для линейной системы приращений (du, dv).

Яркость внутри решателя переводится в шкалу 0..255.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.config import FlowParams
from app.errors import DimensionMismatchError, NumericalFailureError
from app.flow.field import FlowField
from app.flow.pyramid import dx, dy, pyramid_plane_levels, upsample_flow, warp_plane
from app.video.frames import GrayFrame

logger = logging.getLogger(__name__)

INTENSITY_SCALE = 255.0

# (level, warp index, energy); warp index 0 — энергия до первого варпинга уровня
EnergyCallback = Callable[[int, int, float], None]


def psi(s2: np.ndarray, eps: float) -> np.ndarray:
    return np.sqrt(s2 + eps * eps)


def psi_prime(s2: np.ndarray, eps: float) -> np.ndarray:
    return 0.5 / np.sqrt(s2 + eps * eps)


def forward_diff(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Прямые разности с нулём на последнем столбце/строке."""
    fx = np.zeros_like(f)
    fy = np.zeros_like(f)
    fx[:, :-1] = f[:, 1:] - f[:, :-1]
    fy[:-1, :] = f[1:, :] - f[:-1, :]
    return fx, fy


def _flow_smoothness(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    ux, uy = forward_diff(u)
    vx, vy = forward_diff(v)
    return ux * ux + uy * uy + vx * vx + vy * vy


@dataclass(slots=True)
class _LevelImages:
    i1: np.ndarray
    i2: np.ndarray
    i1x: np.ndarray
    i1y: np.ndarray
    i2x: np.ndarray
    i2y: np.ndarray

    @classmethod
    def build(cls, i1: np.ndarray, i2: np.ndarray) -> "_LevelImages":
        return cls(i1=i1, i2=i2, i1x=dx(i1), i1y=dy(i1), i2x=dx(i2), i2y=dy(i2))


def _level_energy(img: _LevelImages, u: np.ndarray, v: np.ndarray, params: FlowParams) -> float:
    eps = params.epsilon_psi
    iz = warp_plane(img.i2, u, v) - img.i1
    ixz = warp_plane(img.i2x, u, v) - img.i1x
    iyz = warp_plane(img.i2y, u, v) - img.i1y
    data = psi(iz * iz, eps).sum()
    grad = psi(ixz * ixz + iyz * iyz, eps).sum()
    smooth = psi(_flow_smoothness(u, v), eps).sum()
    return float(data + params.gamma * grad + params.alpha * smooth)


def energy(prev: GrayFrame, nxt: GrayFrame, flow: FlowField, params: FlowParams) -> float:
    """Значение E(u, v) на исходном разрешении."""
    img = _LevelImages.build(prev.luma * INTENSITY_SCALE, nxt.luma * INTENSITY_SCALE)
    return _level_energy(img, flow.u, flow.v, params)


def _neighbour_weights(phi: np.ndarray, alpha: float) -> tuple[np.ndarray, ...]:
    """Веса рёбер к соседям E, W, S, N; ребро (p, p+1) берёт φ(p)."""
    w_e = np.zeros_like(phi)
    w_w = np.zeros_like(phi)
    w_s = np.zeros_like(phi)
    w_n = np.zeros_like(phi)
    w_e[:, :-1] = alpha * phi[:, :-1]
    w_w[:, 1:] = alpha * phi[:, :-1]
    w_s[:-1, :] = alpha * phi[:-1, :]
    w_n[1:, :] = alpha * phi[:-1, :]
    return w_e, w_w, w_s, w_n


def _neighbour_sum(f: np.ndarray, w_e, w_w, w_s, w_n) -> np.ndarray:
    out = np.zeros_like(f)
    out[:, :-1] += w_e[:, :-1] * f[:, 1:]
    out[:, 1:] += w_w[:, 1:] * f[:, :-1]
    out[:-1, :] += w_s[:-1, :] * f[1:, :]
    out[1:, :] += w_n[1:, :] * f[:-1, :]
    return out


def _warp_step(
    img: _LevelImages,
    u: np.ndarray,
    v: np.ndarray,
    params: FlowParams,
    red: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    eps = params.epsilon_psi
    gamma = params.gamma
    omega = params.sor_omega

    i2w = warp_plane(img.i2, u, v)
    i2xw = warp_plane(img.i2x, u, v)
    i2yw = warp_plane(img.i2y, u, v)

    ix, iy = i2xw, i2yw
    iz = i2w - img.i1
    ixx, ixy = dx(i2xw), dy(i2xw)
    iyy = dy(i2yw)
    ixz = i2xw - img.i1x
    iyz = i2yw - img.i1y

    du = np.zeros_like(u)
    dv = np.zeros_like(v)
    black = ~red

    for _ in range(params.fixed_point_iterations):
        rd = iz + ix * du + iy * dv
        phi_d = psi_prime(rd * rd, eps)
        rgx = ixz + ixx * du + ixy * dv
        rgy = iyz + ixy * du + iyy * dv
        phi_g = gamma * psi_prime(rgx * rgx + rgy * rgy, eps)
        phi_s = psi_prime(_flow_smoothness(u + du, v + dv), eps)

        a11 = phi_d * ix * ix + phi_g * (ixx * ixx + ixy * ixy)
        a12 = phi_d * ix * iy + phi_g * (ixx * ixy + ixy * iyy)
        a22 = phi_d * iy * iy + phi_g * (ixy * ixy + iyy * iyy)
        b1 = phi_d * ix * iz + phi_g * (ixx * ixz + ixy * iyz)
        b2 = phi_d * iy * iz + phi_g * (ixy * ixz + iyy * iyz)

        weights = _neighbour_weights(phi_s, params.alpha)
        w_total = sum(weights)
        # вклад текущего потока в правую часть не меняется внутри SOR
        base_u = _neighbour_sum(u, *weights) - w_total * u
        base_v = _neighbour_sum(v, *weights) - w_total * v
        den_u = a11 + w_total
        den_v = a22 + w_total

        for _ in range(params.sor_iterations):
            for mask in (red, black):
                num_u = base_u + _neighbour_sum(du, *weights) - a12 * dv - b1
                du[mask] = (1.0 - omega) * du[mask] + omega * num_u[mask] / den_u[mask]
                num_v = base_v + _neighbour_sum(dv, *weights) - a12 * du - b2
                dv[mask] = (1.0 - omega) * dv[mask] + omega * num_v[mask] / den_v[mask]

    return u + du, v + dv


def solve_flow(
    prev: GrayFrame,
    nxt: GrayFrame,
    params: FlowParams | None = None,
    on_warp: EnergyCallback | None = None,
) -> FlowField:
    """Поток от prev к nxt: nxt(x + w(x)) ≈ prev(x)."""
    params = params or FlowParams()
    if prev.luma.shape != nxt.luma.shape:
        raise DimensionMismatchError(
            f"frame sizes differ: {prev.width}x{prev.height} vs {nxt.width}x{nxt.height}"
        )

    min_size = params.min_level_size
    p1 = pyramid_plane_levels(prev.luma * INTENSITY_SCALE, params.pyramid_factor, min_size)
    p2 = pyramid_plane_levels(nxt.luma * INTENSITY_SCALE, params.pyramid_factor, min_size)

    coarsest = len(p1) - 1
    u = np.zeros_like(p1[coarsest])
    v = np.zeros_like(p1[coarsest])

    for level in range(coarsest, -1, -1):
        h, w = p1[level].shape
        if u.shape != (h, w):
            u, v = upsample_flow(u, v, h, w)
        img = _LevelImages.build(p1[level], p2[level])
        yy, xx = np.indices((h, w))
        red = (yy + xx) % 2 == 0

        if on_warp is not None:
            on_warp(level, 0, _level_energy(img, u, v, params))

        for k in range(1, params.warp_iterations + 1):
            u, v = _warp_step(img, u, v, params, red)
            if not (np.isfinite(u).all() and np.isfinite(v).all()):
                raise NumericalFailureError(level)
            if on_warp is not None:
                on_warp(level, k, _level_energy(img, u, v, params))

        logger.debug("🌊 уровень %d (%dx%d): средний |w| = %.4f", level, w, h, float(np.hypot(u, v).mean()))

    return FlowField(u, v)
