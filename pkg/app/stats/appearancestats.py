# app/stats/appearancestats.py
"""
Метки внешнего вида: разнообразие цвета во времени (IoU гистограмм),
доминирующий цвет блока (октант куба RGB) и глобальный доминирующий цвет.

Вектор из 13 элементов:
    [p1: p_d, c_d, p_s, c_s,  p2: …,  p3: …,  c_g]
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.errors import DimensionMismatchError, EmptyInputError, RangeError
from app.stats.partition import RegionMap
from app.video.frames import Clip

logger = logging.getLogger(__name__)

CHANNELS = ("R", "G", "B")
OCTANT_THRESHOLD = 128


@dataclass(frozen=True, slots=True)
class ChannelHistogram:
    channel: str
    bins: np.ndarray  # int64, длина B

    @property
    def pixel_total(self) -> int:
        return int(self.bins.sum())

    @property
    def bin_count(self) -> int:
        return int(self.bins.shape[0])


@dataclass(frozen=True, slots=True)
class PatternAppearance:
    p_d: int
    c_d: int
    p_s: int
    c_s: int


@dataclass(frozen=True, slots=True)
class AppearanceLabels:
    patterns: tuple[PatternAppearance, PatternAppearance, PatternAppearance]
    c_g: int

    def as_vector(self) -> list[int]:
        out: list[int] = []
        for p in self.patterns:
            out.extend((p.p_d, p.c_d, p.p_s, p.c_s))
        out.append(self.c_g)
        return out

    @classmethod
    def from_vector(cls, values: Sequence[int]) -> "AppearanceLabels":
        if len(values) != 13:
            raise ValueError(f"appearance vector must have 13 entries, got {len(values)}")
        v = [int(x) for x in values]
        pats = tuple(PatternAppearance(*v[4 * i:4 * i + 4]) for i in range(3))
        return cls(patterns=pats, c_g=v[12])  # type: ignore[arg-type]


def quantize(values: np.ndarray, bins: int) -> np.ndarray:
    """bin = floor(v·B/256)."""
    return (values.astype(np.int64) * bins) // 256


def block_channel_histogram(
    clip: Clip, rmap: RegionMap, region: int, frame_index: int, channel: int, bins: int = 16
) -> ChannelHistogram:
    if not 0 <= region < rmap.region_count:
        raise RangeError(f"region {region} outside [0, {rmap.region_count})")
    if not 0 <= frame_index < clip.count:
        raise RangeError(f"frame {frame_index} outside [0, {clip.count})")
    if not 0 <= channel < 3:
        raise RangeError(f"channel {channel} outside [0, 3)")
    values = clip.frames[frame_index].pixels[..., channel][rmap.labels == region]
    return ChannelHistogram(CHANNELS[channel], np.bincount(quantize(values, bins), minlength=bins))


def temporal_iou(histograms: Sequence[ChannelHistogram]) -> float:
    """Σ_b min_i h_i[b] / Σ_b max_i h_i[b]."""
    if len(histograms) < 2:
        raise RangeError(f"temporal IoU needs at least 2 histograms, got {len(histograms)}")
    first = histograms[0]
    for h in histograms[1:]:
        if h.bin_count != first.bin_count or h.pixel_total != first.pixel_total:
            raise DimensionMismatchError(
                f"histograms differ: B={h.bin_count}/{first.bin_count}, "
                f"total={h.pixel_total}/{first.pixel_total}"
            )
    stack = np.stack([h.bins for h in histograms])
    return float(stack.min(axis=0).sum() / stack.max(axis=0).sum())


def _region_histograms(stack: np.ndarray, rmap: RegionMap, bins: int) -> np.ndarray:
    """(N, K, 3, B) — гистограммы каждого кадра, области и канала за один проход."""
    n = stack.shape[0]
    k = rmap.region_count
    q = quantize(stack, bins)                         # (N, H, W, 3)
    labels = rmap.labels[None, :, :, None]             # (1, H, W, 1)
    frame_idx = np.arange(n)[:, None, None, None]
    chan_idx = np.arange(3)[None, None, None, :]
    flat = ((frame_idx * k + labels) * 3 + chan_idx) * bins + q
    counts = np.bincount(flat.ravel(), minlength=n * k * 3 * bins)
    return counts.reshape(n, k, 3, bins)


def diversity_scores(clip: Clip, rmap: RegionMap, bins: int = 16) -> np.ndarray:
    """(K, 3) — IoU по каналам для каждой области."""
    _check_map(clip, rmap)
    hists = _region_histograms(clip.stack(), rmap, bins)
    inter = hists.min(axis=0).sum(axis=-1)
    union = hists.max(axis=0).sum(axis=-1)
    return inter / union


def block_diversity_score(clip: Clip, rmap: RegionMap, region: int, bins: int = 16) -> float:
    """Среднее IoU по R, G, B; меньше — разнообразнее."""
    if not 0 <= region < rmap.region_count:
        raise RangeError(f"region {region} outside [0, {rmap.region_count})")
    per_channel = [
        temporal_iou([block_channel_histogram(clip, rmap, region, i, c, bins) for i in range(clip.count)])
        for c in range(3)
    ]
    return float(sum(per_channel) / 3.0)


def region_scores(clip: Clip, rmap: RegionMap, bins: int = 16) -> np.ndarray:
    per_channel = diversity_scores(clip, rmap, bins)
    return (per_channel[:, 0] + per_channel[:, 1] + per_channel[:, 2]) / 3.0


def extreme_diversity_blocks(scores: Sequence[float] | np.ndarray) -> tuple[int, int]:
    """(p_d, p_s) = (argmin, argmax); ничьи — к меньшему индексу."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInputError("no region scores")
    return int(np.argmin(arr)), int(np.argmax(arr))


def octant_indices(pixels: np.ndarray) -> np.ndarray:
    """4·[R≥128] + 2·[G≥128] + [B≥128] для массива (..., 3)."""
    hi = (pixels >= OCTANT_THRESHOLD).astype(np.int64)
    return 4 * hi[..., 0] + 2 * hi[..., 1] + hi[..., 2]


def dominant_color(pixels: np.ndarray) -> int:
    px = np.asarray(pixels).reshape(-1, 3)
    if px.shape[0] == 0:
        raise EmptyInputError("dominant color of an empty pixel set")
    return int(np.argmax(np.bincount(octant_indices(px), minlength=8)))


def block_pixels(clip: Clip, rmap: RegionMap, region: int) -> np.ndarray:
    """Все пиксели области по всем кадрам, (N·|region|, 3)."""
    return clip.stack()[:, rmap.labels == region, :].reshape(-1, 3)


def _check_map(clip: Clip, rmap: RegionMap) -> None:
    if rmap.labels.shape != (clip.height, clip.width):
        raise DimensionMismatchError(
            f"region map {rmap.width}x{rmap.height} vs clip {clip.width}x{clip.height}"
        )


def _pattern_appearance(clip: Clip, rmap: RegionMap, bins: int) -> PatternAppearance:
    p_d, p_s = extreme_diversity_blocks(region_scores(clip, rmap, bins))
    return PatternAppearance(
        p_d=p_d,
        c_d=dominant_color(block_pixels(clip, rmap, p_d)),
        p_s=p_s,
        c_s=dominant_color(block_pixels(clip, rmap, p_s)),
    )


def appearance_labels(clip: Clip, region_maps: Sequence[RegionMap], bins: int = 16) -> AppearanceLabels:
    if len(region_maps) != 3:
        raise ValueError(f"expected 3 region maps, got {len(region_maps)}")
    for rmap in region_maps:
        _check_map(clip, rmap)
    patterns = tuple(_pattern_appearance(clip, rmap, bins) for rmap in region_maps)
    return AppearanceLabels(patterns=patterns, c_g=dominant_color(clip.stack()))  # type: ignore[arg-type]
