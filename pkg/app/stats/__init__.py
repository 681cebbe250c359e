"""Шаблоны разбиения и статистики движения/внешнего вида."""

from app.stats.appearancestats import (
    AppearanceLabels,
    ChannelHistogram,
    appearance_labels,
    block_channel_histogram,
    block_diversity_score,
    dominant_color,
    extreme_diversity_blocks,
    temporal_iou,
)
from app.stats.motionstats import (
    MotionLabels,
    PolarField,
    SummedBoundaries,
    dominant_orientation,
    global_largest_motion_frame,
    largest_motion_block,
    motion_labels,
    spatial_gradients,
    sum_motion_boundaries,
    to_polar,
)
from app.stats.partition import RegionMap, all_region_maps, region_map, region_pixels

__all__ = [
    "AppearanceLabels",
    "ChannelHistogram",
    "MotionLabels",
    "PolarField",
    "RegionMap",
    "SummedBoundaries",
    "all_region_maps",
    "appearance_labels",
    "block_channel_histogram",
    "block_diversity_score",
    "dominant_color",
    "dominant_orientation",
    "extreme_diversity_blocks",
    "global_largest_motion_frame",
    "largest_motion_block",
    "motion_labels",
    "region_map",
    "region_pixels",
    "spatial_gradients",
    "sum_motion_boundaries",
    "temporal_iou",
    "to_polar",
]
