# app/pipeline/visualize.py
"""Отладочные картинки для первого клипа источника."""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from app.config import RunConfig
from app.errors import EmptyInputError
from app.flow.flo import write_flo
from app.flow.providers import InjectedFlowProvider, VariationalFlowProvider, clip_flows
from app.models import FlowProviderKind
from app.pipeline.extract import prepare_clip
from app.pipeline.sources import load_source
from app.stats.appearancestats import diversity_scores
from app.stats.motionstats import sum_motion_boundaries, to_polar
from app.stats.partition import all_region_maps
from app.utils.pgm import rescale_to_u8, write_pgm
from app.video.preprocess import extract_clips

logger = logging.getLogger(__name__)


def visualize(
    source: str | Path,
    config: RunConfig,
    out_prefix: str | Path,
    dump_flow: bool = False,
) -> list[Path]:
    """|M_u|, |M_v| и карты областей в PGM, IoU по областям в CSV, по желанию .flo."""
    injected = config.flow_provider is FlowProviderKind.INJECTED
    loaded = load_source(source, 0, config.input_format, with_flows=injected)
    clips = extract_clips(loaded.frames, config.clip_len, config.stride)
    if not clips:
        raise EmptyInputError(f"{source}: fewer than {config.clip_len} frames")
    first = clips[0]
    flows_in = loaded.flows[: first.count - 1] if loaded.flows is not None else None
    prepared = prepare_clip(first, config, 0, flows_in)
    clip = prepared.clip

    provider = InjectedFlowProvider(prepared.flows) if injected else VariationalFlowProvider(config.flow)
    flows = clip_flows(clip, provider)

    prefix = str(out_prefix)
    written: list[Path] = []

    mb = sum_motion_boundaries(flows)
    for name, (a, b) in (("mu", (mb.mu_x, mb.mu_y)), ("mv", (mb.mv_x, mb.mv_y))):
        written.append(write_pgm(f"{prefix}_{name}.pgm", rescale_to_u8(to_polar(a, b).magnitude)))

    maps = all_region_maps(clip.height, clip.width)
    for rmap in maps:
        scaled = (rmap.labels * (255 // max(rmap.region_count - 1, 1))).astype(np.uint8)
        written.append(write_pgm(f"{prefix}_{rmap.pattern.value}.pgm", scaled))

    csv_path = Path(f"{prefix}_diversity.csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pattern", "region", "iou_r", "iou_g", "iou_b", "score"])
        for rmap in maps:
            per_channel = diversity_scores(clip, rmap, config.bins)
            for region, (r, g, b) in enumerate(per_channel):
                writer.writerow([rmap.pattern.value, region, f"{r:.6f}", f"{g:.6f}", f"{b:.6f}", f"{(r + g + b) / 3.0:.6f}"])
    written.append(csv_path)

    if dump_flow:
        for i, flow in enumerate(flows):
            written.append(write_flo(flow, f"{prefix}_flow_{i:03d}.flo"))

    logger.info("🖼️ %s: записано %d файлов", source, len(written))
    return written
