# app/pipeline/extract.py
"""
Извлечение меток: источник → клипы → ресайз/кроп/отражение → поток → 27 меток.

Каждый клип — независимая единица работы; записи выдаются в порядке
(номер источника, смещение клипа) при любом числе воркеров.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from app.config import RunConfig
from app.errors import ConfigError, LabelError
from app.flow.field import FlowField
from app.flow.providers import InjectedFlowProvider, VariationalFlowProvider, clip_flows
from app.models import CropMode, FlowProviderKind
from app.pipeline.records import LabelRecord
from app.pipeline.sources import LoadedSource, load_source
from app.stats.appearancestats import appearance_labels
from app.stats.motionstats import motion_labels
from app.stats.partition import all_region_maps
from app.utils.run_timeline import RunTimeline
from app.video.frames import Clip
from app.video.preprocess import (
    center_crop_window,
    crop,
    extract_clips,
    horizontal_flip,
    resize_bilinear,
    resize_plane,
)
from app.workers.extraction_worker import WorkOutcome, run_ordered_pool

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ClipJob:
    source_index: int
    source: str
    source_name: str
    clip: Clip
    flows: tuple[FlowField, ...] | None = None


@dataclass(frozen=True, slots=True)
class PreparedClip:
    clip: Clip
    flows: tuple[FlowField, ...] | None
    crop: tuple[int, int, int, int] | None
    flipped: bool


@dataclass(slots=True)
class SourceFailure:
    source: str
    clip_offset: int | None
    error: str

    def describe(self) -> str:
        where = self.source if self.clip_offset is None else f"{self.source} @{self.clip_offset}"
        return f"{where}: {self.error}"


@dataclass(slots=True)
class ExtractionResult:
    records: list[LabelRecord] = field(default_factory=list)
    failures: list[SourceFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


# ═══════════════════════════════════════════════
# 🔧 Подготовка клипа
# ═══════════════════════════════════════════════


def _resize_flow(flow: FlowField, height: int, width: int) -> FlowField:
    if flow.shape == (height, width):
        return flow
    sx = width / flow.width
    sy = height / flow.height
    return FlowField(resize_plane(flow.u, height, width) * sx, resize_plane(flow.v, height, width) * sy)


def _crop_flow(flow: FlowField, top: int, left: int, height: int, width: int) -> FlowField:
    win = (slice(top, top + height), slice(left, left + width))
    return FlowField(flow.u[win], flow.v[win])


def _flip_flow(flow: FlowField) -> FlowField:
    return FlowField(-flow.u[:, ::-1], flow.v[:, ::-1])


def jitter_rng(seed: int, source_index: int, clip_offset: int) -> np.random.Generator:
    """Генератор случайного кропа зависит только от (seed, источник, смещение)."""
    return np.random.default_rng((seed, source_index, clip_offset))


def prepare_clip(
    clip: Clip,
    config: RunConfig,
    source_index: int = 0,
    flows: Sequence[FlowField] | None = None,
) -> PreparedClip:
    """Ресайз, кроп и отражение; поданные поля потока преобразуются вместе с кадрами."""
    flow_list = list(flows) if flows is not None else None

    if config.resize:
        h, w = config.resize_height, config.resize_width
        clip = Clip(tuple(resize_bilinear(f, h, w) for f in clip.frames), start=clip.start)
        if flow_list is not None:
            flow_list = [_resize_flow(f, h, w) for f in flow_list]

    window = None
    flipped = False
    if config.crop_mode is not CropMode.NONE:
        ch, cw = config.crop_height, config.crop_width
        if config.crop_mode is CropMode.CENTER:
            top, left = center_crop_window(clip.height, clip.width, ch, cw)
        else:
            # проверка размера до розыгрыша смещений
            center_crop_window(clip.height, clip.width, ch, cw)
            rng = jitter_rng(config.seed, source_index, clip.start)  # type: ignore[arg-type]
            top = int(rng.integers(0, clip.height - ch + 1))
            left = int(rng.integers(0, clip.width - cw + 1))
            flipped = bool(rng.random() < 0.5)
        clip = crop(clip, top, left, ch, cw)
        window = (top, left, ch, cw)
        if flow_list is not None:
            flow_list = [_crop_flow(f, top, left, ch, cw) for f in flow_list]

    if flipped:
        clip = horizontal_flip(clip)
        if flow_list is not None:
            flow_list = [_flip_flow(f) for f in flow_list]

    return PreparedClip(
        clip=clip,
        flows=tuple(flow_list) if flow_list is not None else None,
        crop=window,
        flipped=flipped,
    )


# ═══════════════════════════════════════════════
# 🏷 Метки клипа
# ═══════════════════════════════════════════════


def label_clip(job: ClipJob, config: RunConfig) -> LabelRecord:
    prepared = prepare_clip(job.clip, config, job.source_index, job.flows)
    clip = prepared.clip

    if config.flow_provider is FlowProviderKind.INJECTED:
        if prepared.flows is None:
            raise ConfigError("injected flow provider selected but no flows were loaded")
        provider = InjectedFlowProvider(prepared.flows)
    else:
        provider = VariationalFlowProvider(config.flow)

    flows = clip_flows(clip, provider)
    maps = all_region_maps(clip.height, clip.width)
    motion = motion_labels(flows, maps)
    appearance = appearance_labels(clip, maps, config.bins)

    return LabelRecord(
        clip_id=f"{job.source_name}:{clip.start:06d}",
        source=job.source,
        frame_range=(clip.start, clip.start + clip.count),
        motion=tuple(motion.as_vector()),
        appearance=tuple(appearance.as_vector()),
        params_digest=config.params_digest(),
        conventions=config.conventions_version,
        crop=prepared.crop,
        flipped=prepared.flipped,
        label_subset=config.label_subset,
        normalize=config.normalize,
    )


def clip_jobs(source: LoadedSource, config: RunConfig) -> list[ClipJob]:
    jobs = []
    for clip in extract_clips(source.frames, config.clip_len, config.stride):
        flows = None
        if source.flows is not None:
            flows = source.flows[clip.start:clip.start + clip.count - 1]
        jobs.append(
            ClipJob(
                source_index=source.index,
                source=str(source.path),
                source_name=source.name,
                clip=clip,
                flows=flows,
            )
        )
    return jobs


# ═══════════════════════════════════════════════
# 🚀 Запуск
# ═══════════════════════════════════════════════


async def extract_async(
    config: RunConfig,
    inputs: Sequence[str | Path],
    on_record: Callable[[LabelRecord], None] | None = None,
    timeline: RunTimeline | None = None,
) -> ExtractionResult:
    result = ExtractionResult()
    timeline = timeline or RunTimeline(logger, "labels")
    with_flows = config.flow_provider is FlowProviderKind.INJECTED

    jobs: list[ClipJob] = []
    async with timeline.stage("Чтение источников", "📂") as stage:
        for index, path in enumerate(inputs):
            try:
                source = await asyncio.to_thread(load_source, path, index, config.input_format, with_flows)
                source_jobs = clip_jobs(source, config)
            except (LabelError, OSError) as e:
                if isinstance(e, ConfigError):
                    raise
                logger.error("❌ Источник %s пропущен: %s", path, e, exc_info=True)
                result.failures.append(SourceFailure(str(path), None, str(e)))
                stage.warning(f"{path}: {e}")
                continue
            if not source_jobs:
                stage.log(f"{path}: кадров меньше длины клипа, клипов нет")
            jobs.extend(source_jobs)
        stage.log(f"клипов к обработке: {len(jobs)}")

    def sink(outcome: WorkOutcome[LabelRecord]) -> None:
        if outcome.ok:
            result.records.append(outcome.result)  # type: ignore[arg-type]
            if on_record is not None:
                on_record(outcome.result)  # type: ignore[arg-type]
            return
        job = jobs[outcome.seq]
        result.failures.append(SourceFailure(job.source, job.clip.start, str(outcome.error)))

    async with timeline.stage("Метки клипов", "🏷") as stage:
        await run_ordered_pool(jobs, lambda job: label_clip(job, config), sink, workers=config.workers)
        if any(f.clip_offset is not None for f in result.failures):
            stage.warning("часть клипов завершилась с ошибкой")
        stage.log(f"записей: {len(result.records)}")

    return result


def run_extraction(
    config: RunConfig,
    inputs: Sequence[str | Path],
    on_record: Callable[[LabelRecord], None] | None = None,
) -> ExtractionResult:
    """Синхронная обёртка над extract_async."""
    return asyncio.run(extract_async(config, inputs, on_record))
