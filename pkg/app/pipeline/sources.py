# app/pipeline/sources.py
"""Загрузка источников: кадры в памяти и, для провайдера injected, готовые поля потока."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from app.errors import InputIOError, RangeError
from app.flow.field import FlowField
from app.flow.flo import load_flow_dir
from app.models import InputFormat
from app.video.frames import Frame
from app.video.images import load_frame_sequence, read_raw_rgb
from app.video.y4m import read_y4m_file

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class LoadedSource:
    index: int
    path: Path
    frames: tuple[Frame, ...]
    flows: tuple[FlowField, ...] | None = None

    @property
    def name(self) -> str:
        return self.path.stem if self.path.is_file() else self.path.name


def flows_dir_for(path: Path, fmt: InputFormat) -> Path:
    """frames/ → frames/flows; clip.y4m / clip.rgb → clip.flows рядом с файлом."""
    if fmt is InputFormat.FRAMES:
        return path / "flows"
    return path.with_name(path.stem + ".flows")


def read_frames(path: Path, fmt: InputFormat) -> list[Frame]:
    if not path.exists():
        raise InputIOError(str(path), "no such file or directory")
    match fmt:
        case InputFormat.Y4M:
            return read_y4m_file(path)
        case InputFormat.FRAMES:
            return load_frame_sequence(path)
        case InputFormat.RAW:
            return read_raw_rgb(path)
    raise RangeError(f"unknown input format {fmt!r}")


def load_source(path: str | Path, index: int, fmt: InputFormat, with_flows: bool = False) -> LoadedSource:
    src = Path(path)
    frames = read_frames(src, fmt)
    flows = None
    if with_flows:
        flow_dir = flows_dir_for(src, fmt)
        flows = load_flow_dir(flow_dir)
        if len(flows) < len(frames) - 1:
            raise RangeError(
                f"{flow_dir}: {len(flows)} flow fields for {len(frames)} frames, need {len(frames) - 1}"
            )
        shape = (frames[0].height, frames[0].width)
        for i, f in enumerate(flows):
            if f.shape != shape:
                raise RangeError(f"{flow_dir}: flow {i} is {f.width}x{f.height}, frames are {shape[1]}x{shape[0]}")
        flows = flows[: len(frames) - 1]
    logger.info("📂 %s: %d кадров %dx%d", src, len(frames), frames[0].width, frames[0].height)
    return LoadedSource(index=index, path=src, frames=tuple(frames), flows=tuple(flows) if flows is not None else None)
