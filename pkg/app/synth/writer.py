# app/synth/writer.py
"""Синтетический клип на диск: frames/000.ppm…, frames/flows/000.flo…, truth.jsonl."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from app.config import CONVENTIONS_VERSION
from app.flow.flo import write_flo
from app.pipeline.records import LabelRecord
from app.synth.scenes import SynthClip
from app.video.images import save_frame_sequence

logger = logging.getLogger(__name__)


def truth_record(synth: SynthClip, source: str = "frames") -> LabelRecord:
    w = synth.window
    return LabelRecord(
        clip_id=f"{synth.name}:{0:06d}",
        source=source,
        frame_range=(0, synth.clip.count),
        motion=synth.truth.motion,  # type: ignore[arg-type]
        appearance=synth.truth.appearance,  # type: ignore[arg-type]
        params_digest=None,
        conventions=CONVENTIONS_VERSION,
        crop=(w.top, w.left, w.height, w.width),
        analytic=True,
    )


def write_synth(synth: SynthClip, out_dir: str | Path) -> Path:
    """Каталог frames/ читается как источник формата frames; flows/ лежит внутри него."""
    root = Path(out_dir)
    frames_dir = root / "frames"
    save_frame_sequence(synth.clip.frames, frames_dir)
    for i, flow in enumerate(synth.flows):
        write_flo(flow, frames_dir / "flows" / f"{i:03d}.flo")

    record = truth_record(synth, source=str(frames_dir))
    data = record.to_dict()
    data["scenario"] = synth.scenario.value
    data["scene"] = synth.params
    (root / "truth.jsonl").write_text(json.dumps(data, ensure_ascii=False) + "\n", encoding="utf-8")
    logger.info("🎨 %s → %s (%d кадров)", synth.name, root, synth.clip.count)
    return root
