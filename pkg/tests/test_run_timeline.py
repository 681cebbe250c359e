from __future__ import annotations

import asyncio
import logging

import pytest

from app.utils.run_timeline import RunTimeline, StageStatus

log = logging.getLogger("tests.timeline")


async def _two_stages(timeline: RunTimeline) -> None:
    async with timeline.stage("Чтение", "📂") as stage:
        stage.log("клипов: 3")
    async with timeline.stage("Метки", "🏷") as stage:
        stage.warning("клип 2 с ошибкой")


def test_stages_record_status_and_notes(caplog):
    timeline = RunTimeline(log, "labels extract")
    with caplog.at_level(logging.INFO, logger="tests.timeline"):
        timeline.log_banner([("Воркеров", 2)])
        timeline.log_banner([("Воркеров", 2)])
        asyncio.run(_two_stages(timeline))
        timeline.log_summary(3, ["a.y4m: broken"])

    assert [r.status for r in timeline.results] == [StageStatus.OK, StageStatus.WARN]
    assert timeline.results[0].notes == ["клипов: 3"]
    assert timeline.degraded
    assert caplog.text.count("запуск") == 1
    assert "ошибок 1" in caplog.text and "a.y4m: broken" in caplog.text


def test_failed_stage_reraises():
    timeline = RunTimeline(log, "labels")

    async def boom() -> None:
        async with timeline.stage("Метки", "🏷"):
            raise ValueError("bad clip")

    with pytest.raises(ValueError):
        asyncio.run(boom())
    assert timeline.results[0].status is StageStatus.FAIL
