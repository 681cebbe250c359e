"""
Журнал запуска извлечения.

    ────────────────────────────────────────
    🚀 labels extract — запуск
      Клип / шаг: 16 / 16
    ────────────────────────────────────────
    📂 Чтение источников — старт
     • клипов к обработке: 12
    ⏱️ Чтение источников: 0.41s
    ...
    ✅ Итог: записей 12, ошибок 0, 3.20s
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence


class StageStatus(str, Enum):
    OK = "OK"
    WARN = "WARN"
    FAIL = "FAIL"


@dataclass(slots=True)
class StageResult:
    title: str
    icon: str
    duration: float
    status: StageStatus
    notes: list[str] = field(default_factory=list)


class Stage:
    """Один этап: async with timeline.stage(...) as stage."""

    def __init__(self, timeline: "RunTimeline", title: str, icon: str):
        self._timeline = timeline
        self._log = timeline.logger
        self.title = title
        self.icon = icon
        self.status = StageStatus.OK
        self.notes: list[str] = []
        self._t0 = 0.0

    async def __aenter__(self) -> "Stage":
        self._t0 = time.perf_counter()
        self._log.info("%s %s — старт", self.icon, self.title)
        return self

    async def __aexit__(self, exc_type, exc, tb) -> bool:
        took = time.perf_counter() - self._t0
        if exc is not None:
            self.status = StageStatus.FAIL
            self._log.error("%s %s — прервано через %.2fs: %s", self.icon, self.title, took, exc)
        else:
            self._log.info("⏱️ %s: %.2fs", self.title, took)
        self._timeline.results.append(StageResult(self.title, self.icon, took, self.status, list(self.notes)))
        return False

    def log(self, msg: str) -> None:
        self.notes.append(msg)
        self._log.info(" • %s", msg)

    def warning(self, msg: str) -> None:
        self.status = StageStatus.WARN
        self.notes.append(msg)
        self._log.warning(" • %s", msg)


class RunTimeline:
    """Баннер с параметрами, этапы с длительностью и статусом, итог по записям."""

    RULE = "─" * 40

    def __init__(self, logger: logging.Logger, run_name: str):
        self.logger = logger
        self.run_name = run_name
        self.results: list[StageResult] = []
        self._banner_done = False
        self._t0 = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._t0

    @property
    def degraded(self) -> bool:
        return any(r.status is not StageStatus.OK for r in self.results)

    def stage(self, title: str, icon: str) -> Stage:
        return Stage(self, title, icon)

    def log_banner(self, params: Sequence[tuple[str, str | int | bool | None]]) -> None:
        if self._banner_done:
            return
        self.logger.info(self.RULE)
        self.logger.info("🚀 %s — запуск", self.run_name)
        for name, value in params:
            self.logger.info("  %s: %s", name, value)
        self.logger.info(self.RULE)
        self._banner_done = True

    def log_summary(self, records: int, failures: Sequence[str] = ()) -> None:
        for r in self.results:
            self.logger.info("  %s %-22s %-4s %.2fs", r.icon, r.title, r.status.value, r.duration)
        if not failures:
            self.logger.info("✅ Итог: записей %d, ошибок 0, %.2fs", records, self.elapsed)
            return
        self.logger.warning("⚠️ Итог: записей %d, ошибок %d, %.2fs", records, len(failures), self.elapsed)
        for line in failures:
            self.logger.warning("   - %s", line)
