"""Часовой пояс для меток времени в логах."""

from __future__ import annotations

import logging
from datetime import datetime
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

logger = logging.getLogger(__name__)

UTC = ZoneInfo("UTC")


def load_timezone(tz_name: str) -> ZoneInfo:
    """ZoneInfo по имени (данные из tzdata); неизвестное имя — UTC с предупреждением."""
    try:
        return ZoneInfo(tz_name)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        logger.warning("⚠️ Временная зона '%s' не найдена (%s), логи пишем в UTC", tz_name, exc)
        return UTC


class TimezoneAwareFormatter(logging.Formatter):
    """Время записи в поясе TIMEZONE, миллисекунды через запятую как у logging."""

    def __init__(self, fmt: str | None = None, datefmt: str | None = None, timezone_name: str = "UTC"):
        super().__init__(fmt, datefmt)
        self.tz = load_timezone(timezone_name)

    def formatTime(self, record, datefmt=None):  # noqa: N802
        stamp = datetime.fromtimestamp(record.created, tz=self.tz)
        if datefmt:
            return stamp.strftime(datefmt)
        return f"{stamp:%Y-%m-%d %H:%M:%S},{int(record.msecs):03d}"
