"""
Extraction Worker — пул из K воркеров + упорядоченная запись.

Особенности:
- Клипы независимы, считаются параллельно (CPU-работа в asyncio.to_thread)
- Результаты отдаются строго в порядке sequence_id
- Досрочно готовые результаты ждут в буфере
- Ошибка одного клипа не останавливает остальные
"""

from __future__ import annotations

import asyncio
import logging
import time
from dataclasses import dataclass
from typing import Callable, Generic, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(slots=True)
class WorkOutcome(Generic[R]):
    seq: int
    result: R | None = None
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


# ================================================================
# Упорядоченная запись
# ================================================================
class OrderedWriter(Generic[R]):
    """Буферизует исходы по seq и выпускает их без пропусков, начиная с first_seq."""

    def __init__(self, sink: Callable[[WorkOutcome[R]], None], first_seq: int = 0):
        self._sink = sink
        self._next = first_seq
        self._buffer: dict[int, WorkOutcome[R]] = {}
        self.released = 0

    @property
    def next_seq(self) -> int:
        return self._next

    @property
    def pending(self) -> int:
        return len(self._buffer)

    def submit(self, outcome: WorkOutcome[R]) -> int:
        """Возвращает число выпущенных исходов."""
        seq = outcome.seq
        if seq < self._next or seq in self._buffer:
            logger.warning("⚠️ Дубликат seq=%d (ожидается %d)", seq, self._next)
            return 0

        self._buffer[seq] = outcome
        if seq > self._next:
            logger.debug("📦 Буфер: seq=%d ждём %d", seq, self._next)

        released = 0
        while (item := self._buffer.pop(self._next, None)) is not None:
            self._sink(item)
            self._next += 1
            released += 1
        self.released += released
        return released

    def close(self) -> None:
        if self._buffer:
            missing = self._next
            raise RuntimeError(f"ordered writer closed with a gap at seq={missing}, {len(self._buffer)} buffered")


# ================================================================
# Пул воркеров
# ================================================================
async def _worker_loop(
    worker_id: int,
    queue: asyncio.Queue,
    handler: Callable[[T], R],
    writer: OrderedWriter[R],
) -> None:
    while True:
        item = await queue.get()
        try:
            if item is None:
                return
            seq, payload = item
            try:
                result = await asyncio.to_thread(handler, payload)
                outcome = WorkOutcome(seq, result=result)
            except Exception as e:
                logger.error("❌ Воркер #%d, seq=%d: %s", worker_id, seq, e, exc_info=True)
                outcome = WorkOutcome(seq, error=e)
            writer.submit(outcome)
        finally:
            queue.task_done()


async def run_ordered_pool(
    payloads: Sequence[T],
    handler: Callable[[T], R],
    sink: Callable[[WorkOutcome[R]], None],
    workers: int = 1,
) -> int:
    """
    Обрабатывает payloads пулом из workers задач; sink получает исходы
    в порядке входной последовательности. Возвращает число исходов.
    """
    if workers < 1:
        raise ValueError(f"workers must be ≥ 1, got {workers}")

    writer: OrderedWriter[R] = OrderedWriter(sink)
    queue: asyncio.Queue = asyncio.Queue(maxsize=2 * workers)
    started = time.perf_counter()
    tasks = [
        asyncio.create_task(_worker_loop(i, queue, handler, writer))
        for i in range(1, workers + 1)
    ]
    logger.debug("🚀 Запущено %d воркеров на %d задач", workers, len(payloads))

    try:
        for seq, payload in enumerate(payloads):
            await queue.put((seq, payload))
        for _ in tasks:
            await queue.put(None)
        await asyncio.gather(*tasks)

    except asyncio.CancelledError:
        for t in tasks:
            t.cancel()
        await asyncio.gather(*tasks, return_exceptions=True)
        raise

    writer.close()
    logger.debug("🎉 Пул завершён: %d исходов за %.2fs", writer.released, time.perf_counter() - started)
    return writer.released
