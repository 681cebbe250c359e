# app/flow/providers.py
from __future__ import annotations

import logging
from typing import Protocol, Sequence

from app.config import FlowParams
from app.errors import DimensionMismatchError, FlowProviderError, LabelError, RangeError
from app.flow.field import FlowField
from app.flow.solver import solve_flow
from app.video.frames import Clip, GrayFrame
from app.video.preprocess import to_grayscale

logger = logging.getLogger(__name__)


class FlowProvider(Protocol):
    def __call__(self, prev: GrayFrame, nxt: GrayFrame) -> FlowField: ...


class VariationalFlowProvider:
    def __init__(self, params: FlowParams | None = None):
        self.params = params or FlowParams()

    def __call__(self, prev: GrayFrame, nxt: GrayFrame) -> FlowField:
        return solve_flow(prev, nxt, self.params)


class InjectedFlowProvider:
    """
    Заранее известные поля (аналитические из генератора или прочитанные из .flo).

    Отдаёт поля по порядку вызовов: clip_flows вызывает провайдера строго
    для пар 0..N-2, поэтому один экземпляр обслуживает один клип.
    """

    def __init__(self, flows: Sequence[FlowField]):
        self._flows = list(flows)
        self._next = 0

    def __call__(self, prev: GrayFrame, nxt: GrayFrame) -> FlowField:
        if self._next >= len(self._flows):
            raise RangeError(f"no injected flow for pair {self._next} ({len(self._flows)} available)")
        flow = self._flows[self._next]
        self._next += 1
        return flow

    def reset(self) -> None:
        self._next = 0


def clip_flows(clip: Clip, provider: FlowProvider) -> list[FlowField]:
    """N-1 полей: i-е — между кадрами i и i+1."""
    grays = [to_grayscale(f) for f in clip.frames]
    flows: list[FlowField] = []
    for i in range(clip.count - 1):
        try:
            flow = provider(grays[i], grays[i + 1])
        except LabelError as e:
            raise FlowProviderError(i, e) from e
        if flow.shape != grays[i].luma.shape:
            raise FlowProviderError(
                i,
                DimensionMismatchError(
                    f"flow {flow.width}x{flow.height} vs frame {clip.width}x{clip.height}"
                ),
            )
        flows.append(flow)
    logger.debug("🌊 клип @%d: получено %d полей потока", clip.start, len(flows))
    return flows
