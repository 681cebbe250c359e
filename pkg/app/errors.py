# app/errors.py
"""Иерархия ошибок генератора меток."""

from __future__ import annotations


class LabelError(Exception):
    """Базовая ошибка пакета."""


class ConfigError(LabelError):
    """Неверная конфигурация запуска (код выхода 2)."""


class FormatError(LabelError):
    """Повреждённый заголовок или неподдерживаемый формат."""


class TruncationError(FormatError):
    def __init__(self, frame_index: int, expected: int, got: int):
        self.frame_index = frame_index
        super().__init__(
            f"frame {frame_index} truncated: expected {expected} bytes, got {got}"
        )


class DimensionMismatchError(LabelError):
    """Кадры или поля разных размеров."""


class EmptyInputError(LabelError):
    """Источник не содержит кадров."""


class InputIOError(LabelError):
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"{path}: {reason}")


class RangeError(LabelError):
    """Индекс или окно вне допустимого диапазона."""


class GeometryError(LabelError):
    """Кадр слишком мал для шаблона разбиения."""


class NumericalFailureError(LabelError):
    def __init__(self, level: int, detail: str = "non-finite values"):
        self.level = level
        super().__init__(f"flow solver failed at pyramid level {level}: {detail}")


class FlowProviderError(LabelError):
    def __init__(self, pair_index: int, cause: Exception):
        self.pair_index = pair_index
        self.cause = cause
        super().__init__(f"flow provider failed on frame pair {pair_index}: {cause}")


class BoundsError(LabelError):
    """Синтетическая фигура выходит за кадр."""
