# app/models.py
from __future__ import annotations

from enum import Enum


class PatternId(str, Enum):
    GRID4X4 = "grid4x4"
    RINGS4 = "rings4"
    WEDGES8 = "wedges8"

    @property
    def region_count(self) -> int:
        return {"grid4x4": 16, "rings4": 4, "wedges8": 8}[self.value]

    @property
    def number(self) -> int:
        """Номер шаблона в нотации 1..3."""
        return list(PatternId).index(self) + 1


ALL_PATTERNS: tuple[PatternId, ...] = (PatternId.GRID4X4, PatternId.RINGS4, PatternId.WEDGES8)


class InputFormat(str, Enum):
    Y4M = "y4m"
    FRAMES = "frames"
    RAW = "raw"


class CropMode(str, Enum):
    CENTER = "center"
    NONE = "none"
    RANDOM = "random"


class FlowProviderKind(str, Enum):
    VARIATIONAL = "variational"
    INJECTED = "injected"


class LabelSubset(str, Enum):
    ALL = "all"
    MOTION = "motion"
    APPEARANCE = "appearance"
    LOCAL = "local"
    GLOBAL = "global"
    PATTERN1 = "pattern1"
    PATTERN2 = "pattern2"
    PATTERN3 = "pattern3"


class Scenario(str, Enum):
    FIG2 = "fig2"
    PAN = "pan"
    RANDOM = "random"
    ROTATE = "rotate"


OCTANT_NAMES: tuple[str, ...] = (
    "black", "blue", "green", "cyan", "red", "magenta", "yellow", "white",
)
