# app/pipeline/records.py
"""
Запись меток одного клипа и её канонические представления.

Порядок 27 значений:
    движение   p1_u_l, p1_u_o, p1_v_l, p1_v_o, … p3_v_o, g_u, g_v
    внешний вид p1_p_d, p1_c_d, p1_p_s, p1_c_s, … p3_c_s, c_g
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from app.errors import RangeError
from app.models import ALL_PATTERNS, LabelSubset

MOTION_KEYS = ("u_l", "u_o", "v_l", "v_o")
APPEARANCE_KEYS = ("p_d", "c_d", "p_s", "c_s")
LOCATION_KEYS = {"u_l", "v_l", "p_d", "p_s"}


@lru_cache(maxsize=1)
def label_names() -> tuple[tuple[str, ...], tuple[str, ...]]:
    motion = [f"p{p.number}_{k}" for p in ALL_PATTERNS for k in MOTION_KEYS] + ["g_u", "g_v"]
    appearance = [f"p{p.number}_{k}" for p in ALL_PATTERNS for k in APPEARANCE_KEYS] + ["c_g"]
    return tuple(motion), tuple(appearance)


def all_label_names() -> tuple[str, ...]:
    motion, appearance = label_names()
    return motion + appearance


def subset_names(subset: LabelSubset) -> tuple[str, ...]:
    names = all_label_names()
    motion, appearance = label_names()
    match subset:
        case LabelSubset.ALL:
            return names
        case LabelSubset.MOTION:
            return motion
        case LabelSubset.APPEARANCE:
            return appearance
        case LabelSubset.LOCAL:
            return tuple(n for n in names if n.startswith("p"))
        case LabelSubset.GLOBAL:
            return ("g_u", "g_v", "c_g")
        case _:
            prefix = f"p{subset.value[-1]}_"
            return tuple(n for n in names if n.startswith(prefix))


def _divisor(name: str, clip_len: int) -> int:
    if name in ("g_u", "g_v"):
        return clip_len - 2
    if name == "c_g":
        return 7
    pattern = ALL_PATTERNS[int(name[1]) - 1]
    key = name[3:]
    if key in LOCATION_KEYS:
        return pattern.region_count - 1
    return 7


def label_ranges(clip_len: int) -> dict[str, int]:
    """Максимальное значение каждой метки: значения лежат в [0, max]."""
    return {n: _divisor(n, clip_len) for n in all_label_names()}


def normalize_labels(motion: Sequence[int], appearance: Sequence[int], clip_len: int) -> list[float]:
    """27 значений в [0, 1]: целое делится на (мощность диапазона − 1)."""
    values = list(motion) + list(appearance)
    if len(values) != 27:
        raise RangeError(f"expected 27 labels, got {len(values)}")
    out: list[float] = []
    for name, value in zip(all_label_names(), values):
        d = _divisor(name, clip_len)
        out.append(0.0 if d == 0 else value / d)
    return out


def denormalize_labels(values: Sequence[float], clip_len: int) -> list[int]:
    if len(values) != 27:
        raise RangeError(f"expected 27 labels, got {len(values)}")
    return [int(round(v * _divisor(n, clip_len))) for n, v in zip(all_label_names(), values)]


@dataclass(frozen=True, slots=True)
class LabelRecord:
    clip_id: str
    source: str
    frame_range: tuple[int, int]
    motion: tuple[int, ...]
    appearance: tuple[int, ...]
    params_digest: str | None
    conventions: str
    crop: tuple[int, int, int, int] | None = None  # top, left, height, width
    flipped: bool = False
    label_subset: LabelSubset = LabelSubset.ALL
    normalize: bool = False
    analytic: bool = False
    pattern_set: tuple[str, ...] = field(default_factory=lambda: tuple(p.value for p in ALL_PATTERNS))

    def __post_init__(self):
        if len(self.motion) != 14 or len(self.appearance) != 13:
            raise RangeError(
                f"record {self.clip_id}: expected 14 motion and 13 appearance labels, "
                f"got {len(self.motion)} and {len(self.appearance)}"
            )

    @property
    def clip_len(self) -> int:
        return self.frame_range[1] - self.frame_range[0]

    def values(self) -> list[int]:
        return list(self.motion) + list(self.appearance)

    def named(self) -> dict[str, int]:
        return dict(zip(all_label_names(), self.values()))

    def normalized(self) -> list[float]:
        return normalize_labels(self.motion, self.appearance, self.clip_len)

    def to_dict(self) -> dict[str, Any]:
        """Ключи в фиксированном порядке."""
        out: dict[str, Any] = {
            "clip_id": self.clip_id,
            "source": self.source,
            "frame_range": list(self.frame_range),
            "pattern_set": list(self.pattern_set),
            "motion": list(self.motion),
            "appearance": list(self.appearance),
            "params_digest": self.params_digest,
            "conventions": self.conventions,
            "crop": list(self.crop) if self.crop is not None else None,
            "flipped": self.flipped,
            "label_subset": self.label_subset.value,
        }
        if self.label_subset is not LabelSubset.ALL:
            named = self.named()
            out["selected"] = [[n, named[n]] for n in subset_names(self.label_subset)]
        if self.normalize:
            norm = self.normalized()
            out["normalized"] = {"motion": norm[:14], "appearance": norm[14:]}
        out["analytic"] = self.analytic
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LabelRecord":
        crop = data.get("crop")
        return cls(
            clip_id=data["clip_id"],
            source=data["source"],
            frame_range=tuple(data["frame_range"]),  # type: ignore[arg-type]
            motion=tuple(data["motion"]),
            appearance=tuple(data["appearance"]),
            params_digest=data.get("params_digest"),
            conventions=data.get("conventions", ""),
            crop=tuple(crop) if crop is not None else None,  # type: ignore[arg-type]
            flipped=bool(data.get("flipped", False)),
            label_subset=LabelSubset(data.get("label_subset", "all")),
            normalize="normalized" in data,
            analytic=bool(data.get("analytic", False)),
            pattern_set=tuple(data.get("pattern_set", [p.value for p in ALL_PATTERNS])),
        )
