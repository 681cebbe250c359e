# app/pipeline/inspect.py
"""Человекочитаемая расшифровка записи меток."""

from __future__ import annotations

from typing import Any

from app.models import ALL_PATTERNS, OCTANT_NAMES
from app.pipeline.records import APPEARANCE_KEYS, MOTION_KEYS

SECTOR_DEG = 45


def _orientation(bin_index: int | None) -> str:
    if bin_index is None:
        return "—"
    lo = bin_index * SECTOR_DEG
    return f"{bin_index} (piece {bin_index + 1}, {lo}°–{lo + SECTOR_DEG}°)"


def _location(index: int | None, word: str) -> str:
    if index is None:
        return "—"
    return f"{index} ({word} {index + 1})"


def _color(octant: int | None) -> str:
    if octant is None:
        return "—"
    return f"{octant} ({OCTANT_NAMES[octant]})"


def _frame(index: int | None) -> str:
    if index is None:
        return "—"
    return f"pair {index} (frames {index}→{index + 1})"


def describe_record(data: dict[str, Any]) -> list[str]:
    """Строки с 0-based значениями и 1-based номерами блоков/секторов."""
    motion = data["motion"]
    appearance = data["appearance"]
    lines = [
        f"clip {data['clip_id']}  source {data['source']}  frames {data['frame_range'][0]}..{data['frame_range'][1] - 1}",
        f"conventions {data.get('conventions')}  digest {data.get('params_digest')}",
    ]
    if data.get("analytic"):
        lines.append("analytic truth (— marks fields without an assertion)")

    for i, pattern in enumerate(ALL_PATTERNS):
        word = "block" if i == 0 else "region"
        m = dict(zip(MOTION_KEYS, motion[4 * i:4 * i + 4]))
        a = dict(zip(APPEARANCE_KEYS, appearance[4 * i:4 * i + 4]))
        lines.append(f"pattern {pattern.number}: {pattern.value} ({pattern.region_count} regions)")
        lines.append(f"  u: largest {_location(m['u_l'], word)}, orientation {_orientation(m['u_o'])}")
        lines.append(f"  v: largest {_location(m['v_l'], word)}, orientation {_orientation(m['v_o'])}")
        lines.append(f"  most diverse {_location(a['p_d'], word)}, color {_color(a['c_d'])}")
        lines.append(f"  most stable  {_location(a['p_s'], word)}, color {_color(a['c_s'])}")

    lines.append(f"global: u {_frame(motion[12])}, v {_frame(motion[13])}, color {_color(appearance[12])}")
    if "selected" in data:
        lines.append("selected: " + ", ".join(f"{n}={v}" for n, v in data["selected"]))
    return lines
