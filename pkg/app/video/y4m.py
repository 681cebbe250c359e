# app/video/y4m.py
"""YUV4MPEG2 (Y4M): разбор заголовка, плоскости Y/U/V и перевод в RGB по BT.601."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO

import numpy as np

from app.errors import FormatError, InputIOError, TruncationError
from app.video.frames import Frame

logger = logging.getLogger(__name__)

SIGNATURE = b"YUV4MPEG2"
FRAME_TAG = b"FRAME"

SUBSAMPLED_CHROMA = frozenset({"420", "420jpeg", "420paldv", "420mpeg2"})
SUPPORTED_CHROMA = SUBSAMPLED_CHROMA | {"444"}


@dataclass(slots=True)
class Y4mHeader:
    width: int
    height: int
    chroma: str = "420jpeg"
    params: list[bytes] = field(default_factory=list)  # исходные токены заголовка

    @property
    def subsampled(self) -> bool:
        return self.chroma in SUBSAMPLED_CHROMA

    @property
    def chroma_shape(self) -> tuple[int, int]:
        if self.subsampled:
            return (self.height + 1) // 2, (self.width + 1) // 2
        return self.height, self.width

    @property
    def frame_bytes(self) -> int:
        ch, cw = self.chroma_shape
        return self.width * self.height + 2 * ch * cw


@dataclass(slots=True)
class Y4mStream:
    header: Y4mHeader
    planes: list[tuple[np.ndarray, np.ndarray, np.ndarray]]


def _dimension(key: bytes, value: bytes, line: bytes) -> int:
    try:
        return int(value)
    except ValueError as e:
        raise FormatError(f"bad Y4M {key.decode()} value {value!r} in header: {line!r}") from e


def _parse_header(line: bytes) -> Y4mHeader:
    tokens = line.split()
    if not tokens or tokens[0] != SIGNATURE:
        raise FormatError("missing YUV4MPEG2 signature")

    width = height = None
    chroma = "420jpeg"
    for tok in tokens[1:]:
        key, value = tok[:1], tok[1:]
        if key == b"W":
            width = _dimension(key, value, line)
        elif key == b"H":
            height = _dimension(key, value, line)
        elif key == b"C":
            chroma = value.decode("ascii", "replace")

    if width is None or height is None or width < 2 or height < 2:
        raise FormatError(f"bad Y4M dimensions in header: {line!r}")
    if chroma not in SUPPORTED_CHROMA:
        raise FormatError(f"unsupported Y4M chroma '{chroma}' (8-bit 4:2:0 and 4:4:4 only)")
    return Y4mHeader(width=width, height=height, chroma=chroma, params=tokens[1:])


def read_y4m_planes(data: bytes) -> Y4mStream:
    """Разобрать поток в список плоскостей (Y, U, V) без перевода в RGB."""
    nl = data.find(b"\n")
    if nl < 0:
        raise FormatError("Y4M header is not terminated")
    header = _parse_header(data[:nl])
    size = header.frame_bytes
    ch, cw = header.chroma_shape
    y_len = header.width * header.height
    c_len = ch * cw

    planes: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    pos = nl + 1
    index = 0
    while pos < len(data):
        eol = data.find(b"\n", pos)
        if eol < 0 or not data[pos:eol].startswith(FRAME_TAG):
            raise FormatError(f"frame {index}: missing FRAME marker")
        pos = eol + 1
        payload = data[pos:pos + size]
        if len(payload) < size:
            raise TruncationError(index, size, len(payload))
        buf = np.frombuffer(payload, dtype=np.uint8)
        y = buf[:y_len].reshape(header.height, header.width)
        u = buf[y_len:y_len + c_len].reshape(ch, cw)
        v = buf[y_len + c_len:].reshape(ch, cw)
        planes.append((y, u, v))
        pos += size
        index += 1

    logger.debug("🎞️ Y4M %dx%d %s: %d кадров", header.width, header.height, header.chroma, index)
    return Y4mStream(header=header, planes=planes)


def write_y4m(stream: Y4mStream, out: BinaryIO) -> None:
    h = stream.header
    tokens = h.params or [b"W%d" % h.width, b"H%d" % h.height, b"C" + h.chroma.encode("ascii")]
    out.write(SIGNATURE + b" " + b" ".join(tokens) + b"\n")
    for y, u, v in stream.planes:
        out.write(FRAME_TAG + b"\n")
        out.write(np.ascontiguousarray(y, dtype=np.uint8).tobytes())
        out.write(np.ascontiguousarray(u, dtype=np.uint8).tobytes())
        out.write(np.ascontiguousarray(v, dtype=np.uint8).tobytes())


def yuv_to_rgb(y: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """BT.601, студийный диапазон; U/V должны быть уже в разрешении Y."""
    yf = 1.164 * (y.astype(np.float64) - 16.0)
    uf = u.astype(np.float64) - 128.0
    vf = v.astype(np.float64) - 128.0
    r = yf + 1.596 * vf
    g = yf - 0.392 * uf - 0.813 * vf
    b = yf + 2.017 * uf
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.floor(rgb + 0.5), 0, 255).astype(np.uint8)


def _upsample_chroma(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    # JPEG-размещение: каждый отсчёт покрывает блок 2x2
    return np.repeat(np.repeat(plane, 2, axis=0), 2, axis=1)[:height, :width]


def parse_y4m(data: bytes) -> list[Frame]:
    stream = read_y4m_planes(data)
    h = stream.header
    frames: list[Frame] = []
    for y, u, v in stream.planes:
        if h.subsampled:
            u = _upsample_chroma(u, h.height, h.width)
            v = _upsample_chroma(v, h.height, h.width)
        frames.append(Frame(yuv_to_rgb(y, u, v)))
    return frames


def read_y4m_file(path: str | Path) -> list[Frame]:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as e:
        raise InputIOError(str(p), e.strerror or str(e)) from e
    return parse_y4m(data)
