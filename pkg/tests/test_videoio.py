from __future__ import annotations

import io
import math

import numpy as np
import pytest
from PIL import Image

from app.errors import DimensionMismatchError, EmptyInputError, FormatError, RangeError, TruncationError
from app.video.frames import Clip, Frame
from app.video.images import load_frame_sequence, read_raw_rgb, save_frame_sequence, write_raw_rgb
from app.video.preprocess import (
    center_crop_window,
    crop,
    extract_clips,
    horizontal_flip,
    resize_bilinear,
    to_grayscale,
)
from app.video.y4m import Y4mHeader, Y4mStream, parse_y4m, read_y4m_planes, write_y4m


def _y4m_bytes(width: int, height: int, chroma: str, planes: list[tuple[bytes, bytes, bytes]]) -> bytes:
    out = io.BytesIO()
    out.write(f"YUV4MPEG2 W{width} H{height} F25:1 Ip A1:1 C{chroma}\n".encode())
    for y, u, v in planes:
        out.write(b"FRAME\n" + y + u + v)
    return out.getvalue()


# ═══════════════════════════════════════════════
# Y4M
# ═══════════════════════════════════════════════


def test_y4m_444_constant_white():
    plane = bytes([235]) * 16
    chroma = bytes([128]) * 16
    frames = parse_y4m(_y4m_bytes(4, 4, "444", [(plane, chroma, chroma)] * 2))
    assert len(frames) == 2
    assert (frames[0].width, frames[0].height) == (4, 4)
    assert (frames[1].pixels == 255).all()


def test_y4m_420_frame_count_from_payload():
    w, h = 6, 4
    y = bytes(range(24))
    c = bytes([128]) * 6
    data = _y4m_bytes(w, h, "420jpeg", [(y, c, c)] * 3)
    stream = read_y4m_planes(data)
    assert stream.header.frame_bytes == w * h * 3 // 2
    assert len(parse_y4m(data)) == 3


def test_y4m_truncated_frame_reports_index():
    y = bytes([100]) * 16
    c = bytes([128]) * 16
    data = _y4m_bytes(4, 4, "444", [(y, c, c)] * 2)
    with pytest.raises(TruncationError) as exc:
        parse_y4m(data[:-5])
    assert exc.value.frame_index == 1


@pytest.mark.parametrize(
    "header",
    [
        b"YUV4MPEG W4 H4\n",
        b"YUV4MPEG2 W4\n",
        b"YUV4MPEG2 Wabc H4\n",
        b"YUV4MPEG2 W8x H8 C444\n",
        b"YUV4MPEG2 W4 H4 C422\n",
        b"YUV4MPEG2 W4 H4 C444alpha\n",
        b"YUV4MPEG2 W4 H4 C420p10\n",
        b"YUV4MPEG2 W4 H4 C420mono\n",
    ],
)
def test_y4m_bad_header(header):
    with pytest.raises(FormatError):
        parse_y4m(header)


def test_y4m_planes_reencode_bit_exact(rng):
    w, h = 8, 6
    planes = [
        (rng.integers(0, 256, (h, w), dtype=np.uint8),
         rng.integers(0, 256, (h // 2, w // 2), dtype=np.uint8),
         rng.integers(0, 256, (h // 2, w // 2), dtype=np.uint8))
        for _ in range(3)
    ]
    data = _y4m_bytes(w, h, "420jpeg", [(y.tobytes(), u.tobytes(), v.tobytes()) for y, u, v in planes])
    stream = read_y4m_planes(data)
    out = io.BytesIO()
    write_y4m(stream, out)
    assert out.getvalue() == data


def test_y4m_matches_scalar_decoder(rng):
    w, h = 4, 4
    y = rng.integers(16, 236, (h, w), dtype=np.uint8)
    u = rng.integers(16, 241, (h // 2, w // 2), dtype=np.uint8)
    v = rng.integers(16, 241, (h // 2, w // 2), dtype=np.uint8)
    frame = parse_y4m(_y4m_bytes(w, h, "420jpeg", [(y.tobytes(), u.tobytes(), v.tobytes())]))[0]

    for row in range(h):
        for col in range(w):
            yy = 1.164 * (int(y[row, col]) - 16)
            uu = int(u[row // 2, col // 2]) - 128
            vv = int(v[row // 2, col // 2]) - 128
            expected = [yy + 1.596 * vv, yy - 0.392 * uu - 0.813 * vv, yy + 2.017 * uu]
            expected = [min(max(math.floor(c + 0.5), 0), 255) for c in expected]
            assert frame.pixels[row, col].tolist() == expected


def test_y4m_header_dataclass_roundtrip():
    header = Y4mHeader(width=4, height=2, chroma="444")
    stream = Y4mStream(header, [(np.zeros((2, 4), np.uint8),) * 3])
    out = io.BytesIO()
    write_y4m(stream, out)
    assert out.getvalue().startswith(b"YUV4MPEG2 W4 H2 C444\n")


# ═══════════════════════════════════════════════
# Кадры из каталога и сырой RGB
# ═══════════════════════════════════════════════


def test_frame_sequence_sorted_and_decoded(tmp_path):
    red = Frame.filled(4, 4, (255, 0, 0))
    save_frame_sequence([red] * 16, tmp_path)
    frames = load_frame_sequence(tmp_path)
    assert len(frames) == 16
    assert all((f.pixels == [255, 0, 0]).all() for f in frames)


def test_frame_sequence_png_alpha_dropped(tmp_path):
    rgba = np.zeros((4, 4, 4), dtype=np.uint8)
    rgba[..., 1] = 200
    rgba[..., 3] = 17
    Image.fromarray(rgba).save(tmp_path / "000.png")
    frames = load_frame_sequence(tmp_path)
    assert frames[0].pixels[0, 0].tolist() == [0, 200, 0]


def test_frame_sequence_empty_dir(tmp_path):
    with pytest.raises(EmptyInputError):
        load_frame_sequence(tmp_path)


def test_frame_sequence_mixed_sizes(tmp_path):
    save_frame_sequence([Frame.filled(8, 8, (1, 2, 3))], tmp_path / "a")
    save_frame_sequence([Frame.filled(4, 4, (1, 2, 3))], tmp_path / "b")
    (tmp_path / "a" / "000.ppm").rename(tmp_path / "000.ppm")
    (tmp_path / "b" / "000.ppm").rename(tmp_path / "001.ppm")
    with pytest.raises(DimensionMismatchError, match="001.ppm"):
        load_frame_sequence(tmp_path)


def test_raw_rgb_roundtrip(tmp_path, rng):
    frames = [Frame(rng.integers(0, 256, (5, 7, 3), dtype=np.uint8)) for _ in range(3)]
    path = write_raw_rgb(frames, tmp_path / "clip.rgb")
    back = read_raw_rgb(path)
    assert len(back) == 3
    assert all((a.pixels == b.pixels).all() for a, b in zip(frames, back))


def test_raw_rgb_truncated(tmp_path):
    path = write_raw_rgb([Frame.filled(4, 4, (9, 9, 9))] * 2, tmp_path / "clip.rgb")
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(TruncationError) as exc:
        read_raw_rgb(path)
    assert exc.value.frame_index == 1


# ═══════════════════════════════════════════════
# Геометрия
# ═══════════════════════════════════════════════


def _naive_bilinear(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w, _ = src.shape
    out = np.zeros((out_h, out_w, 3), dtype=np.uint8)
    for oy in range(out_h):
        sy = min(max((oy + 0.5) * (h / out_h) - 0.5, 0.0), h - 1.0)
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, h - 1)
        wy = sy - y0
        for ox in range(out_w):
            sx = min(max((ox + 0.5) * (w / out_w) - 0.5, 0.0), w - 1.0)
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, w - 1)
            wx = sx - x0
            for c in range(3):
                top = (1.0 - wx) * float(src[y0, x0, c]) + wx * float(src[y0, x1, c])
                bottom = (1.0 - wx) * float(src[y1, x0, c]) + wx * float(src[y1, x1, c])
                value = (1.0 - wy) * top + wy * bottom
                out[oy, ox, c] = min(max(math.floor(value + 0.5), 0), 255)
    return out


def test_resize_matches_naive_oracle(rng):
    src = rng.integers(0, 256, (16, 16, 3), dtype=np.uint8)
    out = resize_bilinear(Frame(src), 11, 23)
    assert (out.pixels == _naive_bilinear(src, 11, 23)).all()


def test_resize_constant_and_corners():
    const = resize_bilinear(Frame.filled(5, 9, (12, 200, 77)), 128, 171)
    assert (const.pixels == [12, 200, 77]).all()

    board = np.array([[[0] * 3, [255] * 3], [[255] * 3, [0] * 3]], dtype=np.uint8)
    up = resize_bilinear(Frame(board), 4, 4).pixels
    assert up[0, 0, 0] == 0 and up[0, 3, 0] == 255 and up[3, 0, 0] == 255 and up[3, 3, 0] == 0


def test_resize_same_size_is_identity(rng):
    frame = Frame(rng.integers(0, 256, (6, 6, 3), dtype=np.uint8))
    assert resize_bilinear(frame, 6, 6) is frame


@pytest.mark.parametrize(
    "count, clip_len, stride, offsets",
    [(33, 16, 16, [0, 16]), (16, 16, 16, [0]), (40, 16, 8, [0, 8, 16, 24]), (10, 16, 16, [])],
)
def test_extract_clips_offsets(count, clip_len, stride, offsets):
    frames = [Frame.filled(2, 2, (i, i, i)) for i in range(count)]
    clips = extract_clips(frames, clip_len, stride)
    assert [c.start for c in clips] == offsets
    assert all(c.count == clip_len for c in clips)


def test_center_crop_default_geometry():
    assert center_crop_window(128, 171, 112, 112) == (8, 29)
    clip = Clip.from_array(np.zeros((16, 128, 171, 3), dtype=np.uint8))
    out = crop(clip, 8, 29, 112, 112)
    assert (out.count, out.height, out.width) == (16, 112, 112)


def test_crop_full_frame_identity_and_range_error():
    clip = Clip.from_array(np.zeros((2, 128, 128, 3), dtype=np.uint8))
    assert crop(clip, 0, 0, 128, 128) is clip
    with pytest.raises(RangeError):
        crop(clip, 20, 0, 112, 112)


def test_horizontal_flip_involution_and_halves(rng):
    px = np.zeros((2, 4, 6, 3), dtype=np.uint8)
    px[:, :, :3] = (255, 0, 0)
    flipped = horizontal_flip(Clip.from_array(px))
    assert (flipped.frames[0].pixels[:, 3:] == [255, 0, 0]).all()
    assert (flipped.frames[0].pixels[:, :3] == 0).all()

    clip = Clip.from_array(rng.integers(0, 256, (3, 5, 7, 3), dtype=np.uint8))
    assert (horizontal_flip(horizontal_flip(clip)).stack() == clip.stack()).all()


def test_grayscale_formula(rng):
    assert np.allclose(to_grayscale(Frame.filled(2, 2, (255, 255, 255))).luma, 1.0)
    assert np.allclose(to_grayscale(Frame.filled(2, 2, (0, 0, 255))).luma, 0.114)
    px = rng.integers(0, 256, (4, 5, 3), dtype=np.uint8)
    luma = to_grayscale(Frame(px)).luma
    for y in range(4):
        for x in range(5):
            r, g, b = (float(c) for c in px[y, x])
            assert abs(luma[y, x] - (0.299 * r + 0.587 * g + 0.114 * b) / 255.0) < 1e-12


def test_clip_requires_two_frames_of_same_size():
    with pytest.raises(RangeError):
        Clip((Frame.filled(2, 2, (0, 0, 0)),))
    with pytest.raises(DimensionMismatchError):
        Clip((Frame.filled(2, 2, (0, 0, 0)), Frame.filled(3, 2, (0, 0, 0))))
