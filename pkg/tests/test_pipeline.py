from __future__ import annotations

import csv

import numpy as np
import pytest

from app.config import FlowParams, build_run_config
from app.errors import ConfigError, RangeError
from app.flow.field import FlowField
from app.flow.flo import write_flo
from app.models import LabelSubset
from app.pipeline.export import csv_columns, read_jsonl, read_record_line, write_csv, write_jsonl
from app.pipeline.extract import ClipJob, jitter_rng, label_clip, prepare_clip, run_extraction
from app.pipeline.inspect import describe_record
from app.pipeline.records import (
    LabelRecord,
    all_label_names,
    denormalize_labels,
    label_ranges,
    normalize_labels,
    subset_names,
)
from app.pipeline.visualize import visualize
from app.utils.pgm import read_pgm
from app.video.frames import Clip, Frame
from app.video.preprocess import horizontal_flip
from app.video.images import save_frame_sequence, write_raw_rgb
from app.video.y4m import Y4mHeader, Y4mStream, write_y4m
from tests.factories import smooth_texture

SMALL = dict(resize=False, crop_mode="none", input_format="raw")


def _moving_frames(count: int, h: int = 16, w: int = 16, seed: int = 4) -> list[Frame]:
    tex = smooth_texture(seed, h, w)
    return [Frame(np.floor(np.roll(tex, k, axis=1) + 0.5).astype(np.uint8)) for k in range(count)]


def _record(**overrides) -> LabelRecord:
    data = dict(
        clip_id="clip:000000",
        source="clip.y4m",
        frame_range=(0, 16),
        motion=tuple([6, 4, 3, 7] + [0] * 8 + [2, 14]),
        appearance=tuple([6, 1, 0, 7] + [0] * 8 + [7]),
        params_digest="abc",
        conventions="mbcd-labels/1",
    )
    data.update(overrides)
    return LabelRecord(**data)


# ═══════════════════════════════════════════════
# Нормализация и имена
# ═══════════════════════════════════════════════


def test_normalize_examples():
    rec = _record()
    norm = rec.normalized()
    names = all_label_names()
    assert norm[names.index("p1_u_o")] == 4 / 7
    assert norm[names.index("p1_v_o")] == 1.0
    assert norm[names.index("p2_u_l")] == 0.0
    assert norm[names.index("g_v")] == 1.0
    assert norm[names.index("p1_u_l")] == 6 / 15
    assert all(0.0 <= v <= 1.0 for v in norm)


def test_normalize_roundtrips_to_integers():
    rec = _record()
    assert denormalize_labels(rec.normalized(), 16) == rec.values()


def test_two_frame_clip_frame_index_normalizes_to_zero():
    norm = normalize_labels([0] * 14, [0] * 13, 2)
    assert norm == [0.0] * 27
    with pytest.raises(RangeError):
        normalize_labels([0] * 14, [0] * 12, 16)


def test_label_ranges():
    ranges = label_ranges(16)
    assert ranges["p1_u_l"] == 15 and ranges["p2_p_d"] == 3 and ranges["p3_v_l"] == 7
    assert ranges["p1_u_o"] == 7 and ranges["c_g"] == 7 and ranges["g_u"] == 14


def test_subset_names():
    assert len(subset_names(LabelSubset.ALL)) == 27
    assert len(subset_names(LabelSubset.MOTION)) == 14
    assert subset_names(LabelSubset.GLOBAL) == ("g_u", "g_v", "c_g")
    assert subset_names(LabelSubset.PATTERN2) == (
        "p2_u_l", "p2_u_o", "p2_v_l", "p2_v_o", "p2_p_d", "p2_c_d", "p2_p_s", "p2_c_s",
    )
    assert len(subset_names(LabelSubset.LOCAL)) == 24


def test_record_rejects_wrong_lengths():
    with pytest.raises(RangeError):
        _record(motion=(0,) * 13)


def test_record_dict_key_order_and_roundtrip():
    rec = _record(label_subset=LabelSubset.GLOBAL, normalize=True, crop=(8, 29, 112, 112))
    data = rec.to_dict()
    assert list(data) == [
        "clip_id", "source", "frame_range", "pattern_set", "motion", "appearance",
        "params_digest", "conventions", "crop", "flipped", "label_subset",
        "selected", "normalized", "analytic",
    ]
    assert data["selected"] == [["g_u", 2], ["g_v", 14], ["c_g", 7]]
    assert LabelRecord.from_dict(data) == rec


# ═══════════════════════════════════════════════
# Конфигурация запуска
# ═══════════════════════════════════════════════


def test_random_crop_needs_seed():
    with pytest.raises(ConfigError, match="seed"):
        build_run_config(crop_mode="random")
    assert build_run_config(crop_mode="random", seed=1).seed == 1


def test_crop_larger_than_resize_rejected():
    with pytest.raises(ConfigError):
        build_run_config(resize_height=100, resize_width=171)


def test_params_digest_tracks_label_affecting_params():
    base = build_run_config()
    assert base.params_digest() == build_run_config(workers=4, normalize=True).params_digest()
    assert base.params_digest() != build_run_config(bins=8).params_digest()
    assert base.params_digest() != build_run_config(flow=FlowParams(alpha=12.0)).params_digest()
    assert base.params_digest() != build_run_config(conventions_version="x/2").params_digest()
    assert base.params_digest() != build_run_config(flow_provider="injected").params_digest()


# ═══════════════════════════════════════════════
# Подготовка клипа
# ═══════════════════════════════════════════════


def test_default_geometry_gives_16x112x112(rng):
    frames = [Frame(rng.integers(0, 256, (48, 64, 3), dtype=np.uint8)) for _ in range(16)]
    prepared = prepare_clip(Clip(tuple(frames)), build_run_config())
    assert (prepared.clip.count, prepared.clip.height, prepared.clip.width) == (16, 112, 112)
    assert prepared.crop == (8, 29, 112, 112)
    assert not prepared.flipped


def test_resize_scales_injected_flows():
    clip = Clip((Frame.filled(64, 85, (0, 0, 0)),) * 2)
    config = build_run_config(resize_height=128, resize_width=170, crop_mode="none")
    prepared = prepare_clip(clip, config, flows=[FlowField.constant(64, 85, 1.0, -1.0)])
    flow = prepared.flows[0]
    assert flow.shape == (128, 170)
    assert np.allclose(flow.u, 2.0) and np.allclose(flow.v, -2.0)


def test_random_jitter_is_seeded_and_moves_flows():
    clip = Clip((Frame.filled(40, 40, (9, 9, 9)),) * 3, start=16)
    flows = [FlowField.constant(40, 40, 1.0, 0.5)] * 2
    config = build_run_config(resize=False, crop_mode="random", crop_height=32, crop_width=32, seed=7)
    a = prepare_clip(clip, config, source_index=2, flows=flows)
    b = prepare_clip(clip, config, source_index=2, flows=flows)
    assert a.crop == b.crop and a.flipped == b.flipped

    rng = jitter_rng(7, 2, 16)
    top, left = int(rng.integers(0, 9)), int(rng.integers(0, 9))
    flipped = bool(rng.random() < 0.5)
    assert a.crop == (top, left, 32, 32) and a.flipped == flipped
    assert np.all(a.flows[0].u == (-1.0 if flipped else 1.0))
    assert np.all(a.flows[0].v == 0.5)


# ═══════════════════════════════════════════════
# Извлечение
# ═══════════════════════════════════════════════


def test_extraction_33_frames_two_records(tmp_path):
    src = write_raw_rgb(_moving_frames(33), tmp_path / "clip.rgb")
    result = run_extraction(build_run_config(**SMALL), [src])
    assert result.ok
    assert [r.frame_range for r in result.records] == [(0, 16), (16, 32)]
    assert [r.clip_id for r in result.records] == ["clip:000000", "clip:000016"]
    for rec in result.records:
        ranges = label_ranges(16)
        assert all(0 <= v <= ranges[n] for n, v in rec.named().items())


def test_extraction_is_byte_identical(tmp_path):
    src = write_raw_rgb(_moving_frames(20), tmp_path / "clip.rgb")
    config = build_run_config(clip_len=8, stride=4, **SMALL)
    write_jsonl(run_extraction(config, [src]).records, tmp_path / "a.jsonl")
    write_jsonl(run_extraction(config, [src]).records, tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_workers_do_not_change_output(tmp_path):
    sources = [write_raw_rgb(_moving_frames(12, seed=s), tmp_path / f"s{s}.rgb") for s in range(3)]
    serial = run_extraction(build_run_config(clip_len=4, stride=4, **SMALL), sources)
    parallel = run_extraction(build_run_config(clip_len=4, stride=4, workers=3, **SMALL), sources)
    assert [r.to_dict() for r in serial.records] == [r.to_dict() for r in parallel.records]
    assert [r.clip_id for r in serial.records][:4] == ["s0:000000", "s0:000004", "s0:000008", "s1:000000"]


def test_bad_source_is_skipped(tmp_path):
    good = write_raw_rgb(_moving_frames(8), tmp_path / "good.rgb")
    result = run_extraction(build_run_config(clip_len=4, stride=4, **SMALL), [tmp_path / "missing.rgb", good])
    assert not result.ok
    assert len(result.failures) == 1 and "missing.rgb" in result.failures[0].describe()
    assert len(result.records) == 2


def test_short_source_gives_no_records(tmp_path):
    src = write_raw_rgb(_moving_frames(5), tmp_path / "short.rgb")
    result = run_extraction(build_run_config(**SMALL), [src])
    assert result.ok and result.records == []


def test_injected_flows_for_frames_directory(tmp_path):
    frames_dir = tmp_path / "frames"
    save_frame_sequence(_moving_frames(4), frames_dir)
    for i in range(3):
        write_flo(FlowField.constant(16, 16, 1.0, 0.0), frames_dir / "flows" / f"{i:03d}.flo")
    config = build_run_config(clip_len=4, stride=4, resize=False, crop_mode="none", input_format="frames", flow_provider="injected")
    result = run_extraction(config, [frames_dir])
    assert result.ok
    assert list(result.records[0].motion) == [0] * 14


def test_injected_flows_missing_is_source_failure(tmp_path):
    src = write_raw_rgb(_moving_frames(4), tmp_path / "clip.rgb")
    (tmp_path / "clip.flows").mkdir()
    write_flo(FlowField.zeros(16, 16), tmp_path / "clip.flows" / "000.flo")
    config = build_run_config(clip_len=4, stride=4, flow_provider="injected", **SMALL)
    result = run_extraction(config, [src])
    assert not result.ok and result.records == []


def test_malformed_y4m_header_is_source_failure(tmp_path):
    bad = tmp_path / "bad.y4m"
    bad.write_bytes(b"YUV4MPEG2 W8x H8 C444\nFRAME\n" + bytes(8 * 8 * 3))
    good = tmp_path / "good.y4m"
    planes = []
    for frame in _moving_frames(8):
        y = frame.pixels.mean(axis=2).astype(np.uint8)
        planes.append((y, np.full_like(y, 128), np.full_like(y, 128)))
    with good.open("wb") as fh:
        write_y4m(Y4mStream(Y4mHeader(width=16, height=16, chroma="444"), planes), fh)
    config = build_run_config(clip_len=4, stride=4, resize=False, crop_mode="none", input_format="y4m")
    result = run_extraction(config, [bad, good])
    assert not result.ok
    assert len(result.failures) == 1 and "bad.y4m" in result.failures[0].describe()
    assert [r.clip_id for r in result.records] == ["good:000000", "good:000004"]


# ═══════════════════════════════════════════════
# Свойства на сгенерированных клипах
# ═══════════════════════════════════════════════

CASES_PER_CHUNK = 50


def _mirror_block(block: int) -> int:
    row, col = divmod(block, 4)
    return 4 * row + (3 - col)


def _generated_job(seed: int) -> tuple[ClipJob, int]:
    """Случайные кадры и поля потока; стороны кадра — от 8 до 20."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    h, w = (int(x) for x in rng.choice([8, 12, 16], size=2))
    fh, fw = h + int(rng.integers(0, 5)), w + int(rng.integers(0, 5))
    stack = rng.integers(0, 256, (n, fh, fw, 3), dtype=np.uint8)
    flows = tuple(FlowField(rng.normal(0.0, 2.0, (fh, fw)), rng.normal(0.0, 2.0, (fh, fw))) for _ in range(n - 1))
    job = ClipJob(source_index=0, source="gen", source_name="gen", clip=Clip.from_array(stack), flows=flows)
    return job, n


@pytest.mark.parametrize("chunk", range(20))
def test_generated_clips_ranges_and_flip(chunk):
    for seed in range(chunk * CASES_PER_CHUNK, (chunk + 1) * CASES_PER_CHUNK):
        job, n = _generated_job(seed)
        h, w = job.clip.height - job.clip.height % 4, job.clip.width - job.clip.width % 4
        jittered = build_run_config(
            clip_len=n, stride=n, resize=False, crop_mode="random", crop_height=h, crop_width=w,
            seed=seed, flow_provider="injected",
        )
        record = label_clip(job, jittered)
        ranges = label_ranges(n)
        assert all(0 <= v <= ranges[name] for name, v in record.named().items()), seed

        prepared = prepare_clip(job.clip, jittered, job.source_index, job.flows)
        assert record.flipped == prepared.flipped
        plain = build_run_config(clip_len=n, stride=n, resize=False, crop_mode="none", flow_provider="injected")
        direct = label_clip(ClipJob(0, "gen", "gen", prepared.clip, prepared.flows), plain)
        assert (direct.motion, direct.appearance) == (record.motion, record.appearance), seed

        mirrored = label_clip(
            ClipJob(
                0, "gen", "gen",
                horizontal_flip(prepared.clip),
                tuple(FlowField(-f.u[:, ::-1], f.v[:, ::-1]) for f in prepared.flows),
            ),
            plain,
        )
        a, b = direct.named(), mirrored.named()
        assert b["p1_u_l"] == _mirror_block(a["p1_u_l"]), seed
        assert b["p1_v_l"] == _mirror_block(a["p1_v_l"]), seed
        assert b["p2_u_l"] == a["p2_u_l"] and b["p2_v_l"] == a["p2_v_l"], seed
        for p in ("p1", "p2"):
            assert b[f"{p}_u_o"] == 7 - a[f"{p}_u_o"], seed
            assert b[f"{p}_v_o"] == (3 - a[f"{p}_v_o"]) % 8, seed
        assert (b["g_u"], b["g_v"], b["c_g"]) == (a["g_u"], a["g_v"], a["c_g"]), seed
        rings = [f"p2_{k}" for k in ("p_d", "c_d", "p_s", "c_s")]
        assert [b[k] for k in rings] == [a[k] for k in rings], seed


# ═══════════════════════════════════════════════
# Экспорт, inspect, visualize
# ═══════════════════════════════════════════════


def test_jsonl_and_record_lines(tmp_path):
    records = [_record(), _record(clip_id="clip:000016", frame_range=(16, 32))]
    path = tmp_path / "labels.jsonl"
    assert write_jsonl(records, path) == 2
    assert read_jsonl(path) == records
    assert read_record_line(path, 2)["clip_id"] == "clip:000016"
    with pytest.raises(RangeError):
        read_record_line(path, 3)
    with pytest.raises(RangeError):
        read_record_line(path, 0)


def test_csv_columns_and_values(tmp_path):
    path = tmp_path / "labels.csv"
    write_csv([_record()], path, subset=LabelSubset.GLOBAL)
    with path.open(encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(csv_columns(LabelSubset.GLOBAL))
    assert rows[0] == ["clip_id", "source", "frame_start", "frame_end", "g_u", "g_v", "c_g"]
    assert rows[1] == ["clip:000000", "clip.y4m", "0", "16", "2", "14", "7"]
    assert len(csv_columns()) == 31


def test_describe_record_uses_one_based_names():
    lines = describe_record(_record().to_dict())
    text = "\n".join(lines)
    assert "6 (block 7)" in text
    assert "4 (piece 5, 180°–225°)" in text
    assert "1 (blue)" in text
    assert "pair 2 (frames 2→3)" in text


def test_describe_analytic_record_with_gaps():
    data = _record().to_dict()
    data["motion"][1] = None
    data["analytic"] = True
    text = "\n".join(describe_record(data))
    assert "analytic truth" in text and "orientation —" in text


def test_visualize_writes_maps(tmp_path):
    src = write_raw_rgb(_moving_frames(6), tmp_path / "clip.rgb")
    config = build_run_config(clip_len=4, stride=4, **SMALL)
    paths = visualize(src, config, tmp_path / "out" / "vis", dump_flow=True)
    names = sorted(p.name for p in paths)
    assert "vis_mu.pgm" in names and "vis_grid4x4.pgm" in names and "vis_diversity.csv" in names
    assert sum(n.startswith("vis_flow_") for n in names) == 3
    grid = read_pgm(tmp_path / "out" / "vis_grid4x4.pgm")
    assert grid.shape == (16, 16) and grid[0, 0] == 0 and grid[-1, -1] == 255
    rows = (tmp_path / "out" / "vis_diversity.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 1 + 16 + 4 + 8
