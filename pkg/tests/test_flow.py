from __future__ import annotations

import math

import numpy as np
import pytest

from app.config import FlowParams
from app.errors import DimensionMismatchError, FlowProviderError, FormatError, NumericalFailureError, RangeError, TruncationError
from app.flow import solver as solver_module
from app.flow.field import FlowField
from app.flow.flo import load_flow_dir, read_flo, write_flo
from app.flow.providers import InjectedFlowProvider, VariationalFlowProvider, clip_flows
from app.flow.pyramid import gaussian_pyramid, upsample_flow, warp_bilinear, warp_plane
from app.flow.solver import energy, solve_flow
from app.synth.presets import gen_rotating_texture
from app.video.frames import Clip, Frame, GrayFrame
from app.video.preprocess import to_grayscale


def _sinusoids(h: int, w: int, shift: float = 0.0) -> GrayFrame:
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    x = xx - shift
    y = yy
    luma = (
        0.5
        + 0.12 * np.sin(0.31 * x + 0.17 * y)
        + 0.10 * np.sin(-0.23 * x + 0.37 * y + 1.0)
        + 0.08 * np.sin(0.47 * x - 0.29 * y + 2.0)
        + 0.06 * np.sin(0.11 * x + 0.53 * y + 0.5)
    )
    return GrayFrame(luma)


# ═══════════════════════════════════════════════
# Пирамида и варпинг
# ═══════════════════════════════════════════════


def test_pyramid_level_sizes(rng):
    levels = gaussian_pyramid(GrayFrame(rng.random((64, 64))), 0.5, 8)
    assert [lvl.width for lvl in levels] == [64, 32, 16, 8]
    assert all(np.isfinite(lvl.luma).all() for lvl in levels)


def test_pyramid_constant_image_stays_constant():
    levels = gaussian_pyramid(GrayFrame(np.full((40, 56), 0.37)), 0.5, 8)
    assert len(levels) == 3
    for lvl in levels:
        assert np.abs(lvl.luma - 0.37).max() < 1e-9


def test_pyramid_smoothing_reduces_variation(rng):
    levels = gaussian_pyramid(GrayFrame(rng.random((64, 64))), 0.5, 8)
    spreads = [float(lvl.luma.std()) for lvl in levels]
    assert spreads == sorted(spreads, reverse=True)


def test_warp_zero_flow_is_identity(rng):
    img = GrayFrame(rng.random((12, 9)))
    out = warp_bilinear(img, FlowField.zeros(12, 9))
    assert np.array_equal(out.luma, img.luma)


def test_warp_integer_shift_on_ramp():
    ramp = np.tile(np.arange(10, dtype=np.float64), (6, 1))
    out = warp_bilinear(GrayFrame(ramp), FlowField.constant(6, 10, 1.0, 0.0))
    assert np.array_equal(out.luma[:, :-1], ramp[:, 1:])
    assert np.array_equal(out.luma[:, -1], ramp[:, -1])


def test_warp_matches_naive_sampler(rng):
    h, w = 10, 13
    plane = rng.random((h, w))
    u = rng.uniform(-0.9, 0.9, (h, w))
    v = rng.uniform(-0.9, 0.9, (h, w))
    out = warp_plane(plane, u, v)
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            sx, sy = x + u[y, x], y + v[y, x]
            x0, y0 = math.floor(sx), math.floor(sy)
            fx, fy = sx - x0, sy - y0
            top = (1 - fx) * plane[y0, x0] + fx * plane[y0, x0 + 1]
            bottom = (1 - fx) * plane[y0 + 1, x0] + fx * plane[y0 + 1, x0 + 1]
            assert abs(out[y, x] - ((1 - fy) * top + fy * bottom)) < 1e-10


def test_warp_rejects_mismatched_flow(rng):
    with pytest.raises(DimensionMismatchError):
        warp_bilinear(GrayFrame(rng.random((4, 4))), FlowField.zeros(4, 5))


def test_upsample_flow_scales_values():
    u, v = upsample_flow(np.full((8, 8), 1.5), np.full((8, 8), -0.5), 16, 24)
    assert u.shape == (16, 24)
    assert np.allclose(u, 4.5) and np.allclose(v, -1.0)


# ═══════════════════════════════════════════════
# .flo
# ═══════════════════════════════════════════════


def test_flo_roundtrip_float32(tmp_path, rng):
    flow = FlowField(rng.normal(size=(5, 7)), rng.normal(size=(5, 7)))
    back = read_flo(write_flo(flow, tmp_path / "a.flo"))
    assert back.shape == (5, 7)
    assert np.array_equal(back.u, flow.u.astype(np.float32).astype(np.float64))
    assert np.array_equal(back.v, flow.v.astype(np.float32).astype(np.float64))


def test_flo_bad_magic_and_truncation(tmp_path):
    path = write_flo(FlowField.zeros(3, 3), tmp_path / "a.flo")
    raw = path.read_bytes()
    path.write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(FormatError, match="magic"):
        read_flo(path)
    path.write_bytes(raw[:-4])
    with pytest.raises(TruncationError):
        read_flo(path)


def test_load_flow_dir_sorted(tmp_path):
    for i in (2, 0, 1):
        write_flo(FlowField.constant(2, 2, float(i), 0.0), tmp_path / f"{i:03d}.flo")
    flows = load_flow_dir(tmp_path)
    assert [f.u[0, 0] for f in flows] == [0.0, 1.0, 2.0]


# ═══════════════════════════════════════════════
# Решатель
# ═══════════════════════════════════════════════


def test_identical_frames_give_zero_flow():
    frame = _sinusoids(32, 32)
    flow = solve_flow(frame, frame)
    assert np.abs(flow.u).max() < 1e-3
    assert np.abs(flow.v).max() < 1e-3


def test_solver_is_deterministic():
    prev, nxt = _sinusoids(32, 40), _sinusoids(32, 40, shift=1.0)
    params = FlowParams(sor_iterations=10)
    a = solve_flow(prev, nxt, params)
    b = solve_flow(prev, nxt, params)
    assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)


def test_solver_rejects_size_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_flow(_sinusoids(16, 16), _sinusoids(16, 20))


def test_solver_numerical_failure_names_level(monkeypatch):
    def broken(img, u, v, params, red):
        return u + np.nan, v

    monkeypatch.setattr(solver_module, "_warp_step", broken)
    with pytest.raises(NumericalFailureError) as exc:
        solve_flow(_sinusoids(32, 32), _sinusoids(32, 32, shift=1.0))
    assert exc.value.level == 1


def test_energy_of_true_flow_below_zero_flow():
    prev, nxt = _sinusoids(48, 48), _sinusoids(48, 48, shift=1.0)
    params = FlowParams()
    assert energy(prev, nxt, FlowField.constant(48, 48, 1.0, 0.0), params) < energy(
        prev, nxt, FlowField.zeros(48, 48), params
    )


def test_energy_counts_intensity_in_grey_levels():
    # кадры отличаются на один уровень из 255: остаток данных ровно 1 на пиксель
    h, w = 12, 10
    params = FlowParams()
    prev = GrayFrame(np.full((h, w), 0.5))
    nxt = GrayFrame(np.full((h, w), 0.5 + 1.0 / 255.0))
    eps = params.epsilon_psi
    expected = h * w * (math.sqrt(1.0 + eps * eps) + (params.gamma + params.alpha) * eps)
    assert energy(prev, nxt, FlowField.zeros(h, w), params) == pytest.approx(expected, rel=1e-6)


def test_solver_output_energy_not_above_zero_flow():
    prev, nxt = _sinusoids(48, 48), _sinusoids(48, 48, shift=1.0)
    params = FlowParams()
    flow = solve_flow(prev, nxt, params)
    assert energy(prev, nxt, flow, params) <= energy(prev, nxt, FlowField.zeros(48, 48), params)


@pytest.mark.slow
def test_translation_recovered_and_energy_non_increasing():
    prev, nxt = _sinusoids(112, 112), _sinusoids(112, 112, shift=1.5)
    finest: list[float] = []

    def on_warp(level: int, k: int, value: float) -> None:
        if level == 0:
            finest.append(value)

    flow = solve_flow(prev, nxt, on_warp=on_warp)
    truth = FlowField.constant(112, 112, 1.5, 0.0)
    assert flow.endpoint_error(truth, border=0.1) < 0.5
    assert len(finest) == FlowParams().warp_iterations + 1
    for before, after in zip(finest, finest[1:]):
        assert after <= before * (1.0 + 1e-6)


@pytest.mark.slow
def test_rotation_recovered():
    synth = gen_rotating_texture(3, max_displacement=2.0)
    prev, nxt = (to_grayscale(f) for f in synth.clip.frames)
    flow = solve_flow(prev, nxt)
    assert np.hypot(synth.flows[0].u, synth.flows[0].v).max() == pytest.approx(2.0)
    assert flow.endpoint_error(synth.flows[0], border=0.1) < 0.7


@pytest.mark.slow
def test_swapped_frames_negate_translation():
    prev, nxt = _sinusoids(112, 112), _sinusoids(112, 112, shift=1.5)
    forward = solve_flow(prev, nxt)
    backward = solve_flow(nxt, prev)
    assert backward.endpoint_error(FlowField(-forward.u, -forward.v), border=0.1) < 0.2
    assert backward.endpoint_error(FlowField.constant(112, 112, -1.5, 0.0), border=0.1) < 0.5

# ═══════════════════════════════════════════════
# Провайдеры
# ═══════════════════════════════════════════════


def test_clip_flows_count_with_injected(rng):
    clip = Clip.from_array(rng.integers(0, 256, (16, 8, 8, 3), dtype=np.uint8))
    injected = [FlowField.constant(8, 8, i, 0.0) for i in range(15)]
    flows = clip_flows(clip, InjectedFlowProvider(injected))
    assert len(flows) == 15
    assert [f.u[0, 0] for f in flows] == list(range(15))

    two = Clip((Frame.filled(8, 8, (1, 1, 1)),) * 2)
    assert len(clip_flows(two, InjectedFlowProvider(injected[:1]))) == 1


def test_static_clip_variational_gives_zero_fields():
    clip = Clip((Frame.filled(32, 32, (10, 120, 200)),) * 5)
    flows = clip_flows(clip, VariationalFlowProvider())
    assert len(flows) == 4
    assert all(np.abs(f.u).max() < 1e-3 and np.abs(f.v).max() < 1e-3 for f in flows)


def test_provider_failure_names_pair():
    clip = Clip((Frame.filled(8, 8, (0, 0, 0)),) * 4)
    with pytest.raises(FlowProviderError) as exc:
        clip_flows(clip, InjectedFlowProvider([FlowField.zeros(8, 8)] * 2))
    assert exc.value.pair_index == 2
    assert isinstance(exc.value.cause, RangeError)


def test_provider_wrong_shape_rejected():
    clip = Clip((Frame.filled(8, 8, (0, 0, 0)),) * 2)
    with pytest.raises(FlowProviderError) as exc:
        clip_flows(clip, InjectedFlowProvider([FlowField.zeros(8, 9)]))
    assert isinstance(exc.value.cause, DimensionMismatchError)


def test_endpoint_error_border():
    a = FlowField.zeros(10, 10)
    u = np.zeros((10, 10))
    u[0, :] = 5.0
    assert a.endpoint_error(FlowField(u, np.zeros((10, 10))), border=0.1) == 0.0
