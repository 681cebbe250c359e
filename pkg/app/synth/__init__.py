"""Синтетические клипы с известным потоком и метками."""

from app.synth.presets import (
    fig2_scene,
    gen_global_pan,
    gen_random_scene,
    gen_rotating_texture,
    periodic_texture,
)
from app.synth.scenes import SynthClip, SynthTruth, Window, derive_truth, gen_moving_shapes, render_shapes
from app.synth.shapes import ShapeKind, ShapeSpec, velocity_from_angle

__all__ = [
    "ShapeKind",
    "ShapeSpec",
    "SynthClip",
    "SynthTruth",
    "Window",
    "derive_truth",
    "fig2_scene",
    "gen_global_pan",
    "gen_moving_shapes",
    "gen_random_scene",
    "gen_rotating_texture",
    "periodic_texture",
    "render_shapes",
    "velocity_from_angle",
]
