from __future__ import annotations

import numpy as np
import pytest

from app.video.frames import Clip
from tests.factories import smooth_texture


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def texture_clip() -> Clip:
    """8 кадров 32x32: текстура, сдвигаемая на (1, 0) за кадр."""
    tex = smooth_texture(7, 32, 32)
    stack = np.stack([np.roll(tex, k, axis=1) for k in range(8)])
    return Clip.from_array(np.floor(stack + 0.5).astype(np.uint8))


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Окружение без LOG_*/LABELS_* и без чужого .env."""
    for key in ("LOG_LEVEL", "LOG_FILE", "TIMEZONE", "APP_ENV", "LABELS_WORKERS", "LABELS_BINS", "LABELS_CONVENTIONS_VERSION"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    return monkeypatch
