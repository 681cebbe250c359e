# app/config.py
from __future__ import annotations

import hashlib
import json
import logging
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.errors import ConfigError
from app.models import CropMode, FlowProviderKind, InputFormat, LabelSubset

CONVENTIONS_VERSION = "mbcd-labels/1"

# Python 3.10 compat: logging.getLevelNamesMapping() appeared in 3.11 and returns a copy of _nameToLevel.
_level_names_mapping = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ENV mode
    app_env: str = Field("prod", alias="APP_ENV")  # dev | prod

    # Logging
    log_level: str = Field("INFO", alias="LOG_LEVEL")
    log_file: str = Field("logs/labels.log", alias="LOG_FILE")
    timezone: str = Field("UTC", alias="TIMEZONE")

    # Extraction defaults
    default_workers: int = Field(1, alias="LABELS_WORKERS")
    default_bins: int = Field(16, alias="LABELS_BINS")
    conventions_version: str = Field(CONVENTIONS_VERSION, alias="LABELS_CONVENTIONS_VERSION")

    @model_validator(mode="after")
    def normalize_fields(self):
        """Приводим уровень логов к виду, понятному logging."""
        level = self.log_level.strip().upper()
        if level not in _level_names_mapping():
            print(f"⚠️ Неизвестный LOG_LEVEL={self.log_level!r}, используем INFO")
            level = "INFO"
        self.log_level = level
        if self.default_workers < 1:
            self.default_workers = 1
        return self

    @property
    def is_dev(self) -> bool:
        return self.app_env.lower() == "dev"

    @property
    def is_prod(self) -> bool:
        return self.app_env.lower() == "prod"


class FlowParams(BaseModel):
    """Параметры вариационного решателя потока."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(30.0, gt=0)
    gamma: float = Field(10.0, ge=0)
    pyramid_factor: float = Field(0.5, gt=0, lt=1)
    min_level_size: int = Field(16, ge=2)
    warp_iterations: int = Field(3, ge=1)
    fixed_point_iterations: int = Field(5, ge=1)
    sor_iterations: int = Field(25, ge=1)
    sor_omega: float = Field(1.8, gt=0, lt=2)
    epsilon_psi: float = Field(1e-3, gt=0)

    def digest_payload(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class RunConfig(BaseModel):
    """Конфигурация одного запуска извлечения меток."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    clip_len: int = Field(16, ge=2)
    stride: int = Field(16, ge=1)
    resize_height: int = Field(128, ge=2)
    resize_width: int = Field(171, ge=2)
    resize: bool = True
    crop_mode: CropMode = CropMode.CENTER
    crop_height: int = Field(112, ge=2)
    crop_width: int = Field(112, ge=2)
    input_format: InputFormat = InputFormat.Y4M
    flow_provider: FlowProviderKind = FlowProviderKind.VARIATIONAL
    flow: FlowParams = Field(default_factory=FlowParams)
    bins: int = Field(16, ge=1, le=256)
    normalize: bool = False
    seed: int | None = None
    workers: int = Field(1, ge=1)
    label_subset: LabelSubset = LabelSubset.ALL
    conventions_version: str = CONVENTIONS_VERSION

    @model_validator(mode="after")
    def check_geometry(self):
        if self.crop_mode is CropMode.RANDOM and self.seed is None:
            raise ValueError("random crop/flip requires an explicit seed")
        if self.resize and self.crop_mode is not CropMode.NONE:
            if self.crop_height > self.resize_height or self.crop_width > self.resize_width:
                raise ValueError(
                    f"crop {self.crop_height}x{self.crop_width} exceeds resize "
                    f"{self.resize_height}x{self.resize_width}"
                )
        return self

    def params_digest(self) -> str:
        """sha256 по всем параметрам, влияющим на значения меток."""
        payload = {
            "flow_provider": self.flow_provider.value,
            "flow": self.flow.digest_payload(),
            "bins": self.bins,
            "conventions": self.conventions_version,
        }
        raw = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]


def build_run_config(**kwargs: Any) -> RunConfig:
    """Собрать RunConfig, превращая ошибки валидации в ConfigError."""
    try:
        return RunConfig(**kwargs)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def parse_resize(value: str) -> tuple[int, int]:
    """'171x128' → (height=128, width=171)."""
    try:
        w_str, h_str = value.lower().split("x", 1)
        width, height = int(w_str), int(h_str)
    except ValueError as e:
        raise ConfigError(f"bad resize value {value!r}, expected WIDTHxHEIGHT") from e
    return height, width


settings = Settings()
