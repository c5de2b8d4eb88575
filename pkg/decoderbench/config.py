# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Settings class for the decoder workbench.
    """

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="DECODERBENCH_", extra="ignore", env_file_encoding="utf-8"
    )

    # training defaults
    epochs: int = 200
    batch_size: int = 256
    learning_rate: float = 0.005
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    init_scale: float = 0.1
    eval_every: int = 10
    # writes wall-clock seconds into the trace CSV; off keeps traces byte-stable
    trace_timing: bool = False

    workers: int = 1
    sampler_chunk_size: int = 4096  # shots per RNG stream
    simulator_max_qubits: int = 24
    mld_max_mechanisms: int = 24
    mwpm_max_defects: int = 16
    probability_floor: float = 1e-12

    storage_backend: str = "local"
    storage_path: str | None = None

    log_level: str = "INFO"
    sentry_dsn: str | None = None


_active: Settings | None = None


@lru_cache()
def _environment_settings() -> Settings:
    return Settings()


def settings() -> Settings:
    return _active if _active is not None else _environment_settings()


def configure(new: Settings | None) -> None:
    """
    Installs ``new`` as the process-wide settings; ``None`` goes back to the environment.
    """
    global _active
    _active = new


def read_config_file(path: str | Path) -> dict[str, str]:
    """
    Reads a ``key = value`` file. Keys must be Settings fields.

    :param path: The file to read
    :return: The raw string values, keyed by field name
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ValueError(f"{path}:{number}: expected 'key = value'")
        if key not in Settings.model_fields:
            raise ValueError(f"{path}:{number}: unknown setting '{key}'")
        values[key] = value.strip()
    return values


def load_settings(config_file: str | Path | None = None, **overrides) -> Settings:
    values = read_config_file(config_file) if config_file is not None else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)
