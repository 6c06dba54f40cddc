"""Experiment configuration file: one TOML document with a section per component.

```toml
[trainer]
alpha = 0.5
beta = 0.2
tau = 2
t_window = 60

[sim]
seed = 7
n_sessions = 100000

[paths]
logs = "out/logs.tsv"
snapshot = "out/snapshot.tsv"

[serve]
listen = "127.0.0.1:8080"
```

Relative paths are resolved against the directory of the file.
"""
from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError, InputFileError
from ..simulator.config import SimConfig
from ..trainer.config import TrainerConfig
from .settings import settings


class PathsConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    lexicon: Optional[Path] = None
    confusions: Optional[Path] = None
    logs: Optional[Path] = None
    snapshot: Optional[Path] = None
    truth: Optional[Path] = None

    def resolved(self, base: Path) -> "PathsConfig":
        values = {name: (base / value if value is not None and not value.is_absolute() else value)
                  for name, value in self.model_dump().items()}
        return PathsConfig(**values)


class ServeConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    listen: str = Field(default_factory=lambda: settings.listen)

    @field_validator("listen")
    @classmethod
    def _host_port(cls, value: str) -> str:
        split_address(value)
        return value

    @property
    def host(self) -> str:
        return split_address(self.listen)[0]

    @property
    def port(self) -> int:
        return split_address(self.listen)[1]


def split_address(address: str) -> tuple[str, int]:
    host, sep, port = address.rpartition(":")
    if not sep or not host or not port.isdigit() or not 0 < int(port) < 65536:
        raise ValueError(f"listen address must be HOST:PORT, got {address!r}")
    return host, int(port)


def require_inputs(**paths: Union[str, Path, None]) -> None:
    """Raise ``InputFileError`` for the first given path that does not exist; ``None`` is skipped."""
    for name, value in paths.items():
        if value is not None and not Path(value).exists():
            raise InputFileError(f"{name} path not found: {value}")


def _config_error(exc: ValidationError, source: str) -> ConfigError:
    details = "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
    )
    return ConfigError(f"invalid configuration in {source}: {details}")


class AppConfig(BaseModel):
    """Trainer, simulator, artifact paths and serving address in one validated object."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    trainer: TrainerConfig = Field(default_factory=TrainerConfig)
    sim: SimConfig = Field(default_factory=SimConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)
    serve: ServeConfig = Field(default_factory=ServeConfig)

    @model_validator(mode="after")
    def _trainer_window_covers_retries(self) -> "AppConfig":
        window = self.trainer.t_window
        if self.sim.retry_dt_max >= window:
            raise ValueError(
                f"sim.retry_dt_max ({self.sim.retry_dt_max}) must be smaller than trainer.t_window ({window})"
            )
        if self.sim.session_gap_min <= window:
            raise ValueError(
                f"sim.session_gap_min ({self.sim.session_gap_min}) must exceed trainer.t_window ({window})"
            )
        return self

    @classmethod
    def from_mapping(cls, data: dict[str, Any], source: str = "<mapping>") -> "AppConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise _config_error(exc, source) from None

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "AppConfig":
        path = Path(path)
        if not path.is_file():
            raise InputFileError(f"config file not found: {path}")
        try:
            with path.open("rb") as handle:
                data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
        config = cls.from_mapping(data, source=str(path))
        return config.model_copy(update={"paths": config.paths.resolved(path.resolve().parent)})

    def with_overrides(self, section: str, **values: Any) -> "AppConfig":
        """Replace keys of one section; ``None`` values mean "not given" and are ignored."""
        if section not in type(self).model_fields:
            raise ConfigError(f"unknown configuration section {section!r}")
        given = {key: value for key, value in values.items() if value is not None}
        if not given:
            return self
        data = self.model_dump()
        data[section] = {**data[section], **given}
        return self.from_mapping(data, source="command-line flags")

    def require_paths(self, *names: str, **given: Union[str, Path, None]) -> None:
        """Fail fast when an input path does not exist.

        ``names`` are keys of ``[paths]``; keyword arguments are paths taken from flags.
        """
        require_inputs(**{name: getattr(self.paths, name) for name in names}, **given)
