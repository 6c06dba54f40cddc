"""Synthetic query-log parameters."""
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SimConfig(BaseModel):
    """Behavioral model of voice search sessions with a phonetic ASR-error channel."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, ge=0)
    n_users: int = Field(default=2000, gt=0)
    n_sessions: int = Field(default=100_000, ge=0)
    vocab_size: int = Field(default=40, gt=0)
    zipf_s: float = Field(default=1.0, gt=0.0)
    p_err_1p: float = Field(default=0.05, ge=0.0, le=1.0)
    p_err_3p: float = Field(default=0.15, ge=0.0, le=1.0)
    p_3p: float = Field(default=0.75, ge=0.0, le=1.0)
    p_retry: float = Field(default=0.7, ge=0.0, le=1.0)
    retry_dt_max: int = Field(default=45, gt=0)
    p_click_true: float = Field(default=0.8, ge=0.0, le=1.0)
    p_click_corrupt: float = Field(default=0.05, ge=0.0, le=1.0)
    p_extended: float = Field(default=0.5, ge=0.0, le=1.0)
    max_clicks: int = Field(default=3, gt=0)
    t_window: int = Field(default=60, gt=0)
    session_gap_min: int = Field(default=300, gt=0)
    session_gap_max: int = Field(default=7200, gt=0)
    start_time: int = Field(default=1_600_000_000, ge=0)
    locales: dict[str, float] = Field(default_factory=lambda: {"en-US": 0.6, "en-GB": 0.2, "en-IN": 0.2})
    augment_confusions: bool = False

    @field_validator("locales")
    @classmethod
    def _positive_weights(cls, value: dict[str, float]) -> dict[str, float]:
        if not value:
            raise ValueError("at least one locale is required")
        if any(weight <= 0 for weight in value.values()):
            raise ValueError("locale weights must be positive")
        return value

    @model_validator(mode="after")
    def _timing(self) -> "SimConfig":
        if self.retry_dt_max >= self.t_window:
            raise ValueError("retry_dt_max must be smaller than t_window")
        if self.session_gap_min <= self.t_window:
            raise ValueError("session_gap_min must exceed t_window so sessions never pair up")
        if self.session_gap_max < self.session_gap_min:
            raise ValueError("session_gap_max must be at least session_gap_min")
        if self.p_click_corrupt > self.p_click_true:
            raise ValueError("p_click_corrupt must not exceed p_click_true")
        return self

    def p_err(self, third_party: bool) -> float:
        return self.p_err_3p if third_party else self.p_err_1p
