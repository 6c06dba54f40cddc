"""Trainer thresholds."""
from pydantic import BaseModel, ConfigDict, Field


class TrainerConfig(BaseModel):
    """Thresholds of the candidate-set formula plus pipeline knobs.

    alpha: minimum abandonment rate of a query to train on.
    beta: minimum share of a query's occurrences corrected to the same rewrite.
    tau: maximum phonetic edit distance between a query and its rewrite.
    t_window: seconds within which a successful follow-up counts as a correction.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    beta: float = Field(default=0.2, ge=0.0, le=1.0)
    tau: int = Field(default=2, ge=0)
    t_window: int = Field(default=60, gt=0)
    min_query_count: int = Field(default=5, gt=0)
    normalized_distance: bool = False
    tau_ratio: float = Field(default=0.25, ge=0.0, le=1.0)
    abandonment_excludes_refined: bool = False
    workers: int = Field(default=1, ge=1)

    def header(self) -> str:
        """Effective configuration as written into snapshot metadata."""
        parts = [
            f"alpha={self.alpha!r}",
            f"beta={self.beta!r}",
            f"tau={self.tau}",
            f"t={self.t_window}",
            f"min_count={self.min_query_count}",
            f"distance={'normalized' if self.normalized_distance else 'absolute'}",
            f"abandonment={'unrefined' if self.abandonment_excludes_refined else 'zero-click'}",
        ]
        if self.normalized_distance:
            parts.append(f"tau_ratio={self.tau_ratio!r}")
        return " ".join(parts)
