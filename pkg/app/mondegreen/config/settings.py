"""Process-level settings for the Mondegreen pipeline."""
from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging
    log_level: str = "INFO"
    log_format: Literal["text", "json"] = "text"

    # Phonetics
    lexicon_path: Path = DATA_DIR / "lexicon.tsv"
    use_cmudict: bool = True

    # Simulator
    confusions_path: Path = DATA_DIR / "confusions.tsv"

    # Serving
    snapshot_path: Path = Path("snapshot.tsv")
    listen: str = "127.0.0.1:8080"

    model_config = SettingsConfigDict(
        env_prefix="MONDEGREEN_",
        # Look for .env in multiple locations to support both:
        # 1. Running from project root (python -m app.main)
        # 2. Running from app/
        env_file=(
            Path("app/.env"),
            Path(".env"),
            Path("../.env"),
        ),
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
