"""Main entry point for the Mondegreen correction service."""
from fastapi import FastAPI

from app.mondegreen.config import settings
from app.mondegreen.config.app_config import split_address
from app.mondegreen.errors import SnapshotError
from app.mondegreen.serving import CorrectionService, create_app
from app.mondegreen.utils import setup_logger

logger = setup_logger(__name__)


def build_service() -> CorrectionService:
    """Service over ``MONDEGREEN_SNAPSHOT_PATH``; starts empty (and unhealthy) when it cannot be loaded."""
    try:
        return CorrectionService.from_snapshot(settings.snapshot_path)
    except SnapshotError as exc:
        logger.warning(f"Starting without a rewrite table: {exc}; POST /v1/reload to load one")
        return CorrectionService()


app: FastAPI = create_app(build_service())


def main():
    """Main entry point for running the FastAPI application."""
    import uvicorn

    host, port = split_address(settings.listen)
    logger.info(f"Listening on {host}:{port}")
    uvicorn.run(app, host=host, port=port)


# Main execution
if __name__ == "__main__":
    main()
