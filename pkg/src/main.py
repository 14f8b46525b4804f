# src/main.py
"""Entry: start the HTTP API. The command-line tool is `python -m src.cli`."""
import uvicorn

from src.config.settings import settings
from src.utils.logger import logger

if __name__ == "__main__":
    logger.info(f"Starting API server on port {settings.port}...")
    uvicorn.run("src.api.app:app", host="0.0.0.0", port=settings.port)
