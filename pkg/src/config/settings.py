# src/config/settings.py
"""Configuration loader. Loads .env so budgets can be raised per machine."""
import os
from typing import Optional
from dotenv import load_dotenv  # pyright: ignore[reportMissingImports]

load_dotenv()

class Settings:
    """Budgets, caps and logging options, read from the environment at construction."""

    def __init__(self):
        self.budget: int = int(os.getenv("DIAGRAMDEG_BUDGET", "5000000"))
        self.full_check_limit: int = int(os.getenv("DIAGRAMDEG_FULL_CHECK_LIMIT", "20000"))
        self.oracle_cap: int = int(os.getenv("DIAGRAMDEG_ORACLE_CAP", "20"))
        self.table_max_n: int = int(os.getenv("DIAGRAMDEG_TABLE_MAX_N", "40"))
        self.log_level: str = os.getenv("LOG_LEVEL", "WARNING")
        self.log_file: Optional[str] = os.getenv("LOG_FILE") or None
        self.port: int = int(os.getenv("PORT", "8000"))
        if self.budget <= 0:
            raise ValueError("DIAGRAMDEG_BUDGET must be positive")


settings = Settings()
