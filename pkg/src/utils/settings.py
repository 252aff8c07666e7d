"""
Environment-driven settings loaded from config/.env
"""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables from config/.env
env_path = os.path.join(os.path.dirname(__file__), '..', '..', 'config', '.env')
load_dotenv(env_path)


class Settings(BaseModel):
    log_level: str = Field(default="INFO", description="Root logging level")
    attribute_bound: float = Field(default=10.0, gt=0, description="Bound B on graph attribute magnitudes")
    database_url: Optional[str] = Field(default=None, description="SQLAlchemy URL for run tracking")
    workers: int = Field(default=1, ge=1, description="Threads used for embedding and experiments")
    api_host: str = "0.0.0.0"
    api_port: int = Field(default=8000, ge=1, le=65535)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read settings from the environment (cached for the process lifetime)"""
    return Settings(
        log_level=os.getenv("GRNF_LOG_LEVEL", "INFO"),
        attribute_bound=os.getenv("GRNF_ATTRIBUTE_BOUND", "10.0"),
        database_url=os.getenv("GRNF_DATABASE_URL") or None,
        workers=os.getenv("GRNF_WORKERS", "1"),
        api_host=os.getenv("GRNF_API_HOST", "0.0.0.0"),
        api_port=os.getenv("GRNF_API_PORT", "8000"),
    )
