from pydantic import BaseModel, Field
from dotenv import load_dotenv
import os

load_dotenv()  # loads .env if present


def _flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


class Settings(BaseModel):
    workers: int = Field(int(os.getenv("CAW_WORKERS", "1")), ge=1)
    log_events: bool = _flag("CAW_LOG_EVENTS")
    seed: int = int(os.getenv("CAW_SEED", "20240529"))
    refute_trials: int = Field(int(os.getenv("CAW_REFUTE_TRIALS", "50")), ge=1)
    # rows per vectorised enumeration batch (grid oracle, witness search)
    chunk_size: int = Field(int(os.getenv("CAW_CHUNK_SIZE", "4096")), ge=1)
    cache_items: int = Field(int(os.getenv("CAW_CACHE_ITEMS", "512")), ge=1)

settings = Settings()
