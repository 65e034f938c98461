from os import getenv
from typing import Literal

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings

load_dotenv()


class Settings(BaseSettings):
    # Environment Detection
    ENVIRONMENT: str = "development"  # production, development, test

    # Logging Settings
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Harness Settings
    OUTPUT_DIR: str = "results"
    MAX_WORKERS: int = 1  # 1 = runs execute in-process, one after another
    BASE_SEED: int = 0

    # Feasibility Ratio Estimation Settings
    FR_SAMPLES: int = 1_000_000
    FR_CHUNK_SIZE: int = 100_000

    @field_validator("MAX_WORKERS", "FR_SAMPLES", "FR_CHUNK_SIZE")
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be a positive integer, got {v}")
        return v

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        return v.upper() if isinstance(v, str) else v


ENVIRONMENT = getenv("ENVIRONMENT", "development")
LOG_LEVEL = getenv("SWARM_LOG_LEVEL", "INFO")
OUTPUT_DIR = getenv("SWARM_OUTPUT_DIR", "results")
MAX_WORKERS = int(getenv("SWARM_MAX_WORKERS", "1"))
BASE_SEED = int(getenv("SWARM_BASE_SEED", "0"))
FR_SAMPLES = int(getenv("SWARM_FR_SAMPLES", "1000000"))
FR_CHUNK_SIZE = int(getenv("SWARM_FR_CHUNK_SIZE", "100000"))

settings = Settings(
    ENVIRONMENT=ENVIRONMENT,
    LOG_LEVEL=LOG_LEVEL,  # type: ignore[arg-type]
    OUTPUT_DIR=OUTPUT_DIR,
    MAX_WORKERS=MAX_WORKERS,
    BASE_SEED=BASE_SEED,
    FR_SAMPLES=FR_SAMPLES,
    FR_CHUNK_SIZE=FR_CHUNK_SIZE,
)
