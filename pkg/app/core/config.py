from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    PROJECT_NAME: str = "Granulo"
    LOG_LEVEL: str = "INFO"

    # ORACLE
    ORACLE_GRID_RESOLUTION: int = 201
    ORACLE_REFINE_RESOLUTION: int = 21
    ORACLE_QUERY_MARGIN: float = 1.5
    DEEP_PENETRATION_RATIO: float = 0.3
    HALFPLANE_SMOOTHING: float = 1e-3

    # ENGINE
    BROADPHASE_MARGIN: float = 0.05
    PAIR_EVICTION_MARGIN: float = 0.05
    STABILITY_FACTOR: float = 0.2
    THREADS: int = 1

    # DATASET
    DATASET_SIZE: int = 200_000
    NEAR_FRACTION: float = 0.9
    NEAR_BAND: float = 0.1
    PRESCREEN_RESOLUTION: int = 51
    REJECTION_BUDGET: int = 200
    DATASET_CHUNK: int = 2048

    # TRAINING
    HOLDOUT_FRACTION: float = 0.1
    LEARNING_RATE: float = 1e-3
    BATCH_SIZE: int = 1024
    EPOCHS: int = 200
    DEFAULT_ARCH: str = "5x64"
    MIN_GRADIENT_NORM: float = 1e-6

    # SCENARIOS
    SCENES_DIR: str = str(Path(__file__).resolve().parents[2] / "scenes")
    STATIC_DISPLACEMENT: float = 1e-3
    SLIDING_DISPLACEMENT: float = 5e-2

    DEFAULT_SEED: int = 0

    model_config = SettingsConfigDict(env_prefix="GRANULO_", case_sensitive=True)


settings = Settings()
