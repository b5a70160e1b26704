from typing import List

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class HyperParams(BaseModel):
    learning_rate: float = Field(default_factory=lambda: settings.LEARNING_RATE, gt=0.0)
    batch_size: int = Field(default_factory=lambda: settings.BATCH_SIZE, gt=0)
    epochs: int = Field(default_factory=lambda: settings.EPOCHS, ge=0)
    holdout_fraction: float = Field(default_factory=lambda: settings.HOLDOUT_FRACTION, ge=0.0, lt=1.0)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    model_config = ConfigDict(frozen=True)


class TrainingReport(BaseModel):
    shapeA: str
    shapeB: str
    arch: str
    n_train: int
    n_holdout: int
    dist_loss: List[float] = []
    arm_loss: List[float] = []
    dropped_arm_samples: int = 0
    holdout_mae: float | None = None
    holdout_mae_near: float | None = None
    sign_agreement: float | None = None
    arm_mae: float | None = None
    seconds: float = 0.0
