"""Experiment configuration"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from src.features.distribution import DistributionConfig


class ClassifierKind(str, Enum):
    KNN = "knn"
    RIDGE = "ridge"


class ExperimentConfig(BaseModel):
    input: Optional[str] = Field(default=None, description="JSON-lines corpus of labelled graphs")
    m_grid: List[int] = Field(default_factory=lambda: [8, 32, 128, 512, 2048, 4096])
    reps: int = Field(default=10, ge=1, description="Independent maps per M")
    seed: int = 0
    split: float = Field(default=0.8, gt=0, lt=1, description="Training fraction")
    folds: Optional[int] = Field(default=None, ge=2, description="K-fold evaluation instead of a single split")
    classifier: ClassifierKind = ClassifierKind.KNN
    knn_k: int = Field(default=5, ge=1)
    ridge_lambda: float = Field(default=1e-3, gt=0)
    ref_m: Optional[int] = Field(default=10_000, ge=1, description="Reference dimension; None disables")
    distribution: DistributionConfig = Field(default_factory=DistributionConfig)
    workers: int = Field(default=1, ge=1)

    @field_validator("m_grid")
    @classmethod
    def positive_dimensions(cls, value: List[int]) -> List[int]:
        if not value or min(value) < 1:
            raise ValueError("M grid must hold positive dimensions")
        return value
