from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.app.models.graph_models import TargetSet, Thresholds
from src.config import (
    DEFAULT_C_IM,
    DEFAULT_C_SM,
    DEFAULT_EPSILON,
    DEFAULT_THETA,
    RR_MEMORY_BUDGET,
)


class ProblemKind(str, Enum):
    IM_CA = "im-ca"
    SM_CA = "sm-ca"


class Strategy(str, Enum):
    BTG = "btg"
    ADG = "adg"


class Estimator(str, Enum):
    MONTE_CARLO = "monte-carlo"
    RR_INDEX = "rr-index"
    EXACT = "exact"


class ProblemSpec(BaseModel):
    """
    One IM-CA or SM-CA instance plus the solver parameters.

    c defaults to DEFAULT_C_IM for IM-CA and DEFAULT_C_SM for SM-CA.
    runs is the live-edge sample count used by the Monte-Carlo estimator of
    the full-coverage solver.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ProblemKind
    target: TargetSet
    thresholds: Thresholds
    k: Optional[int] = Field(default=None, ge=1)
    eta: Optional[int] = Field(default=None, ge=1)
    strategy: Strategy = Strategy.ADG
    c: Optional[float] = Field(default=None, ge=1.0)
    theta: int = Field(default=DEFAULT_THETA, ge=1)
    seed: int = 0
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0.0)
    estimator: Estimator = Estimator.RR_INDEX
    runs: int = Field(default=1000, ge=1)
    candidates: Optional[List[int]] = None
    memory_budget: int = Field(default=RR_MEMORY_BUDGET, ge=1)

    @model_validator(mode="after")
    def check_kind_parameters(self):
        if self.kind == ProblemKind.IM_CA and self.k is None:
            raise ValueError("IM-CA needs a budget k")
        if self.kind == ProblemKind.SM_CA:
            if self.eta is None:
                raise ValueError("SM-CA needs a requirement eta")
            if self.eta > self.target.size:
                raise ValueError(f"eta={self.eta} exceeds |U|={self.target.size}")
        if self.c is None:
            self.c = DEFAULT_C_IM if self.kind == ProblemKind.IM_CA else DEFAULT_C_SM
        if len(self.thresholds) != self.target.mask.shape[0]:
            raise ValueError("thresholds and target set cover different node counts")
        return self

    @property
    def n(self):
        return int(self.target.mask.shape[0])

    def candidate_mask(self):
        """Boolean mask of nodes that may be selected as seeds."""
        if self.candidates is None:
            return np.ones(self.n, dtype=bool)
        mask = np.zeros(self.n, dtype=bool)
        mask[np.asarray(self.candidates, dtype=np.int64)] = True
        return mask


class StepRecord(BaseModel):
    step: int
    node: int
    label: str
    inc: float
    tie_key: Optional[float] = None
    est_active: int
    no_gain: bool = False
    low_signal: bool = False


class EvaluationSummary(BaseModel):
    rho_hat: int
    sigma_hat: float
    runs: int
    eval_seed: int


class RunReport(BaseModel):
    algorithm: str
    kind: str
    seeds: List[int] = Field(default_factory=list)
    seed_labels: List[str] = Field(default_factory=list)
    steps: List[StepRecord] = Field(default_factory=list)
    timings_ms: Dict[str, float] = Field(default_factory=dict)
    master_seed: int = 0
    estimated_active: int = 0
    estimated_value: Optional[float] = None
    status: str = "ok"
    evaluation: Optional[EvaluationSummary] = None

    @property
    def active_trajectory(self):
        return [s.est_active for s in self.steps]
