from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from src.app.models.problem_models import Estimator, Strategy
from src.config import DEFAULT_EPSILON, DEFAULT_EVAL_RUNS, DEFAULT_THETA, PAGERANK_RESTART, PAGERANK_TOL


class GraphInput(BaseModel):
    """Where the instance lives on disk and how to read it."""
    graph_path: str
    directed: bool = True
    prob_model: Optional[str] = None
    prob_seed: int = 0
    tau: float = Field(default=1.0, gt=0.0, le=1.0)
    threshold_path: Optional[str] = None
    target_path: Optional[str] = None


class SolveInput(GraphInput):
    kind: Literal["im-ca", "sm-ca", "full-coverage"]
    k: Optional[int] = Field(default=None, ge=1)
    eta: Optional[int] = Field(default=None, ge=1)
    strategy: Strategy = Strategy.ADG
    c: Optional[float] = Field(default=None, ge=1.0)
    theta: int = Field(default=DEFAULT_THETA, ge=1)
    seed: int = 0
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0.0)
    estimator: Estimator = Estimator.RR_INDEX
    runs: int = Field(default=1000, ge=1)
    candidates: Optional[List[str]] = None
    eval_runs: Optional[int] = Field(default=None, ge=1)
    eval_seed: Optional[int] = None


class BaselineInput(GraphInput):
    name: Literal["coverage-greedy", "degree", "pagerank", "random"]
    k: Optional[int] = Field(default=None, ge=1)
    theta: int = Field(default=DEFAULT_THETA, ge=1)
    seed: int = 0
    restart: float = Field(default=PAGERANK_RESTART, gt=0.0, lt=1.0)
    tol: float = Field(default=PAGERANK_TOL, gt=0.0)


class EvaluateInput(GraphInput):
    seeds: List[str]
    runs: int = Field(default=DEFAULT_EVAL_RUNS, ge=1)
    eval_seed: int = 0
