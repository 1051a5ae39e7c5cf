import os
import logging
from typing import List, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.app.models.problem_models import ProblemKind
from src.app.services.graph_service import parse_prob_model
from src.app.utils.exceptions import ConfigError, ProbabilityModelError
from src.config import DEFAULT_C_IM, DEFAULT_C_SM, DEFAULT_EVAL_RUNS, DEFAULT_THETA, SWEEP_JOBS

logger = logging.getLogger(__name__)

SOLVER_ALGORITHMS = ("btg", "adg")
BASELINE_ALGORITHMS = ("coverage-greedy", "degree", "pagerank", "random")
ALGORITHMS = SOLVER_ALGORITHMS + BASELINE_ALGORITHMS


def _split(value):
    if isinstance(value, str):
        return [item.strip() for item in value.replace(";", ",").split(",") if item.strip()]
    return value


class ExperimentConfig(BaseModel):
    """
    One sweep: a graph, a probability source, and the grid of
    (algorithm, tau, c, k or eta) points to solve and evaluate.

    tau is a list of uniform thresholds; a threshold_file overrides
    individual nodes on top of each of them. c defaults to DEFAULT_C_IM
    for IM-CA sweeps and DEFAULT_C_SM for SM-CA sweeps.
    """
    graph: str
    directed: bool = True
    prob_model: Optional[str] = None
    prob_seed: int = 0
    threshold_file: Optional[str] = None
    target_file: Optional[str] = None
    kind: ProblemKind = ProblemKind.IM_CA
    budgets: List[int] = Field(min_length=1)
    tau: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    c: Optional[List[float]] = None
    algorithms: List[str] = Field(default_factory=lambda: list(ALGORITHMS))
    theta: int = Field(default=DEFAULT_THETA, ge=1)
    eval_runs: int = Field(default=DEFAULT_EVAL_RUNS, ge=1)
    seed: int = 0
    eval_seed: Optional[int] = None
    output: Optional[str] = None
    jobs: int = Field(default=SWEEP_JOBS, ge=1)

    @field_validator("budgets", "tau", "c", "algorithms", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split(value)

    @field_validator("budgets")
    @classmethod
    def positive_budgets(cls, value):
        if any(b < 1 for b in value):
            raise ValueError("every k or eta must be at least 1")
        return sorted(set(value))

    @field_validator("tau")
    @classmethod
    def tau_range(cls, value):
        if any(not 0.0 < t <= 1.0 for t in value):
            raise ValueError("every tau must be in (0,1]")
        return value

    @field_validator("c")
    @classmethod
    def c_range(cls, value):
        if value is None:
            return value
        if not value:
            raise ValueError("c needs at least one value")
        if any(c < 1.0 for c in value):
            raise ValueError("every c must be at least 1")
        return value

    @field_validator("algorithms")
    @classmethod
    def known_algorithms(cls, value):
        value = [a.lower() for a in value]
        if not value:
            raise ValueError("nothing to run")
        unknown = [a for a in value if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; choose from {list(ALGORITHMS)}")
        return value

    @field_validator("prob_model")
    @classmethod
    def known_model(cls, value):
        if value:
            parse_prob_model(value)
        return value or None

    @model_validator(mode="after")
    def files_exist(self):
        for name in ("graph", "threshold_file", "target_file"):
            path = getattr(self, name)
            if path and not os.path.isfile(path):
                raise ValueError(f"{name} '{path}' does not exist")
        if self.eval_seed is None:
            self.eval_seed = self.seed
        if self.c is None:
            self.c = [DEFAULT_C_IM if self.kind == ProblemKind.IM_CA else DEFAULT_C_SM]
        return self

    @property
    def probability_model(self):
        return parse_prob_model(self.prob_model) if self.prob_model else None


def load_config(path=None, overrides=None):
    """
    Reads a key=value config file and applies overrides on top.

    Keys match ExperimentConfig fields; list values are comma separated.
    Overrides whose value is None are ignored.

    Raises:
        ConfigError: unreadable file or invalid resolved configuration.
    """
    values = {}
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file '{path}' does not exist")
        for key, value in dotenv_values(path).items():
            key = key.lower()
            # an empty algorithms line means an empty list, other empty keys fall back to defaults
            if value is None or (value == "" and key != "algorithms"):
                continue
            values[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    try:
        config = ExperimentConfig(**values)
    except (ValidationError, ProbabilityModelError) as e:
        raise ConfigError(f"invalid experiment configuration: {e}") from e
    logger.info(f"Resolved experiment config: {config.model_dump(mode='json')}")
    return config
