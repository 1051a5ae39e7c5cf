from src.app.services.experiment_service.evaluation import boundary_targets, evaluate_seeds
from src.app.services.experiment_service.experiment_config import (
    ALGORITHMS,
    ExperimentConfig,
    load_config,
)
from src.app.services.experiment_service.run_experiment import (
    CSV_COLUMNS,
    TUNE_COLUMNS,
    load_inputs,
    run_experiment,
    tune_c,
)
