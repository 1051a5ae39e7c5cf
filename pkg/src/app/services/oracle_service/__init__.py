from src.app.services.oracle_service.live_edge_oracle import (
    ExactProbs,
    LiveEdgeOracle,
    exact_activation_probs,
    exact_rho,
    exact_truncated_sum,
)
from src.app.services.oracle_service.brute_force import BruteForceResult, brute_force_optimal
