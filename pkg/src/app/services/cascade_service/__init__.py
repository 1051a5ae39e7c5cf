from src.app.services.cascade_service.simulate_cascade import CascadeSimulator, simulate_cascade
from src.app.services.cascade_service.estimate_activation import (
    ActivationEstimate,
    activation_counts,
    error_bound,
    estimate,
    frequency_check,
    required_runs,
)
from src.app.services.cascade_service.live_edge_samples import LiveEdgeSamples
