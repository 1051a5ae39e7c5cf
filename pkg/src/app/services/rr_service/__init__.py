from src.app.services.rr_service.rr_index import (
    RRIndex,
    RRSampler,
    build_index,
    generate_rr_set,
    required_theta,
)
