from src.app.services.baseline_service.coverage_greedy import coverage_greedy, prefix_reaching
from src.app.services.baseline_service.rankers import (
    Ranking,
    pagerank,
    random_ranking,
    rank_by_degree,
    reverse_transition,
)
