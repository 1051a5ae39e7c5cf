from src.app.services.graph_service.edge_list_loader import (
    generate_random_graph,
    load_edge_list,
    load_edge_list_file,
    load_target_set,
    load_thresholds,
    write_edge_list,
)
from src.app.services.graph_service.probability_models import (
    assign_probabilities,
    parse_prob_model,
    probability_summary,
)
from src.app.services.graph_service.validation import validate
