from src.app.services.solver_service.seed_selection import Selection, ssad_select, ssbt_select
from src.app.services.solver_service.greedy_framework import (
    algorithm_name,
    check_index,
    prepare_index,
    solve,
    solve_im_ca,
    solve_sm_ca,
)
from src.app.services.solver_service.full_coverage import solve_full_coverage
