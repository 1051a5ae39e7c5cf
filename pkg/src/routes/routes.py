import logging

from fastapi import APIRouter, responses

from src.app.models.input_models import BaselineInput, EvaluateInput, SolveInput
from src.app.services.core_service.problem_service import (
    evaluate_seed_set,
    rank_baseline,
    solve_problem,
)

router = APIRouter()


def _reply(response, failure_message):
    if not response.get("status"):
        return responses.JSONResponse(
            status_code=400,
            content={**response, "message": response.get("message", failure_message)},
        )
    return response


@router.get("/")
async def root():
    return {"message": "Cumulative activation seed selection service"}


@router.post("/solve")
async def solve_route(input_data: SolveInput):
    """
    Runs IM-CA, SM-CA or the full-coverage greedy on an edge list on disk.
    """
    logging.info(f"Solve request: kind={input_data.kind}, graph={input_data.graph_path}")
    response = await solve_problem(input_data)
    return _reply(response, "Failed to solve the instance")


@router.post("/baseline")
async def baseline_route(input_data: BaselineInput):
    """
    Ranks nodes with one of the baseline rankers.
    """
    response = await rank_baseline(input_data)
    return _reply(response, "Failed to rank nodes")


@router.post("/evaluate")
async def evaluate_route(input_data: EvaluateInput):
    """
    Scores a seed set by independent Monte-Carlo cascades.
    """
    response = await evaluate_seed_set(input_data)
    return _reply(response, "Failed to evaluate seeds")
