"""Disfluency generators and the batch engine."""

from .batch import BatchGenerator, GenerationReport, generate_batch, item_seed
from .generators import (
    DRAW,
    CandidatePool,
    GenerationConfig,
    copy_case,
    gen_repetition,
    gen_replacement,
    gen_restart,
    junction_conflict,
)
from .resources import ConnectiveList, CueList

__all__ = [
    "DRAW",
    "BatchGenerator",
    "CandidatePool",
    "ConnectiveList",
    "CueList",
    "GenerationConfig",
    "GenerationReport",
    "copy_case",
    "gen_repetition",
    "gen_replacement",
    "gen_restart",
    "generate_batch",
    "item_seed",
    "junction_conflict",
]
