"""Reservoir computing with elementary cellular automata.

Binary inputs are randomly mapped into a wide CA, evolved for a fixed
number of iterations per sequence step, and the concatenated iteration
states feed a trained linear readout. Supports uniform reservoirs and
loosely coupled two-rule parallel reservoirs, plus the 5-bit memory
benchmark and space-time diagram export.
"""

__version__ = "0.1.0"

from ._backend import BACKEND_NAME, get_backend
from .automaton import CellVector, RuleAssignment, evolve, step
from .encoding import MappingSet, create_mappings, encode
from .readout import ReadoutModel, TrainingSet, predict, predict_batch, train
from .reservoir import (
    ReservoirConfig,
    ReservoirState,
    StepTrace,
    init_run,
    process_sequence,
    process_step,
    sequence_features,
    transition_normalized_addition,
    transition_permutation,
)
from .rules import Rule, complement_rule, mirror_rule, rule_from_number
from .tasks import Dataset, RunScore, SequenceSample, generate_5bit, score_run

__all__ = [
    "BACKEND_NAME",
    "CellVector",
    "Dataset",
    "MappingSet",
    "ReadoutModel",
    "ReservoirConfig",
    "ReservoirState",
    "Rule",
    "RuleAssignment",
    "RunScore",
    "SequenceSample",
    "StepTrace",
    "TrainingSet",
    "__version__",
    "complement_rule",
    "create_mappings",
    "encode",
    "evolve",
    "generate_5bit",
    "get_backend",
    "init_run",
    "mirror_rule",
    "predict",
    "predict_batch",
    "process_sequence",
    "process_step",
    "rule_from_number",
    "score_run",
    "sequence_features",
    "step",
    "train",
    "transition_normalized_addition",
    "transition_permutation",
]
