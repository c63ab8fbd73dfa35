"""Adaptive evolutionary algorithm that switches crossover/mutation strategies
along a learned transition graph to keep population diversity up."""

from ._accel import BACKEND
from .benchmarks import FUNCTION_IDS, BenchmarkFn, bounds, evaluate, evaluate_batch, get_function, list_functions
from .diversity import diversity_delta, population_diversity
from .engine import EngineConfig, RunRecord, run
from .errors import BudgetExhausted, ContractViolation
from .graph import StrategyGraph
from .operators import N_STRATEGIES, STRATEGIES, OperatorParams, Strategy, strategy_from_id

__version__ = "0.1.0"
