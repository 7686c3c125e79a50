"""Bacterial foraging and hybrid ant-colony foraging for job-shop scheduling."""

from .bfo import BfoParams, RunResult, run_bfo
from .hbfo import HbfoParams, SwarmingParams, run_hbfo
from .instance import JsspInstance, load_builtin, parse_instance, read_instance
from .pheromone import AcoParams
from .schedule import Schedule, brute_force_optimal, decode, validate_schedule

__all__ = [
    "AcoParams",
    "BfoParams",
    "HbfoParams",
    "JsspInstance",
    "RunResult",
    "Schedule",
    "SwarmingParams",
    "brute_force_optimal",
    "decode",
    "load_builtin",
    "parse_instance",
    "read_instance",
    "run_bfo",
    "run_hbfo",
    "validate_schedule",
]

__version__ = "0.1.0"
