"""Bacterial foraging over job-repetition sequences.

A bacterium's position is an operation sequence and its fitness J is the
decoded makespan. The run is three nested loops: elimination-dispersal,
reproduction, chemotaxis. Baseline chemotaxis is a random transposition
swum while it keeps improving.

Random stream order within a run: initial population in index order, then per
chemotactic generation every bacterium in index order (tumble draws, then swim
draws), then the dispersal draws, one per bacterium.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from . import kernels
from .errors import InvalidParameter, OddPopulation
from .instance import JsspInstance

HEALTH_MODES = ("sum", "current")


@dataclass(frozen=True)
class BfoParams:
    population: int = 20
    chemotactic_steps: int = 50
    swim_length: int = 4
    reproductions: int = 4
    dispersals: int = 2
    p_ed: float = 0.25
    seed: int = 0
    # Decode ceiling. When set, dispersal events repeat until it is spent.
    max_evaluations: int | None = None
    # "sum": sort by J accumulated over the epoch; "current": by the last J.
    health: str = "sum"
    # Stop as soon as a schedule meets the instance lower bound (it is optimal).
    stop_at_bound: bool = True

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise InvalidParameter(f"population must be even and >= 2, got {self.population}")
        for name in ("chemotactic_steps", "swim_length", "reproductions", "dispersals"):
            if getattr(self, name) < 1:
                raise InvalidParameter(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 0.0 <= self.p_ed <= 1.0:
            raise InvalidParameter(f"p_ed must lie in [0, 1], got {self.p_ed}")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise InvalidParameter(f"max_evaluations must be >= 1, got {self.max_evaluations}")
        if self.health not in HEALTH_MODES:
            raise InvalidParameter(f"health must be one of {HEALTH_MODES}, got {self.health!r}")


@dataclass(frozen=True, eq=False)
class Bacterium:
    sequence: np.ndarray
    J: int
    health: float = 0
    # Fitness used for comparisons: J plus the swarming term (J when disabled).
    cost: float | None = None

    def __post_init__(self):
        if self.cost is None:
            object.__setattr__(self, "cost", self.J)

    def copy(self) -> Bacterium:
        return replace(self, sequence=self.sequence.copy())


class BudgetExhausted(Exception):
    """Raised by :class:`Evaluator` when the decode ceiling is reached."""


class TargetReached(BudgetExhausted):
    """Raised by :class:`Evaluator` right after a schedule meets the target."""


class Evaluator:
    """Counts decodes, enforces the budget and remembers the best sequence."""

    def __init__(self, instance: JsspInstance, budget: int | None = None, target: int | None = None):
        self.instance = instance
        self.budget = budget
        self.target = target
        self.count = 0
        self.best_makespan: int | None = None
        self.best_sequence: np.ndarray | None = None
        self._machines = instance.machines
        self._times = instance.times

    def __call__(self, seq: np.ndarray) -> int:
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExhausted
        self.count += 1
        span = int(kernels.decode_makespan(seq, self._machines, self._times))
        if self.best_makespan is None or span < self.best_makespan:
            self.best_makespan = span
            self.best_sequence = seq.copy()
            if self.target is not None and span <= self.target:
                raise TargetReached
        return span


@dataclass
class RunResult:
    algo: str
    instance: str
    seed: int
    best_sequence: list[int]
    best_makespan: int
    history: list[int]
    evaluations: int
    wall_time: float
    params: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        out = asdict(self)
        if not timing:
            out.pop("wall_time")
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def random_sequence(instance: JsspInstance, rng: np.random.Generator) -> np.ndarray:
    tokens = np.repeat(np.arange(instance.n_jobs, dtype=np.int64), instance.n_machines)
    return rng.permutation(tokens)


def tumble_random(sequence: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Swap two positions that hold different jobs (uniform over such pairs)."""
    out = sequence.copy()
    i = int(rng.integers(out.size))
    others = np.flatnonzero(out != out[i])
    if others.size == 0:
        return out
    j = int(others[rng.integers(others.size)])
    out[i], out[j] = out[j], out[i]
    return out


def swim(
    bacterium: Bacterium,
    move: Callable[[np.ndarray], np.ndarray],
    n_swim: int,
    evaluate: Callable[[np.ndarray], int],
    cost: Callable[[np.ndarray, int], float] | None = None,
) -> Bacterium:
    """Apply ``move`` up to ``n_swim`` times while each step strictly improves.

    Every evaluated fitness is added to the returned bacterium's health.
    """
    current = bacterium
    health = bacterium.health
    for _ in range(n_swim):
        cand = move(current.sequence)
        J = evaluate(cand)
        c = J if cost is None else cost(cand, J)
        health += c
        if c < current.cost:
            current = Bacterium(cand, J, health, c)
        else:
            break
    return replace(current, health=health)


def reproduce(population: list[Bacterium], by: str = "sum") -> list[Bacterium]:
    """Healthiest half splits in two, the other half dies. Health resets to 0."""
    if len(population) % 2:
        raise OddPopulation(f"population size {len(population)} is odd")
    key = (lambda b: b.health) if by == "sum" else (lambda b: b.cost)
    survivors = sorted(population, key=key)[: len(population) // 2]
    out = []
    for b in survivors:
        out.append(replace(b, health=0))
        out.append(replace(b.copy(), health=0))
    return out


def eliminate_disperse(
    population: list[Bacterium],
    p_ed: float,
    rng: np.random.Generator,
    instance: JsspInstance,
    evaluate: Callable[[np.ndarray], int] | None = None,
    cost: Callable[[np.ndarray, int], float] | None = None,
) -> list[Bacterium]:
    if evaluate is None:
        evaluate = Evaluator(instance)
    out = []
    for b in population:
        if rng.random() < p_ed:
            seq = random_sequence(instance, rng)
            J = evaluate(seq)
            b = Bacterium(seq, J, b.health, J if cost is None else cost(seq, J))
        out.append(b)
    return out


def forage(
    instance: JsspInstance,
    params: BfoParams,
    rng: np.random.Generator,
    evaluator: Evaluator,
    chemotaxis: Callable[[int, list[Bacterium]], Bacterium],
    after_generation: Callable[[int], None] | None = None,
    cost: Callable[[np.ndarray, int], float] | None = None,
    on_population: Callable[[list[Bacterium]], None] | None = None,
) -> list[int]:
    """Shared loop skeleton; returns the best-so-far makespan per generation.

    ``chemotaxis(i, population)`` returns the replacement for bacterium i.
    ``on_population`` sees the population at every loop boundary.
    """
    history: list[int] = []
    generation = 0
    try:
        population = []
        for _ in range(params.population):
            seq = random_sequence(instance, rng)
            J = evaluator(seq)
            population.append(Bacterium(seq, J, 0, J if cost is None else cost(seq, J)))
        if on_population is not None:
            on_population(population)
        event = 0
        while event < params.dispersals or params.max_evaluations is not None:
            for _ in range(params.reproductions):
                for _ in range(params.chemotactic_steps):
                    for i in range(params.population):
                        population[i] = chemotaxis(i, population)
                    history.append(evaluator.best_makespan)
                    if after_generation is not None:
                        after_generation(generation)
                    generation += 1
                    if on_population is not None:
                        on_population(population)
                population = reproduce(population, by=params.health)
                if on_population is not None:
                    on_population(population)
            population = eliminate_disperse(population, params.p_ed, rng, instance, evaluator, cost)
            if on_population is not None:
                on_population(population)
            event += 1
    except BudgetExhausted:
        if not history or history[-1] != evaluator.best_makespan:
            history.append(evaluator.best_makespan)
    return history


def run_bfo(instance: JsspInstance, params: BfoParams | None = None, on_population=None) -> RunResult:
    params = params or BfoParams()
    rng = np.random.default_rng(params.seed)
    evaluator = Evaluator(instance, params.max_evaluations, instance.lower_bound if params.stop_at_bound else None)
    t0 = time.perf_counter()

    def move(seq):
        return tumble_random(seq, rng)

    def chemotaxis(i, population):
        return swim(population[i], move, params.swim_length, evaluator)

    history = forage(instance, params, rng, evaluator, chemotaxis, on_population=on_population)
    return RunResult(
        algo="bfo",
        instance=instance.name,
        seed=params.seed,
        best_sequence=evaluator.best_sequence.tolist(),
        best_makespan=evaluator.best_makespan,
        history=history,
        evaluations=evaluator.count,
        wall_time=time.perf_counter() - t0,
        params={"bfo": asdict(params)},
    )
