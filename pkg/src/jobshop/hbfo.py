"""Hybrid foraging: chemotaxis driven by the ant-colony transition rule.

Each chemotactic step draws two candidates around the bacterium. The tumble
candidate is a transposition whose partner job is picked by the transition
rule from the shared pheromone; the move candidate is a random transposition.
The cheaper one is kept if it beats the bacterium, and the bacterium keeps
swimming in that direction while it improves. Reproduction and dispersal are
the baseline ones.

One pheromone model lives for the whole run, by default indexed by (job,
sequence position). It is updated locally at every guided choice and
globally after every chemotactic generation from the best sequence so far.
``tumble="construct"`` replaces both candidates with complete sequences built
by the transition rule, which is far weaker at equal decode budgets.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .bfo import Bacterium, BfoParams, Evaluator, RunResult, forage, tumble_random
from .errors import InvalidParameter, SwarmingDisabled
from .instance import JsspInstance
from .pheromone import LAYOUTS, AcoParams, PheromoneModel, global_update, init_pheromone

TUMBLES = ("swap", "construct")


@dataclass(frozen=True)
class SwarmingParams:
    M: float = 0.1  # signalling magnitude
    w_a: float = 0.2  # attractant width
    w_r: float = 10.0  # repellent width

    def __post_init__(self):
        if self.M < 0 or self.w_a <= 0 or self.w_r <= 0:
            raise InvalidParameter(f"swarming needs M >= 0 and positive widths, got {self}")


@dataclass(frozen=True)
class HbfoParams:
    bfo: BfoParams = field(default_factory=BfoParams)
    aco: AcoParams = field(default_factory=AcoParams)
    swarming: SwarmingParams | None = None
    layout: str = "position"
    # "swap": guided transposition vs random transposition.
    # "construct": two complete sequences built from the pheromone.
    tumble: str = "swap"

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise InvalidParameter(f"unknown pheromone layout {self.layout!r}; expected one of {LAYOUTS}")
        if self.tumble not in TUMBLES:
            raise InvalidParameter(f"unknown tumble {self.tumble!r}; expected one of {TUMBLES}")

    def with_seed(self, seed: int) -> HbfoParams:
        return replace(self, bfo=replace(self.bfo, seed=seed))


def _weight(model: PheromoneModel) -> np.ndarray:
    w = getattr(model, "_weight", None)
    if w is None:
        w = model.eta ** model.params.beta
        model._weight = w
    return w


def construct_sequence(instance: JsspInstance, model: PheromoneModel, rng: np.random.Generator) -> np.ndarray:
    """Build one sequence token by token; local update applied per choice."""
    p = model.params
    draws = rng.random((2, instance.n_operations))
    return kernels.construct(model.tau, _weight(model), p.q0, p.rho, p.tau0, draws, model.layout == "position")


def hamming_distances(positions: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Share of differing tokens between ``theta`` and every population row."""
    positions = np.atleast_2d(positions)
    return (positions != theta).mean(axis=1)


def compute_swarming(
    positions,
    self_index: int,
    params: SwarmingParams | None,
    theta: np.ndarray | None = None,
) -> float:
    """Cell-to-cell attraction/repulsion term J_cc for bacterium ``self_index``.

    ``positions`` holds one sequence per bacterium. ``theta`` replaces the
    bacterium's own position, to score a candidate against the population.
    """
    if params is None:
        raise SwarmingDisabled("swarming term requested but swarming is disabled")
    positions = np.asarray(positions)
    if theta is None:
        theta = positions[self_index]
    d2 = hamming_distances(positions, theta) ** 2
    return float(-params.M * (np.exp(-params.w_a * d2).sum() - np.exp(-params.w_r * d2).sum()))


def guided_tumble(sequence: np.ndarray, model: PheromoneModel, rng: np.random.Generator) -> np.ndarray:
    """Transposition whose partner is chosen by the ant transition rule.

    A position i is drawn uniformly. Every other job offers one of its tokens
    (occurrence drawn uniformly) and is scored by the pheromone for putting
    that job at i times the desirability of the offered operation. The winner
    is swapped into i and its cell gets the local update.
    """
    n, m = model.eta.shape
    p = model.params
    i = int(rng.integers(sequence.size))
    occ = rng.integers(m, size=n)
    q, r = rng.random(2)
    return kernels.guided_swap(
        sequence, model.tau, _weight(model), p.q0, p.rho, p.tau0, i, occ, q, r, model.layout == "position"
    )


def tumble_move_swim(
    bacterium: Bacterium,
    instance: JsspInstance,
    model: PheromoneModel,
    params: HbfoParams,
    rng: np.random.Generator,
    evaluate=None,
    cost=None,
    follow=None,
) -> Bacterium:
    """One chemotactic step for one bacterium.

    Tumble proposes a pheromone-guided candidate and Move a random one. The
    cheaper of the two is kept (a tie goes to the move); the incumbent is only
    replaced on strict improvement. The bacterium then keeps swimming in the
    winning direction, one candidate per step, while each step improves, for
    at most ``swim_length`` evaluated steps in total counting the first pair.
    """
    if evaluate is None:
        evaluate = Evaluator(instance)

    def fitness(seq):
        J = evaluate(seq)
        return J, (J if cost is None else cost(seq, J))

    if params.tumble == "construct":
        tumble = lambda s: construct_sequence(instance, model, rng)
        move = tumble
    else:
        tumble = lambda s: guided_tumble(s, model, rng)
        move = lambda s: tumble_random(s, rng)

    current = bacterium
    health = bacterium.health
    a = tumble(current.sequence)
    J_a, c_a = fitness(a)
    b = move(current.sequence)
    J_b, c_b = fitness(b)
    health += c_a + c_b
    if c_a < c_b:
        seq, J, c, direction = a, J_a, c_a, tumble
    else:
        seq, J, c, direction = b, J_b, c_b, move
    if follow is not None:
        direction = {"tumble": tumble, "move": move}[follow]
    steps = 1
    while c < current.cost:
        current = Bacterium(seq, J, health, c)
        if steps >= params.bfo.swim_length:
            break
        seq = direction(current.sequence)
        J, c = fitness(seq)
        health += c
        steps += 1
    return replace(current, health=health)


def run_hbfo(
    instance: JsspInstance,
    params: HbfoParams | None = None,
    on_generation=None,
    on_population=None,
) -> RunResult:
    """Full hybrid run. ``on_generation(g, model)`` is called after each global update."""
    params = params or HbfoParams()
    bfo = params.bfo
    rng = np.random.default_rng(bfo.seed)
    evaluator = Evaluator(instance, bfo.max_evaluations, instance.lower_bound if bfo.stop_at_bound else None)
    model = init_pheromone(instance, params.aco, params.layout)
    t0 = time.perf_counter()

    cost = None
    snapshot: dict = {}
    if params.swarming is not None:
        swarm = params.swarming

        def cost(seq, J):
            pos = snapshot.get("positions")
            if pos is None:
                return float(J)
            return J + compute_swarming(pos, snapshot["index"], swarm, theta=seq)

        def track(population):
            snapshot["positions"] = np.stack([b.sequence for b in population])
            if on_population is not None:
                on_population(population)
    else:
        track = on_population

    def chemotaxis(i, population):
        snapshot["index"] = i
        return tumble_move_swim(population[i], instance, model, params, rng, evaluator, cost)

    def after_generation(g):
        global_update(model, evaluator.best_sequence, evaluator.best_makespan)
        if on_generation is not None:
            on_generation(g, model)

    history = forage(instance, bfo, rng, evaluator, chemotaxis, after_generation, cost, track)
    return RunResult(
        algo="hbfo",
        instance=instance.name,
        seed=bfo.seed,
        best_sequence=evaluator.best_sequence.tolist(),
        best_makespan=evaluator.best_makespan,
        history=history,
        evaluations=evaluator.count,
        wall_time=time.perf_counter() - t0,
        params={
            "bfo": asdict(bfo),
            "aco": asdict(params.aco),
            "swarming": None if params.swarming is None else asdict(params.swarming),
            "layout": params.layout,
            "tumble": params.tumble,
        },
    )
