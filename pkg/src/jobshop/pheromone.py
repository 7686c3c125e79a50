"""Ant-colony pieces: pheromone storage, the state transition rule and updates.

The transition rule picks among eligible operations by the score
``tau * eta**beta``. With probability q0 (a draw ``q <= q0``) it takes the
argmax; otherwise it samples proportionally to the scores (roulette wheel).

Two pheromone layouts are supported:

``"operation"``
    ``tau[job, op_index]``, shape (n, m). Every complete sequence uses every
    cell exactly once, so updates hit all cells alike and tau never becomes
    informative. Kept because it is the literal cell-per-operation model.
``"position"``
    ``tau[job, position]``, shape (n, n*m): how good it is to place a token of
    ``job`` at that position of the sequence. This is the solver default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyEligibleSet, IndexOutOfRange, InvalidParameter
from .instance import JsspInstance, OperationRef

LAYOUTS = ("operation", "position")


@dataclass(frozen=True)
class AcoParams:
    alpha: float = 0.1  # global decay
    beta: float = 1.0  # desirability exponent
    rho: float = 0.1  # local evaporation
    q0: float = 0.8  # exploitation threshold
    tau0: float = 0.5  # initial / local-reset pheromone

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameter(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta < 0.0:
            raise InvalidParameter(f"beta must be >= 0, got {self.beta}")
        if not 0.0 <= self.rho <= 1.0:
            raise InvalidParameter(f"rho must lie in [0, 1], got {self.rho}")
        if not 0.0 < self.q0 < 1.0:
            raise InvalidParameter(f"q0 must lie in (0, 1), got {self.q0}")
        if not self.tau0 > 0.0:
            raise InvalidParameter(f"tau0 must be > 0, got {self.tau0}")


@dataclass(frozen=True)
class EligibleChoice:
    op: OperationRef
    tau: float
    eta: float

    def score(self, beta: float) -> float:
        return self.tau * self.eta**beta


def desirability(processing_time) -> np.ndarray:
    """Inverse processing time, guarded so zero-length operations get 1."""
    return 1.0 / np.maximum(1, np.asarray(processing_time, dtype=np.float64))


@dataclass(eq=False)
class PheromoneModel:
    tau: np.ndarray
    params: AcoParams
    layout: str = "operation"
    eta: np.ndarray = field(default=None, repr=False)

    def cell(self, op: OperationRef, position: int | None = None) -> tuple[int, int]:
        if self.layout == "position":
            if position is None:
                raise ValueError("position layout needs the sequence position of the choice")
            return op.job, position
        return op.job, op.op_index

    def eligible(self, instance: JsspInstance, next_op, position: int = 0) -> list[EligibleChoice]:
        """Next unscheduled operation of every unfinished job, in job order."""
        out = []
        for j, k in enumerate(next_op):
            if k < instance.n_machines:
                op = OperationRef(j, int(k))
                out.append(EligibleChoice(op, float(self.tau[self.cell(op, position)]), float(self.eta[j, k])))
        return out

    def to_csv(self) -> str:
        return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in self.tau)


def init_pheromone(instance: JsspInstance, params: AcoParams, layout: str = "operation") -> PheromoneModel:
    if layout not in LAYOUTS:
        raise InvalidParameter(f"unknown pheromone layout {layout!r}; expected one of {LAYOUTS}")
    cols = instance.n_machines if layout == "operation" else instance.n_operations
    tau = np.full((instance.n_jobs, cols), params.tau0, dtype=np.float64)
    return PheromoneModel(tau, params, layout, desirability(instance.times))


def transition_probabilities(eligible: list[EligibleChoice], beta: float) -> np.ndarray:
    """Roulette-wheel distribution over ``eligible``; sums to one."""
    if not eligible:
        raise EmptyEligibleSet("no eligible operation to choose from")
    scores = np.array([c.score(beta) for c in eligible])
    return scores / scores.sum()


def select_next(model: PheromoneModel, eligible: list[EligibleChoice], q: float, roulette_draw: float) -> OperationRef:
    """Apply the state transition rule for given random draws.

    ``q <= q0`` exploits (argmax, ties to the lowest job index); otherwise
    ``roulette_draw`` is inverted through the cumulative score distribution.
    """
    if not eligible:
        raise EmptyEligibleSet("no eligible operation to choose from")
    beta = model.params.beta
    ordered = sorted(eligible, key=lambda c: c.op.job)
    if q <= model.params.q0:
        best = ordered[0]
        best_score = best.score(beta)
        for c in ordered[1:]:
            s = c.score(beta)
            if s > best_score:
                best, best_score = c, s
        return best.op
    scores = [c.score(beta) for c in ordered]
    target = roulette_draw * sum(scores)
    acc = 0.0
    for c, s in zip(ordered, scores):
        acc += s
        if target < acc:
            return c.op
    return ordered[-1].op


def _check_cell(model: PheromoneModel, row: int, col: int) -> None:
    n, k = model.tau.shape
    if not (0 <= row < n and 0 <= col < k):
        raise IndexOutOfRange(f"pheromone cell ({row}, {col}) outside {n}x{k}")


def local_update(model: PheromoneModel, op: OperationRef, position: int | None = None) -> PheromoneModel:
    """tau <- (1 - rho) * tau + rho * tau0 on the chosen cell only."""
    row, col = model.cell(op, position)
    _check_cell(model, row, col)
    p = model.params
    model.tau[row, col] = (1.0 - p.rho) * model.tau[row, col] + p.rho * p.tau0
    return model


def tour_mask(model: PheromoneModel, best_sequence) -> np.ndarray:
    seq = np.asarray(best_sequence, dtype=np.int64)
    mask = np.zeros(model.tau.shape, dtype=bool)
    if model.layout == "position":
        mask[seq, np.arange(seq.size)] = True
    else:
        counts = np.zeros(model.tau.shape[0], dtype=np.int64)
        for j in seq:
            mask[j, counts[j]] = True
            counts[j] += 1
    return mask


def global_update(model: PheromoneModel, best_sequence, best_makespan: int, alpha: float | None = None) -> PheromoneModel:
    """Decay every cell by alpha and deposit alpha / L_gb on the best tour.

    ``alpha`` defaults to ``model.params.alpha``; passing 0 turns the update
    into a no-op, which the parameter validation would otherwise forbid.
    """
    if best_makespan <= 0:
        raise InvalidParameter(f"best makespan must be positive, got {best_makespan}")
    alpha = model.params.alpha if alpha is None else alpha
    deposit = np.where(tour_mask(model, best_sequence), 1.0 / best_makespan, 0.0)
    model.tau *= 1.0 - alpha
    model.tau += alpha * deposit
    return model
