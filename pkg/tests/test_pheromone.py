import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jobshop.errors import EmptyEligibleSet, IndexOutOfRange, InvalidParameter
from jobshop.instance import OperationRef, parse_instance
from jobshop.pheromone import (
    AcoParams,
    EligibleChoice,
    global_update,
    init_pheromone,
    local_update,
    select_next,
    transition_probabilities,
)

from .conftest import TINY2


def choices(scores):
    return [EligibleChoice(OperationRef(j, 0), tau=s, eta=1.0) for j, s in enumerate(scores)]


@pytest.fixture
def model2(tiny2):
    return init_pheromone(tiny2, AcoParams())


def test_init_constant(tiny2, tiny1):
    m = init_pheromone(tiny2, AcoParams(tau0=0.5))
    assert m.tau.shape == (2, 2)
    assert np.all(m.tau == 0.5)
    assert init_pheromone(tiny1, AcoParams(tau0=1.0)).tau.tolist() == [[1.0]]
    assert init_pheromone(tiny2, AcoParams(), layout="position").tau.shape == (2, 4)


def test_params_validation():
    for bad in [dict(alpha=0.0), dict(alpha=1.0), dict(rho=1.5), dict(q0=1.0), dict(q0=0.0), dict(tau0=0.0), dict(beta=-1)]:
        with pytest.raises(InvalidParameter):
            AcoParams(**bad)
    with pytest.raises(InvalidParameter):
        init_pheromone(None, AcoParams(), layout="edge")


def test_desirability_guard(tiny2):
    m = init_pheromone(tiny2, AcoParams())
    assert m.eta.tolist() == [[1 / 3, 1 / 2], [1 / 2, 1 / 4]]


def test_exploit_takes_argmax(model2):
    assert select_next(model2, choices([2.0, 1.0]), q=0.5, roulette_draw=0.99).job == 0
    assert select_next(model2, choices([1.0, 2.0]), q=0.8, roulette_draw=0.0).job == 1  # q == q0 exploits


def test_explore_inverts_cdf(model2):
    # CDF: job0 covers [0, 2/3), job1 covers [2/3, 1)
    assert select_next(model2, choices([2.0, 1.0]), q=0.9, roulette_draw=0.5).job == 0
    assert select_next(model2, choices([2.0, 1.0]), q=0.9, roulette_draw=0.7).job == 1
    assert select_next(model2, choices([2.0, 1.0]), q=0.9, roulette_draw=2 / 3).job == 1
    assert select_next(model2, choices([2.0, 1.0]), q=0.9, roulette_draw=0.0).job == 0


def test_argmax_tie_goes_to_lowest_job(model2):
    assert select_next(model2, choices([1.0, 1.0, 1.0])[::-1], q=0.1, roulette_draw=0.5).job == 0


@pytest.mark.parametrize("q", [0.0, 0.5, 0.95])
def test_single_choice(model2, q):
    only = [EligibleChoice(OperationRef(1, 1), 0.3, 0.2)]
    assert select_next(model2, only, q=q, roulette_draw=0.9) == OperationRef(1, 1)


def test_empty_eligible(model2):
    with pytest.raises(EmptyEligibleSet):
        select_next(model2, [], 0.1, 0.1)
    with pytest.raises(EmptyEligibleSet):
        transition_probabilities([], 1.0)


def test_local_update(tiny2):
    m = init_pheromone(tiny2, AcoParams(rho=0.1, tau0=0.5))
    m.tau[0, 1] = 1.0
    local_update(m, OperationRef(0, 1))
    assert m.tau[0, 1] == pytest.approx(0.95, abs=1e-15)
    assert m.tau[0, 0] == m.tau[1, 0] == m.tau[1, 1] == 0.5


def test_local_update_fixed_point_and_off(tiny2):
    m = init_pheromone(tiny2, AcoParams(rho=0.1, tau0=0.5))
    local_update(m, OperationRef(1, 1))
    assert m.tau[1, 1] == 0.5
    still = init_pheromone(tiny2, AcoParams(rho=0.0, tau0=0.5))
    still.tau[:] = 0.7
    local_update(still, OperationRef(1, 0))
    assert np.all(still.tau == 0.7)


def test_local_update_out_of_range(tiny2):
    m = init_pheromone(tiny2, AcoParams())
    with pytest.raises(IndexOutOfRange):
        local_update(m, OperationRef(2, 0))
    with pytest.raises(IndexOutOfRange):
        local_update(m, OperationRef(0, 5))


def test_global_update_on_and_off_tour(tiny2):
    m = init_pheromone(tiny2, AcoParams(alpha=0.1), layout="position")
    m.tau[:] = 1.0
    global_update(m, [0, 1, 0, 1], 500)
    on = np.array([[1, 0, 1, 0], [0, 1, 0, 1]], dtype=bool)
    assert np.allclose(m.tau[on], 0.9002, rtol=0, atol=1e-15)
    assert np.allclose(m.tau[~on], 0.9, rtol=0, atol=1e-15)


def test_global_update_alpha_zero(tiny2):
    m = init_pheromone(tiny2, AcoParams(), layout="position")
    m.tau[:] = np.arange(8).reshape(2, 4) + 1.0
    before = m.tau.copy()
    global_update(m, [0, 1, 1, 0], 7, alpha=0.0)
    assert np.array_equal(m.tau, before)
    with pytest.raises(InvalidParameter):
        global_update(m, [0, 1, 1, 0], 0)


def test_operation_layout_every_cell_is_on_tour(tiny2):
    m = init_pheromone(tiny2, AcoParams())
    m.tau[:] = 1.0
    global_update(m, [1, 0, 0, 1], 500)
    assert np.allclose(m.tau, 0.9002, rtol=0, atol=1e-15)


score_lists = st.lists(st.floats(1e-6, 1e3, allow_nan=False), min_size=1, max_size=12)


def test_distribution_normalised_random_sets():
    rng = np.random.default_rng(7)
    for _ in range(100):
        k = int(rng.integers(1, 16))
        elig = [
            EligibleChoice(OperationRef(j, 0), float(t), float(e))
            for j, (t, e) in enumerate(zip(rng.uniform(1e-4, 5, k), rng.uniform(1e-3, 1, k)))
        ]
        p = transition_probabilities(elig, beta=float(rng.uniform(0, 3)))
        assert abs(p.sum() - 1.0) <= 1e-12
        assert np.all(p >= 0)


@settings(max_examples=200, deadline=None)
@given(score_lists, st.floats(0, 0.999), st.sampled_from([0.1, 10.0]))
def test_scale_covariance(scores, draw, c):
    params = AcoParams()
    model = type("M", (), {"params": params})()
    base = [EligibleChoice(OperationRef(j, 0), s, 0.5) for j, s in enumerate(scores)]
    scaled = [EligibleChoice(ch.op, ch.tau * c, ch.eta) for ch in base]
    assert select_next(model, base, 0.1, draw) == select_next(model, scaled, 0.1, draw)
    assert np.allclose(transition_probabilities(base, 1.0), transition_probabilities(scaled, 1.0), rtol=1e-12, atol=0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 3), st.integers(1, 10_000)), max_size=60))
def test_positivity_under_interleaving(ops):
    m = init_pheromone(parse_instance(TINY2), AcoParams(alpha=0.5, rho=1.0, tau0=1e-3), layout="position")
    seqs = [[0, 1, 0, 1], [1, 1, 0, 0], [0, 0, 1, 1]]
    for is_local, idx, length in ops:
        if is_local:
            local_update(m, OperationRef(idx % 2, 0), position=idx)
        else:
            global_update(m, seqs[idx % 3], length)
        assert np.all(m.tau > 0)


def test_select_next_is_pure(model2):
    elig = choices([0.4, 0.3, 0.3])
    picks = {select_next(model2, elig, 0.85, 0.55) for _ in range(5)}
    assert len(picks) == 1
