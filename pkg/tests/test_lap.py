import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from errors import ValidationError
from lap import assignment_cost, solve_lap


def test_zero_diagonal():
    perm, value = solve_lap([[0, 1], [1, 0]])
    assert perm.mapping == (0, 1)
    assert value == 0.0


def test_three_by_three():
    perm, value = solve_lap([[4, 1, 3], [2, 0, 5], [3, 2, 2]])
    assert perm.mapping == (1, 0, 2)
    assert value == 5.0


def test_single_entry():
    perm, value = solve_lap([[7]])
    assert perm.mapping == (0,)
    assert value == 7.0


def test_empty_matrix():
    perm, value = solve_lap(np.zeros((0, 0)))
    assert perm.n == 0
    assert value == 0.0


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), [[1.0, np.nan], [0.0, 1.0]], [[np.inf]]])
def test_rejects_bad_input(bad):
    with pytest.raises(ValidationError):
        solve_lap(bad)


def test_matches_brute_force_on_random_matrices():
    rng = np.random.default_rng(7)
    for trial in range(1000):
        n = int(rng.integers(1, 8))
        cost = rng.uniform(-1.0, 1.0, size=(n, n))
        if trial % 3 == 0:
            cost = rng.integers(0, 4, size=(n, n)).astype(float)
        perm, value = solve_lap(cost)
        _, best = oracle.brute_force_lap(cost)
        assert value == pytest.approx(best, abs=1e-9)
        assert assignment_cost(cost, perm) == value


def test_is_deterministic_on_ties():
    cost = np.ones((5, 5))
    first = solve_lap(cost)[0]
    assert all(solve_lap(cost)[0] == first for _ in range(5))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shift=st.floats(-100, 100))
def test_row_shift_moves_value_not_solution(seed, shift):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    cost = rng.uniform(size=(n, n))
    row = int(rng.integers(0, n))

    shifted = cost.copy()
    shifted[row] += shift
    _, value = solve_lap(cost)
    _, shifted_value = solve_lap(shifted)
    assert shifted_value == pytest.approx(value + shift, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), row_shift=st.floats(-100, 100), col_shift=st.floats(-100, 100))
def test_shifted_matrix_keeps_an_optimal_permutation(seed, row_shift, col_shift):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    cost = rng.uniform(size=(n, n))

    shifted = cost.copy()
    shifted[int(rng.integers(0, n))] += row_shift
    shifted[:, int(rng.integers(0, n))] += col_shift
    perm, value = solve_lap(cost)
    _, best = oracle.brute_force_lap(shifted)
    _, shifted_value = solve_lap(shifted)

    assert shifted_value == pytest.approx(value + row_shift + col_shift, abs=1e-9)
    assert assignment_cost(shifted, perm) == pytest.approx(best, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_value_is_a_lower_bound_for_random_permutations(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    cost = rng.normal(size=(n, n))
    _, value = solve_lap(cost)
    for _ in range(10):
        mapping = rng.permutation(n)
        assert value <= cost[np.arange(n), mapping].sum() + 1e-12


@pytest.mark.slow
def test_scaling_is_at_most_cubic():
    rng = np.random.default_rng(0)
    timings = {}
    for n in (250, 500, 1000):
        cost = rng.uniform(size=(n, n))
        start = time.perf_counter()
        solve_lap(cost)
        timings[n] = time.perf_counter() - start

    assert timings[1000] < 5.0
    assert timings[1000] / timings[500] <= 10.0
