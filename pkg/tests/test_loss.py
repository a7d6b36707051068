import math

import numpy as np
import pytest

import core
import loss
from errors import NearKinkError, ValidationError
from models import LossInputs, PartialAssignment


def single(cost=0.5, alpha=1.0, beta=1.0, rho=100.0, lam=0.5, matched=True):
    pairs = frozenset({(0, 0)}) if matched else frozenset()
    return LossInputs(
        cost=[[cost]],
        alpha=[alpha],
        beta=[beta],
        rho=rho,
        truth=PartialAssignment(1, 1, pairs),
        lam=lam,
    )


def test_attention_mask_ground_truth_override():
    inputs = single(cost=0.99, alpha=0.001, beta=0.001, rho=0.1)
    assert loss.attention_mask(inputs).tolist() == [[True]]


def test_attention_mask_drops_infeasible_negative():
    inputs = single(cost=0.9, rho=0.4, matched=False)
    assert loss.attention_mask(inputs).tolist() == [[False]]


def test_attention_mask_example():
    inputs = LossInputs(
        cost=[[0.2, 0.5], [0.5, 0.95]],
        alpha=[1, 1],
        beta=[1, 1],
        rho=0.4,
        truth=PartialAssignment(2, 2, frozenset({(0, 0)})),
    )
    assert loss.attention_mask(inputs).tolist() == [[True, True], [True, False]]


def test_single_entry_loss():
    report = loss.partial_matching_loss(single())
    assert report.l_cost == pytest.approx(math.log(2), abs=1e-12)
    assert report.l_bias == 0.0
    assert report.l_total == pytest.approx(0.6931471805599453, abs=1e-12)


def test_perfect_prediction_limit():
    report = loss.partial_matching_loss(single(cost=0.0))
    assert report.l_total == pytest.approx(0.0, abs=1e-6)


def test_bias_term():
    report = loss.partial_matching_loss(single(alpha=0.5, lam=1.0))
    assert report.l_bias == pytest.approx(0.25)
    assert report.l_total == pytest.approx(math.log(2) + 0.25)


def test_closed_form_gradients():
    report = loss.loss_gradients(single(alpha=0.5, lam=1.0))
    assert report.grad_cost[0, 0] == pytest.approx(2.0, abs=1e-9)
    assert report.grad_alpha[0] == pytest.approx(-1.0, abs=1e-9)
    assert report.grad_beta[0] == pytest.approx(0.0, abs=1e-9)


def test_masked_entries_have_zero_gradient():
    inputs = LossInputs(
        cost=[[0.2, 0.5], [0.5, 0.95]],
        alpha=[1, 1],
        beta=[1, 1],
        rho=0.4,
        truth=PartialAssignment(2, 2, frozenset({(0, 0)})),
    )
    report = loss.loss_gradients(inputs)
    assert report.grad_cost[1, 1] == 0.0
    assert report.active_pairs == 3


def test_fixed_bias_variant():
    inst = core.make_instance([[0.2, 0.9]], [0.3], [0.1, 0.6], 0.4, ground_truth=[(0, 0)])
    inputs = LossInputs.from_instance(inst, lam=0.7, fixed_biases=True)
    assert inputs.lam == 0.0
    assert inputs.alpha.tolist() == [1.0]
    report = loss.loss_gradients(inputs)
    assert report.l_total == report.l_cost
    assert np.all(report.grad_alpha == 0.0)


def test_from_instance_needs_ground_truth(diagonal_instance):
    with pytest.raises(ValidationError, match="ground truth"):
        LossInputs.from_instance(diagonal_instance)


@pytest.mark.parametrize(
    "overrides",
    [dict(alpha=1.5), dict(beta=-0.1), dict(rho=0.0), dict(lam=2.0), dict(cost=float("nan"))],
)
def test_invalid_inputs(overrides):
    with pytest.raises(ValidationError):
        loss.partial_matching_loss(single(**overrides))


def kink_free(rng, m=3, n=4, rho=0.4, step=1e-5):
    """Random inputs with every entry well away from 0, 1 and its threshold."""
    while True:
        cost = rng.uniform(0.05, 0.95, size=(m, n))
        alpha = rng.uniform(0.05, 0.95, size=m)
        beta = rng.uniform(0.05, 0.95, size=n)
        thresholds = rho * (alpha[:, None] + beta[None, :])
        if np.all(np.abs(cost - thresholds) > 100 * step):
            break
    k = int(rng.integers(0, min(m, n) + 1))
    rows = rng.choice(m, size=k, replace=False)
    cols = rng.choice(n, size=k, replace=False)
    truth = PartialAssignment(m, n, frozenset(zip(rows.tolist(), cols.tolist())))
    return LossInputs(cost=cost, alpha=alpha, beta=beta, rho=rho, truth=truth, lam=float(rng.uniform()))


def test_finite_differences_on_random_instances():
    rng = np.random.default_rng(31)
    for _ in range(50):
        assert loss.finite_difference_check(kink_free(rng), step=1e-5) < 1e-5


def test_finite_differences_on_single_entry():
    assert loss.finite_difference_check(single(alpha=0.5, beta=0.5, lam=1.0), step=1e-5) < 1e-8


def test_finite_difference_error_is_relative_for_steep_gradients():
    # ∂L/∂C = 1 / (1 - 0.9) = 10; the central difference is off by about 3e-8 in absolute terms
    inputs = single(cost=0.9)
    assert loss.finite_difference_check(inputs, step=1e-5) < 1e-8
    assert loss.finite_difference_check(inputs, step=1e-5, floor=1e-12) < 1e-8


def test_finite_difference_floor_must_be_positive():
    with pytest.raises(ValidationError, match="floor"):
        loss.finite_difference_check(single(), step=1e-5, floor=0.0)


def test_near_kink_is_refused():
    inputs = single(cost=0.8 + 5e-6, rho=0.4, matched=False)
    with pytest.raises(NearKinkError, match="near-kink"):
        loss.finite_difference_check(inputs, step=1e-5)


@pytest.mark.parametrize("step", [1e-9, 1e-2])
def test_step_range(step):
    with pytest.raises(NearKinkError):
        loss.finite_difference_check(single(), step=step)


def test_with_lambda():
    inputs = loss.with_lambda(single(alpha=0.5), 1.0)
    assert inputs.lam == 1.0
    with pytest.raises(ValidationError):
        loss.with_lambda(inputs, -0.5)
