"""Partial matching loss with analytic gradients.

    Z_ij   = 1 if M_ij = 1 or C_ij <= ρ(α_i + β_j), else 0
    L_cost = -Σ Z_ij [M_ij log(1 - C_ij) + (1 - M_ij) log C_ij]
    L_bias = Σ_i (M 1)_i (1 - α_i)² + Σ_j (Mᵀ 1)_j (1 - β_j)²
    L      = L_cost + λ L_bias

Pairs above their feasibility threshold can never be matched by the solver,
so they are left out of L_cost unless the ground truth matches them. Z is
an indicator and is held constant when differentiating.
"""

import dataclasses
import math

import numpy as np
from loguru import logger

from errors import NearKinkError, ValidationError
from models import LossInputs, LossReport

EPSILON = 1e-7
MIN_STEP = 1e-7
MAX_STEP = 1e-4
ERROR_FLOOR = 1.0


def validate_loss_inputs(inputs: LossInputs) -> LossInputs:
    m, n = inputs.shape
    if inputs.alpha.shape != (m,):
        raise ValidationError(f"dimension mismatch: alpha has {inputs.alpha.size} entries, m={m}")
    if inputs.beta.shape != (n,):
        raise ValidationError(f"dimension mismatch: beta has {inputs.beta.size} entries, n={n}")
    if (inputs.truth.m, inputs.truth.n) != (m, n):
        raise ValidationError(
            f"dimension mismatch: ground truth is {inputs.truth.m}x{inputs.truth.n}, cost is {m}x{n}"
        )
    for name, values in (("cost", inputs.cost), ("alpha", inputs.alpha), ("beta", inputs.beta)):
        if not np.all(np.isfinite(values)):
            raise ValidationError(f"non-finite entry in {name}")
    if np.any((inputs.alpha < 0) | (inputs.alpha > 1)) or np.any((inputs.beta < 0) | (inputs.beta > 1)):
        raise ValidationError("matching biases must lie in [0, 1]")
    if not (inputs.rho > 0 and math.isfinite(inputs.rho)):
        raise ValidationError(f"rho must be positive, got {inputs.rho}")
    if not (0.0 <= inputs.lam <= 1.0):
        raise ValidationError(f"lambda must lie in [0, 1], got {inputs.lam}")
    return inputs


def _mask(cost, alpha, beta, rho, truth) -> np.ndarray:
    thresholds = rho * (alpha[:, None] + beta[None, :])
    return (truth == 1.0) | (cost <= thresholds)


def _evaluate(cost, alpha, beta, rho, truth, lam, epsilon, with_grad: bool) -> LossReport:
    """Loss on raw arrays; no validation, so perturbed inputs may leave [0, 1]."""
    active = _mask(cost, alpha, beta, rho, truth)
    z = active.astype(np.float64)
    clamped = np.clip(cost, epsilon, 1.0 - epsilon)

    l_cost = -float(np.sum(z * (truth * np.log1p(-clamped) + (1.0 - truth) * np.log(clamped))))
    row_matched = truth.sum(axis=1)
    col_matched = truth.sum(axis=0)
    l_bias = float(np.sum(row_matched * (1.0 - alpha) ** 2) + np.sum(col_matched * (1.0 - beta) ** 2))

    report = dict(
        l_cost=l_cost,
        l_bias=l_bias,
        l_total=l_cost + lam * l_bias,
        active_pairs=int(active.sum()),
    )
    if with_grad:
        report["grad_cost"] = z * (truth / (1.0 - clamped) - (1.0 - truth) / clamped)
        report["grad_alpha"] = -2.0 * lam * row_matched * (1.0 - alpha)
        report["grad_beta"] = -2.0 * lam * col_matched * (1.0 - beta)
    return LossReport(**report)


def _arrays(inputs: LossInputs):
    return inputs.cost, inputs.alpha, inputs.beta, inputs.rho, inputs.truth.to_matrix(), inputs.lam


def attention_mask(inputs: LossInputs) -> np.ndarray:
    """Z as a boolean matrix: ground-truth pairs plus all feasible pairs."""
    validate_loss_inputs(inputs)
    cost, alpha, beta, rho, truth, _ = _arrays(inputs)
    return _mask(cost, alpha, beta, rho, truth)


def partial_matching_loss(inputs: LossInputs, epsilon: float = EPSILON) -> LossReport:
    """L_cost, L_bias and L; costs are clamped to [ε, 1 - ε] inside the logs."""
    validate_loss_inputs(inputs)
    return _evaluate(*_arrays(inputs), epsilon, with_grad=False)


def loss_gradients(inputs: LossInputs, epsilon: float = EPSILON) -> LossReport:
    """Loss values together with ∂L/∂C, ∂L/∂α and ∂L/∂β."""
    validate_loss_inputs(inputs)
    return _evaluate(*_arrays(inputs), epsilon, with_grad=True)


def _check_kinks(inputs: LossInputs, step: float):
    if not (MIN_STEP <= step <= MAX_STEP):
        raise NearKinkError(f"step {step:g} outside [{MIN_STEP:g}, {MAX_STEP:g}]")

    cost = inputs.cost
    if np.any(cost <= 2 * step) or np.any(cost >= 1.0 - 2 * step):
        raise NearKinkError(f"cost entry within {2 * step:g} of 0 or 1")

    # a bias step moves the threshold by ρ·h
    margin = 2 * step * max(1.0, inputs.rho)
    thresholds = inputs.rho * (inputs.alpha[:, None] + inputs.beta[None, :])
    unmatched = inputs.truth.to_matrix() == 0.0
    near = unmatched & (np.abs(cost - thresholds) <= margin)
    if np.any(near):
        i, j = (int(x) for x in np.argwhere(near)[0])
        raise NearKinkError(f"near-kink: cost ({i + 1}, {j + 1}) within {margin:g} of its threshold")


def finite_difference_check(
    inputs: LossInputs,
    step: float = 1e-5,
    epsilon: float = EPSILON,
    floor: float = ERROR_FLOOR,
) -> float:
    """
    Compare analytic gradients with central differences of L.

    The relative error of each coordinate is
    |numeric - analytic| / max(|numeric|, |analytic|, floor). Gradients
    smaller than floor are compared absolutely.

    Args:
        inputs: Loss inputs away from kinks
        step: Central difference step h
        floor: Smallest magnitude a gradient is scaled by

    Returns:
        Largest relative error over all C, α and β coordinates
    """
    if not floor > 0:
        raise ValidationError(f"floor must be positive, got {floor}")
    validate_loss_inputs(inputs)
    _check_kinks(inputs, step)

    cost, alpha, beta, rho, truth, lam = _arrays(inputs)
    analytic = _evaluate(cost, alpha, beta, rho, truth, lam, epsilon, with_grad=True)

    def total(c, a, b) -> float:
        return _evaluate(c, a, b, rho, truth, lam, epsilon, with_grad=False).l_total

    def central(values: np.ndarray, index, rebuild) -> float:
        up, down = values.copy(), values.copy()
        up[index] += step
        down[index] -= step
        return (rebuild(up) - rebuild(down)) / (2 * step)

    worst = 0.0
    pairs = (
        (cost, analytic.grad_cost, lambda c: total(c, alpha, beta)),
        (alpha, analytic.grad_alpha, lambda a: total(cost, a, beta)),
        (beta, analytic.grad_beta, lambda b: total(cost, alpha, b)),
    )
    for values, gradient, rebuild in pairs:
        for index in np.ndindex(values.shape):
            numeric = central(values, index, rebuild)
            exact = float(gradient[index])
            error = abs(numeric - exact) / max(abs(numeric), abs(exact), floor)
            worst = max(worst, error)

    logger.debug(f"Gradient check on {inputs.shape}: max error {worst:.3e}")
    return worst


def with_lambda(inputs: LossInputs, lam: float) -> LossInputs:
    return validate_loss_inputs(dataclasses.replace(inputs, lam=lam))
