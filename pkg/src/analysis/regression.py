"""
Nonlinear least-squares fits of the decay models c e^{-rt} and c t^{-r}
Damped Gauss-Newton with a multiplicative (x10) damping schedule
"""
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_ITERATIONS = 500
RELATIVE_DECREASE_TOL = 1e-12
GRADIENT_TOL = 1e-10
_INITIAL_DAMPING = 1e-3
_MAX_DAMPING = 1e16


class DecayModel(str, Enum):
    EXPONENTIAL = 'exponential'
    RATIONAL = 'rational'

    def evaluate(self, t: np.ndarray, c: float, r: float) -> np.ndarray:
        if self is DecayModel.EXPONENTIAL:
            return c * np.exp(-r * t)
        return c * t ** (-r)

    def jacobian(self, t: np.ndarray, c: float, r: float) -> np.ndarray:
        """Columns d/dc and d/dr of the model"""
        if self is DecayModel.EXPONENTIAL:
            base = np.exp(-r * t)
            return np.column_stack([base, -c * t * base])
        base = t ** (-r)
        return np.column_stack([base, -c * np.log(t) * base])


@dataclass(frozen=True)
class FitResult:
    model: DecayModel
    c: float
    r: float
    r_squared: float
    rmse: float
    iterations: int
    converged: bool
    gradient_norm: float = 0.0
    stop_reason: str = ''
    degenerate: bool = False

    def to_dict(self) -> dict:
        row = asdict(self)
        row['model'] = self.model.value
        return row


def _as_arrays(series: Sequence[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    data = np.asarray(series, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("series must be a sequence of (t, value) pairs")
    return data[:, 0], data[:, 1]


def initial_guess(series: Sequence[Tuple[float, float]], model: DecayModel) -> Tuple[float, float]:
    """
    [1, -ln(v_T) / T] for the exponential model, [1, -ln(v_T) / ln(T)] for the rational one

    T is the largest time in the series; the sign makes r positive for decaying data.
    """
    t, values = _as_arrays(series)
    last = int(np.argmax(t))
    log_value = math.log(values[last])
    if DecayModel(model) is DecayModel.EXPONENTIAL:
        return 1.0, -log_value / t[last]
    return 1.0, -log_value / math.log(t[last])


def goodness_of_fit(series: Sequence[Tuple[float, float]], fit: FitResult) -> Tuple[float, float]:
    """
    R^2 = 1 - SS_res / SS_tot and RMSE = sqrt(SS_res / (N - 2))

    A constant series that is fitted exactly counts as R^2 = 1.
    """
    t, values = _as_arrays(series)
    if len(values) <= 2:
        raise ValueError(f"goodness of fit needs more than 2 points (got {len(values)})")
    residuals = values - fit.model.evaluate(t, fit.c, fit.r)
    ss_res = float(residuals @ residuals)
    ss_tot = float(np.sum((values - values.mean()) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res == 0.0 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return r_squared, math.sqrt(ss_res / (len(values) - 2))


def _finish(series, model, c, r, iterations, converged, gradient_norm, stop_reason, degenerate=False) -> FitResult:
    draft = FitResult(model=model, c=float(c), r=float(r), r_squared=float('nan'), rmse=float('nan'),
                      iterations=iterations, converged=converged, gradient_norm=float(gradient_norm),
                      stop_reason=stop_reason, degenerate=degenerate)
    r_squared, rmse = goodness_of_fit(series, draft)
    return replace(draft, r_squared=r_squared, rmse=rmse)


def fit_decay(series: Sequence[Tuple[float, float]], model: DecayModel,
              init: Optional[Tuple[float, float]] = None,
              max_iterations: int = MAX_ITERATIONS) -> FitResult:
    """
    Least-squares fit of c e^{-rt} or c t^{-r}

    Converged when an accepted step lowers the objective by a relative amount
    below 1e-12, when the gradient norm drops below 1e-10, or when the damping
    saturates (no descent direction left at machine precision). Running out of
    iterations returns the best iterate with converged=False.
    """
    model = DecayModel(model)
    t, values = _as_arrays(series)
    if len(values) < 3:
        raise ValueError(f"fit needs at least 3 points (got {len(values)})")
    if np.any(values <= 0):
        raise ValueError("decay fits need strictly positive values")
    if model is DecayModel.RATIONAL and np.any(t <= 0):
        raise ValueError("rational decay fits need t > 0")

    if np.ptp(values) == 0.0:
        logger.warning(f"Degenerate series (all values equal {values[0]}); returning r=0 for {model.value}")
        return _finish(series, model, values[0], 0.0, 0, True, 0.0, 'degenerate', degenerate=True)

    params = np.array(init if init is not None else initial_guess(series, model), dtype=float)
    residuals = model.evaluate(t, *params) - values
    cost = float(residuals @ residuals)
    damping = _INITIAL_DAMPING
    gradient_norm = float('inf')
    stop_reason = 'max_iterations'
    converged = False
    iteration = 0

    while iteration < max_iterations:
        iteration += 1
        jacobian = model.jacobian(t, *params)
        gradient = jacobian.T @ residuals
        gradient_norm = float(np.linalg.norm(gradient))
        if gradient_norm < GRADIENT_TOL:
            converged, stop_reason = True, 'gradient'
            break

        normal = jacobian.T @ jacobian
        damped = normal + damping * np.diag(np.diag(normal))
        try:
            step = np.linalg.solve(damped, -gradient)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(damped, -gradient, rcond=None)[0]

        candidate = params + step
        candidate_residuals = model.evaluate(t, *candidate) - values
        candidate_cost = float(candidate_residuals @ candidate_residuals)

        if np.isfinite(candidate_cost) and candidate_cost < cost:
            relative = (cost - candidate_cost) / cost
            near_gauss_newton = damping <= 1.0
            params, residuals, cost = candidate, candidate_residuals, candidate_cost
            damping = max(damping / 10.0, 1e-15)
            # Tiny decreases under heavy damping only mean the step was short
            if (relative < RELATIVE_DECREASE_TOL and near_gauss_newton) or cost == 0.0:
                converged, stop_reason = True, 'objective'
                break
        else:
            damping *= 10.0
            if damping > _MAX_DAMPING:
                converged, stop_reason = True, 'stationary'
                break

    if not converged:
        logger.warning(f"{model.value} fit did not converge in {max_iterations} iterations (|g|={gradient_norm:.3e})")

    return _finish(series, model, params[0], params[1], iteration, converged, gradient_norm, stop_reason)
