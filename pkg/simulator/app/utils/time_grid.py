"""
Fixed-step time grid shared by the moment and master-equation integrators
"""
import math
from typing import Tuple

import numpy as np
from numpy.typing import NDArray

# Spans within this relative distance of a whole number of steps are not
# given an extra sliver step.
_WHOLE_STEP_RTOL = 1e-9


def step_count(span: float, dt: float) -> int:
    """Number of steps of size ≤ dt needed to cover span"""
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be positive and finite, got {dt}")
    if span <= 0.0 or not math.isfinite(span):
        raise ValueError(f"integration span must be positive and finite, got {span}")
    ratio = span / dt
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= _WHOLE_STEP_RTOL * max(1.0, ratio):
        return int(nearest)
    return int(math.ceil(ratio))


def fixed_step_grid(t_start: float, t_final: float, dt: float) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Grid t_k = t_start + k·dt whose last step is shortened to end on t_final

    Returns:
        (times, steps): times has n+1 entries with times[-1] == t_final exactly;
        steps[k] is the step taken from times[k] to times[k+1].
    """
    n = step_count(t_final - t_start, dt)
    times = t_start + dt * np.arange(n + 1, dtype=np.float64)
    times[-1] = t_final
    steps = np.full(n, dt, dtype=np.float64)
    steps[-1] = t_final - times[n - 1]
    return times, steps


def sample_indices(n_steps: int, sample_every: int) -> NDArray[np.int64]:
    """Grid indices kept when sampling every `sample_every` steps; always keeps 0 and n_steps"""
    if sample_every < 1:
        raise ValueError(f"sample_every must be a positive integer, got {sample_every}")
    indices = np.arange(0, n_steps + 1, sample_every, dtype=np.int64)
    if indices[-1] != n_steps:
        indices = np.append(indices, n_steps)
    return indices
