from typing import Sequence, Tuple

import numpy as np
from tqdm import tqdm


def progress_bar(total, desc):
    return tqdm(
        total=total,
        desc=desc,
        colour='green',
        bar_format='{l_bar}{bar:30}{r_bar}'
    )


def fit_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(step)."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


def refinement_passes(steps: Sequence[float], errors: Sequence[float],
                      min_order: float, noise_floor: float) -> Tuple[bool, float]:
    """Order check that also accepts residuals already at the noise floor."""
    errors = np.asarray(errors, dtype=float)
    if np.all(errors <= noise_floor):
        return True, float('inf')
    if np.any(errors <= 0.0):
        return False, float('nan')
    order = fit_order(steps, errors)
    return order >= min_order, order
