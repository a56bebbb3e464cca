from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from src.config import Tolerance
from src.util.utils import refinement_passes


@dataclass
class CheckResult:
    """One row of a verification report."""
    name: str
    value: float
    threshold: float
    passed: bool
    kind: str = 'tolerance'  # 'tolerance', 'order' or 'exact'
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        out = asdict(self)
        out['value'] = _plain(self.value)
        out['threshold'] = _plain(self.threshold)
        out['detail'] = {k: _plain(v) for k, v in self.detail.items()}
        return out


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def tolerance_check(name: str, value: float, tol: float, **detail) -> CheckResult:
    value = float(value)
    return CheckResult(name, value, tol, bool(value <= tol), 'tolerance',
                       detail)


def order_check(name: str, steps: Sequence[float], errors: Sequence[float],
                min_order: float = Tolerance.MIN_ORDER,
                noise_floor: Optional[float] = None, **detail) -> CheckResult:
    """Refinement check: fitted order >= min_order, or every error at the
    noise floor."""
    floor = Tolerance.NOISE_FLOOR if noise_floor is None else noise_floor
    passed, order = refinement_passes(steps, errors, min_order, floor)
    detail = dict(detail, steps=list(steps), errors=[float(e) for e in errors])
    return CheckResult(name, order, min_order, bool(passed), 'order', detail)
