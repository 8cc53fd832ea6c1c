"""Central finite-difference verification of analytic gradients.

The numeric side uses only forward evaluations of f, so it stays an
independent oracle for the tape's backward pass.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import EvaluationError
from .core import Tensor, backward


@dataclass
class GradCheckReport:
    max_rel_err: float
    max_abs_err: float
    worst_index: tuple
    analytic: np.ndarray
    numeric: np.ndarray


def grad_check(f, x, eps=1e-5):
    """Compare analytic grad of scalar f(x) against central differences.

    Relative error per element is |a - n| / (max(|a|, |n|) + 1e-8).
    """
    x = Tensor(np.asarray(x, dtype=np.float64), requires_grad=True)
    y = f(x)
    if not np.isfinite(y.data).all():
        raise EvaluationError("f(x) is not finite")
    x.grad = None
    backward(y)
    analytic = (
        x.grad.copy() if x.grad is not None else np.zeros_like(x.data)
    )

    numeric = np.zeros_like(x.data)
    flat = x.data.reshape(-1)
    num_flat = numeric.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        hi = float(f(Tensor(x.data)).data)
        flat[i] = orig - eps
        lo = float(f(Tensor(x.data)).data)
        flat[i] = orig
        if not (np.isfinite(hi) and np.isfinite(lo)):
            raise EvaluationError(f"f(x) not finite near element {i}")
        num_flat[i] = (hi - lo) / (2.0 * eps)

    abs_err = np.abs(analytic - numeric)
    rel_err = abs_err / (np.maximum(np.abs(analytic), np.abs(numeric)) + 1e-8)
    worst = np.unravel_index(int(np.argmax(rel_err)), rel_err.shape) if rel_err.size else ()
    return GradCheckReport(
        max_rel_err=float(rel_err.max()) if rel_err.size else 0.0,
        max_abs_err=float(abs_err.max()) if abs_err.size else 0.0,
        worst_index=worst,
        analytic=analytic,
        numeric=numeric,
    )
