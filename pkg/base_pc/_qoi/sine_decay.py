"""A manufactured exponential QoI with decaying dimension importance."""

import numpy as np
from ..defaults import suggested_gamma
from ..polynomials import PolyFamily
from .qoi_spec import QoiSpec


def sine_decay(points):
    """Evaluate exp(2 - sum_k sin(k) x_k / k) on each row of an N x d array."""
    points = np.atleast_2d(points)
    k = np.arange(1, points.shape[1] + 1, dtype=float)
    return np.exp(2.0 - points @ (np.sin(k) / k))


def sine_decay_spec(d=20):
    """Return the sine-decay QoI with uniform inputs on [0, 1]^d."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise TypeError("d must be of type: int")
    if d < 1:
        raise ValueError("d must be positive")
    return QoiSpec(
        name="sine_decay",
        families=(PolyFamily.legendre(0.0, 1.0),) * int(d),
        evaluator=sine_decay,
        suggested_gamma=suggested_gamma(d),
    )
