"""The two-dimensional Franke function on the unit square."""

import numpy as np
from ..defaults import GAMMA_LOW_D
from ..polynomials import PolyFamily
from .qoi_spec import QoiSpec


def franke(points):
    """
    Evaluate the Franke function.

    The second bump decays with the non-squared term (9 x_2 + 1) / 10.

    Args:
        points (np.ndarray): an N x 2 array of points in [0, 1]^2

    Returns:
        the N function values

    """
    points = np.atleast_2d(points)
    x = 9.0 * points[:, 0]
    y = 9.0 * points[:, 1]
    return (
        0.75 * np.exp(-((x - 2.0) ** 2) / 4.0 - (y - 2.0) ** 2 / 4.0)
        + 0.75 * np.exp(-((x + 1.0) ** 2) / 49.0 - (y + 1.0) / 10.0)
        + 0.5 * np.exp(-((x - 7.0) ** 2) / 4.0 - (y - 3.0) ** 2 / 4.0)
        - 0.2 * np.exp(-((x - 4.0) ** 2) - (y - 7.0) ** 2)
    )


def franke_spec():
    """Return the Franke QoI with uniform inputs on [0, 1]^2."""
    return QoiSpec(
        name="franke",
        families=(PolyFamily.legendre(0.0, 1.0),) * 2,
        evaluator=franke,
        suggested_gamma=GAMMA_LOW_D,
    )
