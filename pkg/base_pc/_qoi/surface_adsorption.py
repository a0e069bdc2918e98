"""Surface coverage of an adsorbing species with log-normal rate constants."""

import logging
import math
import numpy as np
from scipy.integrate import solve_ivp
from ..defaults import GAMMA_ADSORPTION
from ..polynomials import PolyFamily
from .qoi_spec import QoiSpec


logger = logging.getLogger(__name__)


# the deterministic reaction rate constant
KAPPA = 10.0


# the initial surface coverage
INITIAL_COVERAGE = 0.9


# the time at which the coverage is observed
FINAL_TIME = 4.0


# integrator tolerances
RTOL = 1e-10
ATOL = 1e-12


# above this adsorption rate the ODE is solved for the uncovered fraction
STIFF_RATE = 1e8


class EvaluationError(RuntimeError):
    """An error raised when a QoI cannot be evaluated at an input."""


def rates(xi1, xi2):
    """
    Return the adsorption and desorption rates of one input.

    Args:
        xi1 (float): the standard normal input of the adsorption rate
        xi2 (float): the standard normal input of the desorption rate

    Returns:
        a tuple (alpha, gamma) with alpha = 0.1 + exp(10 xi1) and
        gamma = 0.001 + 0.001 exp(10 xi2)

    """
    alpha = math.exp(np.logaddexp(math.log(0.1), 10.0 * xi1))
    gamma = 0.001 + 0.001 * math.exp(10.0 * xi2)
    return alpha, gamma


def coverage(xi1, xi2, rtol=RTOL, atol=ATOL, final_time=FINAL_TIME):
    """
    Integrate the coverage equation with an implicit Radau scheme.

    d rho / dt = alpha (1 - rho) - gamma rho - kappa (1 - rho)^2 rho,
    rho(0) = 0.9. For large alpha the equation is integrated for
    y = 1 - rho, which keeps precision where rho is close to 1.

    Returns:
        rho at the final time

    """
    if not (math.isfinite(xi1) and math.isfinite(xi2)):
        raise EvaluationError("inputs must be finite")
    try:
        alpha, gamma = rates(xi1, xi2)
    except OverflowError as error:
        raise EvaluationError("rate overflow at ({}, {})".format(xi1, xi2)) from error
    if alpha > STIFF_RATE:

        def rhs(t, y):
            return [-alpha * y[0] + (gamma + KAPPA * y[0] ** 2) * (1.0 - y[0])]

        def jac(t, y):
            return [[-alpha - gamma + KAPPA * (2.0 * y[0] - 3.0 * y[0] ** 2)]]

        start, flip = 1.0 - INITIAL_COVERAGE, True
    else:

        def rhs(t, rho):
            r = rho[0]
            return [alpha * (1.0 - r) - gamma * r - KAPPA * (1.0 - r) ** 2 * r]

        def jac(t, rho):
            r = rho[0]
            return [[-alpha - gamma - KAPPA * (1.0 - r) * (1.0 - 3.0 * r)]]

        start, flip = INITIAL_COVERAGE, False
    solution = solve_ivp(
        rhs,
        (0.0, final_time),
        [start],
        method="Radau",
        jac=jac,
        rtol=rtol,
        atol=atol,
    )
    if not solution.success:
        raise EvaluationError(
            "integration failed at ({}, {}): {}".format(xi1, xi2, solution.message)
        )
    value = float(solution.y[0, -1])
    if not math.isfinite(value):
        raise EvaluationError("non-finite coverage at ({}, {})".format(xi1, xi2))
    return 1.0 - value if flip else value


def surface_adsorption(points):
    """Return the coverage at the final time for each row of an N x 2 array."""
    points = np.atleast_2d(points)
    values = np.empty(points.shape[0])
    for row, (xi1, xi2) in enumerate(points):
        values[row] = coverage(float(xi1), float(xi2))
    logger.debug("integrated %d coverage trajectories", points.shape[0])
    return values


def surface_adsorption_spec():
    """Return the surface adsorption QoI with standard normal inputs."""
    return QoiSpec(
        name="surface_adsorption",
        families=(PolyFamily.hermite(),) * 2,
        evaluator=surface_adsorption,
        suggested_gamma=GAMMA_ADSORPTION,
    )
