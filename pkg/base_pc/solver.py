"""Weighted basis pursuit denoising and isometry diagnostics of designs."""

import logging
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
import numpy as np
from scipy.optimize import linprog
from .polynomials import basis_matrix


logger = logging.getLogger(__name__)


# the default budget of matrix-vector products per solve
MAX_MATVEC = 10000


# the effective tolerance used in place of delta = 0
DELTA_FLOOR = 1e-10


# feasibility tolerance on the residual, relative to ||rhs||
FEAS_TOL = 1e-7


# a least-squares solution is declared when ||D^T r||_inf <= LS_TOL ||r||
LS_TOL = 1e-6


# smallest duality gap the inner solver is asked to reach
GAP_FLOOR = 1e-14


# a root is accepted once the duality gap bounds the l1 excess by L1_RTOL tau
L1_RTOL = 1e-5


# tolerances up to this value are solved as a linear program
BASIS_PURSUIT_DELTA = 1e-6


# HiGHS feasibility tolerances of the basis pursuit program
LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


# bounds on the spectral (Barzilai-Borwein) step length
STEP_MIN = 1e-16
STEP_MAX = 1e5


# the length of the nonmonotone line search memory
NONMONOTONE = 10


# the number of backtracking steps before a line search gives up
LINE_SEARCH_STEPS = 10


# sufficient decrease parameter of the line search
SUFFICIENT_DECREASE = 1e-4


# coefficients below this fraction of the largest are off the support
SUPPORT_RTOL = 1e-4


# allowed relative growth of ||c||_1 when polishing on the support
POLISH_L1_RTOL = 1e-4


# the largest number of column subsets ric_bruteforce will visit
MAX_SUBSETS = 10 ** 6


# the largest sparsity ric_bruteforce will accept
MAX_SPARSITY = 12


# solver exit states
ROOT = "root"
LEAST_SQUARES = "least_squares"
ITERATIONS = "iterations"


@dataclass(frozen=True)
class DesignSystem:
    """
    A weighted measurement system D c ~ rhs for one basis.

    Args:
        matrix (np.ndarray): the N x |B| design matrix, row i scaled by w_i
        rhs (np.ndarray): the length-N weighted QoI vector
        basis (BasisSpec): the basis of the matrix columns

    """

    matrix: np.ndarray
    rhs: np.ndarray
    basis: object = None

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        if self.rhs.shape != (self.matrix.shape[0],):
            raise ValueError("rhs must have one entry per matrix row")
        if self.basis is not None and len(self.basis) != self.matrix.shape[1]:
            raise ValueError("matrix must have one column per basis member")
        if not (np.all(np.isfinite(self.matrix)) and np.all(np.isfinite(self.rhs))):
            raise ValueError("design system must be finite")

    @property
    def n_rows(self):
        """Return the number of samples N."""
        return self.matrix.shape[0]

    @property
    def n_cols(self):
        """Return the number of basis functions |B|."""
        return self.matrix.shape[1]

    def rows(self, index):
        """Return the system restricted to the selected rows."""
        return DesignSystem(self.matrix[index], self.rhs[index], self.basis)


@dataclass(frozen=True)
class BpdnSolution:
    """
    The result of one basis pursuit denoising solve.

    Args:
        c_hat (np.ndarray): the coefficient vector
        residual_rel (float): ||rhs - D c_hat|| / ||rhs||
        iterations (int): the number of projected gradient iterations
        converged (bool): whether the solve ended at a root, so that the
            residual is within delta of the rhs
        status (str): 'root', 'least_squares' or 'iterations'
        matvecs (int): the number of products with D or D^T

    """

    c_hat: np.ndarray
    residual_rel: float
    iterations: int
    converged: bool
    status: str = ROOT
    matvecs: int = 0


def design_system(basis, pool):
    """
    Build the weighted design system of a basis on an evaluated pool.

    Rows are scaled by the pool's weights times the one-shot correction
    pending on its newest epoch.
    """
    if np.any(pool.pending_rows):
        raise ValueError("every pool sample must carry a QoI value")
    scale = pool.row_scale()
    matrix = scale[:, None] * basis_matrix(basis, pool.points)
    return DesignSystem(matrix, scale * pool.values, basis)


def _project_l1(x, tau):
    """Project x onto the l1-ball of radius tau."""
    magnitude = np.abs(x)
    if magnitude.sum() <= tau:
        return x.copy()
    if tau <= np.spacing(1):
        return np.zeros_like(x)
    # sort-based threshold search for the soft-threshold level
    ordered = np.sort(magnitude)[::-1]
    excess = (np.cumsum(ordered) - tau) / np.arange(1, ordered.size + 1)
    level = excess[np.flatnonzero(ordered > excess)[-1]]
    return np.sign(x) * np.maximum(magnitude - level, 0.0)


class _Lasso:
    """Spectral projected gradient for min ||D x - b||^2 / 2, ||x||_1 <= tau."""

    def __init__(self, matrix, rhs, budget):
        self.matrix = matrix
        self.rhs = rhs
        self.budget = budget
        self.matvecs = 0
        self.iterations = 0
        self.step = 1.0

    def _residual(self, x):
        self.matvecs += 1
        return self.rhs - self.matrix @ x

    def _gradient(self, r):
        self.matvecs += 1
        return -(self.matrix.T @ r)

    def _line_search(self, x, d, gtd, f, fmax):
        """Nonmonotone backtracking along the feasible direction d."""
        step = 1.0
        for _ in range(LINE_SEARCH_STEPS + 1):
            x_new = x + step * d
            r_new = self._residual(x_new)
            f_new = 0.5 * r_new @ r_new
            if f_new < fmax + SUFFICIENT_DECREASE * step * gtd:
                return x_new, r_new, f_new
            # safeguarded quadratic interpolation
            curvature = 2.0 * (f_new - f - step * gtd)
            trial = -gtd * step ** 2 / curvature if curvature > 0.0 else 0.0
            if step <= 0.1 or not 0.1 <= trial <= 0.9 * step:
                trial = step / 2.0
            step = trial
        return None

    def solve(self, x, tau, loose):
        """
        Minimise the residual inside the l1-ball of radius tau.

        The solve stops once the duality gap is below the larger of
        `loose` and the gap certifying ||x||_1 to L1_RTOL.

        Returns:
            a tuple (x, r, g, optimal, ok) where optimal tells the l1 gap
            was reached and ok is False if the matvec budget ran out or
            the line search stalled first

        """
        x = _project_l1(x, tau)
        r = self._residual(x)
        g = self._gradient(r)
        f = 0.5 * r @ r
        history = deque([f], maxlen=NONMONOTONE)
        while True:
            gnorm = np.max(np.abs(g), initial=0.0)
            gap = r @ (r - self.rhs) + tau * gnorm
            if gap <= _l1_gap(tau, gnorm):
                return x, r, g, True, True
            if gap <= loose:
                return x, r, g, False, True
            # a full line search and the following gradient
            if self.matvecs + LINE_SEARCH_STEPS + 2 > self.budget:
                return x, r, g, False, False
            d = _project_l1(x - self.step * g, tau) - x
            gtd = g @ d
            if gtd >= 0.0:
                # no descent direction is left inside the ball
                return x, r, g, True, True
            found = self._line_search(x, d, gtd, f, max(history))
            if found is None:
                # a unit spectral step is retried once before giving up
                if self.step == 1.0:
                    return x, r, g, False, False
                self.step = 1.0
                continue
            x_new, r_new, f = found
            g_new = self._gradient(r_new)
            s = x_new - x
            y = g_new - g
            sty = s @ y
            if sty <= 0.0:
                self.step = STEP_MAX
            else:
                self.step = min(STEP_MAX, max(STEP_MIN, (s @ s) / sty))
            x, r, g = x_new, r_new, g_new
            history.append(f)
            self.iterations += 1


def _l1_gap(tau, gnorm):
    """Return the duality gap bounding the l1 excess by L1_RTOL * tau."""
    return max(GAP_FLOOR, L1_RTOL * tau * gnorm)


def _polish(matrix, rhs, x, sigma):
    """Return the least-squares fit on the support of x and its residual, or None."""
    peak = np.max(np.abs(x), initial=0.0)
    if peak == 0.0:
        return None
    support = np.flatnonzero(np.abs(x) > SUPPORT_RTOL * peak)
    if support.size > matrix.shape[0]:
        return None
    coef = np.linalg.lstsq(matrix[:, support], rhs, rcond=None)[0]
    polished = np.zeros_like(x)
    polished[support] = coef
    residual = rhs - matrix @ polished
    if np.linalg.norm(residual) > sigma + FEAS_TOL:
        return None
    if np.abs(polished).sum() > np.abs(x).sum() * (1.0 + POLISH_L1_RTOL):
        return None
    return polished, residual


def _basis_pursuit(matrix, rhs, sigma):
    """
    Solve min ||x||_1 subject to ||rhs - D x||_inf <= sigma / sqrt(N).

    The box lies inside the l2 ball of radius sigma, so a solution is
    feasible for the original constraint. Returns None if the linear
    program is infeasible or fails.
    """
    n_rows, n_cols = matrix.shape
    slack = sigma / math.sqrt(n_rows)
    # x = x_pos - x_neg with both parts non-negative
    split = np.hstack([matrix, -matrix])
    result = linprog(
        np.ones(2 * n_cols),
        A_ub=np.vstack([split, -split]),
        b_ub=np.concatenate([rhs + slack, slack - rhs]),
        bounds=(0, None),
        method="highs",
        options=LP_OPTIONS,
    )
    if result.status != 0:
        logger.debug("basis pursuit program: %s", result.message)
        return None
    return result.x[:n_cols] - result.x[n_cols:]


def _solution(x, r, scale, status, iterations, matvecs, delta):
    residual_rel = float(np.linalg.norm(r))
    if status == ITERATIONS:
        logger.warning(
            "bpdn did not converge in %d matvecs (delta=%.3g, residual=%.3g)",
            matvecs,
            delta,
            residual_rel,
        )
    logger.debug(
        "bpdn %s: delta=%.3g residual=%.3g iterations=%d matvecs=%d",
        status,
        delta,
        residual_rel,
        iterations,
        matvecs,
    )
    return BpdnSolution(
        c_hat=x * scale,
        residual_rel=residual_rel,
        iterations=iterations,
        converged=status == ROOT,
        status=status,
        matvecs=matvecs,
    )


def bpdn_solve(system, delta, warm_start=None, max_matvec=MAX_MATVEC):
    """
    Solve min ||c||_1 subject to ||rhs - D c||_2 <= delta ||rhs||_2.

    The problem is rescaled to ||rhs|| = 1 so that delta is scale free.
    A constraint no coefficient vector meets ends at the least-squares
    fit. Tolerances up to BASIS_PURSUIT_DELTA are solved as a linear
    program; larger ones by root-finding on the Pareto curve of the
    l1-constrained least-squares subproblem, solved by spectral projected
    gradient. A root is accepted only once the subproblem's duality gap
    certifies ||c||_1 to L1_RTOL.

    Args:
        system (DesignSystem): the weighted design system
        delta (float): the relative residual bound, >= 0
        warm_start (np.ndarray): an optional starting coefficient vector
        max_matvec (int): the budget of products with D or D^T

    Returns:
        a BpdnSolution, converged only with status 'root'

    """
    if not delta >= 0:
        raise ValueError("delta must be non-negative")
    matrix, rhs = system.matrix, system.rhs
    n_rows, n_cols = matrix.shape
    scale = np.linalg.norm(rhs)
    if scale == 0.0:
        return BpdnSolution(np.zeros(n_cols), 0.0, 0, True, ROOT, 0)
    sigma = max(float(delta), DELTA_FLOOR)
    if sigma >= 1.0:
        return BpdnSolution(np.zeros(n_cols), 1.0, 0, True, ROOT, 0)
    b = rhs / scale
    if warm_start is None:
        x = np.zeros(n_cols)
    else:
        x = np.asarray(warm_start, dtype=float) / scale
        if x.shape != (n_cols,):
            raise ValueError("warm_start must have one entry per column")
    matvecs = 0
    if n_rows >= n_cols:
        fit = np.linalg.lstsq(matrix, b, rcond=None)[0]
        r = b - matrix @ fit
        matvecs += 1
        if np.linalg.norm(r) > sigma + FEAS_TOL:
            return _solution(fit, r, scale, LEAST_SQUARES, 0, matvecs, delta)
    if sigma <= BASIS_PURSUIT_DELTA:
        exact = _basis_pursuit(matrix, b, sigma)
        if exact is not None:
            polished = _polish(matrix, b, exact, sigma)
            matvecs += 1
            if polished is None:
                r = b - matrix @ exact
                matvecs += 1
            else:
                exact, r = polished
            if np.linalg.norm(r) <= sigma + FEAS_TOL:
                return _solution(exact, r, scale, ROOT, 0, matvecs, delta)
    # one product stays reserved for polishing
    lasso = _Lasso(matrix, b, max_matvec - matvecs - 1)
    tau = np.abs(x).sum()
    r = lasso._residual(x)
    status = ITERATIONS
    while lasso.matvecs + 2 <= lasso.budget:
        rnorm = np.linalg.norm(r)
        if abs(rnorm - sigma) <= FEAS_TOL:
            loose = 0.0
        else:
            loose = 0.1 * abs(0.5 * rnorm ** 2 - 0.5 * sigma ** 2)
        x, r, g, optimal, ok = lasso.solve(x, tau, loose)
        rnorm = np.linalg.norm(r)
        gnorm = np.max(np.abs(g), initial=0.0)
        if optimal and abs(rnorm - sigma) <= FEAS_TOL:
            status = ROOT
            break
        if rnorm > sigma and gnorm <= LS_TOL * rnorm:
            status = LEAST_SQUARES
            break
        if not ok:
            break
        # Newton step on the Pareto curve phi(tau) = ||r(tau)||, either side
        if gnorm > 0.0:
            tau = max(0.0, tau + (rnorm - sigma) * rnorm / gnorm)
        else:
            tau = 0.0
    if status == ROOT:
        polished = _polish(matrix, b, x, sigma)
        lasso.matvecs += 1
        if polished is not None:
            x, r = polished
    matvecs += lasso.matvecs
    return _solution(x, r, scale, status, lasso.iterations, matvecs, delta)


def gram_deviation(system):
    """Return ||D^T D / N - I||_2, the unrestricted isometry constant."""
    n = system.n_rows
    if n < 1:
        raise ValueError("the design needs at least one row")
    gram = system.matrix.T @ system.matrix / n
    return float(np.linalg.norm(gram - np.eye(system.n_cols), 2))


def ric_bruteforce(system, s):
    """
    Compute the restricted isometry constant of D / sqrt(N) exhaustively.

    Args:
        system (DesignSystem): the design system
        s (int): the sparsity level, 1 <= s <= min(|B|, 12)

    Returns:
        the largest |lambda - 1| over eigenvalues of all s-column Gram blocks

    """
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)):
        raise TypeError("s must be of type: int")
    if not 1 <= s <= min(system.n_cols, MAX_SPARSITY):
        raise ValueError(
            "s must be in [1, {}]".format(min(system.n_cols, MAX_SPARSITY))
        )
    if math.comb(system.n_cols, s) > MAX_SUBSETS:
        raise ValueError("too many column subsets for s = {}".format(s))
    gram = system.matrix.T @ system.matrix / system.n_rows
    worst = 0.0
    for subset in combinations(range(system.n_cols), s):
        block = gram[np.ix_(subset, subset)]
        eigenvalues = np.linalg.eigvalsh(block)
        worst = max(worst, abs(eigenvalues[0] - 1.0), abs(eigenvalues[-1] - 1.0))
    return float(worst)


# explicitly define the outward facing API of this module
__all__ = [
    DesignSystem.__name__,
    BpdnSolution.__name__,
    design_system.__name__,
    bpdn_solve.__name__,
    gram_deviation.__name__,
    ric_bruteforce.__name__,
]
