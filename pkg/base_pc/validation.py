"""Cross-validated tolerance selection and the basis validation search."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
import numpy as np
from sklearn.model_selection import GroupShuffleSplit
from . import defaults
from .basis import basis_contract, basis_expand
from .sampling import orthogonality_sample
from .solver import bpdn_solve, design_system


logger = logging.getLogger(__name__)


# the anchor of the tolerance window before any fit exists
INITIAL_ANCHOR = 0.1


# the tolerance window spans this factor on each side of the anchor
WINDOW = 10.0


# the smallest anchor carried between iterations
ANCHOR_FLOOR = 1e-10


# the smallest pool cross-validation accepts
MIN_SAMPLES = 5


class ValidationError(RuntimeError):
    """An error raised when no candidate tolerance yields a usable fit."""


@dataclass(frozen=True)
class CvConfig:
    """
    Settings of the repeated hold-out cross-validation.

    Args:
        folds (int): the number of random partitions
        holdout_fraction (float): the share of samples held out per partition
        n_tolerances (int): the number of positive candidate tolerances
        workers (int): the number of threads solving partitions concurrently

    """

    folds: int = defaults.CV_FOLDS
    holdout_fraction: float = defaults.CV_HOLDOUT_FRACTION
    n_tolerances: int = defaults.CV_TOLERANCES
    workers: int = 1

    def __post_init__(self):
        for name in ("folds", "n_tolerances", "workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError("{} must be of type: int".format(name))
            if value < 1:
                raise ValueError("{} must be positive".format(name))
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ValueError("holdout_fraction must be in (0, 1)")

    def to_dict(self):
        """Return a JSON-ready record of the settings."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Build settings from the output of `to_dict`."""
        return cls(**data)


@dataclass(frozen=True)
class ValidatedFit:
    """
    Coefficients solved on the full pool at a cross-validated tolerance.

    Args:
        c_hat (np.ndarray): the coefficient vector
        delta_star (float): the selected tolerance
        cv_rrmse (float): the validated error estimate at delta_star
        errors (np.ndarray): the mean hold-out error of every candidate

    """

    c_hat: np.ndarray
    delta_star: float
    cv_rrmse: float
    errors: np.ndarray = field(default=None, repr=False)

    @property
    def anchor(self):
        """Return the tolerance anchor for the next outer iteration."""
        return max(self.delta_star, self.cv_rrmse, ANCHOR_FLOOR)


def delta_candidates(anchor, n_tolerances=defaults.CV_TOLERANCES):
    """
    Return 0 followed by tolerances log-spaced one decade around `anchor`.

    Args:
        anchor (float): the centre of the window, > 0
        n_tolerances (int): the number of positive tolerances

    Returns:
        an increasing array of n_tolerances + 1 candidates

    """
    if not anchor > 0 or not math.isfinite(anchor):
        raise ValueError("anchor must be positive and finite")
    window = np.geomspace(anchor / WINDOW, anchor * WINDOW, n_tolerances)
    return np.concatenate([[0.0], window])


def _row_groups(system):
    """Label identical design rows alike, labels in order of first appearance."""
    rows = np.column_stack([system.matrix, system.rhs])
    _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    labels = np.empty_like(order)
    labels[order] = np.arange(order.size)
    return labels[inverse.ravel()]


def _splits(system, cfg, rng):
    """Draw the train / hold-out partitions shared by every candidate."""
    groups = _row_groups(system)
    n_groups = int(groups.max()) + 1
    if n_groups < MIN_SAMPLES:
        raise ValueError(
            "cross-validation needs at least {} distinct samples".format(MIN_SAMPLES)
        )
    splitter = GroupShuffleSplit(
        n_splits=cfg.folds,
        test_size=cfg.holdout_fraction,
        random_state=int(rng.integers(2 ** 31 - 1)),
    )
    return list(splitter.split(system.matrix, system.rhs, groups))


def _fold_errors(system, train, test, candidates):
    """Return the hold-out error of every candidate on one partition."""
    fit_system = system.rows(train)
    held_out = system.rows(test)
    scale = max(np.linalg.norm(held_out.rhs), np.finfo(float).tiny)
    errors = np.full(candidates.size, np.inf)
    warm = None
    # decreasing tolerances, each solve seeded by the previous one
    for j in range(candidates.size - 1, -1, -1):
        solution = bpdn_solve(fit_system, candidates[j], warm_start=warm)
        if not solution.converged:
            continue
        warm = solution.c_hat
        residual = held_out.rhs - held_out.matrix @ solution.c_hat
        errors[j] = np.linalg.norm(residual) / scale
    return errors


def cross_validate(system, cfg, anchor, rng):
    """
    Select the residual tolerance by repeated hold-out validation.

    Args:
        system (DesignSystem): the weighted design system
        cfg (CvConfig): the cross-validation settings
        anchor (float): the centre of the candidate window
        rng (np.random.Generator): the random stream of the partitions

    Returns:
        a ValidatedFit with coefficients solved on every row at delta_star

    """
    candidates = delta_candidates(anchor, cfg.n_tolerances)
    splits = _splits(system, cfg, rng)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            per_fold = list(
                executor.map(
                    lambda split: _fold_errors(system, *split, candidates), splits
                )
            )
    else:
        per_fold = [_fold_errors(system, *split, candidates) for split in splits]
    errors = np.mean(per_fold, axis=0)
    if not np.any(np.isfinite(errors)):
        raise ValidationError("no candidate tolerance converged on every fold")
    best = int(np.argmin(errors))
    delta_star = float(candidates[best])
    final = bpdn_solve(system, delta_star)
    if not final.converged:
        logger.warning("full-pool solve at delta=%.3g did not converge", delta_star)
    logger.debug(
        "cv over %d rows x %d columns: delta*=%.3g rrmse=%.3g",
        system.n_rows,
        system.n_cols,
        delta_star,
        errors[best],
    )
    return ValidatedFit(final.c_hat, delta_star, float(errors[best]), errors)


def basis_validate(
    basis0,
    fit0,
    pool,
    cfg,
    rng,
    gamma,
    dim_add=0,
    bound=None,
    max_strikes=defaults.MAX_STRIKES,
    anchor=INITIAL_ANCHOR,
):
    """
    Search expansions of successively contracted bases for the best fit.

    Candidate m expands basis0 with its m smallest coefficients removed.
    Repeated candidates are skipped; the search stops after max_strikes
    consecutive candidates fail to improve on the running minimum.

    Args:
        basis0 (BasisSpec): the current basis
        fit0 (ValidatedFit): the fit of basis0 on the pool
        pool (SamplePool): the evaluated sample pool, weights kept as they are
        cfg (CvConfig): the cross-validation settings
        rng (np.random.Generator): the random stream of the partitions
        gamma (float): the expansion factor
        dim_add (int): the number of dimensions expansion may open
        bound (sequence): an optional coordinate-wise order bound
        max_strikes (int): the number of strikes ending the search
        anchor (float): the centre of the tolerance window

    Returns:
        a tuple (basis, fit) with the smallest validated error

    """
    if max_strikes < 1:
        raise ValueError("max_strikes must be positive")
    best_basis, best_fit = None, None
    min_error = math.inf
    strikes = 0
    previous = None
    m = 0
    while m <= len(basis0) and strikes < max_strikes:
        candidate = basis_expand(
            basis_contract(basis0, fit0.c_hat, m), gamma, dim_add, bound
        )
        if candidate != previous:
            try:
                fit = cross_validate(design_system(candidate, pool), cfg, anchor, rng)
                error = fit.cv_rrmse
            except ValidationError as error_info:
                logger.debug("candidate %d discarded: %s", m, error_info)
                fit, error = None, math.inf
            if error < min_error:
                min_error = error
                best_basis, best_fit = candidate, fit
                strikes = 0
            else:
                strikes += 1
            logger.debug(
                "candidate %d: |B|=%d rrmse=%.3g strikes=%d",
                m,
                len(candidate),
                error,
                strikes,
            )
            previous = candidate
        m += 1
    if best_fit is None:
        raise ValidationError("no candidate basis could be validated")
    return best_basis, best_fit


def relative_rmse(estimate, truth):
    """Return sqrt(mean((estimate - truth)^2)) / sqrt(mean(truth^2))."""
    norm = np.sqrt(np.mean(np.square(truth)))
    if norm == 0.0:
        raise ValidationError("the QoI has zero mean square on the reference draws")
    return float(np.sqrt(np.mean(np.square(estimate - truth))) / norm)


def reference_rrmse(surrogate, qoi, n_ref, rng):
    """
    Estimate the relative root-mean-square error of a surrogate.

    Args:
        surrogate (callable): the surrogate, mapping an N x d array to N values
        qoi (QoiSpec): the quantity of interest and its input families
        n_ref (int): the number of independent draws from the input density
        rng (np.random.Generator): the random stream

    Returns:
        sqrt(mean((u_hat - u)^2)) / sqrt(mean(u^2))

    """
    if n_ref < 1:
        raise ValueError("n_ref must be positive")
    points = orthogonality_sample(qoi.families, n_ref, rng)
    return relative_rmse(surrogate(points), qoi(points))


# explicitly define the outward facing API of this module
__all__ = [
    ValidationError.__name__,
    CvConfig.__name__,
    ValidatedFit.__name__,
    delta_candidates.__name__,
    relative_rmse.__name__,
    cross_validate.__name__,
    basis_validate.__name__,
    reference_rrmse.__name__,
]
