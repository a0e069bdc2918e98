"""The BASE-PC iteration: basis adaptation alternating with sample growth."""

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
import numpy as np
from . import defaults
from .basis import basis_id, basis_upper_bound, envelope, total_order
from .polynomials import basis_matrix
from .sampling import (
    coherence_pool,
    orthogonality_pool,
    orthogonality_sample,
    sample_expand,
)
from .solver import design_system
from .validation import (
    INITIAL_ANCHOR,
    MIN_SAMPLES,
    CvConfig,
    basis_validate,
    cross_validate,
    relative_rmse,
)


logger = logging.getLogger(__name__)


# the sample modes a run can use
_SAMPLE_MODES = (defaults.SAMPLE_ADAPTIVE, defaults.ORTHOGONALITY)


@dataclass(frozen=True)
class RunConfig:
    """
    Settings of one BASE-PC run.

    Args:
        gamma (float): the basis expansion factor, > 1
        dim_add (int): new dimensions each expansion may open
        min_ratio (float): the smallest sample growth per iteration
        max_ratio (float): the largest correction sample per iteration
        max_strikes (int): strikes ending a basis validation search
        max_iterations (int): the number of outer iterations
        sample_mode (str): 'sample_adaptive' or 'orthogonality'
        use_order_bound (bool): bound each expansion by the order upper bound
        n0 (int): the initial sample count, None for twice the basis size
        p0 (float): the initial total order
        seed (int): the seed of every random stream of the run
        n_ref (int): reference error draws per iteration, 0 to skip
        wall_budget (float): stop after this many seconds, None for no limit
        timing (bool): record wall times, or 0.0 for reproducible logs
        cv (CvConfig): the cross-validation settings

    """

    gamma: float = defaults.GAMMA_LOW_D
    dim_add: int = defaults.DIM_ADD
    min_ratio: float = defaults.MIN_SAMPLE_RATIO
    max_ratio: float = defaults.MAX_SAMPLE_RATIO
    max_strikes: int = defaults.MAX_STRIKES
    max_iterations: int = defaults.MAX_ITERATIONS
    sample_mode: str = defaults.SAMPLE_ADAPTIVE
    use_order_bound: bool = False
    n0: int = None
    p0: float = defaults.INITIAL_ORDER
    seed: int = 0
    n_ref: int = 0
    wall_budget: float = None
    timing: bool = True
    cv: CvConfig = field(default_factory=CvConfig)

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError("gamma must be greater than 1")
        if not 0 < self.min_ratio <= self.max_ratio:
            raise ValueError("ratios must satisfy 0 < min_ratio <= max_ratio")
        for name in ("dim_add", "max_iterations", "n_ref", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError("{} must be of type: int".format(name))
            if value < 0:
                raise ValueError("{} must be non-negative".format(name))
        if self.max_strikes < 1:
            raise ValueError("max_strikes must be positive")
        if self.sample_mode not in _SAMPLE_MODES:
            raise ValueError("sample_mode must be one of {}".format(_SAMPLE_MODES))
        if self.n0 is not None and self.n0 < MIN_SAMPLES:
            raise ValueError("n0 must be at least {}".format(MIN_SAMPLES))
        if not self.p0 > 0:
            raise ValueError("p0 must be positive")
        if self.wall_budget is not None and self.wall_budget < 0:
            raise ValueError("wall_budget must be non-negative")
        if isinstance(self.cv, dict):
            object.__setattr__(self, "cv", CvConfig.from_dict(self.cv))

    def to_dict(self):
        """Return a JSON-ready record of the settings."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Build settings from the output of `to_dict`."""
        return cls(**data)


@dataclass(frozen=True)
class Surrogate:
    """
    A polynomial chaos surrogate sum_k c_k psi_k.

    Args:
        basis (BasisSpec): the basis
        c_hat (np.ndarray): one coefficient per basis member
        cv_rrmse (float): the validated error that selected the surrogate
        delta_star (float): the tolerance of the coefficient solve

    """

    basis: object
    c_hat: np.ndarray
    cv_rrmse: float
    delta_star: float = 0.0

    def __post_init__(self):
        if np.shape(self.c_hat) != (len(self.basis),):
            raise ValueError("c_hat must have one entry per basis member")

    def __call__(self, points):
        """Evaluate the surrogate at each row of an N x d array."""
        return basis_matrix(self.basis, points) @ self.c_hat

    def to_dict(self):
        """Return a JSON-ready summary of the surrogate."""
        mean, variance = moments(self)
        return {
            "basis": self.basis.to_dict(),
            "c_hat": self.c_hat.tolist(),
            "cv_rrmse": self.cv_rrmse,
            "delta_star": self.delta_star,
            "mean": mean,
            "variance": variance,
        }


@dataclass(frozen=True)
class IterationRecord:
    """The telemetry of one iteration; iteration 0 is the initial fit."""

    iter: int
    n_samples: int
    n_basis: int
    cv_rrmse: float
    ref_rrmse: float = None
    delta_star: float = 0.0
    wall_time: float = 0.0


class RunAborted(RuntimeError):
    """An error raised when a stage fails, carrying the records so far."""

    def __init__(self, message, records):
        super().__init__(message)
        self.records = list(records)


def moments(surrogate):
    """
    Return the mean and variance of a surrogate.

    Args:
        surrogate (Surrogate): a surrogate whose basis holds the constant

    Returns:
        a tuple (mean, variance): the constant coefficient and the sum of
        the squared remaining coefficients

    """
    position = surrogate.basis.constant_position
    if position is None:
        raise ValueError("the surrogate basis lacks the constant function")
    c = np.asarray(surrogate.c_hat, dtype=float)
    mean = float(c[position])
    return mean, float(np.sum(c ** 2) - mean ** 2)


def initial_basis(cfg, families):
    """Return the total-order basis of order p0 over the first dim_add dimensions."""
    d = len(families)
    p = np.zeros(d)
    p[: min(d, cfg.dim_add)] = cfg.p0
    return basis_id(p, families)


def _draw_pool(cfg, basis, n, rng):
    """Draw a fresh pool for a basis in the run's sample mode."""
    if cfg.sample_mode == defaults.SAMPLE_ADAPTIVE:
        return coherence_pool(basis, n, rng)
    return orthogonality_pool(basis.families, n, rng)


def initialize(cfg, qoi, rng, basis=None):
    """
    Build the initial basis, sample pool and validated fit.

    Args:
        cfg (RunConfig): the run settings
        qoi (QoiSpec): the quantity of interest
        rng (np.random.Generator): the random stream
        basis (BasisSpec): a fixed initial basis, None for the default

    Returns:
        a tuple (basis, pool, fit)

    """
    if basis is None:
        basis = initial_basis(cfg, qoi.families)
    n0 = cfg.n0
    if n0 is None:
        n0 = max(defaults.INITIAL_OVERSAMPLING * len(basis), MIN_SAMPLES)
    pool = _draw_pool(cfg, basis, n0, rng).evaluate(qoi)
    fit = cross_validate(design_system(basis, pool), cfg.cv, INITIAL_ANCHOR, rng)
    return basis, pool, fit


class BasePC:
    """
    A stateful BASE-PC run over one quantity of interest.

    Args:
        cfg (RunConfig): the run settings
        qoi (QoiSpec): the quantity of interest

    """

    def __init__(self, cfg, qoi):
        self.cfg = cfg
        self.qoi = qoi
        self.basis = None
        self.pool = None
        self.fit = None
        self.best = None
        self.records = []
        self._anchor = INITIAL_ANCHOR
        self._bound = None
        self._start = None
        self._reference = None
        # one independent stream per concern
        streams = np.random.SeedSequence(cfg.seed).spawn(4)
        self._init_rng, self._sample_rng, self._cv_rng, self._ref_rng = [
            np.random.default_rng(stream) for stream in streams
        ]

    @property
    def iteration(self):
        """Return the index of the latest record."""
        return len(self.records) - 1

    def _initial_basis(self):
        return None

    def _elapsed(self):
        if not self.cfg.timing:
            return 0.0
        return time.perf_counter() - self._start

    def _reference_error(self, surrogate):
        """Return the reference RRMSE on draws shared by every iteration."""
        if self.cfg.n_ref == 0:
            return None
        if self._reference is None:
            points = orthogonality_sample(self.qoi.families, self.cfg.n_ref, self._ref_rng)
            self._reference = (points, self.qoi(points))
        points, truth = self._reference
        return relative_rmse(surrogate(points), truth)

    def _record(self):
        """Append the record of the current fit and track the best surrogate."""
        surrogate = Surrogate(
            self.basis, self.fit.c_hat, self.fit.cv_rrmse, self.fit.delta_star
        )
        if self.best is None or surrogate.cv_rrmse < self.best.cv_rrmse:
            self.best = surrogate
        record = IterationRecord(
            iter=len(self.records),
            n_samples=len(self.pool),
            n_basis=len(self.basis),
            cv_rrmse=self.fit.cv_rrmse,
            ref_rrmse=self._reference_error(surrogate),
            delta_star=self.fit.delta_star,
            wall_time=self._elapsed(),
        )
        self.records.append(record)
        logger.info(
            "iteration %d: N=%d |B|=%d cv_rrmse=%.3e delta*=%.3g",
            record.iter,
            record.n_samples,
            record.n_basis,
            record.cv_rrmse,
            record.delta_star,
        )
        return record

    def reset(self):
        """
        Start the run from the initial basis and pool.

        Returns:
            the IterationRecord of the initial fit

        """
        self._start = time.perf_counter()
        self.records = []
        self.best = None
        self._bound = None
        self.basis, self.pool, self.fit = initialize(
            self.cfg, self.qoi, self._init_rng, self._initial_basis()
        )
        self._anchor = self.fit.anchor
        return self._record()

    def _adapt(self):
        """Return the validated next basis and its fit on the current pool."""
        return basis_validate(
            self.basis,
            self.fit,
            self.pool,
            self.cfg.cv,
            self._cv_rng,
            self.cfg.gamma,
            self.cfg.dim_add,
            self._bound,
            self.cfg.max_strikes,
            self._anchor,
        )

    def _grow(self, basis_prev, basis_next):
        """Return the pool enlarged for the next basis."""
        if self.cfg.sample_mode == defaults.SAMPLE_ADAPTIVE:
            return sample_expand(
                self.pool,
                basis_prev,
                basis_next,
                self.cfg.min_ratio,
                self.cfg.max_ratio,
                self._sample_rng,
            )
        n_new = math.ceil(self.cfg.min_ratio * len(self.pool) - 1e-9)
        points = orthogonality_sample(self.qoi.families, n_new, self._sample_rng)
        return self.pool.extend(points, np.ones(len(self.pool) + n_new))

    def step(self):
        """
        Run one iteration: validate the basis, grow the pool, refit.

        Returns:
            the IterationRecord of the iteration

        """
        if self.fit is None:
            raise RuntimeError("cannot step a run before it is reset")
        basis_next, fit_next = self._adapt()
        self.pool = self._grow(self.basis, basis_next).evaluate(self.qoi)
        self._anchor = fit_next.anchor
        self.fit = cross_validate(
            design_system(basis_next, self.pool),
            self.cfg.cv,
            self._anchor,
            self._cv_rng,
        )
        self.pool = self.pool.consume_correction()
        self.basis = basis_next
        self._anchor = self.fit.anchor
        if self.cfg.use_order_bound:
            self._bound = basis_upper_bound(envelope(self.basis), self.cfg.dim_add)
        return self._record()

    def _out_of_time(self):
        budget = self.cfg.wall_budget
        return budget is not None and time.perf_counter() - self._start > budget

    def run(self, callback=None):
        """
        Reset and iterate until max_iterations or the wall-clock budget.

        Args:
            callback (callable): called with each IterationRecord

        Returns:
            a tuple (surrogate, records), the surrogate of minimal cv_rrmse

        """
        self.records = []
        try:
            record = self.reset()
            if callback is not None:
                callback(record)
            for _ in range(self.cfg.max_iterations):
                if self._out_of_time():
                    logger.info("wall-clock budget spent after %d iterations", self.iteration)
                    break
                record = self.step()
                if callback is not None:
                    callback(record)
        except Exception as error:
            raise RunAborted(
                "run aborted at iteration {}: {}".format(len(self.records), error),
                self.records,
            ) from error
        return self.best, list(self.records)


class TotalOrderBaseline(BasePC):
    """
    A fixed total-order basis fitted on a growing orthogonality sample.

    Args:
        cfg (RunConfig): the run settings, sample_mode is forced to orthogonality
        qoi (QoiSpec): the quantity of interest
        order (int): the total order of the fixed basis

    """

    def __init__(self, cfg, qoi, order):
        if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
            raise TypeError("order must be of type: int")
        if order < 0:
            raise ValueError("order must be non-negative")
        super().__init__(replace(cfg, sample_mode=defaults.ORTHOGONALITY), qoi)
        self.order = int(order)

    def _initial_basis(self):
        return total_order(self.order, self.qoi.families)

    def _adapt(self):
        return self.basis, self.fit


def base_pc_loop(cfg, qoi, callback=None):
    """
    Run BASE-PC on a quantity of interest.

    Args:
        cfg (RunConfig): the run settings
        qoi (QoiSpec): the quantity of interest
        callback (callable): called with each IterationRecord

    Returns:
        a tuple (surrogate, records)

    """
    return BasePC(cfg, qoi).run(callback)


# explicitly define the outward facing API of this module
__all__ = [
    RunConfig.__name__,
    Surrogate.__name__,
    IterationRecord.__name__,
    RunAborted.__name__,
    BasePC.__name__,
    TotalOrderBaseline.__name__,
    initialize.__name__,
    initial_basis.__name__,
    base_pc_loop.__name__,
    moments.__name__,
]
