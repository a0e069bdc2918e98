"""Coherence-optimal importance sampling and correction sampling."""

import json
import logging
import math
from dataclasses import dataclass, field, replace
import numpy as np
from scipy import stats
from .polynomials import basis_matrix


logger = logging.getLogger(__name__)


# emitted MCMC samples repeat their predecessor with probability <= exp(-8)
COLLISION_LOG_BOUND = 8.0


# burn-in ends once the running mean of the density ratio moves < 1 %
# across a window of 100 draws, after at least 500 draws
BURN_IN_MIN = 500
BURN_IN_WINDOW = 100
BURN_IN_RTOL = 0.01
BURN_IN_MAX = 100000


# the largest number of chain steps taken between two emitted samples
MAX_THIN = 10000


# proposals drawn per batch; the proposal does not depend on the state
_BATCH = 1024


# proposals tried before declaring the target identically zero
_START_TRIES = 20 * _BATCH


# consecutive duplicate emissions tolerated before the chain is declared stuck
_MAX_DUPLICATES = 10000


# restarts of correction sampling allowed when alpha must be raised
MAX_RESTARTS = 10


# the sampling distribution a pool was drawn from
ORTHOGONALITY = "orthogonality"
COHERENCE_OPTIMAL = "coherence_optimal"


class SamplingError(RuntimeError):
    """Raised when a sampling distribution cannot be sampled."""


def truncation_radius(basis):
    """
    Return the truncation radius of Hermite coordinates for a basis.

    Args:
        basis (BasisSpec): the basis defining the sampling density

    Returns:
        sqrt(2) * sqrt(2 p_max + 1) with p_max the largest per-dimension
        order, or None when no coordinate is Hermite

    """
    if not any(f.kind == "hermite" for f in basis.families):
        return None
    p_max = int(basis.array.max()) if len(basis) else 0
    return math.sqrt(2.0) * math.sqrt(2.0 * p_max + 1.0)


def orthogonality_pdf(families, points):
    """Return the product orthogonality density f at each point."""
    points = np.atleast_2d(points)
    out = np.ones(points.shape[0])
    for i, family in enumerate(families):
        out *= family.pdf(points[:, i])
    return out


def orthogonality_sample(families, n, rng, radius=None):
    """
    Draw n independent points from the orthogonality density f.

    Args:
        families (sequence): one PolyFamily per dimension
        n (int): the number of points
        rng (np.random.Generator): the random stream
        radius (float): optional truncation radius of Hermite coordinates

    Returns:
        an n x d array

    """
    points = np.empty((n, len(families)))
    for i, family in enumerate(families):
        if family.kind == "hermite" and radius is not None:
            points[:, i] = stats.truncnorm.rvs(
                -radius, radius, size=n, random_state=rng
            )
        else:
            points[:, i] = family.sample(rng, n)
    return points


def weights(basis, points):
    """Return the coherence-optimal weight sqrt(|B|) / ||psi(xi)|| per point."""
    psi = basis_matrix(basis, points)
    return math.sqrt(len(basis)) / np.linalg.norm(psi, axis=1)


def weight(basis, xi):
    """Return the coherence-optimal weight of a single point."""
    return float(weights(basis, np.asarray(xi, dtype=float)[None, :])[0])


class Density:
    """
    The coherence-optimal density g = c_g ||psi(xi)||^2 f(xi), c_g = 1/|B|.

    Args:
        basis (BasisSpec): the basis defining the density
        radius (float): the Hermite truncation radius (default from basis)

    """

    # plain coherence-optimal targets never reveal a need to raise alpha
    alpha_floor = 0.0

    def __init__(self, basis, radius=None):
        if len(basis) == 0:
            raise ValueError("basis must be non-empty")
        self.basis = basis
        self.radius = truncation_radius(basis) if radius is None else radius
        self.normalizer = 1.0 / len(basis)

    @property
    def families(self):
        """Return the per-dimension polynomial families."""
        return self.basis.families

    def inside(self, points):
        """Return a mask of the points inside the truncated domain."""
        mask = np.ones(points.shape[0], dtype=bool)
        if self.radius is None:
            return mask
        for i, family in enumerate(self.families):
            if family.kind == "hermite":
                mask &= np.abs(points[:, i]) <= self.radius
        return mask

    def ratio(self, points):
        """Return g / f at each point (zero outside the truncated domain)."""
        points = np.atleast_2d(points)
        psi = basis_matrix(self.basis, points)
        values = self.normalizer * np.einsum("ij,ij->i", psi, psi)
        return np.where(self.inside(points), values, 0.0)

    def __call__(self, points):
        """Return the density value at each point."""
        return self.ratio(points) * orthogonality_pdf(self.families, points)

    def propose(self, rng, size):
        """Draw proposals from f restricted to the truncated domain."""
        return orthogonality_sample(self.families, size, rng, self.radius)


class CorrectionDensity:
    """
    The signed correction density g_c = (g_next - (1 - alpha) g_prev) / alpha.

    Every ratio evaluation records 1 - g_next / g_prev, so the smallest
    alpha keeping g_c non-negative on the visited points is available
    afterwards as `alpha_floor`.
    """

    def __init__(self, previous, following, alpha):
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if previous.families != following.families:
            raise ValueError("densities must share the input distribution")
        if previous.radius != following.radius:
            raise ValueError("densities must share the truncated domain")
        self.previous = previous
        self.following = following
        self.alpha = float(alpha)
        self.radius = following.radius
        self._floor = 0.0

    @property
    def families(self):
        """Return the per-dimension polynomial families."""
        return self.following.families

    @property
    def alpha_floor(self):
        """Return the largest 1 - g_next / g_prev seen so far."""
        return self._floor

    def signed_ratio(self, points):
        """Return g_c / f at each point, possibly negative."""
        previous = self.previous.ratio(points)
        following = self.following.ratio(points)
        support = previous > 0
        if np.any(support):
            floor = np.max(1.0 - following[support] / previous[support])
            self._floor = max(self._floor, float(floor))
        return (following - (1.0 - self.alpha) * previous) / self.alpha

    def ratio(self, points):
        """Return max(g_c, 0) / f at each point."""
        return np.maximum(self.signed_ratio(points), 0.0)

    def __call__(self, points):
        """Return the signed correction density at each point."""
        return self.signed_ratio(points) * orthogonality_pdf(self.families, points)

    def propose(self, rng, size):
        """Draw proposals from f restricted to the truncated domain."""
        return self.following.propose(rng, size)


def correction_density(g_prev, g_next, alpha):
    """Return the signed evaluator of the correction density."""
    return CorrectionDensity(g_prev, g_next, alpha)


def _proposals(target, rng):
    """Yield (point, ratio, uniform) triples of independence proposals."""
    while True:
        points = target.propose(rng, _BATCH)
        ratios = target.ratio(points)
        uniforms = rng.random(_BATCH)
        for j in range(_BATCH):
            yield points[j], ratios[j], uniforms[j]


def acceptance_probability(rho_x, rho_y):
    """Return min(1, rho_y / rho_x), the probability of the move x -> y."""
    if rho_x <= 0.0:
        return 1.0
    return min(1.0, rho_y / rho_x)


def thinning(ratios):
    """
    Return the chain steps per emitted sample bounding repeats by exp(-8).

    The bound is sized at the largest density ratio among `ratios`, the
    state the chain is least likely to leave, whose acceptance rate is
    the mean of min(1, rho / rho_max) over independent proposals.
    """
    ratios = np.asarray(ratios, dtype=float)
    peak = np.max(ratios, initial=0.0)
    if peak <= 0.0:
        return MAX_THIN
    acceptance = float(np.mean(np.minimum(1.0, ratios / peak)))
    if acceptance >= 1.0:
        return 1
    steps = math.ceil(COLLISION_LOG_BOUND / -math.log1p(-acceptance))
    if steps > MAX_THIN:
        logger.warning(
            "thinning of %d steps capped at %d, repeats may exceed exp(-%g)",
            steps,
            MAX_THIN,
            COLLISION_LOG_BOUND,
        )
    return int(min(max(steps, 1), MAX_THIN))


class IndependenceChain:
    """
    A Metropolis-Hastings chain whose proposals are drawn from f.

    Args:
        target (Density, CorrectionDensity): the density to sample
        rng (np.random.Generator): the random stream owned by this chain

    """

    def __init__(self, target, rng):
        self.target = target
        self._stream = _proposals(target, rng)
        # the number of emissions dropped as repeats of an earlier state
        self.duplicates = 0
        self.burn_in = 0
        self.acceptance = 0.0
        self._start()
        self.thin = self._burn_in()

    def _step(self):
        y, rho_y, u = next(self._stream)
        moved = u < acceptance_probability(self.rho, rho_y)
        if moved:
            self.state, self.rho = y, rho_y
        return rho_y, moved

    def _start(self):
        """Find a starting state inside the target's support."""
        for _ in range(_START_TRIES):
            x, rho_x, _u = next(self._stream)
            if rho_x > 0:
                self.state, self.rho = x, rho_x
                return
        raise SamplingError("target density vanishes on the sampled domain")

    def _burn_in(self):
        """Run until the running normaliser estimate settles, return the thinning."""
        ratios = [self.rho]
        total = 0.0
        means = []
        accepted = 0
        while self.burn_in < BURN_IN_MAX:
            rho_y, moved = self._step()
            self.burn_in += 1
            accepted += moved
            ratios.append(rho_y)
            total += rho_y
            means.append(total / self.burn_in)
            if self.burn_in >= max(BURN_IN_MIN, BURN_IN_WINDOW + 1):
                old = means[-BURN_IN_WINDOW - 1]
                if abs(means[-1] - old) <= BURN_IN_RTOL * abs(means[-1]):
                    break
        self.acceptance = accepted / self.burn_in
        thin = thinning(ratios)
        logger.debug(
            "burn-in %d draws, acceptance %.3f, thinning %d",
            self.burn_in,
            self.acceptance,
            thin,
        )
        return thin

    def sample(self, n):
        """Emit n distinct states, every thin-th one, dropping exact repeats."""
        seen = set()
        out = []
        run = 0
        while len(out) < n:
            for _ in range(self.thin):
                self._step()
            key = self.state.tobytes()
            if key in seen:
                self.duplicates += 1
                run += 1
                if run > _MAX_DUPLICATES:
                    raise SamplingError("MCMC chain is stuck on repeated states")
                continue
            run = 0
            seen.add(key)
            out.append(self.state.copy())
        return np.array(out)


def mcmc_sample(target, n, rng):
    """
    Draw n distinct points from a target density by Metropolis-Hastings.

    Proposals are always drawn independently from the orthogonality
    density, so a move x -> y is accepted with probability
    min(1, rho(y) / rho(x)) where rho = target / f.

    Args:
        target (Density, CorrectionDensity): the density to sample
        n (int): the number of points to return
        rng (np.random.Generator): the random stream owned by this chain

    Returns:
        a tuple of:
        - alpha_floor (float): the target's alpha floor after sampling
        - points (np.ndarray): the n x d sample

    """
    if n < 1:
        raise ValueError("n must be positive")
    points = IndependenceChain(target, rng).sample(n)
    return target.alpha_floor, points


@dataclass(frozen=True)
class SamplePool:
    """
    Input realisations with their weights, generation epochs and QoI values.

    Args:
        points (np.ndarray): the N x d input realisations
        weights (np.ndarray): the per-sample importance weights
        epochs (np.ndarray): the iteration at which each sample was drawn
        values (np.ndarray): the QoI values, NaN where not yet evaluated
        pending_correction (float): one-shot weight multiplier of the
            newest epoch, consumed by the next surrogate solve
        source (str): 'coherence_optimal' or 'orthogonality'

    """

    points: np.ndarray
    weights: np.ndarray
    epochs: np.ndarray
    values: np.ndarray = field(default=None)
    pending_correction: float = 1.0
    source: str = COHERENCE_OPTIMAL

    def __post_init__(self):
        n = self.points.shape[0]
        if self.values is None:
            object.__setattr__(self, "values", np.full(n, np.nan))
        if self.weights.shape != (n,) or self.epochs.shape != (n,):
            raise ValueError("weights and epochs must have one entry per point")
        if self.values.shape != (n,):
            raise ValueError("values must have one entry per point")
        if np.any(~(self.weights > 0)) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be positive and finite")
        if self.pending_correction < 1.0:
            raise ValueError("pending_correction must be at least 1")
        if self.source not in (ORTHOGONALITY, COHERENCE_OPTIMAL):
            raise ValueError("unknown pool source {}".format(self.source))

    @classmethod
    def from_points(cls, points, weights, source=COHERENCE_OPTIMAL, epoch=0):
        """Create a single-epoch pool with no QoI values yet."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(
            points=points,
            weights=np.asarray(weights, dtype=float),
            epochs=np.full(points.shape[0], epoch, dtype=int),
            source=source,
        )

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self):
        """Return the input dimension."""
        return self.points.shape[1]

    @property
    def newest_epoch(self):
        """Return the epoch of the most recently drawn samples."""
        return int(self.epochs.max()) if len(self) else 0

    @property
    def pending_rows(self):
        """Return a mask of the samples still missing a QoI value."""
        return np.isnan(self.values)

    def row_scale(self):
        """Return the per-row design multipliers for the next solve."""
        scale = self.weights.copy()
        scale[self.epochs == self.newest_epoch] *= self.pending_correction
        return scale

    def consume_correction(self):
        """Return the pool with the one-shot weight correction spent."""
        return replace(self, pending_correction=1.0)

    def evaluate(self, qoi):
        """Return the pool with the QoI evaluated at every pending sample."""
        mask = self.pending_rows
        if not np.any(mask):
            return self
        values = self.values.copy()
        values[mask] = qoi(self.points[mask])
        return replace(self, values=values)

    def extend(self, points, weights, pending_correction=1.0):
        """Append a new epoch of points, weights given for the whole pool."""
        points = np.atleast_2d(points)
        epoch = self.newest_epoch + 1
        return replace(
            self,
            points=np.vstack([self.points, points]),
            weights=np.asarray(weights, dtype=float),
            epochs=np.concatenate(
                [self.epochs, np.full(points.shape[0], epoch, dtype=int)]
            ),
            values=np.concatenate([self.values, np.full(points.shape[0], np.nan)]),
            pending_correction=pending_correction,
        )

    def save(self, path):
        """Write the pool as columns: epoch, weight, coordinates, value."""
        meta = {
            "pending_correction": self.pending_correction,
            "source": self.source,
            "dim": self.dim,
        }
        columns = ["epoch", "weight"] + ["xi{}".format(i) for i in range(self.dim)]
        table = np.column_stack(
            [self.epochs, self.weights, self.points, self.values]
        )
        header = json.dumps(meta) + "\n" + " ".join(columns + ["u"])
        np.savetxt(path, table, fmt="%.17g", header=header)

    @classmethod
    def load(cls, path):
        """Read a pool written by `save`."""
        with open(path) as handle:
            meta = json.loads(handle.readline().lstrip("#").strip())
        table = np.loadtxt(path, ndmin=2).reshape(-1, meta["dim"] + 3)
        return cls(
            points=table[:, 2:-1],
            weights=table[:, 1],
            epochs=table[:, 0].astype(int),
            values=table[:, -1],
            pending_correction=meta["pending_correction"],
            source=meta["source"],
        )


def coherence_pool(basis, n, rng):
    """Draw a fresh coherence-optimal pool of n points for a basis."""
    _, points = mcmc_sample(Density(basis), n, rng)
    return SamplePool.from_points(points, weights(basis, points))


def orthogonality_pool(families, n, rng):
    """Draw a fresh pool of n points from f with unit weights."""
    points = orthogonality_sample(families, n, rng)
    return SamplePool.from_points(points, np.ones(n), source=ORTHOGONALITY)


def _shared_radius(basis_prev, basis_next):
    """Return the truncation radius covering both bases, or None."""
    radii = [truncation_radius(basis_prev), truncation_radius(basis_next)]
    radii = [r for r in radii if r is not None]
    return max(radii) if radii else None


def _drop_known(pool, points):
    """Remove candidate points identical to points already in the pool."""
    known = {row.tobytes() for row in pool.points}
    keep = [j for j, row in enumerate(points) if row.tobytes() not in known]
    return points[keep]


def sample_expand(pool, basis_prev, basis_next, min_ratio, max_ratio, rng):
    """
    Draw correction samples migrating a pool from g_prev to g_next.

    Args:
        pool (SamplePool): the pool, assumed drawn from basis_prev's density
        basis_prev (BasisSpec): the basis the pool was drawn for
        basis_next (BasisSpec): the basis the pool must now represent
        min_ratio (float): the smallest correction size relative to the pool
        max_ratio (float): the largest correction size relative to the pool
        rng (np.random.Generator): the random stream

    Returns:
        the enlarged SamplePool, every weight recomputed for basis_next and
        the newest epoch carrying the one-shot weight correction

    """
    if not 0.0 < min_ratio <= max_ratio:
        raise ValueError("ratios must satisfy 0 < min_ratio <= max_ratio")
    if len(pool) == 0:
        raise ValueError("pool must be non-empty")
    n_k = len(pool)
    radius = _shared_radius(basis_prev, basis_next)
    g_prev = Density(basis_prev, radius)
    g_next = Density(basis_next, radius)
    cap = max(1, math.floor(max_ratio * n_k))
    ratio = min_ratio
    floor = 0.0
    for attempt in range(MAX_RESTARTS + 1):
        n_c = math.ceil(ratio * n_k - 1e-9)
        alpha = n_c / (n_k + n_c)
        target = correction_density(g_prev, g_next, alpha)
        try:
            seen, points = mcmc_sample(target, min(n_c, cap), rng)
        except SamplingError:
            seen = target.alpha_floor
            if seen <= alpha:
                raise
        floor = max(floor, seen)
        if floor <= alpha:
            break
        if floor >= 1.0:
            raise SamplingError("no alpha <= 1 makes the correction non-negative")
        logger.warning(
            "correction sample needs alpha >= %.4f (had %.4f), restarting",
            floor,
            alpha,
        )
        # choose N_c so that N_c / (N_k + N_c) >= floor
        ratio = floor / (1.0 - floor)
    else:
        raise SamplingError(
            "correction sampling failed after {} restarts".format(MAX_RESTARTS)
        )
    pending = 1.0
    if n_c > cap:
        alpha_kept = cap / (n_k + cap)
        pending = alpha / alpha_kept
        logger.warning(
            "correction sample truncated to %d of %d points, weight correction %.4f",
            cap,
            n_c,
            pending,
        )
    points = _drop_known(pool, points)
    all_points = np.vstack([pool.points, points])
    grown = pool.extend(points, weights(basis_next, all_points), pending)
    return replace(grown, source=COHERENCE_OPTIMAL)


def coherence_estimate(basis, weighting, s, candidates, rng):
    """
    Estimate the coherence parameters of a basis from sampled candidates.

    Args:
        basis (BasisSpec): the basis
        weighting (bool): use coherence-optimal samples and weights, or
            samples from f with unit weights
        s (int): the sparsity level of the partial coherence
        candidates (int): the number of candidate points
        rng (np.random.Generator): the random stream

    Returns:
        a tuple (mu_inf, mu_2, mu_2_s) of empirical maxima of
        ||w psi||_inf^2, ||w psi||_2^2 and the largest s-term partial sum

    """
    if not 1 <= s <= len(basis):
        raise ValueError("s must be in [1, |basis|]")
    if weighting:
        _, points = mcmc_sample(Density(basis), candidates, rng)
        scale = weights(basis, points)
    else:
        points = orthogonality_sample(basis.families, candidates, rng)
        scale = np.ones(candidates)
    rows = (scale[:, None] * basis_matrix(basis, points)) ** 2
    mu_inf = float(rows.max())
    mu_2 = float(rows.sum(axis=1).max())
    top = np.sort(rows, axis=1)[:, rows.shape[1] - s :]
    mu_2_s = float(top.sum(axis=1).max())
    return mu_inf, mu_2, mu_2_s


# explicitly define the outward facing API of this module
__all__ = [
    SamplingError.__name__,
    Density.__name__,
    CorrectionDensity.__name__,
    SamplePool.__name__,
    truncation_radius.__name__,
    orthogonality_pdf.__name__,
    orthogonality_sample.__name__,
    weights.__name__,
    weight.__name__,
    acceptance_probability.__name__,
    thinning.__name__,
    IndependenceChain.__name__,
    correction_density.__name__,
    mcmc_sample.__name__,
    coherence_pool.__name__,
    orthogonality_pool.__name__,
    sample_expand.__name__,
    coherence_estimate.__name__,
]
