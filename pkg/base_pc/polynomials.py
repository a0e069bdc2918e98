"""Orthonormal polynomial families and their tensor-product evaluation."""

import math
from dataclasses import dataclass
import numpy as np


# the largest polynomial order supported in any single dimension
MAX_ORDER = 512


# the largest order the quadrature orthonormality check will accept
MAX_CHECK_ORDER = 60


# the names of the supported polynomial families
_KINDS = ("legendre", "hermite")


@dataclass(frozen=True)
class PolyFamily:
    """
    A one-dimensional orthonormal polynomial family.

    Args:
        kind (str): 'legendre' (uniform density on [lo, hi]) or 'hermite'
            (standard normal density, probabilists' convention)
        lo (float): the lower end of the uniform support (Legendre only)
        hi (float): the upper end of the uniform support (Legendre only)

    """

    kind: str
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError("kind must be one of {}".format(_KINDS))
        if self.kind == "legendre" and not self.lo < self.hi:
            raise ValueError("legendre family requires lo < hi")

    @classmethod
    def legendre(cls, lo=-1.0, hi=1.0):
        """Return the Legendre family orthonormal on uniform [lo, hi]."""
        return cls("legendre", float(lo), float(hi))

    @classmethod
    def hermite(cls):
        """Return the Hermite family orthonormal on the standard normal."""
        return cls("hermite")

    def to_unit(self, x):
        """Map points of the family's support onto the reference variable."""
        x = np.asarray(x, dtype=float)
        if self.kind == "hermite":
            return x
        return (2.0 * x - (self.lo + self.hi)) / (self.hi - self.lo)

    def from_unit(self, z):
        """Map reference points back onto the family's support."""
        z = np.asarray(z, dtype=float)
        if self.kind == "hermite":
            return z
        return 0.5 * (self.hi - self.lo) * z + 0.5 * (self.lo + self.hi)

    def pdf(self, x):
        """Return the orthogonality density f evaluated at x."""
        x = np.asarray(x, dtype=float)
        if self.kind == "hermite":
            return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, 1.0 / (self.hi - self.lo), 0.0)

    def sample(self, rng, size):
        """Draw `size` realisations from the orthogonality density."""
        if self.kind == "hermite":
            return rng.standard_normal(size)
        return rng.uniform(self.lo, self.hi, size)

    def to_dict(self):
        """Return a JSON-ready description of the family."""
        if self.kind == "hermite":
            return {"kind": "hermite"}
        return {"kind": "legendre", "lo": self.lo, "hi": self.hi}

    @classmethod
    def from_dict(cls, data):
        """Build a family from the output of `to_dict`."""
        if data["kind"] == "hermite":
            return cls.hermite()
        return cls.legendre(data.get("lo", -1.0), data.get("hi", 1.0))


@dataclass(frozen=True)
class EvalTable:
    """
    Cached one-dimensional evaluations of a family.

    values[k, j] holds the order-k polynomial at the j-th evaluation point.
    """

    values: np.ndarray
    family: PolyFamily

    @property
    def order(self):
        """Return the largest tabulated order."""
        return self.values.shape[0] - 1


def _off_diagonal(kind, p):
    """Return the Jacobi-matrix off-diagonal b_0..b_p (b_0 = 0)."""
    n = np.arange(p + 1, dtype=float)
    if kind == "hermite":
        return np.sqrt(n)
    b = np.zeros(p + 1)
    b[1:] = n[1:] / np.sqrt(4.0 * n[1:] ** 2 - 1.0)
    return b


def _check_order(p):
    """Validate a requested maximal order."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError("p must be of type: int")
    if p < 0:
        raise ValueError("p must be non-negative")
    if p > MAX_ORDER:
        raise ValueError("p must be at most {}".format(MAX_ORDER))


def _recurrence(family, p, x):
    """
    Evaluate orders 0..p of the orthonormal family at the points x.

    Args:
        family (PolyFamily): the polynomial family
        p (int): the maximal order
        x (np.ndarray): the evaluation points (any shape)

    Returns:
        an array of shape x.shape + (p + 1,)

    """
    z = family.to_unit(x)
    b = _off_diagonal(family.kind, p)
    out = np.empty(z.shape + (p + 1,))
    out[..., 0] = 1.0
    if p == 0:
        return out
    # orthonormal form of the three-term recurrence, no normalisation pass
    out[..., 1] = z / b[1]
    for n in range(1, p):
        out[..., n + 1] = (z * out[..., n] - b[n] * out[..., n - 1]) / b[n + 1]
    return out


def basis_eval_1d(family, p, xi):
    """
    Evaluate the orthonormal polynomials of orders 0..p at a point.

    Args:
        family (PolyFamily): the polynomial family
        p (int): the maximal order to compute
        xi (float): the point of evaluation (outside the support is allowed)

    Returns:
        a vector of length p + 1 with entry k the order-k polynomial at xi

    """
    _check_order(p)
    xi = float(xi)
    if not math.isfinite(xi):
        raise ValueError("xi must be finite")
    return _recurrence(family, p, np.asarray(xi))


def tabulate(family, p, points):
    """Return an EvalTable of orders 0..p at many points of one dimension."""
    _check_order(p)
    points = np.asarray(points, dtype=float)
    if not np.all(np.isfinite(points)):
        raise ValueError("points must be finite")
    return EvalTable(_recurrence(family, p, points).T, family)


def basis_matrix(basis, points):
    """
    Evaluate every basis function at every point.

    Args:
        basis (BasisSpec): the basis to evaluate
        points (np.ndarray): an N x d array of input points

    Returns:
        the N x |basis| measurement matrix

    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] < basis.dim:
        raise ValueError(
            "points have dimension {} but the basis needs {}".format(
                points.shape[1], basis.dim
            )
        )
    orders = basis.array
    psi = np.ones((points.shape[0], orders.shape[0]))
    if orders.size == 0:
        return psi
    for i in np.flatnonzero(orders.max(axis=0)):
        column = orders[:, i]
        used = np.flatnonzero(column)
        table = tabulate(basis.families[i], int(column.max()), points[:, i])
        psi[:, used] *= table.values[column[used]].T
    return psi


def basis_eval(basis, xi):
    """
    Evaluate every basis function at a single point.

    Args:
        basis (BasisSpec): the basis to evaluate
        xi (array-like): the input point, of length at least basis.dim

    Returns:
        a vector of length |basis|

    """
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 1:
        raise ValueError("xi must be a single point")
    return basis_matrix(basis, xi[None, :])[0]


def gauss_rule(family, n):
    """
    Return an n-point Gauss rule for the family's density.

    The weights sum to one, so the rule integrates against f directly.
    """
    if family.kind == "hermite":
        nodes, weights = np.polynomial.hermite_e.hermegauss(n)
    else:
        nodes, weights = np.polynomial.legendre.leggauss(n)
    return family.from_unit(nodes), weights / weights.sum()


def quad_orthonormality_check(family, p):
    """
    Return the largest deviation of the family's Gram matrix from identity.

    Args:
        family (PolyFamily): the polynomial family to check
        p (int): the maximal order to check (at most 60)

    Returns:
        max over i, j <= p of |<psi_i, psi_j> - delta_ij| under the density

    """
    _check_order(p)
    if p > MAX_CHECK_ORDER:
        raise ValueError("p must be at most {}".format(MAX_CHECK_ORDER))
    # p + 2 nodes integrate products up to degree 2p + 3 exactly
    nodes, weights = gauss_rule(family, p + 2)
    values = tabulate(family, p, nodes).values
    gram = (values * weights) @ values.T
    return float(np.max(np.abs(gram - np.eye(p + 1))))


# explicitly define the outward facing API of this module
__all__ = [
    PolyFamily.__name__,
    EvalTable.__name__,
    basis_eval_1d.__name__,
    tabulate.__name__,
    basis_matrix.__name__,
    basis_eval.__name__,
    gauss_rule.__name__,
    quad_orthonormality_check.__name__,
]
