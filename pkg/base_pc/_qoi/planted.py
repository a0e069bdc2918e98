"""Polynomial QoIs with known expansion coefficients."""

import math
import numpy as np
from ..basis import BasisSpec, MultiIndex, basis_id
from ..defaults import suggested_gamma
from ..polynomials import PolyFamily, basis_matrix
from .qoi_spec import QoiSpec


class PlantedPolynomial:
    """
    A finite expansion sum_k c_k psi_k with known basis and coefficients.

    Args:
        basis (BasisSpec): the members carrying the coefficients
        coefficients (np.ndarray): one coefficient per member

    """

    def __init__(self, basis, coefficients):
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (len(basis),):
            raise ValueError("coefficients must have one entry per basis member")
        self.basis = basis
        self.coefficients = coefficients

    def __call__(self, points):
        return basis_matrix(self.basis, points) @ self.coefficients

    def coefficient(self, index):
        """Return the coefficient of a multi-index, 0 if it is absent."""
        position = self.basis.position(index)
        return 0.0 if position is None else float(self.coefficients[position])

    @property
    def mean(self):
        """Return the mean, the coefficient of the constant function."""
        return self.coefficient(MultiIndex())

    @property
    def variance(self):
        """Return the variance, the sum of squared non-constant coefficients."""
        return float(np.sum(self.coefficients ** 2) - self.mean ** 2)


def _families(kind, d):
    if kind == "legendre":
        return (PolyFamily.legendre(),) * d
    if kind == "hermite":
        return (PolyFamily.hermite(),) * d
    raise ValueError("kind must be 'legendre' or 'hermite'")


def planted_spec(
    d=5,
    n_terms=20,
    max_order=4,
    kind="legendre",
    seed=0,
    indices=None,
    coefficients=None,
):
    """
    Return a sparse polynomial QoI in a random anisotropic basis.

    With `indices` and `coefficients` given the expansion is taken as is;
    otherwise a random order vector with entries in [1, max_order] is drawn,
    n_terms of its members are kept (the constant always among them) and
    their coefficients decay with total degree.

    Args:
        d (int): the number of input dimensions
        n_terms (int): the number of non-zero coefficients
        max_order (int): the largest per-dimension order
        kind (str): 'legendre' (uniform on [-1, 1]^d) or 'hermite'
        seed (int): the seed of the random construction
        indices (list): explicit multi-indices of the expansion
        coefficients (list): explicit coefficients of the expansion

    Returns:
        a QoiSpec whose metadata holds the PlantedPolynomial as 'truth'

    """
    families = _families(kind, d)
    if indices is not None:
        basis = BasisSpec([MultiIndex(k) for k in indices], families)
        truth = PlantedPolynomial(basis, coefficients)
    else:
        if n_terms < 1 or max_order < 1:
            raise ValueError("n_terms and max_order must be positive")
        rng = np.random.default_rng(seed)
        orders = rng.integers(1, max_order + 1, size=d)
        full = basis_id(orders, families)
        rest = rng.choice(
            np.arange(1, len(full)),
            size=min(n_terms, len(full)) - 1,
            replace=False,
        )
        members = [full.indices[0]] + [full.indices[i] for i in np.sort(rest)]
        basis = BasisSpec(members, families, generator=None)
        decay = np.array([2.0 ** -k.degree for k in members])
        signs = rng.choice([-1.0, 1.0], size=len(members))
        truth = PlantedPolynomial(basis, signs * decay * rng.uniform(0.5, 1.0, len(members)))
    return QoiSpec(
        name="planted",
        families=families,
        evaluator=truth,
        suggested_gamma=suggested_gamma(d),
        metadata={"truth": truth},
    )


def linear(points):
    """Evaluate sqrt(3) x_1, the first orthonormal Legendre polynomial."""
    return math.sqrt(3.0) * np.atleast_2d(points)[:, 0]


def linear_spec():
    """Return sqrt(3) x on uniform [-1, 1], of mean 0 and variance 1."""
    return QoiSpec(
        name="linear",
        families=(PolyFamily.legendre(),),
        evaluator=linear,
        metadata={
            "truth": PlantedPolynomial(
                BasisSpec([MultiIndex(), MultiIndex([1])], (PolyFamily.legendre(),)),
                [0.0, 1.0],
            )
        },
    )
