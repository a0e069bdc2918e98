"""Anisotropic total-order bases: construction, contraction and expansion."""

import numpy as np
from .polynomials import PolyFamily


# tolerance on the anisotropic membership sum sum_i k_i / p_i <= 1
MEMBERSHIP_TOL = 1e-12


# guard against floating point overshoot in the ceiling of gamma * p
_CEIL_TOL = 1e-9


class MultiIndex(tuple):
    """
    Per-dimension polynomial orders of one tensor-product basis function.

    Trailing zeros are dropped on construction, so equality and hashing
    follow the dense interpretation of the index.
    """

    def __new__(cls, orders=()):
        orders = [int(k) for k in orders]
        if any(k < 0 for k in orders):
            raise ValueError("multi-index orders must be non-negative")
        while orders and orders[-1] == 0:
            orders.pop()
        return super(MultiIndex, cls).__new__(cls, orders)

    @classmethod
    def from_pairs(cls, pairs):
        """Build an index from sparse (dimension, order) pairs."""
        pairs = list(pairs)
        if not pairs:
            return cls()
        dense = [0] * (max(i for i, _ in pairs) + 1)
        for i, k in pairs:
            dense[i] = k
        return cls(dense)

    @property
    def degree(self):
        """Return the total degree of the index."""
        return sum(self)

    def pairs(self):
        """Return the sparse (dimension, order) pairs of the index."""
        return [(i, k) for i, k in enumerate(self) if k]

    def grlex_key(self):
        """Return the graded-lexicographic sort key of the index."""
        return (self.degree, tuple(-k for k in self))


class BasisSpec:
    """
    An ordered set of multi-indices with per-dimension polynomial families.

    Args:
        indices (iterable): the MultiIndex members, in basis order
        families (sequence): one PolyFamily per input dimension
        generator (sequence): the order vector p that generated the basis

    """

    def __init__(self, indices, families, generator=None):
        self._indices = tuple(MultiIndex(k) for k in indices)
        self._families = tuple(families)
        for family in self._families:
            if not isinstance(family, PolyFamily):
                raise TypeError("families must be of type: PolyFamily")
        if len(set(self._indices)) != len(self._indices):
            raise ValueError("basis indices must be distinct")
        for index in self._indices:
            if len(index) > self.dim:
                raise ValueError("index {} exceeds dimension".format(index))
        self._generator = None if generator is None else tuple(
            float(p) for p in generator
        )
        self._array = None
        self._positions = None

    @property
    def indices(self):
        """Return the tuple of member multi-indices."""
        return self._indices

    @property
    def families(self):
        """Return the per-dimension polynomial families."""
        return self._families

    @property
    def generator(self):
        """Return the generating order vector, or None."""
        return self._generator

    @property
    def dim(self):
        """Return the number of input dimensions."""
        return len(self._families)

    @property
    def array(self):
        """Return the dense |B| x d integer array of orders."""
        if self._array is None:
            array = np.zeros((len(self._indices), self.dim), dtype=int)
            for row, index in enumerate(self._indices):
                array[row, : len(index)] = index
            array.setflags(write=False)
            self._array = array
        return self._array

    @property
    def constant_position(self):
        """Return the position of the constant function, or None."""
        return self.position(MultiIndex())

    def position(self, index):
        """Return the position of a multi-index in the basis, or None."""
        if self._positions is None:
            self._positions = {k: i for i, k in enumerate(self._indices)}
        return self._positions.get(MultiIndex(index))

    def __len__(self):
        return len(self._indices)

    def __iter__(self):
        return iter(self._indices)

    def __contains__(self, index):
        return self.position(index) is not None

    def __eq__(self, other):
        if not isinstance(other, BasisSpec):
            return NotImplemented
        return (
            self._families == other._families
            and set(self._indices) == set(other._indices)
        )

    def __hash__(self):
        return hash((self._families, frozenset(self._indices)))

    def __repr__(self):
        return "BasisSpec(dim={}, size={})".format(self.dim, len(self))

    def issubset(self, other):
        """Return True if every member of this basis is in `other`."""
        return set(self._indices) <= set(other.indices)

    def to_dict(self):
        """Return a JSON-ready record of the basis."""
        return {
            "families": [family.to_dict() for family in self._families],
            "generator": None if self._generator is None else list(self._generator),
            "indices": [index.pairs() for index in self._indices],
        }

    @classmethod
    def from_dict(cls, data):
        """Build a basis from the output of `to_dict`."""
        families = [PolyFamily.from_dict(f) for f in data["families"]]
        indices = [MultiIndex.from_pairs(pairs) for pairs in data["indices"]]
        return cls(indices, families, data.get("generator"))


def _check_orders(p, dim):
    """Return p as a validated float vector of length `dim`."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.shape[0] != dim:
        raise ValueError("p must have one entry per dimension ({})".format(dim))
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValueError("p must be finite and non-negative")
    return p


def _enumerate(orders):
    """
    Enumerate sparse members of an anisotropic order set.

    Args:
        orders (list): (dimension, p_i) pairs sorted by p_i descending

    Returns:
        a list of lists of (dimension, order) pairs

    """
    found = []
    # each node: (next sorted position, remaining budget, pairs so far)
    stack = [(0, 1.0, [])]
    while stack:
        start, budget, pairs = stack.pop()
        found.append(pairs)
        for position in range(start, len(orders)):
            dim, p = orders[position]
            # p is sorted descending, so no later dimension fits either
            if 1.0 / p > budget + MEMBERSHIP_TOL:
                break
            k = 1
            while k / p <= budget + MEMBERSHIP_TOL:
                stack.append((position + 1, budget - k / p, pairs + [(dim, k)]))
                k += 1
    return found


def basis_id(p, families):
    """
    Build the anisotropic total-order basis {k : sum_i k_i / p_i <= 1}.

    Args:
        p (sequence): the non-negative order vector, one entry per dimension
        families (sequence): one PolyFamily per dimension

    Returns:
        the BasisSpec in graded-lexicographic order

    """
    families = tuple(families)
    p = _check_orders(p, len(families))
    # dimensions with p_i = 0 only admit order 0
    active = sorted(
        ((i, float(p[i])) for i in np.flatnonzero(p)), key=lambda item: -item[1]
    )
    indices = [MultiIndex.from_pairs(pairs) for pairs in _enumerate(active)]
    indices.sort(key=MultiIndex.grlex_key)
    return BasisSpec(indices, families, generator=p)


def envelope(basis):
    """Return the coordinate-wise maximum order of the basis members."""
    if len(basis) == 0:
        return np.zeros(basis.dim, dtype=int)
    return basis.array.max(axis=0)


def basis_contract(basis, c, m):
    """
    Remove the m members with the smallest coefficient magnitudes.

    Args:
        basis (BasisSpec): the basis to contract
        c (array-like): one coefficient per basis member
        m (int): the number of members to remove

    Returns:
        the contracted BasisSpec, remaining members in their original order

    """
    c = np.asarray(c, dtype=float)
    if c.shape != (len(basis),):
        raise ValueError("c must have one entry per basis member")
    if m < 0 or m > len(basis):
        raise ValueError("m must be in [0, {}]".format(len(basis)))
    # a stable sort breaks ties by smallest position
    removed = set(np.argsort(np.abs(c), kind="stable")[:m].tolist())
    kept = [k for i, k in enumerate(basis.indices) if i not in removed]
    return BasisSpec(kept, basis.families)


def basis_expand(basis, gamma, dim_add=0, bound=None):
    """
    Expand a (possibly contracted) basis to an anisotropic total-order basis.

    Args:
        basis (BasisSpec): the basis to expand
        gamma (float): the relative expansion factor, > 1
        dim_add (int): how many inactive dimensions to open at order 1
        bound (sequence): an optional coordinate-wise bound on the orders

    Returns:
        basis_id of the expanded order vector

    """
    if gamma <= 1:
        raise ValueError("gamma must be greater than 1")
    if dim_add < 0:
        raise ValueError("dim_add must be non-negative")
    p = envelope(basis).astype(float)
    q = np.ceil(gamma * p - _CEIL_TOL)
    q[p == 0] = 0
    # new dimensions enter at order 1, lowest index first
    for i in np.flatnonzero(p == 0)[:dim_add]:
        q[i] = 1
    if bound is not None:
        q = np.minimum(q, _check_orders(bound, basis.dim))
    return basis_id(q, basis.families)


def basis_upper_bound(p, dim_add=0):
    """
    Return a coordinate-wise upper bound on the orders of the next basis.

    Args:
        p (sequence): the current order vector (floored to integers)
        dim_add (int): the number of dimensions allowed to grow

    Returns:
        the integer bound vector b

    """
    p = np.floor(np.asarray(p, dtype=float)).astype(int)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("p must be a non-empty vector")
    if dim_add < 0:
        raise ValueError("dim_add must be non-negative")
    b = np.zeros(p.size, dtype=int)
    for k in range(1, int(p.max()) + 1):
        positions = np.flatnonzero(p == k)
        # levels with no coordinate of exactly order k are skipped
        if positions.size == 0:
            continue
        b[: positions[-1] + 1 + dim_add] = k
    b[:dim_add] += 1
    return b


def total_order(order, families):
    """Return the isotropic total-order basis of the given order."""
    return basis_id([order] * len(families), families)


# explicitly define the outward facing API of this module
__all__ = [
    MultiIndex.__name__,
    BasisSpec.__name__,
    basis_id.__name__,
    envelope.__name__,
    basis_contract.__name__,
    basis_expand.__name__,
    basis_upper_bound.__name__,
    total_order.__name__,
]
