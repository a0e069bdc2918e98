"""Registration of the benchmark quantities of interest in this package."""

from dataclasses import dataclass, field
from importlib import import_module


class UnregisteredError(KeyError):
    """An error raised when looking up a QoI id that was never registered."""


@dataclass(frozen=True)
class _Entry:
    """A registered QoI: where to build it and its default keyword arguments."""

    id: str
    entry_point: object
    kwargs: dict = field(default_factory=dict)

    def load(self):
        """Resolve the entry point to the callable building the QoiSpec."""
        if callable(self.entry_point):
            return self.entry_point
        module, _, attribute = self.entry_point.partition(":")
        return getattr(import_module(module), attribute)


# the table of registered QoIs by id
_REGISTRY = {}


def register(id, entry_point, **kwargs):
    """
    Register a QoI builder under an id.

    Args:
        id (str): id for the QoI to register
        entry_point (str or callable): 'module:attribute' of the builder, or
            the builder itself
        kwargs (dict): default keyword arguments for the builder

    Returns:
        None

    """
    if not isinstance(id, str):
        raise TypeError("id must be of type: str")
    if id in _REGISTRY:
        raise ValueError("QoI {} is already registered".format(repr(id)))
    _REGISTRY[id] = _Entry(id, entry_point, dict(kwargs))


def make(id, **kwargs):
    """
    Build a registered QoI.

    Args:
        id (str): the registered id
        kwargs (dict): keyword arguments overriding the registered defaults

    Returns:
        the QoiSpec

    """
    try:
        entry = _REGISTRY[id]
    except KeyError:
        raise UnregisteredError(
            "no QoI registered as {}; known: {}".format(repr(id), sorted(_REGISTRY))
        ) from None
    return entry.load()(**{**entry.kwargs, **kwargs})


def qoi_registry():
    """Return the QoiSpec of every registered id, built with its defaults."""
    return [make(id) for id in sorted(_REGISTRY)]


# benchmark problems
register("franke", "base_pc._qoi:franke_spec")
register("sine_decay", "base_pc._qoi:sine_decay_spec", d=20)
register("surface_adsorption", "base_pc._qoi:surface_adsorption_spec")


# oracles with known coefficients
register("planted", "base_pc._qoi:planted_spec")
register("linear", "base_pc._qoi:linear_spec")


# explicitly define the outward facing API of this module
__all__ = [
    UnregisteredError.__name__,
    register.__name__,
    make.__name__,
    qoi_registry.__name__,
]
