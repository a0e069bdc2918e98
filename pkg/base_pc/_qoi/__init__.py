"""Benchmark quantities of interest and their input distributions."""

from .qoi_spec import QoiSpec
from .franke import franke, franke_spec
from .sine_decay import sine_decay, sine_decay_spec
from .surface_adsorption import (
    EvaluationError,
    surface_adsorption,
    surface_adsorption_spec,
)
from .planted import PlantedPolynomial, linear, linear_spec, planted_spec


# explicitly define the outward facing API of this package
__all__ = [
    QoiSpec.__name__,
    EvaluationError.__name__,
    PlantedPolynomial.__name__,
    franke.__name__,
    franke_spec.__name__,
    sine_decay.__name__,
    sine_decay_spec.__name__,
    surface_adsorption.__name__,
    surface_adsorption_spec.__name__,
    linear.__name__,
    linear_spec.__name__,
    planted_spec.__name__,
]
