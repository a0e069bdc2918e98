"""Basis-adaptive sample-efficient polynomial chaos surrogates."""

from .polynomials import PolyFamily, basis_eval, basis_eval_1d, basis_matrix
from .basis import BasisSpec, MultiIndex, basis_id, basis_contract, basis_expand
from .sampling import SamplePool, SamplingError, sample_expand
from .solver import DesignSystem, bpdn_solve, design_system
from .validation import CvConfig, ValidationError, cross_validate, basis_validate
from .adaptation import (
    BasePC,
    RunAborted,
    RunConfig,
    Surrogate,
    TotalOrderBaseline,
    base_pc_loop,
    moments,
)
from ._qoi import EvaluationError, QoiSpec
from ._registration import make, qoi_registry, register


# define the outward facing API of this package
__all__ = [
    PolyFamily.__name__,
    MultiIndex.__name__,
    BasisSpec.__name__,
    SamplePool.__name__,
    DesignSystem.__name__,
    CvConfig.__name__,
    RunConfig.__name__,
    Surrogate.__name__,
    QoiSpec.__name__,
    BasePC.__name__,
    TotalOrderBaseline.__name__,
    SamplingError.__name__,
    ValidationError.__name__,
    EvaluationError.__name__,
    RunAborted.__name__,
    basis_eval_1d.__name__,
    basis_eval.__name__,
    basis_matrix.__name__,
    basis_id.__name__,
    basis_contract.__name__,
    basis_expand.__name__,
    sample_expand.__name__,
    design_system.__name__,
    bpdn_solve.__name__,
    cross_validate.__name__,
    basis_validate.__name__,
    base_pc_loop.__name__,
    moments.__name__,
    make.__name__,
    register.__name__,
    qoi_registry.__name__,
]
