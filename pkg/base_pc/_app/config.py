"""Decoding and validation of JSON experiment files."""

import json
from dataclasses import asdict, dataclass, field, replace
from .. import defaults
from .._registration import UnregisteredError, make
from ..adaptation import RunConfig
from ..validation import CvConfig


# the methods an experiment may list
_METHODS = (defaults.BASE_PC_SA, defaults.BASE_PC_NO_SA, defaults.TOTAL_ORDER)


# the keys accepted at the top level of an experiment file
_KEYS = {
    "qoi",
    "method",
    "methods",
    "run",
    "cv",
    "output",
    "seed",
    "ref_rrmse",
    "n_ref",
    "timing",
}


class ConfigError(ValueError):
    """An error raised when an experiment file is malformed."""


@dataclass(frozen=True)
class MethodSpec:
    """
    One method of an experiment.

    Args:
        name (str): 'base_pc_sa', 'base_pc_no_sa' or 'total_order'
        order (int): the total order of a 'total_order' method

    """

    name: str
    order: int = None

    @property
    def label(self):
        """Return the name used for the method's output files."""
        if self.name == defaults.TOTAL_ORDER:
            return "{}_{}".format(self.name, self.order)
        return self.name

    @property
    def sample_mode(self):
        """Return the sample mode the method runs with."""
        if self.name == defaults.BASE_PC_SA:
            return defaults.SAMPLE_ADAPTIVE
        return defaults.ORTHOGONALITY


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A decoded experiment: a QoI, the methods to run and their settings.

    Args:
        qoi (str): the registered QoI id
        qoi_kwargs (dict): keyword arguments of the QoI builder
        methods (tuple): the MethodSpec of every method
        run (RunConfig): the shared run settings
        output (str): the output directory
        seed (int): the base seed
        n_ref (int): reference error draws per iteration, 0 to skip

    """

    qoi: str
    qoi_kwargs: dict = field(default_factory=dict)
    methods: tuple = ()
    run: RunConfig = field(default_factory=RunConfig)
    output: str = "."
    seed: int = 0
    n_ref: int = 0

    def to_dict(self):
        """Return a JSON-ready record of the experiment."""
        return {
            "qoi": {"name": self.qoi, **self.qoi_kwargs},
            "methods": [asdict(method) for method in self.methods],
            "run": self.run.to_dict(),
            "output": self.output,
            "seed": self.seed,
            "n_ref": self.n_ref,
        }


def _expect(data, key, kinds, name=None):
    """Return data[key] after checking its type."""
    value = data[key]
    if isinstance(value, bool) and bool not in kinds:
        raise ConfigError("{} must be of type: {}".format(name or key, kinds[0].__name__))
    if not isinstance(value, kinds):
        raise ConfigError("{} must be of type: {}".format(name or key, kinds[0].__name__))
    return value


def _decode_qoi(data):
    """Return (id, kwargs) of the qoi field."""
    if "qoi" not in data:
        raise ConfigError("qoi: a QoI name is required")
    qoi = data["qoi"]
    if isinstance(qoi, str):
        qoi = {"name": qoi}
    if not isinstance(qoi, dict) or not isinstance(qoi.get("name"), str):
        raise ConfigError("qoi: a QoI name is required")
    kwargs = {k: v for k, v in qoi.items() if k != "name"}
    try:
        spec = make(qoi["name"], **kwargs)
    except UnregisteredError:
        raise ConfigError("qoi: unknown QoI {}".format(repr(qoi["name"]))) from None
    except (TypeError, ValueError) as error:
        raise ConfigError("qoi: {}".format(error)) from None
    return qoi["name"], kwargs, spec


def _decode_method(method):
    """Return the MethodSpec of one method entry."""
    if isinstance(method, str):
        method = {"name": method}
    if not isinstance(method, dict) or method.get("name") not in _METHODS:
        raise ConfigError("method must be one of {}".format(_METHODS))
    order = method.get("order")
    if method["name"] == defaults.TOTAL_ORDER:
        if isinstance(order, bool) or not isinstance(order, int):
            raise ConfigError("method.order must be of type: int")
        if order < 0:
            raise ConfigError("method.order must be non-negative")
    elif order is not None:
        raise ConfigError("method.order only applies to total_order")
    return MethodSpec(method["name"], order)


def _decode_methods(data, command):
    if command == "compare":
        if "methods" not in data:
            raise ConfigError("methods: compare needs a list of methods")
        methods = _expect(data, "methods", (list,))
        if len(methods) < 2:
            raise ConfigError("methods: compare needs at least two methods")
    else:
        if "method" not in data:
            raise ConfigError("method: a method is required")
        methods = [data["method"]]
    decoded = tuple(_decode_method(method) for method in methods)
    labels = [method.label for method in decoded]
    if len(set(labels)) != len(labels):
        raise ConfigError("methods: methods must be distinct")
    return decoded


def _decode_run(data, spec, seed, timing):
    run = data.get("run", {})
    if not isinstance(run, dict):
        raise ConfigError("run must be of type: dict")
    cv = data.get("cv", {})
    if not isinstance(cv, dict):
        raise ConfigError("cv must be of type: dict")
    for key in ("seed", "cv", "timing", "n_ref", "sample_mode"):
        if key in run:
            raise ConfigError("run.{} is set at the top level".format(key))
    try:
        cv = CvConfig(**cv)
        run = RunConfig(
            **{"gamma": spec.suggested_gamma, **run},
            seed=seed,
            timing=timing,
            cv=cv,
        )
    except (TypeError, ValueError) as error:
        raise ConfigError("run: {}".format(error)) from None
    low, high = defaults.MIN_SAMPLE_RATIO_RANGE
    if not low <= run.min_ratio <= high:
        raise ConfigError("run.min_ratio must be in [{}, {}]".format(low, high))
    return run


def decode_config(data, command="run", seed=None, output=None, n_ref=None):
    """
    Decode an experiment from a parsed JSON document.

    Args:
        data (dict): the parsed document
        command (str): 'run' (one method) or 'compare' (two or more)
        seed (int): overrides the file's seed if given
        output (str): overrides the file's output directory if given
        n_ref (int): overrides the file's reference error draws if given

    Returns:
        an ExperimentConfig

    """
    if not isinstance(data, dict):
        raise ConfigError("the experiment must be a JSON object")
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ConfigError("unknown fields: {}".format(", ".join(unknown)))
    name, kwargs, spec = _decode_qoi(data)
    methods = _decode_methods(data, command)
    if seed is None:
        seed = _expect(data, "seed", (int,)) if "seed" in data else 0
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    timing = _expect(data, "timing", (bool,)) if "timing" in data else True
    if output is None:
        output = _expect(data, "output", (str,)) if "output" in data else "."
    if n_ref is None:
        n_ref = 0
        if "ref_rrmse" in data and _expect(data, "ref_rrmse", (bool,)):
            n_ref = defaults.suggested_n_ref(spec.dim)
        if "n_ref" in data:
            n_ref = _expect(data, "n_ref", (int,))
    if n_ref < 0:
        raise ConfigError("n_ref must be non-negative")
    run = replace(_decode_run(data, spec, seed, timing), n_ref=n_ref)
    return ExperimentConfig(name, kwargs, methods, run, output, seed, n_ref)


def load_config(path, command="run", **overrides):
    """Read and decode an experiment file."""
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as error:
        raise ConfigError("cannot read {}: {}".format(path, error)) from None
    except json.JSONDecodeError as error:
        raise ConfigError("{} is not valid JSON: {}".format(path, error)) from None
    return decode_config(data, command, **overrides)


# explicitly define the outward facing API of this module
__all__ = [
    ConfigError.__name__,
    MethodSpec.__name__,
    ExperimentConfig.__name__,
    decode_config.__name__,
    load_config.__name__,
]
