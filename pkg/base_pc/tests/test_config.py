"""Test cases for decoding experiment files."""

import json
import os
import tempfile
from unittest import TestCase
from .. import defaults
from .._app.config import ConfigError, MethodSpec, decode_config, load_config


class ShouldDecodeMinimalExperiment(TestCase):
    def test(self):
        experiment = decode_config({"qoi": "franke", "method": "base_pc_sa"})
        self.assertEqual("franke", experiment.qoi)
        self.assertEqual((MethodSpec("base_pc_sa"),), experiment.methods)
        self.assertEqual(1.5, experiment.run.gamma)
        self.assertEqual(defaults.SAMPLE_ADAPTIVE, experiment.methods[0].sample_mode)
        self.assertEqual(0, experiment.n_ref)
        self.assertEqual(".", experiment.output)


class ShouldDecodeQoiArguments(TestCase):
    def test(self):
        data = {"qoi": {"name": "sine_decay", "d": 30}, "method": "base_pc_no_sa"}
        experiment = decode_config(data)
        self.assertEqual({"d": 30}, experiment.qoi_kwargs)
        self.assertEqual(1.01, experiment.run.gamma)
        self.assertEqual(defaults.ORTHOGONALITY, experiment.methods[0].sample_mode)


class ShouldOverrideGammaAndCrossValidation(TestCase):
    def test(self):
        data = {
            "qoi": "franke",
            "method": "base_pc_sa",
            "run": {"gamma": 1.2, "max_iterations": 3},
            "cv": {"folds": 6},
            "seed": 4,
            "timing": False,
        }
        experiment = decode_config(data)
        self.assertEqual(1.2, experiment.run.gamma)
        self.assertEqual(3, experiment.run.max_iterations)
        self.assertEqual(6, experiment.run.cv.folds)
        self.assertEqual(4, experiment.run.seed)
        self.assertFalse(experiment.run.timing)


class ShouldApplyCommandLineOverrides(TestCase):
    def test(self):
        data = {"qoi": "franke", "method": "base_pc_sa", "seed": 4, "output": "a"}
        experiment = decode_config(data, seed=9, output="b", n_ref=100)
        self.assertEqual(9, experiment.run.seed)
        self.assertEqual("b", experiment.output)
        self.assertEqual(100, experiment.run.n_ref)


class ShouldSizeReferenceDrawsByDimension(TestCase):
    def test(self):
        data = {"qoi": "franke", "method": "base_pc_sa", "ref_rrmse": True}
        self.assertEqual(100000, decode_config(data).n_ref)
        data["qoi"] = {"name": "sine_decay", "d": 100}
        self.assertEqual(10000, decode_config(data).n_ref)


class ShouldDecodeComparison(TestCase):
    def test(self):
        data = {
            "qoi": "franke",
            "methods": ["base_pc_sa", {"name": "total_order", "order": 4}],
        }
        experiment = decode_config(data, "compare")
        labels = [method.label for method in experiment.methods]
        self.assertEqual(["base_pc_sa", "total_order_4"], labels)


class ShouldRaiseConfigErrorOnMalformedExperiment:
    """A test case for an arbitrary malformed experiment."""

    # the parsed experiment document
    data = None
    # the command the experiment is decoded for
    command = "run"

    def test(self):
        self.assertRaises(ConfigError, decode_config, self.data, self.command)


class ShouldRejectUnknownField(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "gama": 1.5}


class ShouldRejectMissingQoi(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"method": "base_pc_sa"}


class ShouldRejectUnknownQoi(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "rosenbrock", "method": "base_pc_sa"}


class ShouldRejectInvalidQoiArgument(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": {"name": "sine_decay", "d": 0}, "method": "base_pc_sa"}


class ShouldRejectUnknownMethod(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "monte_carlo"}


class ShouldRejectTotalOrderWithoutOrder(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "total_order"}


class ShouldRejectSingleMethodComparison(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "methods": ["base_pc_sa"]}
    command = "compare"


class ShouldRejectRepeatedMethods(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "methods": ["base_pc_sa", "base_pc_sa"]}
    command = "compare"


class ShouldRejectMinRatioOutOfRange(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "run": {"min_ratio": 0.5}}


class ShouldRejectInvalidGamma(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "run": {"gamma": 0.9}}


class ShouldRejectUnknownRunField(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "run": {"strikes": 3}}


class ShouldRejectSeedInsideRun(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "run": {"seed": 3}}


class ShouldRejectNegativeSeed(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "seed": -1}


class ShouldRejectBooleanSeed(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = {"qoi": "franke", "method": "base_pc_sa", "seed": True}


class ShouldRejectNonObjectDocument(ShouldRaiseConfigErrorOnMalformedExperiment, TestCase):
    data = ["franke"]


class ShouldLoadExperimentFile(TestCase):
    def test(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "experiment.json")
            with open(path, "w") as handle:
                json.dump({"qoi": "linear", "method": "base_pc_sa"}, handle)
            self.assertEqual("linear", load_config(path).qoi)
            with open(path, "w") as handle:
                handle.write("{not json")
            self.assertRaises(ConfigError, load_config, path)
            missing = os.path.join(directory, "missing.json")
            self.assertRaises(ConfigError, load_config, missing)
