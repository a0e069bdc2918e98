"""Test cases for the command line interface."""

import json
import os
import tempfile
from unittest import TestCase
from .._app.cli import main
from .._qoi import QoiSpec
from .._registration import register
from ..metrics import ABORTED, read_csv, read_log
from ..polynomials import PolyFamily


# a short experiment on the linear QoI
EXPERIMENT = {
    "qoi": "linear",
    "run": {"max_iterations": 1},
    "cv": {"folds": 4, "n_tolerances": 5},
    "seed": 11,
    "timing": False,
}


def _exit_code(argv):
    try:
        main(argv)
    except SystemExit as error:
        return error.code
    return None


def _write(directory, data):
    path = os.path.join(directory, "experiment.json")
    with open(path, "w") as handle:
        json.dump(data, handle)
    return path


class ShouldExitWithTwoOnInvalidExperiment(TestCase):
    def test(self):
        with tempfile.TemporaryDirectory() as directory:
            path = _write(directory, {"qoi": "nope", "method": "base_pc_sa"})
            self.assertEqual(2, _exit_code(["-q", "run", path]))
            missing = os.path.join(directory, "missing.json")
            self.assertEqual(2, _exit_code(["-q", "run", missing]))


class ShouldRunSingleMethod(TestCase):
    def test(self):
        with tempfile.TemporaryDirectory() as directory:
            path = _write(directory, {**EXPERIMENT, "method": "base_pc_sa"})
            out = os.path.join(directory, "out")
            self.assertEqual(0, _exit_code(["-q", "--out", out, "run", path]))
            log = read_log(os.path.join(out, "base_pc_sa.csv"))
        self.assertEqual([0, 1], [record.iter for record in log.records])
        self.assertEqual("base_pc_sa", log.config["method"])
        self.assertEqual(11, log.config["run"]["seed"])
        self.assertIn("c_hat", log.surrogate)


class ShouldTrackReferenceErrorOnRequest(TestCase):
    def test(self):
        with tempfile.TemporaryDirectory() as directory:
            path = _write(directory, {**EXPERIMENT, "method": "base_pc_no_sa"})
            out = os.path.join(directory, "out")
            argv = ["-q", "--out", out, "--ref-rrmse", "200", "run", path]
            self.assertEqual(0, _exit_code(argv))
            records = read_csv(os.path.join(out, "base_pc_no_sa.csv"))
        self.assertTrue(all(record.ref_rrmse is not None for record in records))


class ShouldCompareMethods(TestCase):
    def test(self):
        data = {
            **EXPERIMENT,
            "methods": ["base_pc_sa", {"name": "total_order", "order": 1}],
        }
        with tempfile.TemporaryDirectory() as directory:
            path = _write(directory, data)
            out = os.path.join(directory, "out")
            self.assertEqual(0, _exit_code(["-q", "--out", out, "compare", path]))
            files = sorted(os.listdir(out))
        expected = [
            "base_pc_sa.csv",
            "base_pc_sa.json",
            "summary.csv",
            "total_order_1.csv",
            "total_order_1.json",
        ]
        self.assertEqual(expected, files)


def _failing_qoi():
    def fail(points):
        raise RuntimeError("simulation crashed")

    return QoiSpec("failing", (PolyFamily.legendre(),), fail)


class ShouldExitWithOneOnFailedRun(TestCase):
    def test(self):
        try:
            register("failing", _failing_qoi)
        except ValueError:
            pass
        with tempfile.TemporaryDirectory() as directory:
            data = {**EXPERIMENT, "qoi": "failing", "method": "base_pc_sa"}
            path = _write(directory, data)
            out = os.path.join(directory, "out")
            self.assertEqual(1, _exit_code(["-q", "--out", out, "run", path]))
            with open(os.path.join(out, "base_pc_sa.csv")) as handle:
                rows = handle.read().splitlines()
        self.assertEqual(2, len(rows))
        self.assertTrue(rows[1].startswith(ABORTED))
