"""Test cases for the BASE-PC iteration and the total-order baseline."""

from unittest import TestCase
import numpy as np
from .. import defaults
from .._qoi import QoiSpec, franke_spec, linear_spec, planted_spec
from ..adaptation import (
    BasePC,
    IterationRecord,
    RunAborted,
    RunConfig,
    Surrogate,
    TotalOrderBaseline,
    base_pc_loop,
    initial_basis,
    initialize,
    moments,
)
from ..basis import BasisSpec, MultiIndex, basis_id
from ..polynomials import PolyFamily
from ..validation import CvConfig


# a small cross-validation keeping the tests fast
CV = CvConfig(folds=4, holdout_fraction=0.2, n_tolerances=5)


def _config(**kwargs):
    return RunConfig(**{"cv": CV, "timing": False, **kwargs})


def _constant_qoi(value):
    return QoiSpec(
        "constant",
        (PolyFamily.legendre(),) * 2,
        lambda points: np.full(len(points), value),
    )


class ShouldComputeMomentsFromCoefficients(TestCase):
    def test(self):
        basis = basis_id([1, 1], (PolyFamily.legendre(),) * 2)
        self.assertEqual((2.0, 25.0), moments(Surrogate(basis, np.array([2.0, 3.0, 4.0]), 0.0)))
        self.assertEqual((5.0, 0.0), moments(Surrogate(basis, np.array([5.0, 0.0, 0.0]), 0.0)))


class ShouldComputeMomentsOfLinearSurrogate(TestCase):
    def test(self):
        basis = BasisSpec([MultiIndex(), MultiIndex([1])], (PolyFamily.legendre(),))
        surrogate = Surrogate(basis, np.array([0.0, 1.0]), 0.0)
        self.assertEqual((0.0, 1.0), moments(surrogate))
        self.assertAlmostEqual(linear_spec()([0.3]), surrogate(np.array([[0.3]]))[0])


class ShouldRaiseErrorOnMissingConstant(TestCase):
    def test(self):
        basis = BasisSpec([MultiIndex([1])], (PolyFamily.legendre(),))
        self.assertRaises(ValueError, moments, Surrogate(basis, np.ones(1), 0.0))
        self.assertRaises(ValueError, Surrogate, basis, np.ones(2), 0.0)


class ShouldRaiseErrorOnInvalidRunConfig(TestCase):
    def test(self):
        self.assertRaises(ValueError, RunConfig, gamma=1.0)
        self.assertRaises(ValueError, RunConfig, min_ratio=0.5, max_ratio=0.25)
        self.assertRaises(ValueError, RunConfig, sample_mode="uniform")
        self.assertRaises(ValueError, RunConfig, max_strikes=0)
        self.assertRaises(ValueError, RunConfig, n0=2)
        self.assertRaises(TypeError, RunConfig, max_iterations=1.5)
        self.assertRaises(ValueError, RunConfig, seed=-1)


class ShouldRestoreRunConfigFromDict(TestCase):
    def test(self):
        cfg = _config(gamma=1.3, n0=8)
        restored = RunConfig.from_dict(cfg.to_dict())
        self.assertEqual(cfg, restored)
        self.assertIsInstance(restored.cv, CvConfig)


class ShouldBuildInitialBasisOverFirstDimensions(TestCase):
    def test(self):
        families = (PolyFamily.legendre(),) * 5
        basis = initial_basis(_config(dim_add=2), families)
        self.assertEqual(3, len(basis))
        self.assertEqual(6, len(initial_basis(_config(), families)))


class ShouldInitializeFromTwiceTheBasisSize(TestCase):
    def test(self):
        basis, pool, fit = initialize(_config(), franke_spec(), np.random.default_rng(60))
        self.assertEqual(3, len(basis))
        self.assertEqual(6, len(pool))
        self.assertFalse(np.any(pool.pending_rows))
        self.assertEqual((3,), fit.c_hat.shape)


class ShouldInitializeWithUnitWeightsInOrthogonalityMode(TestCase):
    def test(self):
        cfg = _config(sample_mode=defaults.ORTHOGONALITY, n0=10)
        _, pool, _ = initialize(cfg, franke_spec(), np.random.default_rng(61))
        self.assertEqual(10, len(pool))
        self.assertEqual([1.0] * 10, pool.weights.tolist())


class ShouldInitializeDeterministically(TestCase):
    def test(self):
        first = initialize(_config(), franke_spec(), np.random.default_rng(62))
        second = initialize(_config(), franke_spec(), np.random.default_rng(62))
        self.assertTrue(np.array_equal(first[1].points, second[1].points))
        self.assertTrue(np.array_equal(first[2].c_hat, second[2].c_hat))


class ShouldReturnInitialFitWithoutIterations(TestCase):
    def test(self):
        surrogate, records = base_pc_loop(_config(max_iterations=0), franke_spec())
        self.assertEqual(1, len(records))
        self.assertEqual(0, records[0].iter)
        self.assertEqual(3, records[0].n_basis)
        self.assertEqual(records[0].cv_rrmse, surrogate.cv_rrmse)


class ShouldEstimateMeanOfConstant(TestCase):
    def test(self):
        surrogate, records = base_pc_loop(_config(max_iterations=1), _constant_qoi(3.0))
        self.assertEqual(2, len(records))
        mean, variance = moments(surrogate)
        self.assertAlmostEqual(3.0, mean, delta=1e-8)
        self.assertAlmostEqual(0.0, variance, delta=1e-8)


class ShouldRecoverPlantedBasisFunction(TestCase):
    def test(self):
        qoi = planted_spec(d=2, indices=[(2,)], coefficients=[1.0])
        _, records = base_pc_loop(_config(max_iterations=3, n0=10), qoi)
        self.assertLessEqual(min(r.cv_rrmse for r in records[1:]), 1e-6)


class ShouldGrowPoolEveryIteration(TestCase):
    def test(self):
        seen = []
        _, records = base_pc_loop(_config(max_iterations=2), franke_spec(), seen.append)
        self.assertEqual(records, seen)
        self.assertEqual([0, 1, 2], [r.iter for r in records])
        sizes = [r.n_samples for r in records]
        self.assertTrue(all(b > a for a, b in zip(sizes, sizes[1:])))


class ShouldRepeatRunsForSameSeed(TestCase):
    def test(self):
        cfg = _config(max_iterations=1, seed=7)
        _, first = base_pc_loop(cfg, franke_spec())
        _, second = base_pc_loop(cfg, franke_spec())
        self.assertEqual(first, second)


class ShouldTrackReferenceError(TestCase):
    def test(self):
        _, records = base_pc_loop(_config(max_iterations=1, n_ref=500), franke_spec())
        self.assertTrue(all(r.ref_rrmse is not None for r in records))
        self.assertTrue(all(r.ref_rrmse >= 0.0 for r in records))
        _, records = base_pc_loop(_config(max_iterations=0), franke_spec())
        self.assertIsNone(records[0].ref_rrmse)


class ShouldRecordZeroWallTimeWithoutTiming(TestCase):
    def test(self):
        _, records = base_pc_loop(_config(max_iterations=1), franke_spec())
        self.assertEqual([0.0, 0.0], [r.wall_time for r in records])


class ShouldStepManually(TestCase):
    def test(self):
        run = BasePC(_config(), franke_spec())
        self.assertRaises(RuntimeError, run.step)
        first = run.reset()
        second = run.step()
        self.assertIsInstance(second, IterationRecord)
        self.assertEqual(1, run.iteration)
        self.assertGreater(second.n_samples, first.n_samples)
        self.assertEqual(1.0, run.pool.pending_correction)


class ShouldAbortWithRecordsSoFar(TestCase):
    def test(self):
        def fail(points):
            raise RuntimeError("solver crashed")

        qoi = QoiSpec("failing", (PolyFamily.legendre(),) * 2, fail)
        with self.assertRaises(RunAborted) as context:
            base_pc_loop(_config(max_iterations=2), qoi)
        self.assertEqual([], context.exception.records)
        self.assertIsInstance(context.exception.__cause__, RuntimeError)


class ShouldKeepTotalOrderBasisFixed(TestCase):
    def test(self):
        run = TotalOrderBaseline(_config(max_iterations=2), franke_spec(), 2)
        _, records = run.run()
        self.assertEqual(defaults.ORTHOGONALITY, run.cfg.sample_mode)
        self.assertEqual([6, 6, 6], [r.n_basis for r in records])
        self.assertEqual([12, 15, 19], [r.n_samples for r in records])
        self.assertEqual([1.0] * 19, run.pool.weights.tolist())


class ShouldRaiseErrorOnInvalidTotalOrder(TestCase):
    def test(self):
        self.assertRaises(ValueError, TotalOrderBaseline, _config(), franke_spec(), -1)
        self.assertRaises(TypeError, TotalOrderBaseline, _config(), franke_spec(), 1.5)
        self.assertRaises(TypeError, TotalOrderBaseline, _config(), franke_spec(), True)


class ShouldStopWhenWallBudgetIsSpent(TestCase):
    def test(self):
        cfg = _config(max_iterations=5, wall_budget=0.0)
        _, records = base_pc_loop(cfg, franke_spec())
        self.assertEqual([0], [r.iter for r in records])
        self.assertRaises(ValueError, _config, wall_budget=-1.0)
