"""Test cases for the orthonormal polynomial families."""

import math
from unittest import TestCase
import numpy as np
from ..basis import BasisSpec, MultiIndex
from ..polynomials import (
    PolyFamily,
    basis_eval,
    basis_eval_1d,
    basis_matrix,
    gauss_rule,
    quad_orthonormality_check,
    tabulate,
)


class ShouldEvaluateLegendreAtOne(TestCase):
    def test(self):
        values = basis_eval_1d(PolyFamily.legendre(), 2, 1.0)
        expected = [1.0, math.sqrt(3.0), math.sqrt(5.0)]
        self.assertTrue(np.allclose(expected, values, rtol=0, atol=1e-12))


class ShouldEvaluateHermiteAtZero(TestCase):
    def test(self):
        values = basis_eval_1d(PolyFamily.hermite(), 2, 0.0)
        expected = [1.0, 0.0, -1.0 / math.sqrt(2.0)]
        self.assertTrue(np.allclose(expected, values, rtol=0, atol=1e-12))


class ShouldReachSquareRootAtRightEndForHighOrders(TestCase):
    def test(self):
        values = basis_eval_1d(PolyFamily.legendre(), 30, 1.0)
        expected = np.sqrt(2.0 * np.arange(31) + 1.0)
        self.assertTrue(np.allclose(expected, values, rtol=1e-10, atol=0))


class ShouldRespectParity(TestCase):
    def test(self):
        signs = (-1.0) ** np.arange(31)
        for family in (PolyFamily.legendre(), PolyFamily.hermite()):
            for x in (0.3, 0.77, 1.0):
                left = basis_eval_1d(family, 30, -x)
                right = basis_eval_1d(family, 30, x)
                self.assertTrue(np.allclose(signs * right, left, rtol=1e-12, atol=1e-12))


class ShouldReturnConstantForOrderZero(TestCase):
    def test(self):
        for family in (PolyFamily.legendre(), PolyFamily.hermite()):
            self.assertEqual([1.0], basis_eval_1d(family, 0, 0.37).tolist())


class ShouldMapShiftedLegendreOntoReference(TestCase):
    def test(self):
        # the right end of [0, 1] is the reference point 1
        values = basis_eval_1d(PolyFamily.legendre(0.0, 1.0), 3, 1.0)
        expected = [math.sqrt(2 * k + 1) for k in range(4)]
        self.assertTrue(np.allclose(expected, values, rtol=0, atol=1e-12))


class ShouldRaiseErrorOnInvalidOrder(TestCase):
    def test(self):
        family = PolyFamily.legendre()
        self.assertRaises(ValueError, basis_eval_1d, family, -1, 0.0)
        self.assertRaises(TypeError, basis_eval_1d, family, 1.5, 0.0)
        self.assertRaises(TypeError, basis_eval_1d, family, True, 0.0)


class ShouldRaiseErrorOnNonFinitePoint(TestCase):
    def test(self):
        family = PolyFamily.hermite()
        self.assertRaises(ValueError, basis_eval_1d, family, 2, math.nan)
        self.assertRaises(ValueError, basis_eval_1d, family, 2, math.inf)
        self.assertRaises(ValueError, tabulate, family, 2, [0.0, math.nan])


class ShouldRaiseErrorOnInvalidFamily(TestCase):
    def test(self):
        self.assertRaises(ValueError, PolyFamily, "chebyshev")
        self.assertRaises(ValueError, PolyFamily.legendre, 1.0, 1.0)


class ShouldTabulateOrdersByRow(TestCase):
    def test(self):
        points = np.linspace(-1.0, 1.0, 7)
        table = tabulate(PolyFamily.legendre(), 4, points)
        self.assertEqual((5, 7), table.values.shape)
        self.assertEqual(4, table.order)
        self.assertTrue(np.allclose(math.sqrt(3.0) * points, table.values[1]))


class ShouldEvaluateTensorProducts(TestCase):
    def test(self):
        families = (PolyFamily.legendre(),) * 2
        constant = BasisSpec([MultiIndex()], families)
        self.assertEqual([1.0], basis_eval(constant, [0.3, -0.8]).tolist())
        linear = BasisSpec([MultiIndex([1, 0]), MultiIndex([0, 1])], families)
        values = basis_eval(linear, [1.0, 1.0])
        self.assertTrue(np.allclose([math.sqrt(3.0)] * 2, values, rtol=0, atol=1e-12))
        mixed = BasisSpec([MultiIndex([1, 1])], families)
        self.assertAlmostEqual(-3.0, basis_eval(mixed, [1.0, -1.0])[0], places=12)


class ShouldMatchPointwiseEvaluation(TestCase):
    def test(self):
        families = (PolyFamily.legendre(), PolyFamily.hermite())
        basis = BasisSpec(
            [MultiIndex(), MultiIndex([2]), MultiIndex([0, 3]), MultiIndex([1, 2])],
            families,
        )
        points = np.random.default_rng(7).uniform(-1.0, 1.0, size=(5, 2))
        psi = basis_matrix(basis, points)
        for row, xi in enumerate(points):
            self.assertTrue(np.allclose(basis_eval(basis, xi), psi[row]))


class ShouldRaiseErrorOnDimensionMismatch(TestCase):
    def test(self):
        basis = BasisSpec([MultiIndex([0, 1])], (PolyFamily.legendre(),) * 2)
        self.assertRaises(ValueError, basis_eval, basis, [0.5])
        self.assertRaises(ValueError, basis_matrix, basis, np.zeros((3, 1)))


class ShouldBeOrthonormal:
    """A test case for the quadrature check of an arbitrary family."""

    # the family under test
    family = None
    # the highest order checked
    order = 30
    # the largest tolerated deviation from the identity
    tolerance = 1e-10

    def test(self):
        deviation = quad_orthonormality_check(self.family, self.order)
        self.assertLessEqual(deviation, self.tolerance)
        self.assertLessEqual(quad_orthonormality_check(self.family, 0), 1e-14)


class ShouldBeOrthonormalLegendre(ShouldBeOrthonormal, TestCase):
    family = PolyFamily.legendre()


class ShouldBeOrthonormalShiftedLegendre(ShouldBeOrthonormal, TestCase):
    family = PolyFamily.legendre(0.0, 1.0)


class ShouldBeOrthonormalHermite(ShouldBeOrthonormal, TestCase):
    family = PolyFamily.hermite()
    tolerance = 1e-8


class ShouldRejectCheckAboveMaximalOrder(TestCase):
    def test(self):
        self.assertRaises(ValueError, quad_orthonormality_check, PolyFamily.hermite(), 61)


class ShouldIntegrateMomentsWithGaussRule(TestCase):
    def test(self):
        nodes, weights = gauss_rule(PolyFamily.hermite(), 5)
        self.assertAlmostEqual(1.0, weights.sum())
        self.assertAlmostEqual(0.0, weights @ nodes)
        self.assertAlmostEqual(1.0, weights @ nodes ** 2)
        self.assertAlmostEqual(3.0, weights @ nodes ** 4)
        nodes, weights = gauss_rule(PolyFamily.legendre(0.0, 1.0), 4)
        self.assertTrue(np.all((nodes > 0.0) & (nodes < 1.0)))
        self.assertAlmostEqual(0.5, weights @ nodes)
        self.assertAlmostEqual(1.0 / 3.0, weights @ nodes ** 2)


class ShouldEvaluateOrthogonalityDensity(TestCase):
    def test(self):
        family = PolyFamily.legendre(0.0, 2.0)
        np.testing.assert_allclose([0.0, 0.5, 0.5, 0.0], family.pdf([-0.1, 0.0, 1.5, 2.1]))
        density = PolyFamily.hermite().pdf([0.0, 1.0])
        expected = np.exp([0.0, -0.5]) / math.sqrt(2.0 * math.pi)
        np.testing.assert_allclose(expected, density)


class ShouldDrawFromOrthogonalityDensity(TestCase):
    def test(self):
        rng = np.random.default_rng(3)
        draws = PolyFamily.legendre(2.0, 3.0).sample(rng, 2000)
        self.assertEqual((2000,), draws.shape)
        self.assertTrue(np.all((draws >= 2.0) & (draws <= 3.0)))
        self.assertAlmostEqual(2.5, draws.mean(), delta=0.03)
        draws = PolyFamily.hermite().sample(rng, 4000)
        self.assertAlmostEqual(0.0, draws.mean(), delta=0.08)
        self.assertAlmostEqual(1.0, draws.var(), delta=0.1)
