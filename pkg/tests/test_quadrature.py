"""
Unit tests for Gauss-Jacobi quadrature
======================================
"""

import math
import os
import sys
import unittest
from fractions import Fraction

import numpy as np
from numpy.testing import assert_allclose
from scipy import integrate, special

# Add the parent directory to Python path to import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from jacobi_core import JacobiParams, PreconditionError, weight_mass
from quadrature import (
    EIGENVECTOR_MAX_NODES,
    AdaptiveConfig,
    adaptive_quadrature,
    composite_rule,
    gauss_jacobi_rule,
    integrate as integrate_rule,
    rule_size_for_degree,
    window_rule,
)

PARAMETER_SET = [
    JacobiParams(0.0, 0.0),
    JacobiParams(-0.5, -0.5),
    JacobiParams(1.0, 0.0),
    JacobiParams(0.3, 1.7),
]


def normalized_moments(params: JacobiParams, k_max: int) -> np.ndarray:
    """int t^k w / int w for k = 0..k_max, exactly in rational arithmetic.

    Integrating d/dt[(1-t)^(a+1) (1+t)^(b+1) t^k] over [-1, 1] gives
    (a + b + k + 2) mu_{k+1} = (b - a) mu_k + k mu_{k-1}.
    """
    a, b = Fraction(params.alpha), Fraction(params.beta)
    moments = [Fraction(1), (b - a) / (a + b + 2)]
    for k in range(1, k_max):
        moments.append(((b - a) * moments[k] + k * moments[k - 1]) / (a + b + k + 2))
    return np.array([float(m) for m in moments[: k_max + 1]])


class TestGaussJacobiRule(unittest.TestCase):
    """Golub-Welsch rules"""

    def test_matches_scipy_roots(self):
        for params in PARAMETER_SET:
            with self.subTest(params=str(params)):
                rule = gauss_jacobi_rule(params, 10)
                nodes, weights = special.roots_jacobi(10, params.alpha, params.beta)
                assert_allclose(rule.nodes, nodes, rtol=1e-12, atol=1e-14)
                assert_allclose(rule.weights, weights, rtol=1e-10)

    def test_nodes_increasing_and_weights_positive(self):
        rule = gauss_jacobi_rule(JacobiParams(0.3, 1.7), 40)
        self.assertTrue(np.all(np.diff(rule.nodes) > 0))
        self.assertTrue(np.all(rule.weights > 0))
        self.assertTrue(np.all(np.abs(rule.nodes) < 1))
        self.assertEqual(rule.exact_degree, 79)

    def test_nodes_interlace(self):
        for params in PARAMETER_SET:
            for m in range(1, 65):
                inner = gauss_jacobi_rule(params, m).nodes
                outer = gauss_jacobi_rule(params, m + 1).nodes
                with self.subTest(params=str(params), m=m):
                    self.assertTrue(np.all(outer[:-1] < inner))
                    self.assertTrue(np.all(inner < outer[1:]))

    def test_moment_exactness(self):
        for params in PARAMETER_SET:
            moments = normalized_moments(params, 127)
            even_scale = np.maximum(np.abs(moments), np.abs(moments[np.arange(128) // 2 * 2]))
            for m in range(1, 65):
                rule = gauss_jacobi_rule(params, m)
                mass = rule.weights.sum()
                powers = rule.nodes[None, :] ** np.arange(2 * m)[:, None]
                computed = (powers @ rule.weights) / mass
                error = np.abs(computed - moments[: 2 * m])
                with self.subTest(params=str(params), m=m):
                    self.assertTrue(np.all(error <= 1e-11 * even_scale[: 2 * m]))
                    self.assertAlmostEqual(mass / weight_mass(params), 1.0, places=12)

    def test_large_rules_use_christoffel_weights(self):
        m = EIGENVECTOR_MAX_NODES + 76
        rule = gauss_jacobi_rule(JacobiParams(0.0, 0.0), m)
        self.assertEqual(rule.nodes.size, m)
        self.assertTrue(np.all(np.diff(rule.nodes) > 0))
        self.assertAlmostEqual(rule.weights.sum() / 2.0, 1.0, places=10)
        self.assertAlmostEqual(np.dot(rule.weights, rule.nodes ** 2) / (2.0 / 3.0), 1.0, places=10)

    def test_rule_is_cached(self):
        first = gauss_jacobi_rule(JacobiParams(1.0, 0.0), 12)
        second = gauss_jacobi_rule(JacobiParams(1.0, 0.0), 12)
        self.assertIs(first.nodes, second.nodes)
        with self.assertRaises(ValueError):
            first.nodes[0] = 0.0

    def test_invalid_size(self):
        with self.assertRaises(PreconditionError):
            gauss_jacobi_rule(JacobiParams(0.0, 0.0), 0)

    def test_rule_size_for_degree(self):
        self.assertEqual(rule_size_for_degree(0), 9)
        self.assertEqual(rule_size_for_degree(10), 14)
        with self.assertRaises(PreconditionError):
            rule_size_for_degree(-1)


class TestWindowAndCompositeRules(unittest.TestCase):
    """Rules restricted to sub-intervals"""

    def test_window_touching_the_right_endpoint(self):
        _, weights = window_rule(JacobiParams(1.0, 0.0), 0.0, 1.0, 8)
        self.assertAlmostEqual(weights.sum(), 0.5, places=14)

    def test_window_touching_the_left_endpoint(self):
        nodes, weights = window_rule(JacobiParams(0.5, -0.5), -1.0, 0.0, 40)
        # (1-t)^0.5 is evaluated at the nodes on this window
        expected, _ = integrate.quad(lambda t: (1 - t) ** 0.5, -1.0, 0.0,
                                     weight='alg', wvar=(-0.5, 0.0),
                                     epsabs=0.0, epsrel=1e-13)
        self.assertAlmostEqual(weights.sum() / expected, 1.0, places=11)
        self.assertTrue(np.all((nodes > -1.0) & (nodes < 0.0)))

    def test_interior_window(self):
        _, weights = window_rule(JacobiParams(0.0, 0.0), -0.25, 0.5, 4)
        self.assertAlmostEqual(weights.sum(), 0.75, places=14)

    def test_invalid_window(self):
        with self.assertRaises(PreconditionError):
            window_rule(JacobiParams(0.0, 0.0), 0.5, 0.5, 4)
        with self.assertRaises(PreconditionError):
            window_rule(JacobiParams(0.0, 0.0), -1.5, 0.5, 4)

    def test_composite_rule_integrates_steps_exactly(self):
        rule = composite_rule(JacobiParams(0.0, 0.0), 5, breakpoints=(0.0,))
        self.assertEqual(rule.breakpoints, (0.0,))
        value = integrate_rule(rule, lambda t: np.where(t < 0, -1.0, 1.0) * t)
        self.assertAlmostEqual(value, 1.0, places=14)

    def test_composite_rule_without_cuts_is_gauss(self):
        rule = composite_rule(JacobiParams(0.0, 0.0), 6, breakpoints=(-1.0, 1.0))
        self.assertEqual(rule.nodes.size, 6)
        self.assertEqual(rule.breakpoints, ())


class TestAdaptiveQuadrature(unittest.TestCase):
    """Doubling protocol"""

    def test_converges_on_smooth_integrand(self):
        estimate = adaptive_quadrature(
            JacobiParams(0.0, 0.0), lambda rule: integrate_rule(rule, np.exp)
        )
        self.assertTrue(estimate.converged)
        self.assertAlmostEqual(float(estimate) / (math.e - 1 / math.e), 1.0, places=12)

    def test_vector_integrands_converge_together(self):
        params = JacobiParams(0.3, 1.7)

        def evaluate(rule):
            return np.array([np.dot(rule.weights, np.cos(k * rule.nodes)) for k in range(4)])

        estimate = adaptive_quadrature(params, evaluate)
        self.assertTrue(estimate.converged)
        self.assertEqual(estimate.value.shape, (4,))
        self.assertAlmostEqual(estimate.value[0] / weight_mass(params), 1.0, places=12)

    def test_reports_non_convergence(self):
        config = AdaptiveConfig(max_nodes=64)
        estimate = adaptive_quadrature(
            JacobiParams(0.0, 0.0),
            lambda rule: integrate_rule(rule, lambda t: np.sqrt(np.abs(t - 0.1))),
            config=config,
        )
        self.assertFalse(estimate.converged)
        self.assertEqual(estimate.nodes_used, 64)


if __name__ == '__main__':
    unittest.main()
