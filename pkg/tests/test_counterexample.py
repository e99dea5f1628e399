"""
Unit tests for the p = 1 counterexample
=======================================

g_N construction, sup-norm divergence traces, growth fits and the duality
lower bounds.
"""

import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np
from numpy.testing import assert_allclose

# Add the parent directory to Python path to import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from counterexample import (
    INCONSISTENCY_FLAG,
    TRACE_COLUMNS,
    InconsistencyError,
    bump_trials,
    build_gn,
    constant_trial,
    divergence_trace,
    duality_check,
    duality_profile,
    fit_growth,
    oriented_params,
)
from inequalities import WeightSequence
from jacobi_core import JacobiParams, PreconditionError
from jacobi_transform import FunctionSpec, analyze, polynomial_spec, sup_norm

LEGENDRE = JacobiParams(0.0, 0.0)
CHEBYSHEV = JacobiParams(-0.5, -0.5)
INVERSE_SQUARE = WeightSequence.power(-2.0)


class TestBuildGn(unittest.TestCase):
    """Coefficients omega(n) (n + 1)^sigma"""

    def test_coefficients(self):
        gn = build_gn(INVERSE_SQUARE, LEGENDRE, 3)
        assert_allclose(gn.values, np.arange(1.0, 5.0) ** -1.5, rtol=1e-15)
        self.assertEqual(gn.source, "g_3[pow:-2]")
        self.assertEqual(gn.N, 3)
        flat = build_gn(WeightSequence.power(0.0), LEGENDRE, 2)
        assert_allclose(flat.values, np.sqrt([1.0, 2.0, 3.0]), rtol=1e-15)

    def test_underflowing_weight(self):
        gn = build_gn(WeightSequence.geometric(0.5), LEGENDRE, 2048)
        self.assertGreater(gn.values[1022], 0.0)
        self.assertTrue(np.all(gn.values[1023:] == 0.0))

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            build_gn(INVERSE_SQUARE, JacobiParams(-0.6, -0.7), 8)
        with self.assertRaises(PreconditionError):
            build_gn(INVERSE_SQUARE, LEGENDRE, -1)

    def test_reanalysis(self):
        params = JacobiParams(1.0, 0.0)
        gn = build_gn(INVERSE_SQUARE, params, 40)
        assert_allclose(analyze(polynomial_spec(gn), 40, params).values, gn.values, atol=1e-10)

    def test_orientation(self):
        self.assertEqual(oriented_params(JacobiParams(0.0, 1.0)), JacobiParams(1.0, 0.0))
        self.assertEqual(oriented_params(JacobiParams(1.0, 0.0)), JacobiParams(1.0, 0.0))


class TestDivergenceTrace(unittest.TestCase):
    """sup ||g_N|| against the budgets S_N"""

    def test_legendre_inverse_square(self):
        Ns = [2 ** k for k in range(4, 13)]
        trace = divergence_trace(INVERSE_SQUARE, LEGENDRE, Ns)
        harmonic = np.cumsum(1.0 / np.arange(1.0, Ns[-1] + 2.0))
        assert_allclose(trace.budgets, harmonic[Ns], rtol=1e-13)
        self.assertAlmostEqual(trace.m_omega.value, 1.0, places=14)
        self.assertTrue(trace.budgets_diverging)
        self.assertLessEqual(trace.window_spread, 1.5)
        self.assertGreaterEqual(trace.sup_norms[-1] / trace.sup_norms[0], 2.5)
        self.assertTrue(np.all(np.diff(trace.sup_norms) > 0))
        assert_allclose(trace.grid_sup_norms, trace.sup_norms, rtol=1e-10)
        self.assertEqual(trace.growth.model, "log")
        assert_allclose(trace.paley_ratios, trace.sup_norms)

    def test_chebyshev_harmonic(self):
        trace = divergence_trace(WeightSequence.power(-1.0), CHEBYSHEV, [16, 64, 256, 1024])
        self.assertAlmostEqual(trace.m_omega.value, 1.0, places=12)
        self.assertTrue(trace.budgets_diverging)
        self.assertLessEqual(trace.window_spread, math.sqrt(2.0))

    def test_reflected_parameters_give_the_same_trace(self):
        omega = WeightSequence.power(-4.0)
        flipped = divergence_trace(omega, JacobiParams(0.0, 1.0), [16, 32, 64])
        direct = divergence_trace(omega, JacobiParams(1.0, 0.0), [16, 32, 64])
        assert_allclose(flipped.sup_norms, direct.sup_norms, rtol=1e-14)
        assert_allclose(flipped.budgets, direct.budgets, rtol=1e-14)
        self.assertEqual(flipped.params, JacobiParams(0.0, 1.0))

    def test_summable_budgets_do_not_diverge(self):
        trace = divergence_trace(
            WeightSequence.power(-4.0), LEGENDRE, [16, 32, 64, 128], check_grid=False
        )
        self.assertFalse(trace.budgets_diverging)
        self.assertIsNone(trace.grid_sup_norms)

    def test_frame(self):
        trace = divergence_trace(INVERSE_SQUARE, LEGENDRE, [16, 32, 64], check_grid=False)
        frame = trace.to_frame()
        self.assertEqual(list(frame.columns), TRACE_COLUMNS)
        self.assertEqual(frame["N"].tolist(), [16, 32, 64])
        self.assertTrue(frame["grid_sup_norm"].isna().all())

    def test_single_degree_has_no_growth_fit(self):
        trace = divergence_trace(INVERSE_SQUARE, LEGENDRE, [32], check_grid=False)
        self.assertIsNone(trace.growth)
        self.assertEqual(trace.to_frame()["growth_model"].tolist(), [None])

    def test_grid_sup_above_endpoint_value(self):
        with patch("counterexample.sup_norm", return_value=1e6):
            with self.assertRaises(InconsistencyError):
                divergence_trace(INVERSE_SQUARE, LEGENDRE, [16, 32])
            trace = divergence_trace(INVERSE_SQUARE, LEGENDRE, [16, 32], strict=False)
        self.assertFalse(trace.is_consistent)
        self.assertEqual(trace.to_frame()["flags"].tolist(), [[INCONSISTENCY_FLAG]] * 2)
        clean = divergence_trace(INVERSE_SQUARE, LEGENDRE, [16, 32])
        self.assertTrue(clean.is_consistent)
        self.assertEqual(clean.to_frame()["flags"].tolist(), [[], []])

    def test_bad_ladder(self):
        with self.assertRaises(PreconditionError):
            divergence_trace(INVERSE_SQUARE, LEGENDRE, [])
        with self.assertRaises(PreconditionError):
            divergence_trace(INVERSE_SQUARE, LEGENDRE, [-4, 8])


class TestGrowthFit(unittest.TestCase):
    """Log and power growth models"""

    def test_logarithmic_data(self):
        Ns = np.array([16, 32, 64, 128, 256])
        fit = fit_growth(Ns, 2.0 + 3.0 * np.log(Ns))
        self.assertEqual(fit.model, "log")
        self.assertAlmostEqual(fit.rate, 3.0, places=10)
        assert_allclose(fit.predict([512]), 2.0 + 3.0 * np.log(512), rtol=1e-10)

    def test_power_data(self):
        Ns = np.array([16, 32, 64, 128, 256])
        fit = fit_growth(Ns, 5.0 * Ns ** 0.5)
        self.assertEqual(fit.model, "power")
        self.assertAlmostEqual(fit.rate, 0.5, places=10)
        self.assertLess(fit.residuals["power"], fit.residuals["log"])

    def test_invalid_input(self):
        with self.assertRaises(PreconditionError):
            fit_growth([16], [1.0])
        with self.assertRaises(PreconditionError):
            fit_growth([16, 32], [1.0, -1.0])


class TestDuality(unittest.TestCase):
    """Lower bounds on ||g||_inf from unit L_1(w) trials"""

    def test_constant_trial(self):
        gn = build_gn(INVERSE_SQUARE, LEGENDRE, 16)
        profile = duality_profile(gn, [constant_trial(LEGENDRE)])
        self.assertAlmostEqual(profile[0], 1.0 / math.sqrt(2.0), places=12)

    def test_bumps_approach_the_sup_norm(self):
        for N in (8, 16, 32):
            gn = build_gn(INVERSE_SQUARE, LEGENDRE, N)
            sup = sup_norm(gn)
            profile = duality_profile(gn, bump_trials(LEGENDRE))
            with self.subTest(N=N):
                self.assertTrue(np.all(profile <= sup + 1e-8))
                self.assertTrue(np.all(np.diff(profile) >= -1e-10))
                self.assertGreaterEqual(profile[-1], 0.95 * sup)

    def test_faster_decay_at_larger_degree(self):
        gn = build_gn(WeightSequence.power(-3.0), LEGENDRE, 50)
        self.assertGreaterEqual(duality_check(gn, bump_trials(LEGENDRE)), 0.95 * sup_norm(gn))

    def test_bumps_on_jacobi_weight(self):
        params = JacobiParams(1.0, 0.0)
        gn = build_gn(INVERSE_SQUARE, params, 16)
        trials = [constant_trial(params)] + bump_trials(params)
        self.assertLessEqual(duality_check(gn, trials), sup_norm(gn) + 1e-8)

    def test_trials_must_be_normalized(self):
        gn = build_gn(INVERSE_SQUARE, LEGENDRE, 8)
        unnormalized = FunctionSpec(id="one", evaluator=np.ones_like, kind="polynomial", degree=0)
        with self.assertRaises(PreconditionError):
            duality_profile(gn, [unnormalized])
        with self.assertRaises(PreconditionError):
            bump_trials(LEGENDRE, [0.0])
        self.assertEqual(duality_check(gn, []), -math.inf)


if __name__ == '__main__':
    unittest.main()
