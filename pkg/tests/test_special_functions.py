import math
import os
import sys
import unittest

import numpy as np
from scipy.special import binom, eval_gegenbauer, eval_legendre
from scipy.special import gamma as gamma_fn

current_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.join(current_dir, "..", "src")
sys.path.insert(0, src_dir)

from special_functions import (SphereContext, cesaro_coefficient, cesaro_coefficients, clamp_cosine, eigenvalue,
                               eigenvalues, gegenbauer, harmonic_dimension, harmonic_dimensions,
                               normalized_gegenbauer_table, shifted_eigenvalue, sphere_measure, surface_area)


class TestSphereContext(unittest.TestCase):

    def test_rejects_bad_dimension_and_degree(self):
        with self.assertRaises(ValueError):
            SphereContext(0, 4)
        with self.assertRaises(ValueError):
            SphereContext(2, -1)

    def test_gegenbauer_index(self):
        self.assertEqual(SphereContext(1, 0).gegenbauer_index, 0.0)
        self.assertEqual(SphereContext(2, 0).gegenbauer_index, 0.5)
        self.assertEqual(SphereContext(3, 0).gegenbauer_index, 1.0)


class TestEigenvalues(unittest.TestCase):

    def test_known_values(self):
        ctx = SphereContext(2, 10)
        self.assertEqual(eigenvalue(ctx, 0), 0.0)
        self.assertEqual(eigenvalue(ctx, 3), 12.0)
        self.assertEqual(shifted_eigenvalue(ctx, 3), 13.0)
        self.assertEqual(eigenvalue(SphereContext(3, 10), 2), 8.0)

    def test_vector_matches_scalar(self):
        ctx = SphereContext(4, 20)
        expected = [eigenvalue(ctx, k) for k in range(21)]
        np.testing.assert_array_equal(eigenvalues(ctx), expected)

    def test_negative_degree_rejected(self):
        with self.assertRaises(ValueError):
            eigenvalue(SphereContext(2, 4), -1)


class TestHarmonicDimension(unittest.TestCase):

    def test_low_dimensions(self):
        self.assertEqual([harmonic_dimension(SphereContext(1, 5), k) for k in range(6)], [1, 2, 2, 2, 2, 2])
        self.assertEqual([harmonic_dimension(SphereContext(2, 5), k) for k in range(6)], [1, 3, 5, 7, 9, 11])
        self.assertEqual([harmonic_dimension(SphereContext(3, 4), k) for k in range(5)], [1, 4, 9, 16, 25])

    def test_against_binomial_formula(self):
        # d_k = binom(k+N, N) - binom(k+N-2, N), the dimension of harmonic polynomials in N+1 variables
        for n in (2, 3, 4, 6):
            ctx = SphereContext(n, 30)
            for k in range(31):
                expected = int(round(binom(k + n, n) - (binom(k + n - 2, n) if k >= 2 else 0)))
                self.assertEqual(harmonic_dimension(ctx, k), expected)

    def test_degree_above_context_rejected(self):
        with self.assertRaises(ValueError):
            harmonic_dimension(SphereContext(2, 3), 4)

    def test_vector_version(self):
        np.testing.assert_array_equal(harmonic_dimensions(SphereContext(2, 3)), [1.0, 3.0, 5.0, 7.0])


class TestSurfaceArea(unittest.TestCase):

    def test_known_areas(self):
        self.assertAlmostEqual(surface_area(SphereContext(1, 0)), 2 * math.pi, places=14)
        self.assertAlmostEqual(surface_area(SphereContext(2, 0)), 4 * math.pi, places=13)
        self.assertAlmostEqual(surface_area(SphereContext(3, 0)), 2 * math.pi ** 2, places=13)
        self.assertAlmostEqual(sphere_measure(0), 2.0, places=14)


class TestGegenbauer(unittest.TestCase):

    def test_matches_scipy(self):
        for lam in (0.5, 1.0, 1.5, 2.5):
            for k in (0, 1, 2, 7, 20):
                for t in (-1.0, -0.3, 0.0, 0.45, 1.0):
                    self.assertAlmostEqual(gegenbauer(k, lam, t), eval_gegenbauer(k, lam, t), delta=1e-9 * max(1.0, abs(eval_gegenbauer(k, lam, t))))

    def test_legendre_case(self):
        self.assertAlmostEqual(gegenbauer(2, 0.5, 0.5), -0.125, places=15)

    def test_clamps_rounding_overshoot(self):
        self.assertEqual(gegenbauer(3, 0.5, 1.0 + 5e-13), gegenbauer(3, 0.5, 1.0))

    def test_rejects_out_of_domain(self):
        with self.assertRaises(ValueError):
            gegenbauer(3, 0.5, 1.1)
        with self.assertRaises(ValueError):
            gegenbauer(3, 0.0, 0.2)
        with self.assertRaises(ValueError):
            gegenbauer(-1, 0.5, 0.2)


class TestNormalizedTable(unittest.TestCase):

    def test_equals_one_at_one(self):
        table = normalized_gegenbauer_table(300, 1.5, np.array([1.0]))
        np.testing.assert_allclose(table[:, 0], 1.0, rtol=0, atol=1e-12)

    def test_legendre_oracle_on_s2(self):
        t = np.cos(np.linspace(0.0, np.pi, 1000))
        table = normalized_gegenbauer_table(200, 0.5, t)
        for k in (0, 1, 5, 50, 200):
            np.testing.assert_allclose(table[k], eval_legendre(k, t), rtol=0, atol=1e-10)

    def test_chebyshev_on_circle(self):
        gamma = np.linspace(0.0, np.pi, 50)
        table = normalized_gegenbauer_table(40, 0.0, np.cos(gamma))
        for k in (0, 1, 9, 40):
            np.testing.assert_allclose(table[k], np.cos(k * gamma), rtol=0, atol=1e-11)

    def test_no_overflow_at_large_degree(self):
        table = normalized_gegenbauer_table(5000, 3.5, np.linspace(-1.0, 1.0, 11))
        self.assertTrue(np.all(np.isfinite(table)))
        self.assertTrue(np.all(np.abs(table) <= 1.0 + 1e-9))


class TestCesaro(unittest.TestCase):

    def test_closed_forms(self):
        self.assertEqual(cesaro_coefficient(0, 2.5), 1.0)
        self.assertAlmostEqual(cesaro_coefficient(5, 1.0), 6.0, places=13)
        self.assertAlmostEqual(cesaro_coefficient(4, 2.0), binom(6, 2), places=12)
        self.assertEqual(cesaro_coefficient(7, 0.0), 1.0)

    def test_vector_matches_scalar(self):
        np.testing.assert_allclose(cesaro_coefficients(12, 0.7),
                                   [cesaro_coefficient(m, 0.7) for m in range(13)], rtol=1e-14)

    def test_rejects_negative_order(self):
        with self.assertRaises(ValueError):
            cesaro_coefficient(3, -0.5)


class TestInvariants(unittest.TestCase):

    def test_legendre_orthogonality(self):
        nodes, weights = np.polynomial.legendre.leggauss(64)
        values = np.array([[gegenbauer(k, 0.5, t) for t in nodes] for k in range(21)])
        gram = (values * weights) @ values.T
        np.testing.assert_allclose(gram, np.diag(2.0 / (2.0 * np.arange(21) + 1.0)), rtol=0, atol=1e-10)

    def test_value_at_one_is_cesaro_number(self):
        # C_k^lam(1) = binom(k + 2 lam - 1, k) = A_k^{2 lam - 1}
        for lam in (0.5, 1.0, 1.5):
            for k in range(51):
                expected = cesaro_coefficient(k, 2.0 * lam - 1.0)
                self.assertAlmostEqual(gegenbauer(k, lam, 1.0), expected, delta=1e-12 * expected)

    def test_cesaro_increasing_with_gamma_asymptotics(self):
        m = 10 ** 4
        for alpha in (0.3, 1.0, 2.5):
            values = cesaro_coefficients(m, alpha)
            self.assertTrue(np.all(np.diff(values) > 0))
            self.assertAlmostEqual(values[m] / m ** alpha * gamma_fn(alpha + 1.0), 1.0, delta=0.05)

    def test_eigenvalue_gaps(self):
        for n in (1, 2, 3, 5):
            ctx = SphereContext(n, 100)
            k = np.arange(100)
            np.testing.assert_array_equal(np.diff(eigenvalues(ctx)), 2 * k + n)


def test_clamp_cosine_scalar_and_array():
    assert clamp_cosine(-1.0 - 1e-13) == -1.0
    np.testing.assert_array_equal(clamp_cosine(np.array([0.2, 1.0 + 1e-13])), [0.2, 1.0])


if __name__ == '__main__':
    unittest.main()
