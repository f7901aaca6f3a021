#
# Copyright (C) 2026  The lencert authors.  All rights reserved.
#
# This library is free software; you can redistribute it and/or
# modify it under the terms of the GNU Lesser General Public
# License as published by the Free Software Foundation; either
# version 2.1 of the License, or (at your option) any later version.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public
# License along with this library; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA  02110-1301
# USA
#
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from lencert.geometry import DiscreteCurve
from lencert.smoothing import CutoffFunction, SmoothingError, \
    SmoothedCurve, make_cutoff, blend_coefficients, sample_parameters, \
    smooth, boundary_gap, closeness_certificate

from tests.lib_geometry import circle_curve, rectangle_curve


class CutoffFunctionTestCase(unittest.TestCase):
    """Test the cutoff function."""

    def setUp(self):
        self.chi = make_cutoff()

    def test_values(self):
        """Test the values of the cutoff."""
        self.assertEqual(self.chi(-0.3), 0.0)
        self.assertEqual(self.chi(-0.25), 0.0)
        self.assertEqual(self.chi(0.25), 1.0)
        self.assertEqual(self.chi(1.0), 1.0)
        self.assertAlmostEqual(float(self.chi(0.0)), 0.5, places=15)

    def test_monotone(self):
        """Test that the cutoff is monotone."""
        u = np.linspace(-0.5, 0.5, 1001)
        values = self.chi(u)
        self.assertTrue(np.all(np.diff(values) >= -1e-15))
        self.assertTrue(np.all(self.chi(u, 1) >= -1e-12))

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-1, max_value=1))
    def test_symmetry(self, u):
        """Test that chi(u) + chi(-u) = 1."""
        self.assertAlmostEqual(
            float(self.chi(u) + self.chi(-u)), 1.0, places=12
        )

    def test_derivatives(self):
        """Test the derivatives against finite differences."""
        h = 1e-6

        for u in (-0.2, -0.05, 0.0, 0.1, 0.2):
            values = self.chi.derivatives([u - h, u, u + h], 4)

            for n in range(4):
                difference = (values[n][2] - values[n][0]) / (2 * h)
                self.assertAlmostEqual(
                    difference, values[n + 1][1],
                    delta=1e-4 * max(1.0, abs(values[n + 1][1]))
                )

    def test_outside_transition(self):
        """Test that the derivatives vanish outside of the transition."""
        values = self.chi.derivatives([-0.5, -0.25, 0.25, 0.5], 4)

        for value in values[1:]:
            np.testing.assert_array_equal(value, 0.0)

    def test_invalid_order(self):
        """Test the orders that are not available."""
        with self.assertRaises(SmoothingError) as cm:
            self.chi(0.0, 5)

        self.assertEqual(
            str(cm.exception), "Derivative of order 5 is not available."
        )

        chi = CutoffFunction(max_order=2)
        self.assertEqual(chi.max_order, 2)

        with self.assertRaises(SmoothingError):
            chi.derivatives(0.0, 3)


class BlendTestCase(unittest.TestCase):
    """Test the blending weights."""

    def test_piece_ends(self):
        """Test the weights at the ends of a piece."""
        chi = make_cutoff()
        a, b = blend_coefficients(chi, [-0.5, 0.0, 0.5])
        np.testing.assert_allclose(a, [0.0, 0.0, 0.5])
        np.testing.assert_allclose(b, [0.5, 0.0, 0.0])

        a, b = blend_coefficients(chi, [-0.5, 0.5], order=1)
        np.testing.assert_allclose(a, [0.0, 1.0])
        np.testing.assert_allclose(b, [-1.0, 0.0])

        a, b = blend_coefficients(chi, [-0.5, 0.1, 0.5], order=3)
        np.testing.assert_array_equal(a, b)

    def test_sample_parameters(self):
        """Test the uniform samples."""
        np.testing.assert_allclose(
            sample_parameters(0.0, 2.0, 4), np.arange(8) * 0.25
        )
        np.testing.assert_allclose(sample_parameters(1.0, 1.0, 4), [1.0])


class SmoothedCurveTestCase(unittest.TestCase):
    """Test the smoothed curves."""

    def test_invalid_curve(self):
        """Test curves that cannot be smoothed."""
        curve = DiscreteCurve([[0, 0, 0], [2, 0, 0]], closed=False)

        with self.assertRaises(SmoothingError) as cm:
            smooth(curve)

        self.assertEqual(
            str(cm.exception), "Only closed curves can be smoothed."
        )

        with self.assertRaises(SmoothingError):
            smooth(rectangle_curve(0.2, 0.1))

        with self.assertRaises(SmoothingError) as cm:
            SmoothedCurve(rectangle_curve(50.0, 1.0), k=1000)

        self.assertEqual(
            str(cm.exception), "Invalid number of pieces '1000'."
        )

    def test_pieces(self):
        """Test the pieces and the nodes."""
        curve = rectangle_curve(50.0, 1.0)
        sc = smooth(curve)
        self.assertEqual(sc.k, 102)
        self.assertEqual(sc.length, 102.0)
        self.assertEqual(sc.piece_length, 1.0)
        np.testing.assert_allclose(sc.node_parameters[:2], [0.5, 1.5])
        np.testing.assert_allclose(sc.nodes[0], [0.5, 0, 0])

        index, r = sc.locate([0.0, 2.75, 103.0])
        np.testing.assert_array_equal(index, [0, 2, 1])
        np.testing.assert_allclose(r, [-0.5, 0.25, -0.5])

    def test_straight_sides(self):
        """Test that a straight side is a fixed point."""
        sc = smooth(rectangle_curve(50.0, 1.0))
        s = np.linspace(1.0, 49.0, 500)
        expected = np.stack([s, np.zeros_like(s), np.zeros_like(s)], axis=1)

        self.assertLessEqual(
            np.max(np.linalg.norm(sc(s) - expected, axis=1)), 1e-12
        )
        np.testing.assert_allclose(
            sc.derivative(s), np.tile([1.0, 0, 0], (500, 1)), atol=1e-12
        )
        np.testing.assert_allclose(sc.derivative(s, 2), 0.0, atol=1e-12)

    def test_circle(self):
        """Test the smoothing of a large circle."""
        sc = smooth(circle_curve(100.0))
        certificate = closeness_certificate(sc, 1e-2)
        self.assertLessEqual(certificate.c0_dev, 2e-3)
        self.assertLessEqual(certificate.c1_dev, 3e-2)
        self.assertEqual(len(certificate.cm_dev), 3)
        self.assertTrue(certificate.passed)
        self.assertEqual(certificate.samples, int(np.ceil(sc.length * 32)))

        # The sup of |(r chi)''| is 8 at the middle of a piece.
        self.assertAlmostEqual(
            certificate.cm_dev[0] * 100, 8.0007, delta=1e-3
        )

    def test_curve_derivatives(self):
        """Test the derivatives against central differences."""
        sc = smooth(circle_curve(100.0))
        s = np.linspace(1.0, 50.0, 2001)
        h = 1e-5

        for order in range(1, 4):
            difference = (
                sc.evaluate(s + h, order - 1) - sc.evaluate(s - h, order - 1)
            ) / (2 * h)
            expected = sc.evaluate(s, order)
            scale = np.max(np.linalg.norm(expected, axis=1))

            self.assertGreater(scale, 0.0)
            self.assertLessEqual(
                np.max(np.linalg.norm(difference - expected, axis=1)),
                1e-6 * scale
            )

    def test_boundary_gap(self):
        """Test that the pieces match at their boundaries."""
        sc = smooth(circle_curve(50.0))
        self.assertLessEqual(boundary_gap(sc), 1e-9)
        self.assertLessEqual(boundary_gap(sc, order=4), 1e-9)

        sc = smooth(rectangle_curve(30.0, 7.0))
        self.assertLessEqual(boundary_gap(sc, order=2), 1e-9)

    def test_eps_scaling(self):
        """Test that the deviations scale with the curvature."""
        ratios = []

        for eps in (1e-2, 1e-3, 1e-4):
            sc = smooth(circle_curve(2.0 / eps))
            certificate = closeness_certificate(sc, eps, interval=(0, 50))
            self.assertLessEqual(certificate.c0_dev, eps)
            ratios.append([
                certificate.c0_dev / eps,
                certificate.c1_dev / eps
            ])

        for first, second in zip(ratios, ratios[1:]):
            for a, b in zip(first, second):
                self.assertLessEqual(a / b, 4.0)
                self.assertLessEqual(b / a, 4.0)

    def test_failed_certificate(self):
        """Test that a failed certificate keeps the numbers."""
        sc = smooth(rectangle_curve(30.0, 7.0))
        certificate = closeness_certificate(sc, 1e-6)
        self.assertFalse(certificate.passed)
        self.assertGreater(certificate.c1_dev, 0.1)
