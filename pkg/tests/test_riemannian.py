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
import math
import unittest

import numpy as np

from lencert.identifier import IdentifierError
from lencert.riemannian.chart import MetricError, EuclideanChart, \
    FlatTorusChart, SphereChart, PerturbedChart, ScaledChart, get_chart, \
    sectional_curvature, metric_curve, metric_area, riemann_tensor, \
    wedge_norm
from lencert.riemannian.curvature import rescale_metric, \
    total_curvature_to_turning, tangent_drift_certificate, \
    check_riemannian_hypotheses
from lencert.riemannian.integrator import exp_map, log_map, \
    parallel_transport, jacobi_field
from lencert.riemannian.smoothing import blend_certificate, \
    smooth_riemannian
from lencert.smoothing import SmoothingError, boundary_gap, smooth

from tests.lib_geometry import circle_points, circle_curve, strip_mesh, \
    offset_instance


class ChartTestCase(unittest.TestCase):
    """Test the metric charts."""

    def test_get_chart(self):
        """Test the charts of identifiers."""
        self.assertIsInstance(get_chart("euclidean"), EuclideanChart)

        chart = get_chart("sphere:1000")
        self.assertIsInstance(chart, SphereChart)
        self.assertEqual(chart.radius, 1000.0)
        self.assertAlmostEqual(chart.curvature_bound, 1e-6)

        chart = get_chart("flat-torus:50")
        self.assertIsInstance(chart, FlatTorusChart)
        self.assertTrue(chart.flat)
        self.assertEqual(chart.injectivity_floor, 25.0)

        with self.assertRaises(IdentifierError):
            get_chart("hyperbolic")

    def test_invalid_parameters(self):
        """Test invalid parameters of the charts."""
        with self.assertRaises(MetricError) as cm:
            PerturbedChart(1.5)

        self.assertEqual(str(cm.exception), "Invalid amplitude '1.5'.")

        with self.assertRaises(MetricError):
            FlatTorusChart(0.0)

        with self.assertRaises(MetricError):
            ScaledChart(EuclideanChart(), -1.0)

    def test_sphere_embedding(self):
        """Test that the chart covers a round sphere."""
        chart = SphereChart(3.0)
        points = np.random.default_rng(1).uniform(-5, 5, (20, 3))
        np.testing.assert_allclose(
            np.linalg.norm(chart.embed(points), axis=1), 3.0
        )
        np.testing.assert_allclose(
            chart.distance(np.zeros(3), np.zeros(3)), 0.0
        )

    def test_sectional_curvature(self):
        """Test the curvature of the round sphere."""
        chart = SphereChart(2.0)
        points = np.array([[0.0, 0.0, 0.0], [0.5, -0.3, 1.1]])
        u = np.array([[1.0, 0, 0], [0.3, 1.0, 0.2]])
        v = np.array([[0, 1.0, 0], [0, 0.1, 1.0]])
        np.testing.assert_allclose(
            sectional_curvature(chart, points, u, v), 0.25, atol=1e-6
        )

        chart = PerturbedChart(0.0)
        self.assertTrue(chart.flat)
        self.assertEqual(chart.curvature_bound, 0.0)

    def test_riemann_tensor(self):
        """Test the curvature tensor at the center of the sphere chart."""
        tensor = riemann_tensor(SphereChart(2.0), np.zeros(3))
        self.assertEqual(tensor.shape, (3, 3, 3, 3))
        self.assertAlmostEqual(tensor[0, 0, 1, 1], 0.25, delta=1e-5)
        np.testing.assert_allclose(
            tensor, -np.swapaxes(tensor, 1, 2), atol=1e-8
        )

        tensor = riemann_tensor(EuclideanChart(), np.ones((4, 3)))
        np.testing.assert_array_equal(tensor, 0.0)

    def test_euclidean_reduction(self):
        """Test that a huge sphere is almost Euclidean."""
        points = circle_points(1.0, 64)
        flat = metric_curve(EuclideanChart(), points)
        spherical = metric_curve(SphereChart(1e6), points)
        self.assertAlmostEqual(
            spherical.total_length, flat.total_length, delta=1e-9
        )

        mesh = strip_mesh(points, circle_points(1.1, 64))
        self.assertAlmostEqual(
            metric_area(SphereChart(1e6), mesh), mesh.area, delta=1e-9
        )
        self.assertAlmostEqual(
            metric_area(EuclideanChart(), mesh), mesh.area, places=12
        )


class GeodesicTestCase(unittest.TestCase):
    """Test the exponential and the logarithm maps."""

    def test_flat(self):
        """Test the straight geodesics."""
        result = exp_map(EuclideanChart(), [1, 2, 3], [0.5, 0, -1])
        np.testing.assert_allclose(result.endpoint, [1.5, 2, 2])
        self.assertEqual(result.speed_drift, 0.0)
        np.testing.assert_allclose(
            log_map(EuclideanChart(), [1, 2, 3], [1.5, 2, 2]), [0.5, 0, -1]
        )

    def test_flat_torus(self):
        """Test the wrapped geodesics."""
        chart = FlatTorusChart(10.0)
        result = exp_map(chart, [9, 0, 0], [2, 0, 0])
        np.testing.assert_allclose(result.endpoint, [1, 0, 0], atol=1e-12)
        np.testing.assert_allclose(
            log_map(chart, [9, 0, 0], [1, 0, 0]), [2, 0, 0], atol=1e-12
        )

    def test_sphere_roundtrip(self):
        """Test that the logarithm inverts the exponential map."""
        chart = SphereChart(1.0)
        p = np.array([0.2, -0.1, 0.3])
        v = np.array([0.5, 0.3, -0.2])

        result = exp_map(chart, p, v, richardson=True)
        self.assertLessEqual(result.speed_drift, 1e-9)
        self.assertLessEqual(result.richardson_error, 1e-8)

        w = log_map(chart, p, result.endpoint)
        self.assertLessEqual(np.linalg.norm(w - v), 1e-7 * np.linalg.norm(v))
        self.assertAlmostEqual(
            float(chart.norm(p, v)),
            float(chart.distance(p, result.endpoint)),
            delta=1e-7
        )

    def test_recorded_path(self):
        """Test the recorded positions of a geodesic."""
        chart = SphereChart(1.0)
        result = exp_map(chart, [0, 0, 0], [0.1, 0, 0], step=0.1,
                         record=True, frame=True)
        self.assertEqual(len(result.path), 11)
        np.testing.assert_allclose(result.path[0], [0, 0, 0])
        np.testing.assert_allclose(result.path[-1], result.endpoint)
        self.assertEqual(result.frame.shape, (3, 3))

    def test_pole_to_equator(self):
        """Test a quarter of a great circle from the pole."""
        chart = SphereChart(2.0)
        result = exp_map(chart, np.zeros(3), [0, math.pi, 0])

        # The equator is the chart sphere of radius 2R.
        np.testing.assert_allclose(result.endpoint, [0, 4, 0], atol=1e-6)
        self.assertAlmostEqual(
            float(chart.embed(result.endpoint)[3]), 0.0, delta=1e-6
        )
        self.assertAlmostEqual(
            float(chart.distance(np.zeros(3), result.endpoint)),
            math.pi, delta=1e-6
        )

    def test_jacobi_field(self):
        """Test the Jacobi field against the differential of exp."""
        chart = SphereChart(1.0)
        p = np.array([0.1, 0.2, 0.0])
        v = np.array([0.4, -0.3, 0.2])
        w = np.array([0.1, 0.2, 0.3])
        h = 1e-5

        field = jacobi_field(chart, p, v, w)
        difference = (
            exp_map(chart, p, v + h * w).endpoint
            - exp_map(chart, p, v - h * w).endpoint
        ) / (2 * h)

        self.assertLessEqual(
            np.linalg.norm(field.jacobi[-1] - difference),
            1e-4 * np.linalg.norm(difference)
        )
        np.testing.assert_allclose(field.jacobi[0], 0.0)
        np.testing.assert_allclose(field.covariant_derivative[0], w)
        self.assertLessEqual(np.max(field.norm_drift(chart)), 1e-8)

    def test_jacobi_remainder(self):
        """Test that W(1) is bounded by the wedge of v and w."""
        chart = SphereChart(1.0)
        p = np.array([0.1, 0.2, 0.0])
        v = np.array([0.4, -0.3, 0.2])
        u = np.array([0.3, 0.4, 0.0])
        speed = float(chart.norm(p, v))

        # For w = v + c u on the unit sphere |W(1)| = c (1 - sin a / a) |u|.
        expected = (1 - math.sin(speed) / speed) / speed
        ratios = []

        for k in range(5):
            w = v + 0.5 ** k * u
            field = jacobi_field(chart, p, v, w)
            end = field.points[-1]
            remainder = float(chart.norm(end, field.remainder[-1]))
            ratios.append(remainder / float(wedge_norm(chart, p, v, w)))

        for ratio in ratios:
            self.assertAlmostEqual(ratio, expected, delta=1e-4 * expected)

        field = jacobi_field(chart, p, v, v)
        self.assertLessEqual(np.max(np.abs(field.remainder)), 1e-7)

    def test_flat_jacobi_field(self):
        """Test the Jacobi fields of the flat space."""
        field = jacobi_field(EuclideanChart(), [0, 0, 0], [1, 0, 0],
                             [0, 1, 0], step=0.25)
        np.testing.assert_allclose(field.times, [0, 0.25, 0.5, 0.75, 1])
        np.testing.assert_allclose(field.jacobi[-1], [0, 1, 0])
        np.testing.assert_allclose(field.remainder, 0.0)


class TransportTestCase(unittest.TestCase):
    """Test the parallel transport."""

    def test_flat(self):
        """Test the transport in the flat space."""
        path = circle_points(1.0, 16)
        np.testing.assert_allclose(
            parallel_transport(EuclideanChart(), path, [1, 2, 3]), [1, 2, 3]
        )

    def test_holonomy(self):
        """Test the holonomy of a latitude circle of the unit sphere."""
        chart = SphereChart(1.0)

        # The chart circle of radius 2 / sqrt(3) has the height 1/2.
        radius = 2.0 / math.sqrt(3.0)
        path = circle_points(radius, 4000)
        path = np.concatenate([path, path[:1]])
        self.assertAlmostEqual(float(chart.embed(path[0])[3]), 0.5)

        vectors = np.array([[0.3, 0.7, 0.0], [0.0, 0.0, 1.0]])
        transported = parallel_transport(chart, path, vectors)

        # The enclosed cap has the area pi, so the rotation is pi.
        self.assertLessEqual(
            np.linalg.norm(transported[0] + vectors[0]),
            1e-5 * np.linalg.norm(vectors[0])
        )
        np.testing.assert_allclose(transported[1], vectors[1], atol=1e-9)

    def test_back_and_forth(self):
        """Test that a path back to its start encloses no holonomy."""
        chart = SphereChart(1.0)
        path = np.array([[0.2, -0.1, 0.3], [0.8, 0.4, -0.2], [0.2, -0.1, 0.3]])
        vectors = np.array([[0.3, 0.7, 0.0], [0.1, -0.2, 0.5]])

        transported = parallel_transport(chart, path, vectors)
        np.testing.assert_allclose(transported, vectors, atol=1e-7)

        middle = parallel_transport(chart, path[:2], vectors)
        np.testing.assert_allclose(
            chart.norm(path[1], middle), chart.norm(path[0], vectors),
            rtol=1e-8
        )


class CurvatureTestCase(unittest.TestCase):
    """Test the curvature tools."""

    def test_rescale_metric(self):
        """Test the rescaled metric."""
        points = circle_points(3.0, 50)
        scaled = rescale_metric(EuclideanChart(), 1.0, 1.0)
        self.assertEqual(scaled.factor, 1000.0)

        ratio = metric_curve(scaled, points).total_length \
            / metric_curve(EuclideanChart(), points).total_length
        self.assertAlmostEqual(ratio, math.sqrt(1000.0), delta=1e-9)
        self.assertAlmostEqual(ratio, 31.6228, places=4)

        scaled = rescale_metric(SphereChart(1.0), 1.0, 1.0)
        self.assertAlmostEqual(scaled.curvature_bound, 1e-3)
        value = sectional_curvature(
            scaled, np.array([0.2, 0.1, -0.3]),
            np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
        )
        self.assertAlmostEqual(float(value), 1e-3, delta=1e-8)

        scaled = rescale_metric(SphereChart(1.0), 4.0, 2.0)
        self.assertEqual(scaled.factor, 1000.0)

    def test_invalid_rescale(self):
        """Test invalid parameters of the rescaling."""
        with self.assertRaises(MetricError) as cm:
            rescale_metric(EuclideanChart(), 0, 1.0)

        self.assertEqual(str(cm.exception), "Invalid curvature bound '0'.")

        with self.assertRaises(MetricError) as cm:
            rescale_metric(EuclideanChart(), 1.0, -1)

        self.assertEqual(str(cm.exception), "Invalid scale '-1'.")

    def test_total_curvature(self):
        """Test the transported tangents against the total curvature."""
        report = total_curvature_to_turning(circle_curve(100.0), 1.0)
        self.assertTrue(report.ok)
        self.assertEqual(report.violations, 0)
        self.assertLessEqual(report.max_deviation,
                             report.max_total_curvature + 1e-9)
        self.assertGreater(report.max_deviation, 0.01)
        self.assertLess(report.max_deviation, 0.02)

        report = total_curvature_to_turning(
            circle_curve(5.0), 1.0, SphereChart(100.0)
        )
        self.assertTrue(report.ok)
        self.assertGreater(report.max_deviation, 0.1)

    def test_tangent_drift(self):
        """Test the drift of the tangent seen from one point."""
        curve = circle_curve(1000.0)
        certificate = tangent_drift_certificate(
            EuclideanChart(), curve, 0.0, 1e-3, window=10.0
        )
        self.assertTrue(certificate.ok)
        self.assertEqual(certificate.samples, 401)
        self.assertAlmostEqual(certificate.m_sup, 0.01, delta=1e-3)

        certificate = tangent_drift_certificate(
            EuclideanChart(), curve, 0.0, 1e-3
        )
        self.assertEqual(certificate.window, 100.0)
        self.assertFalse(certificate.ok)


class ChartSmoothingTestCase(unittest.TestCase):
    """Test the smoothing and the hypotheses in charts."""

    def test_euclidean_smoothing(self):
        """Test that the flat chart reproduces the plain smoothing."""
        curve = circle_curve(20.0)
        rsc = smooth_riemannian(EuclideanChart(), curve)
        sc = smooth(curve)
        self.assertEqual(rsc.k, sc.k)
        self.assertAlmostEqual(rsc.length, sc.length)

        s = np.linspace(0.0, sc.length, 97)
        np.testing.assert_allclose(
            rsc.evaluate(s), sc.evaluate(s), atol=1e-8
        )
        np.testing.assert_allclose(
            rsc.evaluate(s, 1), sc.evaluate(s, 1), atol=1e-5
        )
        self.assertLessEqual(boundary_gap(rsc, order=0), 1e-8)

    def test_sphere_smoothing(self):
        """Test the smoothing of a polygon on a sphere."""
        chart = SphereChart(1000.0)
        rsc = smooth_riemannian(chart, circle_curve(20.0))
        self.assertLessEqual(boundary_gap(rsc, order=0), 1e-8)

        certificate = blend_certificate(rsc, 1e-2, interval=(0.0, 10.0))
        self.assertGreater(certificate.samples, 0)
        self.assertGreater(certificate.c2_dev, 0.0)
        self.assertTrue(certificate.passed)

        structure = certificate.to_structure(certificate)
        self.assertEqual(structure["eps"], 1e-2)

        with self.assertRaises(SmoothingError):
            rsc.evaluate(np.array([1.0]), 2)

    def test_hypotheses_in_chart(self):
        """Test the hypotheses measured in the flat chart."""
        instance = offset_instance(1e-2)
        report = check_riemannian_hypotheses(
            EuclideanChart(), instance.curve0, instance.curve1,
            instance.sigma, instance.eps
        )
        self.assertEqual(report.chart, "euclidean")
        self.assertAlmostEqual(
            report.length0, instance.curve0.total_length, delta=1e-9
        )
        self.assertAlmostEqual(report.area, instance.sigma.area, delta=1e-12)
        self.assertTrue(report.length_ok)
        self.assertTrue(report.boundary_ok)
        self.assertTrue(report.area_ok)

        report = check_riemannian_hypotheses(
            SphereChart(1000.0), instance.curve0, instance.curve1,
            instance.sigma, instance.eps
        )
        self.assertEqual(report.chart, "sphere:1000.0")
        self.assertGreater(report.length1, report.length0)
