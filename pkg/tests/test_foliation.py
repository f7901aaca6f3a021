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

from lencert.foliation import Disk, disk_at, FoliationChart, ChartError, \
    OutsideChartError, AssignmentError, build_chart, assign_disks, \
    canonical_u, canonical_u_gradient
from lencert.smoothing import smooth

from tests.lib_geometry import circle_curve, rectangle_curve


class DiskTestCase(unittest.TestCase):
    """Test the normal disks."""

    def test_disk(self):
        """Test the disk object."""
        disk = Disk([1, 0, 0], [0, 0, 2])
        np.testing.assert_allclose(disk.normal, [0, 0, 1])
        self.assertEqual(disk.radius, 1.0)
        np.testing.assert_allclose(
            disk.plane_distance([[1, 0, 3], [0, 0, -1]]), [3, -1]
        )
        np.testing.assert_allclose(
            disk.radial_distance([[1, 0, 3], [1, 2, -1]]), [0, 2]
        )

    def test_straight_line(self):
        """Test the disk of a straight piece."""
        sc = smooth(rectangle_curve(100.0, 1.0))
        disk = disk_at(sc, 15.0)
        np.testing.assert_allclose(disk.center, [15, 0, 0], atol=1e-12)
        np.testing.assert_allclose(disk.normal, [1, 0, 0], atol=1e-12)

    def test_circle(self):
        """Test the disks of a large circle."""
        sc = smooth(circle_curve(1000.0))

        for s in (0.0, 10.3, 2000.0):
            disk = disk_at(sc, s)
            radial = disk.center / np.linalg.norm(disk.center)
            self.assertLessEqual(abs(np.dot(disk.normal, radial)), 1e-3)
            self.assertAlmostEqual(
                np.linalg.norm(disk.center), 1000.0, delta=2e-3
            )


class FoliationChartTestCase(unittest.TestCase):
    """Test the foliation charts."""

    def setUp(self):
        self.straight = smooth(rectangle_curve(100.0, 1.0))
        self.circle = smooth(circle_curve(1000.0))

    def test_invalid_interval(self):
        """Test invalid chart intervals."""
        with self.assertRaises(ChartError) as cm:
            FoliationChart(self.straight, (0, 25))

        self.assertEqual(
            str(cm.exception), "Invalid chart interval '(0.0, 25.0)'."
        )

        with self.assertRaises(ChartError):
            FoliationChart(self.straight, (5, 5))

    def test_straight_chart(self):
        """Test the chart of a straight piece."""
        chart = FoliationChart(self.straight, (10, 20))
        self.assertEqual(chart.middle, 15.0)
        np.testing.assert_allclose(
            chart.frame, [[0, 1, 0], [0, 0, 1], [1, 0, 0]], atol=1e-12
        )

        coordinates = np.array([[15, 0.3, -0.4], [12, -1, 1], [18, 2, 0]])
        np.testing.assert_allclose(
            chart.evaluate(coordinates), coordinates, atol=1e-12
        )
        np.testing.assert_allclose(
            chart.inverse(coordinates), coordinates, atol=1e-9
        )
        np.testing.assert_allclose(
            chart.level(coordinates), coordinates[:, 0], atol=1e-9
        )
        np.testing.assert_allclose(
            chart.level_gradient(coordinates),
            np.tile([1.0, 0, 0], (3, 1)), atol=1e-9
        )

    def test_curve_is_core(self):
        """Test that the chart maps the axis to the curve."""
        chart = FoliationChart(self.circle, (0, 10))
        s = np.linspace(0, 10, 11)
        coordinates = np.stack([s, 0 * s, 0 * s], axis=1)
        np.testing.assert_allclose(
            chart.evaluate(coordinates), self.circle(s), atol=1e-12
        )

    def test_circle_chart(self):
        """Test the chart of a large circle off the curve."""
        chart = FoliationChart(self.circle, (0, 10))
        coordinates = np.array([[5, 1, 0], [2, -0.5, 1.5], [-40, 1, 1]])
        points = chart.evaluate(coordinates)
        self.assertEqual(points.shape, (3, 3))
        np.testing.assert_allclose(
            chart.inverse(points), coordinates, atol=1e-8
        )
        np.testing.assert_allclose(
            chart.level(points), coordinates[:, 0], atol=1e-8
        )

    def test_outside(self):
        """Test points outside of the chart cylinder."""
        chart = FoliationChart(self.straight, (10, 20))
        self.assertFalse(chart.contains([15, 5, 0]))
        self.assertTrue(chart.contains([15, 2, 0]))

        with self.assertRaises(OutsideChartError):
            chart.inverse([15, 5, 0])

    def test_inversion_grid(self):
        """Test the inversion over a grid of the chart."""
        chart = build_chart(self.circle, (0, 10), 1e-3)
        report = chart.report
        self.assertIs(report, chart.report)
        self.assertLessEqual(report.probes, 20 ** 3)
        self.assertGreater(report.probes, 7000)
        self.assertLessEqual(report.roundtrip_error, 1e-8)
        self.assertLessEqual(report.leaf_error, 1e-6)
        self.assertLessEqual(report.gradient_max, 1.05)
        self.assertGreaterEqual(report.gradient_min, 0.95)
        self.assertTrue(report.gradient_ok)

        chart = build_chart(smooth(rectangle_curve(300.0, 1.0)), (140, 150))
        self.assertEqual(chart.report.probes, 20 ** 3)
        self.assertAlmostEqual(chart.report.gradient_min, 1.0, places=9)
        self.assertAlmostEqual(chart.report.gradient_max, 1.0, places=9)
        self.assertEqual(chart.report.eps, 0.0)


class DiskAssignmentTestCase(unittest.TestCase):
    """Test the assignment of the disks."""

    def setUp(self):
        self.straight = smooth(rectangle_curve(100.0, 1.0))
        self.circle = smooth(circle_curve(1000.0))

    def test_straight_line(self):
        """Test the identity assignment of a straight piece."""
        assignment = assign_disks(self.straight, 1e-3, interval=(10, 20))
        self.assertEqual(assignment.interval, (10.0, 20.0))
        self.assertGreaterEqual(assignment.report.samples, 1001)
        np.testing.assert_allclose(
            assignment.values, assignment.parameters, atol=1e-12
        )
        self.assertAlmostEqual(float(assignment.h(12.345)), 12.345)
        self.assertAlmostEqual(float(assignment.h_inverse(17.5)), 17.5)
        self.assertTrue(assignment.report.passed)

        disk = assignment.disk(15.0)
        np.testing.assert_allclose(disk.center, [15, 0, 0], atol=1e-9)

    def test_circle(self):
        """Test the assignment on a large circle."""
        assignment = assign_disks(self.circle, 1e-3, interval=(0, 20))
        report = assignment.report
        self.assertLessEqual(report.max_shift, 1e-2)
        self.assertLessEqual(report.phi_residual, 1e-10)
        self.assertTrue(report.passed)

        t = np.linspace(1, 19, 37)
        self.assertLessEqual(np.max(np.abs(assignment.h(t) - t)), 1e-2)
        np.testing.assert_allclose(
            assignment.h_inverse(assignment.h(t)), t, atol=1e-8
        )

    def test_outside_assignment(self):
        """Test parameters outside of the assignment."""
        assignment = assign_disks(self.straight, interval=(10, 20))
        self.assertEqual(assignment.report.eps, 0.0)

        with self.assertRaises(AssignmentError):
            assignment.h(25.0)

    def test_periodic(self):
        """Test the assignment of the whole curve."""
        sc = smooth(circle_curve(20.0))
        assignment = assign_disks(sc, spacing=0.05)
        length = sc.length
        self.assertAlmostEqual(
            float(assignment.h(3.0 + length)),
            float(assignment.h(3.0)) + length,
            places=9
        )

    def test_canonical_map(self):
        """Test the canonical map on the curve."""
        chart = FoliationChart(self.circle, (0, 10))
        assignment = assign_disks(self.circle, 1e-3, interval=(0, 20))
        t = np.linspace(2, 8, 13)
        points = self.circle.source.eval_point(t)

        np.testing.assert_allclose(
            canonical_u(chart, assignment, points), t, atol=1e-6
        )

        gradient = canonical_u_gradient(chart, assignment, points)
        self.assertTrue(np.all(np.abs(gradient - 1) <= 1e-2))

    def test_canonical_straight(self):
        """Test the canonical map of a straight piece."""
        chart = FoliationChart(self.straight, (10, 20))
        assignment = assign_disks(self.straight, interval=(5, 25))
        points = np.array([[12.5, 0.3, 0.1], [17.0, -0.5, 0.9]])

        np.testing.assert_allclose(
            canonical_u(chart, assignment, points), [12.5, 17.0], atol=1e-8
        )
        np.testing.assert_allclose(
            canonical_u_gradient(chart, assignment, points), 1.0, atol=1e-6
        )
