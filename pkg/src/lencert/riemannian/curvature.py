#
# Curvature audits and rescaling of metrics
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
import logging
import math

import numpy as np

from lencert.constants import C_FIT, TANGENT_DRIFT_WINDOW, MIN_LENGTH, \
    RESCALE_CURVATURE_FACTOR, TOL_BOUNDARY_FACTOR, TRANSPORT_STEP
from lencert.error import LencertError
from lencert.riemannian.chart import EuclideanChart, MetricError, \
    ScaledChart, metric_area, metric_curve
from lencert.riemannian.integrator import LogMapError, log_map, \
    transport_segments
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int, Str

__all__ = [
    "CertificateError",
    "rescale_metric",
    "CurvatureTurningReport",
    "total_curvature_to_turning",
    "TangentDriftCertificate",
    "tangent_drift_certificate",
    "RiemannianHypothesisReport",
    "check_riemannian_hypotheses",
]

log = logging.getLogger(__name__)

# Tolerance of the comparison of angles.
_ANGLE_TOLERANCE = 1e-6


class CertificateError(LencertError):
    """The certificate cannot be computed."""
    pass


def rescale_metric(chart, curvature_bound, r,
                   factor=RESCALE_CURVATURE_FACTOR):
    """Rescale a metric by factor K / r^2.

    Lengths of the rescaled chart are multiplied by sqrt(factor K) / r
    and the sectional curvature is divided by factor K / r^2.

    :param chart: a chart
    :param curvature_bound: an upper bound K of the sectional curvature
    :param r: a positive scale
    :param factor: a multiple of the curvature bound
    :return: an instance of ScaledChart
    :raise MetricError: if the parameters are not positive
    """
    if not curvature_bound > 0:
        raise MetricError(
            "Invalid curvature bound '{}'.".format(curvature_bound)
        )

    if not r > 0:
        raise MetricError("Invalid scale '{}'.".format(r))

    return ScaledChart(chart, factor * curvature_bound / r ** 2)


def _angle(chart, points, u, v):
    """Return the angles between tangent vectors."""
    sine = np.sqrt(np.maximum(
        chart.inner(points, u, u) * chart.inner(points, v, v)
        - chart.inner(points, u, v) ** 2, 0.0
    ))
    return np.arctan2(sine, chart.inner(points, u, v))


def _unit(chart, points, vectors):
    """Normalize tangent vectors."""
    return vectors / chart.norm(points, vectors)[..., None]


class CurvatureTurningReport(ReportData):
    """Transported tangents against the total curvature."""

    def __init__(self):
        self._window = 0.0
        self._max_deviation = 0.0
        self._max_difference = 0.0
        self._max_total_curvature = 0.0
        self._violations = 0
        self._ok = False

    @property
    def window(self) -> Double:
        """The window of the audit."""
        return self._window

    @window.setter
    def window(self, value):
        self._window = value

    @property
    def max_deviation(self) -> Double:
        """Largest angle of a transported tangent to a tangent."""
        return self._max_deviation

    @max_deviation.setter
    def max_deviation(self, value):
        self._max_deviation = value

    @property
    def max_difference(self) -> Double:
        """Largest norm of a transported tangent minus a tangent."""
        return self._max_difference

    @max_difference.setter
    def max_difference(self, value):
        self._max_difference = value

    @property
    def max_total_curvature(self) -> Double:
        """Largest total curvature between two compared tangents."""
        return self._max_total_curvature

    @max_total_curvature.setter
    def max_total_curvature(self, value):
        self._max_total_curvature = value

    @property
    def violations(self) -> Int:
        """Number of pairs turning more than their total curvature."""
        return self._violations

    @violations.setter
    def violations(self, value):
        self._violations = value

    @property
    def ok(self) -> Bool:
        return self._ok

    @ok.setter
    def ok(self, value):
        self._ok = value


def _transport_matrices(chart, starts, chords, step):
    """Return the linear maps of the transport along the segments."""
    count = len(starts)
    basis = np.broadcast_to(np.eye(3), (count, 3, 3))
    transported = transport_segments(chart, starts, chords, basis, step)
    return np.swapaxes(transported, 1, 2)


def total_curvature_to_turning(curve, window, chart=None,
                               step=TRANSPORT_STEP):
    """Compare transported tangents with the total curvature.

    The total curvature of the polyline is the sum of the angles at
    the vertices and of the turning of the tangent inside each
    segment relative to the parallel transport. For each pair of
    segments within the window the tangent of the first one is
    transported to the start of the second one and compared with its
    tangent. The angle between them can't exceed the total curvature
    between the segments.

    :param curve: a discrete curve in the coordinates of the chart
    :param window: a window length in the metric
    :param chart: a chart or None for the Euclidean space
    :param step: the largest coordinate step of the transport
    :return: an instance of CurvatureTurningReport
    :raise ChartExitError: if the curve leaves the chart
    """
    if chart is None:
        chart = EuclideanChart()

    curve = metric_curve(chart, curve.points, curve.closed)
    chords = curve.chords
    count = len(chords)
    starts = curve.points[:count]
    ends = starts + chords
    cumulative = curve.cumulative_arclength
    length = curve.total_length

    first = _unit(chart, starts, chords)
    last = _unit(chart, ends, chords)

    if chart.flat:
        matrices = np.broadcast_to(np.eye(3), (count, 3, 3))
    else:
        matrices = _transport_matrices(chart, starts, chords, step)

    carried = np.einsum("nij,nj->ni", matrices, first)
    inner = _angle(chart, ends, carried, last)

    # The vertex angle of a segment is taken at its start.
    vertex = _angle(chart, starts, np.roll(last, 1, axis=0), first)

    if not curve.closed:
        vertex[0] = 0.0

    indices = np.arange(count)
    total = inner.copy()
    deviation = 0.0
    difference = 0.0
    total_curvature = 0.0
    violations = 0

    for offset in range(1, count):
        following = indices + offset

        if curve.closed:
            wrapped = following >= count
            following = following % count
            gap = cumulative[following] + length * wrapped \
                - cumulative[indices + 1]
        else:
            following = np.minimum(following, count - 1)
            gap = np.where(
                indices + offset < count,
                cumulative[following] - cumulative[indices + 1],
                np.inf
            )

        valid = gap <= window

        if not np.any(valid):
            break

        total = total + vertex[following]
        points = starts[following]
        angles = _angle(chart, points, carried, first[following])
        norms = chart.norm(points, carried - first[following])

        deviation = max(deviation, float(np.max(angles[valid])))
        difference = max(difference, float(np.max(norms[valid])))
        total_curvature = max(total_curvature, float(np.max(total[valid])))
        violations += int(np.count_nonzero(
            valid & (angles > total + _ANGLE_TOLERANCE)
        ))

        total = total + inner[following]
        carried = np.einsum("nij,nj->ni", matrices[following], carried)

    report = CurvatureTurningReport()
    report.window = float(window)
    report.max_deviation = deviation
    report.max_difference = difference
    report.max_total_curvature = total_curvature
    report.violations = violations
    report.ok = violations == 0

    log.debug("Transported turning %s against total curvature %s.",
              deviation, total_curvature)
    return report


class TangentDriftCertificate(ReportData):
    """Drift of the derivative of the inverse exponential map."""

    def __init__(self):
        self._s0 = 0.0
        self._window = 0.0
        self._m_sup = 0.0
        self._eps = 0.0
        self._c_fit = C_FIT
        self._samples = 0
        self._ok = False

    @property
    def s0(self) -> Double:
        """The base parameter."""
        return self._s0

    @s0.setter
    def s0(self, value):
        self._s0 = value

    @property
    def window(self) -> Double:
        """Half length of the audited parameter interval."""
        return self._window

    @window.setter
    def window(self, value):
        self._window = value

    @property
    def m_sup(self) -> Double:
        """Largest distance of the derivative to the base tangent."""
        return self._m_sup

    @m_sup.setter
    def m_sup(self, value):
        self._m_sup = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def c_fit(self) -> Double:
        return self._c_fit

    @c_fit.setter
    def c_fit(self, value):
        self._c_fit = value

    @property
    def samples(self) -> Int:
        return self._samples

    @samples.setter
    def samples(self, value):
        self._samples = value

    @property
    def ok(self) -> Bool:
        return self._ok

    @ok.setter
    def ok(self, value):
        self._ok = value


def tangent_drift_certificate(chart, curve, s0, eps, window=None,
                              spacing=0.05, c_fit=C_FIT):
    """Certify that a curve is almost a geodesic seen from one point.

    Write the points of the curve near s0 as exp(p, xi(s)) with the
    base point p = gamma(s0) and measure the largest distance of the
    derivative xi'(s) to the unit tangent at s0.

    :param chart: a chart
    :param curve: a discrete curve in the coordinates of the chart
    :param s0: the base parameter
    :param eps: the turning bound of the curve
    :param window: a half length of the interval or None
    :param spacing: a spacing of the samples
    :param c_fit: the certified constant
    :return: an instance of TangentDriftCertificate
    :raise CertificateError: if the curve cannot be inverted
    """
    curve = metric_curve(chart, curve.points, curve.closed)
    length = curve.total_length

    if window is None:
        window = TANGENT_DRIFT_WINDOW

        if curve.closed:
            window = min(window, length / 2.0 - 1.0)

    if not window > 0:
        raise CertificateError(
            "The curve is too short for a window: {}.".format(length)
        )

    count = int(math.floor(window / spacing))
    s = s0 + spacing * np.arange(-count, count + 1)

    if not curve.closed:
        s = s[(s >= 0) & (s <= length)]

    if len(s) < 3:
        raise CertificateError("Not enough samples in the window.")

    base = curve.eval_point(s0)

    try:
        xi = log_map(chart, base[None, :], curve.eval_point(s))
    except LogMapError as e:
        raise CertificateError(
            "Can't invert the curve: {}".format(e)
        ) from None

    derivative = np.gradient(xi, s, axis=0)
    tangent = curve.tangent(s0)
    tangent = tangent / chart.norm(base, tangent)
    drift = chart.norm(base, derivative - tangent)

    certificate = TangentDriftCertificate()
    certificate.s0 = float(s0)
    certificate.window = float(window)
    certificate.m_sup = float(np.max(drift))
    certificate.eps = float(eps)
    certificate.c_fit = float(c_fit)
    certificate.samples = len(s)
    certificate.ok = certificate.m_sup <= c_fit * eps

    log.debug("Tangent drift %s at %s.", certificate.m_sup, s0)
    return certificate


class RiemannianHypothesisReport(ReportData):
    """Result of the hypothesis checks of an instance in a chart."""

    def __init__(self):
        self._chart = ""
        self._eps = 0.0
        self._turning = CurvatureTurningReport()
        self._turning_ok = False
        self._length0 = 0.0
        self._length1 = 0.0
        self._length_ok = False
        self._boundary_deviation0 = 0.0
        self._boundary_deviation1 = 0.0
        self._boundary_tolerance = 0.0
        self._boundary_ok = False
        self._area = 0.0
        self._area_ok = False
        self._passed = False

    @property
    def chart(self) -> Str:
        """Name of the chart."""
        return self._chart

    @chart.setter
    def chart(self, value):
        self._chart = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def turning(self) -> CurvatureTurningReport:
        """Transported turning of the first curve."""
        return self._turning

    @turning.setter
    def turning(self, value):
        self._turning = value

    @property
    def turning_ok(self) -> Bool:
        """Are transported tangents within eps of the tangents?"""
        return self._turning_ok

    @turning_ok.setter
    def turning_ok(self, value):
        self._turning_ok = value

    @property
    def length0(self) -> Double:
        """Length of the first curve in the metric."""
        return self._length0

    @length0.setter
    def length0(self, value):
        self._length0 = value

    @property
    def length1(self) -> Double:
        """Length of the second curve in the metric."""
        return self._length1

    @length1.setter
    def length1(self, value):
        self._length1 = value

    @property
    def length_ok(self) -> Bool:
        return self._length_ok

    @length_ok.setter
    def length_ok(self, value):
        self._length_ok = value

    @property
    def boundary_deviation0(self) -> Double:
        return self._boundary_deviation0

    @boundary_deviation0.setter
    def boundary_deviation0(self, value):
        self._boundary_deviation0 = value

    @property
    def boundary_deviation1(self) -> Double:
        return self._boundary_deviation1

    @boundary_deviation1.setter
    def boundary_deviation1(self, value):
        self._boundary_deviation1 = value

    @property
    def boundary_tolerance(self) -> Double:
        return self._boundary_tolerance

    @boundary_tolerance.setter
    def boundary_tolerance(self, value):
        self._boundary_tolerance = value

    @property
    def boundary_ok(self) -> Bool:
        return self._boundary_ok

    @boundary_ok.setter
    def boundary_ok(self, value):
        self._boundary_ok = value

    @property
    def area(self) -> Double:
        """Area of the annulus in the metric."""
        return self._area

    @area.setter
    def area(self, value):
        self._area = value

    @property
    def area_ok(self) -> Bool:
        return self._area_ok

    @area_ok.setter
    def area_ok(self, value):
        self._area_ok = value

    @property
    def passed(self) -> Bool:
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def check_riemannian_hypotheses(chart, curve0, curve1, sigma, eps,
                                window=1.0, tol_factor=TOL_BOUNDARY_FACTOR):
    """Check the hypotheses of the length comparison in a chart.

    The boundary match is checked in the coordinates. The turning,
    the lengths and the area are measured in the metric.

    :param chart: a chart
    :param curve0: the first curve in the coordinates
    :param curve1: the second curve in the coordinates
    :param sigma: an annulus bounded by the curves
    :param eps: a turning and area bound
    :param window: a window of the turning check in the metric
    :param tol_factor: a boundary tolerance relative to the length
    :return: an instance of RiemannianHypothesisReport
    :raise BoundaryMismatchError: if the loops cannot be matched
    :raise ChartExitError: if the curve leaves the chart
    """
    sigma = sigma.match(curve0, curve1)
    mesh = sigma.mesh
    tolerance = tol_factor * curve0.total_length

    report = RiemannianHypothesisReport()
    report.chart = chart.name
    report.eps = float(eps)
    report.turning = total_curvature_to_turning(curve0, window, chart)
    report.turning_ok = report.turning.max_difference <= eps
    report.length0 = metric_curve(chart, curve0.points).total_length
    report.length1 = metric_curve(chart, curve1.points).total_length
    report.length_ok = report.length0 >= MIN_LENGTH

    report.boundary_deviation0 = float(np.max(
        curve0.distance(mesh.vertices[sigma.loop0])
    ))
    report.boundary_deviation1 = float(np.max(
        curve1.distance(mesh.vertices[sigma.loop1])
    ))
    report.boundary_tolerance = tolerance
    report.boundary_ok = max(
        report.boundary_deviation0, report.boundary_deviation1
    ) <= tolerance

    report.area = metric_area(chart, mesh)
    report.area_ok = report.area <= eps ** 2
    report.passed = report.turning_ok and report.length_ok \
        and report.boundary_ok and report.area_ok

    log.info("Hypotheses %s in the chart %s for eps %s.",
             "pass" if report.passed else "fail", chart.name, eps)
    return report
