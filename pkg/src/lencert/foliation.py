#
# Normal disks and their foliation charts
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

import numpy as np
from scipy.interpolate import PchipInterpolator

from lencert.constants import DISK_RADIUS, MIN_TANGENT_SPEED, \
    CHART_MAX_INTERVAL, CYLINDER_HALF_LENGTH, CYLINDER_RADIUS_SQUARED, \
    PROBE_GRID, NEWTON_MAX_ITERATIONS, NEWTON_TOLERANCE, PHI_TOLERANCE, \
    ASSIGNMENT_MAX_SPACING, ASSIGNMENT_MIN_POINTS, C_FIT
from lencert.error import LencertError
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int

__all__ = [
    "DegenerateTangentError",
    "ChartError",
    "OutsideChartError",
    "AssignmentError",
    "Disk",
    "disk_at",
    "ChartReport",
    "FoliationChart",
    "build_chart",
    "AssignmentReport",
    "DiskAssignment",
    "assign_disks",
    "canonical_u",
    "canonical_u_gradient",
]

log = logging.getLogger(__name__)

# Extent of the transversal probes.
_PROBE_RADIUS = 2.2

# Largest number of step halvings in the damped Newton method.
_MAX_HALVINGS = 30


class DegenerateTangentError(LencertError):
    """The smoothed curve is too slow to define a disk."""
    pass


class ChartError(LencertError):
    """The foliation chart cannot be built."""
    pass


class OutsideChartError(ChartError):
    """The point is outside of the chart cylinder."""
    pass


class AssignmentError(LencertError):
    """The disks cannot be assigned to the curve."""
    pass


def _dot(a, b):
    """Row-wise scalar product."""
    return np.einsum("...i,...i->...", a, b)


class Disk(object):
    """An open disk given by its center, unit normal and radius."""

    __slots__ = ["_center", "_normal", "_radius"]

    def __init__(self, center, normal, radius=DISK_RADIUS):
        """Create a new disk.

        :param center: a point
        :param normal: a normal vector, it is normalized
        :param radius: a radius
        """
        normal = np.asarray(normal, dtype=float)
        self._center = np.asarray(center, dtype=float)
        self._normal = normal / np.linalg.norm(normal)
        self._radius = float(radius)

    @property
    def center(self):
        """Center of the disk."""
        return self._center

    @property
    def normal(self):
        """Unit normal of the disk plane."""
        return self._normal

    @property
    def radius(self):
        """Radius of the disk."""
        return self._radius

    def plane_distance(self, points):
        """Signed distances of points to the disk plane."""
        return _dot(np.asarray(points) - self._center, self._normal)

    def radial_distance(self, points):
        """Distances of the projected points to the center."""
        offset = np.asarray(points) - self._center
        offset = offset - self.plane_distance(points)[..., None] * self._normal
        return np.linalg.norm(offset, axis=-1)

    def __repr__(self):
        return "Disk(center={}, normal={}, radius={})".format(
            self._center.tolist(), self._normal.tolist(), self._radius
        )


def disk_at(sc, s):
    """Return the normal disk of the smoothed curve at s.

    :param sc: a smoothed curve
    :param s: a parameter
    :return: an instance of Disk
    :raise DegenerateTangentError: if the tangent is too short
    """
    velocity = sc.evaluate(s, 1)
    speed = float(np.linalg.norm(velocity))

    if speed < MIN_TANGENT_SPEED:
        raise DegenerateTangentError(
            "Tangent at '{}' has norm {}.".format(s, speed)
        )

    return Disk(sc.evaluate(s), velocity)


class ChartReport(ReportData):
    """Sampled validity of a foliation chart."""

    def __init__(self):
        self._interval_start = 0.0
        self._interval_end = 0.0
        self._probes = 0
        self._roundtrip_error = 0.0
        self._leaf_error = 0.0
        self._gradient_min = 1.0
        self._gradient_max = 1.0
        self._eps = 0.0
        self._gradient_ok = True

    @property
    def interval_start(self) -> Double:
        return self._interval_start

    @interval_start.setter
    def interval_start(self, value):
        self._interval_start = value

    @property
    def interval_end(self) -> Double:
        return self._interval_end

    @interval_end.setter
    def interval_end(self, value):
        self._interval_end = value

    @property
    def probes(self) -> Int:
        return self._probes

    @probes.setter
    def probes(self, value):
        self._probes = value

    @property
    def roundtrip_error(self) -> Double:
        """Largest |Ψ(Ψ⁻¹(x)) - x| over the probes."""
        return self._roundtrip_error

    @roundtrip_error.setter
    def roundtrip_error(self, value):
        self._roundtrip_error = value

    @property
    def leaf_error(self) -> Double:
        """Largest |v(Ψ(s, t)) - s| over the probes."""
        return self._leaf_error

    @leaf_error.setter
    def leaf_error(self, value):
        self._leaf_error = value

    @property
    def gradient_min(self) -> Double:
        return self._gradient_min

    @gradient_min.setter
    def gradient_min(self, value):
        self._gradient_min = value

    @property
    def gradient_max(self) -> Double:
        return self._gradient_max

    @gradient_max.setter
    def gradient_max(self, value):
        self._gradient_max = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def gradient_ok(self) -> Bool:
        """Is the gradient of the level function within 1 ± C eps?"""
        return self._gradient_ok

    @gradient_ok.setter
    def gradient_ok(self, value):
        self._gradient_ok = value


class FoliationChart(object):
    """Coordinates in which the normal disks are coordinate planes.

    The chart maps (s, t1, t2) to the point of the plane of the disk
    at s with the transversal coordinates t1 and t2. Points of the
    cylinder around the sub-segment are mapped back by the Newton
    method, the first coordinate of the inverse is the level function.
    """

    __slots__ = [
        "_sc",
        "_interval",
        "_center",
        "_frame",
        "_report"
    ]

    def __init__(self, sc, interval):
        """Create a new chart.

        :param sc: a smoothed curve
        :param interval: a parameter interval shorter than 20
        :raise ChartError: if the interval is not valid
        """
        start, end = map(float, interval)

        if not 0 < end - start < CHART_MAX_INTERVAL:
            raise ChartError(
                "Invalid chart interval '{}'.".format((start, end))
            )

        middle = 0.5 * (start + end)
        velocity = sc.evaluate(middle, 1)
        e3 = velocity / np.linalg.norm(velocity)

        axis = np.zeros(3)
        axis[np.argmin(np.abs(e3))] = 1.0
        e1 = axis - np.dot(axis, e3) * e3
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(e3, e1)

        self._sc = sc
        self._interval = (start, end)
        self._center = sc.evaluate(middle)
        self._frame = np.stack([e1, e2, e3])
        self._report = None

    @property
    def smoothed_curve(self):
        """The smoothed curve."""
        return self._sc

    @property
    def interval(self):
        """The parameter interval."""
        return self._interval

    @property
    def middle(self):
        """Middle of the parameter interval."""
        return 0.5 * sum(self._interval)

    @property
    def center(self):
        """Base point of the chart."""
        return self._center

    @property
    def frame(self):
        """Orthonormal frame e1, e2, e3 as rows."""
        return self._frame

    @property
    def report(self):
        """The probe report or None."""
        return self._report

    def _fields(self, s, order=2):
        """Return the curve and its derivatives at s."""
        return [self._sc.evaluate(s, n) for n in range(order + 1)]

    def evaluate(self, coordinates):
        """Map chart coordinates to points.

        :param coordinates: an array of shape (..., 3) of (s, t1, t2)
        :return: an array of points
        """
        coordinates = np.asarray(coordinates, dtype=float)
        s, t = coordinates[..., 0], coordinates[..., 1:]
        point, velocity = self._fields(s, 1)
        return point + self._transversal(velocity, t)

    def _directions(self, velocity):
        """The transversal directions |γ'|² e_i - <γ', e_i> γ'."""
        speed = _dot(velocity, velocity)[..., None]
        return [
            speed * e - _dot(velocity, e)[..., None] * velocity
            for e in self._frame[:2]
        ]

    def _transversal(self, velocity, t):
        """The transversal offset of the chart."""
        w1, w2 = self._directions(velocity)
        return t[..., 0:1] * w1 + t[..., 1:2] * w2

    def jacobian(self, coordinates):
        """Jacobian matrices of the chart.

        :param coordinates: an array of shape (n, 3)
        :return: an array of shape (n, 3, 3)
        """
        coordinates = np.asarray(coordinates, dtype=float)
        s, t = coordinates[..., 0], coordinates[..., 1:]
        _, velocity, acceleration = self._fields(s, 2)
        w1, w2 = self._directions(velocity)

        derivative = velocity.copy()
        twice = 2.0 * _dot(velocity, acceleration)[..., None]

        for i, e in enumerate(self._frame[:2]):
            derivative += t[..., i:i + 1] * (
                twice * e
                - _dot(acceleration, e)[..., None] * velocity
                - _dot(velocity, e)[..., None] * acceleration
            )

        return np.stack([derivative, w1, w2], axis=-1)

    def initial_guess(self, points):
        """Straight-line approximation of the inverse."""
        offset = np.asarray(points, dtype=float) - self._center
        local = offset @ self._frame.T
        return np.stack([
            self.middle + local[..., 2], local[..., 0], local[..., 1]
        ], axis=-1)

    def contains(self, points):
        """Are the points inside the chart cylinder?

        :param points: an array of shape (n, 3) or a point
        :return: an array of flags
        """
        offset = np.asarray(points, dtype=float) - self._center
        local = offset @ self._frame.T
        return (np.abs(local[..., 2]) < CYLINDER_HALF_LENGTH) & \
            (local[..., 0] ** 2 + local[..., 1] ** 2 < CYLINDER_RADIUS_SQUARED)

    def inverse(self, points, check=True):
        """Map points back to chart coordinates.

        The damped Newton method starts at the straight-line guess and
        halves the step whenever the residual grows.

        :param points: an array of shape (n, 3) or a point
        :param check: reject points outside of the cylinder
        :return: an array of chart coordinates
        :raise OutsideChartError: if a point is outside of the cylinder
        :raise ChartError: if the Newton method doesn't converge
        """
        points = np.asarray(points, dtype=float)
        single = points.ndim == 1
        points = np.atleast_2d(points)

        if check and not np.all(self.contains(points)):
            raise OutsideChartError("Point is outside of the chart.")

        scale = max(1.0, float(np.max(np.abs(points))))
        tolerance = NEWTON_TOLERANCE * scale

        q = self.initial_guess(points)
        residual = self.evaluate(q) - points
        norm = np.linalg.norm(residual, axis=1)

        for _ in range(NEWTON_MAX_ITERATIONS):
            active = norm > tolerance

            if not np.any(active):
                break

            step = np.linalg.solve(
                self.jacobian(q[active]), residual[active][..., None]
            )[..., 0]

            q[active], residual[active], norm[active] = \
                self._damped_step(q[active], step, points[active],
                                  norm[active])
        else:
            if np.any(norm > tolerance):
                raise ChartError(
                    "Newton inversion didn't converge for {} points.".format(
                        int(np.count_nonzero(norm > tolerance))
                    )
                )

        return q[0] if single else q

    def _damped_step(self, q, step, points, norm):
        """Halve the Newton steps until the residuals decrease."""
        factor = np.ones(len(q))

        for _ in range(_MAX_HALVINGS):
            trial = q - factor[:, None] * step
            residual = self.evaluate(trial) - points
            trial_norm = np.linalg.norm(residual, axis=1)
            worse = trial_norm > norm

            if not np.any(worse):
                break

            factor = np.where(worse, 0.5 * factor, factor)

        return trial, residual, trial_norm

    def level(self, points):
        """Evaluate the level function v_J.

        :param points: an array of points or a point
        :return: the parameters of the leaves through the points
        """
        return self.inverse(points)[..., 0]

    def level_gradient(self, points):
        """Evaluate the gradient of the level function.

        The gradient is the first row of the inverse Jacobian.

        :param points: an array of points or a point
        :return: an array of gradients
        """
        q = np.atleast_2d(self.inverse(points))
        gradient = np.linalg.inv(self.jacobian(q))[:, 0, :]
        return gradient[0] if np.ndim(points) == 1 else gradient

    def probe(self, eps=None, count=PROBE_GRID, c_fit=C_FIT):
        """Probe the chart on a grid of coordinates.

        The grid spans the whole chart cylinder around the middle of
        the interval. Only the probes inside of the cylinder are kept.

        :param eps: the turning bound or None to skip the gradient check
        :param count: a number of grid values per coordinate
        :param c_fit: the fitted constant of the gradient bound
        :return: an instance of ChartReport
        :raise ChartError: if the inversion fails at a probe
        """
        start, end = self._interval
        reach = CYLINDER_HALF_LENGTH - 1
        s = np.linspace(self.middle - reach, self.middle + reach, count)
        t = np.linspace(-_PROBE_RADIUS, _PROBE_RADIUS, count)
        grid = np.stack(np.meshgrid(s, t, t, indexing="ij"), axis=-1)
        grid = grid.reshape(-1, 3)

        points = self.evaluate(grid)
        inside = self.contains(points)
        grid, points = grid[inside], points[inside]

        if not len(grid):
            raise ChartError("No probes inside of the chart.")

        q = self.inverse(points, check=False)
        gradient = np.linalg.inv(self.jacobian(q))[:, 0, :]
        norms = np.linalg.norm(gradient, axis=1)

        report = ChartReport()
        report.interval_start = start
        report.interval_end = end
        report.probes = len(grid)
        report.roundtrip_error = float(np.max(np.linalg.norm(
            self.evaluate(q) - points, axis=1
        )))
        report.leaf_error = float(np.max(np.abs(q[:, 0] - grid[:, 0])))
        report.gradient_min = float(np.min(norms))
        report.gradient_max = float(np.max(norms))

        if eps is not None:
            report.eps = float(eps)
            report.gradient_ok = bool(
                1 - c_fit * eps < report.gradient_min
                and report.gradient_max < 1 + c_fit * eps
            )

        log.debug("Chart on %s: round trip %s, leaves %s.", self._interval,
                  report.roundtrip_error, report.leaf_error)

        self._report = report
        return report

    def __repr__(self):
        return "FoliationChart(interval={})".format(self._interval)


def build_chart(sc, J, eps=None, probe_count=PROBE_GRID):
    """Build and probe a foliation chart on the interval J.

    :param sc: a smoothed curve
    :param J: a parameter interval shorter than 20
    :param eps: the turning bound or None
    :param probe_count: a number of probes per coordinate
    :return: an instance of FoliationChart with a report
    :raise ChartError: if the chart is not valid
    """
    chart = FoliationChart(sc, J)
    chart.probe(eps, probe_count)
    return chart


class AssignmentReport(ReportData):
    """Sampled properties of the disk assignment."""

    def __init__(self):
        self._samples = 0
        self._max_shift = 0.0
        self._phi_residual = 0.0
        self._h_prime_min = 1.0
        self._h_prime_max = 1.0
        self._dphi_ds_min = 1.0
        self._dphi_ds_max = 1.0
        self._eps = 0.0
        self._passed = True

    @property
    def samples(self) -> Int:
        return self._samples

    @samples.setter
    def samples(self, value):
        self._samples = value

    @property
    def max_shift(self) -> Double:
        """Largest |h(t) - t|."""
        return self._max_shift

    @max_shift.setter
    def max_shift(self, value):
        self._max_shift = value

    @property
    def phi_residual(self) -> Double:
        return self._phi_residual

    @phi_residual.setter
    def phi_residual(self, value):
        self._phi_residual = value

    @property
    def h_prime_min(self) -> Double:
        return self._h_prime_min

    @h_prime_min.setter
    def h_prime_min(self, value):
        self._h_prime_min = value

    @property
    def h_prime_max(self) -> Double:
        return self._h_prime_max

    @h_prime_max.setter
    def h_prime_max(self, value):
        self._h_prime_max = value

    @property
    def dphi_ds_min(self) -> Double:
        return self._dphi_ds_min

    @dphi_ds_min.setter
    def dphi_ds_min(self, value):
        self._dphi_ds_min = value

    @property
    def dphi_ds_max(self) -> Double:
        return self._dphi_ds_max

    @dphi_ds_max.setter
    def dphi_ds_max(self, value):
        self._dphi_ds_max = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def passed(self) -> Bool:
        """Are h' and ∂Φ/∂s within 1 ± C eps?"""
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def _phi(sc, curve, t, s):
    """Evaluate Φ(t, s) and its partial derivatives."""
    point, velocity, acceleration = [sc.evaluate(s, n) for n in range(3)]
    offset = point - curve.eval_point(t)
    value = _dot(offset, velocity)
    ds = _dot(velocity, velocity) + _dot(offset, acceleration)
    dt = -_dot(curve.tangent(t), velocity)
    return value, ds, dt


class DiskAssignment(object):
    """The assignment of the normal disks to the points of the curve.

    The disk of the point at t is the normal disk of the smoothed
    curve at h(t), where h solves Φ(t, h(t)) = 0 for
    Φ(t, s) = <γ̃(s) - γ(t), γ̃'(s)>.
    """

    __slots__ = [
        "_sc",
        "_t",
        "_h",
        "_forward",
        "_backward",
        "_periodic",
        "_report"
    ]

    def __init__(self, sc, t, h, periodic, report):
        """Create a new assignment.

        :param sc: a smoothed curve
        :param t: the sampled parameters
        :param h: the solved parameters of the disks
        :param periodic: True if the samples cover the whole curve
        :param report: an assignment report
        """
        self._sc = sc
        self._t = t
        self._h = h
        self._forward = PchipInterpolator(t, h, extrapolate=False)
        self._backward = PchipInterpolator(h, t, extrapolate=False)
        self._periodic = periodic
        self._report = report

    @property
    def smoothed_curve(self):
        """The smoothed curve."""
        return self._sc

    @property
    def parameters(self):
        """The sampled curve parameters."""
        return self._t

    @property
    def values(self):
        """The solved disk parameters."""
        return self._h

    @property
    def interval(self):
        """The covered parameter interval."""
        return float(self._t[0]), float(self._t[-1])

    @property
    def report(self):
        """The assignment report."""
        return self._report

    def _reduce(self, values, grid):
        """Map values into the sampled range, return the period shifts."""
        values = np.asarray(values, dtype=float)
        start, end = grid[0], grid[-1]

        if self._periodic:
            period = end - start
            shift = np.floor((values - start) / period) * period
            return values - shift, shift

        slack = 1e-12 * max(1.0, abs(end))

        if np.any(values < start - slack) or np.any(values > end + slack):
            raise AssignmentError(
                "Parameter is outside of the assignment '{}'.".format(
                    (float(start), float(end))
                )
            )

        return np.clip(values, start, end), np.zeros_like(values)

    def h(self, t):
        """Evaluate h by monotone interpolation.

        :param t: a curve parameter or an array of parameters
        :return: the disk parameters
        """
        reduced, shift = self._reduce(t, self._t)
        return self._forward(reduced) + shift

    def h_inverse(self, s):
        """Invert h, refined by the Newton method on Φ in t.

        :param s: a disk parameter or an array of parameters
        :return: the curve parameters
        :raise AssignmentError: if the Newton method doesn't converge
        """
        reduced, shift = self._reduce(s, self._h)
        t = np.asarray(self._backward(reduced), dtype=float)
        curve = self._sc.source

        for _ in range(NEWTON_MAX_ITERATIONS):
            value, _, dt = _phi(self._sc, curve, t, reduced)

            if np.all(np.abs(value) <= PHI_TOLERANCE):
                break

            t = t - value / dt
        else:
            raise AssignmentError("Inversion of h didn't converge.")

        return t + shift

    def disk(self, t):
        """Return the disk assigned to the point at t.

        :param t: a curve parameter
        :return: an instance of Disk
        """
        return disk_at(self._sc, float(self.h(t)))

    def leaf_parameter(self, chart, x):
        """Return the curve parameter whose disk contains x."""
        return self.h_inverse(chart.level(x))

    def __repr__(self):
        return "DiskAssignment(interval={}, samples={})".format(
            self.interval, len(self._t)
        )


def assign_disks(sc, eps=None, spacing=None, interval=None, c_fit=C_FIT):
    """Assign normal disks to the points of the curve.

    Solve Φ(t, h(t)) = 0 by the Newton method from s = t on a uniform
    grid of curve parameters and interpolate h monotonically.

    :param sc: a smoothed curve
    :param eps: the turning bound or None to skip the sandwich check
    :param spacing: a grid spacing or None for min(0.01, L/10000)
    :param interval: a parameter interval or None for the whole curve
    :param c_fit: the fitted constant of the derivative bounds
    :return: an instance of DiskAssignment
    :raise AssignmentError: if the Newton method doesn't converge
    """
    length = sc.length

    if spacing is None:
        spacing = min(ASSIGNMENT_MAX_SPACING, length / ASSIGNMENT_MIN_POINTS)

    start, end = interval if interval is not None else (0.0, length)
    count = max(int(np.ceil((end - start) / spacing)), 1) + 1
    t = np.linspace(start, end, count)
    curve = sc.source
    s = t.copy()

    for _ in range(NEWTON_MAX_ITERATIONS):
        value, ds, _ = _phi(sc, curve, t, s)
        pending = np.abs(value) > PHI_TOLERANCE

        if not np.any(pending):
            break

        s = np.where(pending, s - value / ds, s)
    else:
        raise AssignmentError(
            "Newton method didn't converge for {} samples.".format(
                int(np.count_nonzero(pending))
            )
        )

    shift = np.abs(s - t)

    if np.any(shift > 1.0) or np.any(np.diff(s) <= 0):
        raise AssignmentError("The disk parameters are not monotone.")

    value, ds, _ = _phi(sc, curve, t, s)
    h_prime = np.diff(s) / np.diff(t)

    report = AssignmentReport()
    report.samples = len(t)
    report.max_shift = float(np.max(shift))
    report.phi_residual = float(np.max(np.abs(value)))
    report.h_prime_min = float(np.min(h_prime))
    report.h_prime_max = float(np.max(h_prime))
    report.dphi_ds_min = float(np.min(ds))
    report.dphi_ds_max = float(np.max(ds))

    if eps is not None:
        low, high = 1 - c_fit * eps, 1 + c_fit * eps
        report.eps = float(eps)
        report.passed = bool(
            low <= report.h_prime_min and report.h_prime_max <= high
            and low <= report.dphi_ds_min and report.dphi_ds_max <= high
        )

    log.debug("Assigned %d disks, largest shift %s.", len(t), report.max_shift)
    periodic = interval is None and curve.closed
    return DiskAssignment(sc, t, s, periodic, report)


def canonical_u(chart, assignment, x):
    """Evaluate the canonical map of the foliation.

    :param chart: a foliation chart
    :param assignment: a disk assignment
    :param x: a point or an array of points inside the chart
    :return: the curve parameters t with x in the disk of γ(t)
    :raise OutsideChartError: if a point is outside of the chart
    """
    return assignment.h_inverse(chart.level(x))


def canonical_u_gradient(chart, assignment, x, step=1e-5):
    """Gradient norms of the canonical map by central differences.

    :param chart: a foliation chart
    :param assignment: a disk assignment
    :param x: an array of points inside the chart
    :param step: a difference step
    :return: an array of gradient norms
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    gradient = np.zeros_like(x)

    for i in range(3):
        offset = np.zeros(3)
        offset[i] = step
        gradient[:, i] = (
            canonical_u(chart, assignment, x + offset)
            - canonical_u(chart, assignment, x - offset)
        ) / (2 * step)

    return np.linalg.norm(gradient, axis=1)
