#
# Integrators of geodesics, parallel transport and Jacobi fields
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

from lencert.constants import RK4_STEP, LOG_TOLERANCE, \
    NEWTON_MAX_ITERATIONS, RICHARDSON_TOLERANCE, TRANSPORT_STEP, \
    FINITE_DIFFERENCE_STEP
from lencert.error import LencertError
from lencert.riemannian.chart import curvature_operator, orthonormal_frame

log = logging.getLogger(__name__)

__all__ = [
    "ChartExitError",
    "LogMapError",
    "GeodesicResult",
    "TransportResult",
    "exp_map",
    "log_map",
    "parallel_transport",
    "transport_segments",
    "jacobi_field",
]

# Relative step of the finite differences in the shooting.
_SHOOTING_STEP = 1e-7


class ChartExitError(LencertError):
    """The integrated curve left the chart."""
    pass


class LogMapError(LencertError):
    """The geodesic shooting failed."""
    pass


def _step_count(step):
    """Return the number of steps covering [0, 1]."""
    return max(int(math.ceil(1.0 / step - 1e-9)), 1)


def _rk4(chart, derivative, state, steps, record=False):
    """Integrate a system over [0, 1] with the classical Runge-Kutta method.

    The first component of the state is the position. It is checked
    against the chart box after every step.

    :param chart: a chart
    :param derivative: a function of the state returning its derivative
    :param state: a list of arrays
    :param steps: a number of steps
    :param record: should the states be recorded?
    :return: the final state and a list of recorded states or None
    :raise ChartExitError: if the position leaves the chart
    """
    h = 1.0 / steps
    history = [state] if record else None

    for _ in range(steps):
        k1 = derivative(state)
        k2 = derivative([y + 0.5 * h * k for y, k in zip(state, k1)])
        k3 = derivative([y + 0.5 * h * k for y, k in zip(state, k2)])
        k4 = derivative([y + h * k for y, k in zip(state, k3)])

        state = [
            y + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)
            for y, a, b, c, d in zip(state, k1, k2, k3, k4)
        ]

        if not np.all(chart.contains(state[0])):
            raise ChartExitError(
                "The curve leaves the chart '{}'.".format(chart.name)
            )

        if record:
            history.append(state)

    return state, history


def _geodesic_derivative(chart):
    """Return the derivative of the geodesic system."""

    def derivative(state):
        x, v = state[0], state[1]
        result = [v, -chart.connection(x, v, v)]

        if len(state) > 2:
            vectors = state[2]
            result.append(-chart.connection(
                x[..., None, :], v[..., None, :], vectors
            ))

        return result

    return derivative


class GeodesicResult(object):
    """A geodesic t -> exp(p, t v) on [0, 1]."""

    __slots__ = [
        "_start",
        "_initial_velocity",
        "_endpoint",
        "_velocity",
        "_frame",
        "_path",
        "_speed_drift",
        "_richardson_error"
    ]

    def __init__(self, start, initial_velocity, endpoint, velocity,
                 frame=None, path=None, speed_drift=0.0,
                 richardson_error=None):
        self._start = start
        self._initial_velocity = initial_velocity
        self._endpoint = endpoint
        self._velocity = velocity
        self._frame = frame
        self._path = path
        self._speed_drift = speed_drift
        self._richardson_error = richardson_error

    @property
    def start(self):
        """The initial point."""
        return self._start

    @property
    def initial_velocity(self):
        """The initial velocity."""
        return self._initial_velocity

    @property
    def endpoint(self):
        """The point at t = 1."""
        return self._endpoint

    @property
    def velocity(self):
        """The velocity at t = 1."""
        return self._velocity

    @property
    def frame(self):
        """The transported orthonormal frame at t = 1 or None."""
        return self._frame

    @property
    def path(self):
        """The recorded positions or None."""
        return self._path

    @property
    def speed_drift(self):
        """The relative change of the speed."""
        return self._speed_drift

    @property
    def richardson_error(self):
        """The endpoint change under step halving or None."""
        return self._richardson_error


def _speed_drift(chart, p, v, q, w):
    """Return the largest relative change of the speed."""
    initial = chart.norm(p, v)
    final = chart.norm(q, w)
    scale = np.where(initial > 0, initial, 1.0)
    return float(np.max(np.abs(final - initial) / scale, initial=0.0))


def exp_map(chart, p, v, step=RK4_STEP, frame=False, record=False,
            richardson=False):
    """Follow the geodesics from p with the initial velocities v.

    Geodesics of flat charts are straight lines. Otherwise the
    geodesic equation is integrated with a fixed step over [0, 1].

    :param chart: a chart
    :param p: a point or an array of points
    :param v: a tangent vector or an array of tangent vectors
    :param step: a step of the integrator
    :param frame: should an orthonormal frame be transported?
    :param record: should the positions be recorded?
    :param richardson: should the step be halved to estimate the error?
    :return: an instance of GeodesicResult
    :raise ChartExitError: if a geodesic leaves the chart
    """
    p, v = np.broadcast_arrays(
        np.asarray(p, dtype=float), np.asarray(v, dtype=float)
    )
    p = p.copy()
    v = v.copy()
    vectors = orthonormal_frame(chart, p) if frame else None
    steps = _step_count(step)

    if chart.flat:
        path = None

        if record:
            times = np.linspace(0.0, 1.0, steps + 1)
            times = times.reshape((-1,) + (1,) * v.ndim)
            path = p + times * v

        return GeodesicResult(
            p, v, chart.wrap(p + v), v.copy(), vectors, path,
            speed_drift=0.0,
            richardson_error=0.0 if richardson else None
        )

    state = [p, v] if vectors is None else [p, v, vectors]
    derivative = _geodesic_derivative(chart)
    final, history = _rk4(chart, derivative, state, steps, record)

    error = None

    if richardson:
        fine, _ = _rk4(chart, derivative, [p, v], 2 * steps)
        error = float(np.max(np.linalg.norm(fine[0] - final[0], axis=-1)))
        scale = max(1.0, float(np.max(np.abs(v), initial=0.0)))

        if error > RICHARDSON_TOLERANCE * scale:
            log.warning("Step halving changes the geodesic by %s.", error)

    path = np.stack([s[0] for s in history]) if record else None
    endpoint = chart.wrap(final[0])

    return GeodesicResult(
        p, v, endpoint, final[1],
        final[2] if vectors is not None else None, path,
        speed_drift=_speed_drift(chart, p, v, final[0], final[1]),
        richardson_error=error
    )


def log_map(chart, p, q, step=RK4_STEP, tolerance=LOG_TOLERANCE,
            max_iterations=NEWTON_MAX_ITERATIONS):
    """Find the initial velocities of the geodesics from p to q.

    The velocities are solved by Newton iterations on the endpoint
    of the exponential map, starting from the coordinate difference.
    The differential of the exponential map is estimated by forward
    differences. Flat charts return the difference itself.

    :param chart: a chart
    :param p: a point or an array of points
    :param q: a point or an array of points
    :param step: a step of the integrator
    :param tolerance: a tolerance of the endpoints relative to max(1, |q|)
    :param max_iterations: a maximal number of iterations
    :return: a tangent vector or an array of tangent vectors
    :raise LogMapError: if the shooting doesn't converge
    """
    p, q = np.broadcast_arrays(
        np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    )
    shape = p.shape
    seed = chart.difference(p, q)

    if chart.flat:
        return seed

    p = p.reshape(-1, 3)
    q = q.reshape(-1, 3)
    v = seed.reshape(-1, 3).copy()
    limit = tolerance * np.maximum(1.0, np.linalg.norm(q, axis=1))
    active = np.arange(len(p))
    eye = np.eye(3)

    for iteration in range(max_iterations):
        start = p[active]
        velocity = v[active]
        size = _SHOOTING_STEP * np.maximum(
            1.0, np.linalg.norm(velocity, axis=1)
        )

        probes = np.concatenate([
            velocity[:, None, :],
            velocity[:, None, :] + size[:, None, None] * eye
        ], axis=1)

        try:
            ends = exp_map(
                chart, start[:, None, :], probes, step=step
            ).endpoint
        except ChartExitError as e:
            raise LogMapError(
                "The shooting leaves the chart: {}".format(e)
            ) from None

        residual = chart.difference(q[active], ends[:, 0])
        error = np.linalg.norm(residual, axis=1)
        done = error <= limit[active]

        log.debug("Shooting iteration %s: %s of %s rows left, error %s.",
                  iteration, np.count_nonzero(~done), len(active),
                  float(np.max(error)))

        keep = ~done
        active = active[keep]

        if not len(active):
            return v.reshape(shape)

        # Columns are the derivatives in the directions of the basis.
        jacobian = (ends[keep, 1:] - ends[keep, :1]) / size[keep, None, None]
        jacobian = np.swapaxes(jacobian, 1, 2)

        try:
            delta = np.linalg.solve(jacobian, -residual[keep][..., None])
        except np.linalg.LinAlgError:
            raise LogMapError("The exponential map is singular.") from None

        v[active] += delta[..., 0]

    raise LogMapError(
        "The shooting from '{}' to '{}' doesn't converge.".format(
            p[active[0]].tolist(), q[active[0]].tolist()
        )
    )


def transport_segments(chart, starts, chords, vectors, step=TRANSPORT_STEP):
    """Transport vectors along coordinate segments.

    Every segment x(t) = start + t chord, t in [0, 1], carries its own
    vectors. The number of steps is set by the longest chord.

    :param chart: a chart
    :param starts: an array of shape (n, 3)
    :param chords: an array of shape (n, 3)
    :param vectors: an array of shape (n, m, 3)
    :param step: the largest coordinate length of a step
    :return: an array of shape (n, m, 3)
    :raise ChartExitError: if a segment leaves the chart
    """
    vectors = np.array(vectors, dtype=float)

    if chart.flat:
        return vectors

    starts = np.asarray(starts, dtype=float)
    chords = np.asarray(chords, dtype=float)
    longest = float(np.max(np.linalg.norm(chords, axis=-1), initial=0.0))
    steps = max(int(math.ceil(longest / step)), 1)

    def derivative(state):
        x, transported = state
        return [chords, -chart.connection(
            x[..., None, :], chords[..., None, :], transported
        )]

    final, _ = _rk4(chart, derivative, [starts, vectors], steps)
    return final[1]


def parallel_transport(chart, path, v, step=TRANSPORT_STEP):
    """Transport tangent vectors along a polyline.

    :param chart: a chart
    :param path: an array of shape (m, 3)
    :param v: a tangent vector or an array of shape (k, 3)
    :param step: the largest coordinate length of a step
    :return: the transported vectors at the end of the path
    :raise ChartExitError: if the path leaves the chart
    """
    path = np.asarray(path, dtype=float)
    v = np.asarray(v, dtype=float)
    vectors = v.reshape(1, -1, 3)

    for start, end in zip(path[:-1], path[1:]):
        chord = chart.difference(start, end)
        vectors = transport_segments(
            chart, start[None, :], chord[None, :], vectors, step
        )

    return vectors.reshape(v.shape)


class TransportResult(object):
    """A Jacobi field and a parallel field along a geodesic.

    Both fields start from the same vector w. The Jacobi field V
    vanishes at t = 0 with the covariant derivative w, the parallel
    field X equals w. The remainder is V - t X.
    """

    __slots__ = [
        "_times",
        "_points",
        "_transported",
        "_jacobi",
        "_derivative"
    ]

    def __init__(self, times, points, transported, jacobi, derivative):
        self._times = times
        self._points = points
        self._transported = transported
        self._jacobi = jacobi
        self._derivative = derivative

    @property
    def times(self):
        """Times of the recorded states."""
        return self._times

    @property
    def points(self):
        """Points of the geodesic."""
        return self._points

    @property
    def transported(self):
        """The parallel field X."""
        return self._transported

    @property
    def jacobi(self):
        """The Jacobi field V."""
        return self._jacobi

    @property
    def covariant_derivative(self):
        """The covariant derivative of V."""
        return self._derivative

    @property
    def remainder(self):
        """The field W = V - t X."""
        times = self._times.reshape((-1,) + (1,) * (self._jacobi.ndim - 1))
        return self._jacobi - times * self._transported

    def norm_drift(self, chart):
        """Return the largest relative change of |X| along the geodesic."""
        norms = chart.norm(self._points, self._transported)
        scale = np.where(norms[0] > 0, norms[0], 1.0)
        return float(np.max(np.abs(norms - norms[0]) / scale))


def jacobi_field(chart, p, v, w, step=RK4_STEP,
                 curvature_step=FINITE_DIFFERENCE_STEP):
    """Integrate a Jacobi field along the geodesic exp(p, t v).

    The field solves the Jacobi equation with V(0) = 0 and the
    covariant derivative w at t = 0, so V(1) is the differential
    of the exponential map at v applied to w.

    :param chart: a chart
    :param p: a point or an array of points
    :param v: an initial velocity or an array of velocities
    :param w: an initial derivative or an array of derivatives
    :param step: a step of the integrator
    :param curvature_step: a step of the curvature finite differences
    :return: an instance of TransportResult
    :raise ChartExitError: if the geodesic leaves the chart
    """
    p, v, w = np.broadcast_arrays(
        np.asarray(p, dtype=float),
        np.asarray(v, dtype=float),
        np.asarray(w, dtype=float)
    )
    steps = _step_count(step)
    times = np.linspace(0.0, 1.0, steps + 1)
    column = times.reshape((-1,) + (1,) * v.ndim)

    if chart.flat:
        transported = np.broadcast_to(w, column.shape[:1] + w.shape).copy()
        return TransportResult(
            times, p + column * v, transported, column * w,
            transported.copy()
        )

    def derivative(state):
        x, velocity, parallel, jacobi, covariant = state
        return [
            velocity,
            -chart.connection(x, velocity, velocity),
            -chart.connection(x, velocity, parallel),
            covariant - chart.connection(x, velocity, jacobi),
            -chart.connection(x, velocity, covariant)
            - curvature_operator(
                chart, x, jacobi, velocity, velocity, curvature_step
            ),
        ]

    state = [p.copy(), v.copy(), w.copy(), np.zeros_like(w), w.copy()]
    _, history = _rk4(chart, derivative, state, steps, record=True)

    def collect(index):
        return np.stack([s[index] for s in history])

    return TransportResult(
        times, collect(0), collect(2), collect(3), collect(4)
    )
