#
# Charts of Riemannian metrics
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
from abc import ABCMeta, abstractmethod

import numpy as np

from lencert.constants import FINITE_DIFFERENCE_STEP
from lencert.error import LencertError
from lencert.geometry import DiscreteCurve
from lencert.identifier import MetricIdentifier

__all__ = [
    "MetricError",
    "ManifoldChart",
    "ConformalChart",
    "EuclideanChart",
    "FlatTorusChart",
    "SphereChart",
    "PerturbedChart",
    "ScaledChart",
    "get_chart",
    "riemann_tensor",
    "curvature_operator",
    "sectional_curvature",
    "wedge_norm",
    "orthonormal_frame",
    "metric_curve",
    "metric_area",
]

_EYE = np.eye(3)

# Nodes and weights of the Gauss-Legendre rule on [0, 1].
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(3)
_NODES = (_NODES + 1.0) / 2.0
_WEIGHTS = _WEIGHTS / 2.0


class MetricError(LencertError):
    """Invalid parameters of a metric."""
    pass


class ManifoldChart(metaclass=ABCMeta):
    """A Riemannian metric on a coordinate box of R^3.

    All evaluators are vectorized: points have the shape (..., 3)
    and the results carry the same leading dimensions.
    """

    __slots__ = []

    @property
    @abstractmethod
    def name(self):
        """Name of the chart."""
        return ""

    @property
    def curvature_bound(self):
        """Declared upper bound of the sectional curvature."""
        return 0.0

    @property
    def injectivity_floor(self):
        """Declared lower bound of the injectivity radius."""
        return math.inf

    @property
    def flat(self):
        """Are geodesics straight lines of the coordinates?"""
        return False

    @property
    def bound(self):
        """Half width of the coordinate box."""
        return math.inf

    def contains(self, points):
        """Are the points inside the coordinate box?

        :param points: an array of shape (..., 3)
        :return: an array of flags
        """
        points = np.asarray(points, dtype=float)
        return np.all(np.abs(points) <= self.bound, axis=-1) \
            & np.all(np.isfinite(points), axis=-1)

    def wrap(self, points):
        """Return the canonical coordinates of the points."""
        return np.asarray(points, dtype=float)

    def difference(self, p, q):
        """Return the coordinate displacement from p to q."""
        return np.asarray(q, dtype=float) - np.asarray(p, dtype=float)

    @abstractmethod
    def metric(self, points):
        """Evaluate the metric tensor.

        :param points: an array of shape (..., 3)
        :return: an array of shape (..., 3, 3)
        """
        return None

    @abstractmethod
    def christoffel(self, points):
        """Evaluate the Christoffel symbols.

        The entry [..., k, i, j] holds the symbol with the upper
        index k and the lower indices i and j.

        :param points: an array of shape (..., 3)
        :return: an array of shape (..., 3, 3, 3)
        """
        return None

    def connection(self, points, u, v):
        """Contract the Christoffel symbols with two vectors."""
        return np.einsum("...kij,...i,...j->...k",
                         self.christoffel(points), u, v)

    def inner(self, points, u, v):
        """Inner product of two tangent vectors."""
        return np.einsum("...ij,...i,...j->...", self.metric(points), u, v)

    def norm(self, points, v):
        """Length of a tangent vector."""
        return np.sqrt(np.maximum(self.inner(points, v, v), 0.0))

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, self.name)


class ConformalChart(ManifoldChart):
    """A metric exp(2f) times the Euclidean one."""

    __slots__ = []

    @abstractmethod
    def log_factor(self, points):
        """Evaluate the function f."""
        return None

    @abstractmethod
    def log_factor_gradient(self, points):
        """Evaluate the gradient of f."""
        return None

    def metric(self, points):
        scale = np.exp(2.0 * self.log_factor(points))
        return scale[..., None, None] * _EYE

    def christoffel(self, points):
        d = self.log_factor_gradient(points)
        return np.einsum("ki,...j->...kij", _EYE, d) \
            + np.einsum("kj,...i->...kij", _EYE, d) \
            - np.einsum("ij,...k->...kij", _EYE, d)

    def connection(self, points, u, v):
        d = self.log_factor_gradient(points)
        du = np.sum(d * u, axis=-1)[..., None]
        dv = np.sum(d * v, axis=-1)[..., None]
        uv = np.sum(u * v, axis=-1)[..., None]
        return u * dv + v * du - uv * d

    def inner(self, points, u, v):
        scale = np.exp(2.0 * self.log_factor(points))
        return scale * np.sum(np.asarray(u) * np.asarray(v), axis=-1)


class EuclideanChart(ConformalChart):
    """The flat metric of R^3."""

    __slots__ = []

    @property
    def name(self):
        return "euclidean"

    @property
    def flat(self):
        return True

    def log_factor(self, points):
        return np.zeros(np.shape(points)[:-1])

    def log_factor_gradient(self, points):
        return np.zeros(np.shape(points))


class FlatTorusChart(EuclideanChart):
    """The flat metric of the cube [0, L)^3 with periodic sides."""

    __slots__ = ["_size"]

    def __init__(self, size):
        """Create a new flat torus.

        :param size: a side length of the cube
        :raise MetricError: if the size is not positive
        """
        if not size > 0:
            raise MetricError("Invalid size of the torus '{}'.".format(size))

        self._size = float(size)

    @property
    def name(self):
        return "flat-torus:{}".format(repr(self._size))

    @property
    def size(self):
        """Side length of the cube."""
        return self._size

    @property
    def injectivity_floor(self):
        return self._size / 2.0

    def wrap(self, points):
        return np.mod(np.asarray(points, dtype=float), self._size)

    def difference(self, p, q):
        delta = super().difference(p, q)
        return delta - self._size * np.round(delta / self._size)


class SphereChart(ConformalChart):
    """The round 3-sphere of radius R in stereographic coordinates.

    The coordinates are scaled so that the metric is the identity at
    the origin. The origin is a pole and the equator is the sphere
    of radius 2R.
    """

    __slots__ = ["_radius"]

    def __init__(self, radius):
        """Create a new sphere.

        :param radius: a radius of the sphere
        :raise MetricError: if the radius is not positive
        """
        if not radius > 0:
            raise MetricError("Invalid radius '{}'.".format(radius))

        self._radius = float(radius)

    @property
    def name(self):
        return "sphere:{}".format(repr(self._radius))

    @property
    def radius(self):
        """Radius of the sphere."""
        return self._radius

    @property
    def curvature_bound(self):
        return 1.0 / self._radius ** 2

    @property
    def injectivity_floor(self):
        return math.pi * self._radius

    @property
    def bound(self):
        return 20.0 * self._radius

    def log_factor(self, points):
        squared = np.sum(np.square(points), axis=-1)
        return -np.log1p(squared / (4.0 * self._radius ** 2))

    def log_factor_gradient(self, points):
        points = np.asarray(points, dtype=float)
        squared = np.sum(np.square(points), axis=-1)
        denominator = 2.0 * self._radius ** 2 \
            * (1.0 + squared / (4.0 * self._radius ** 2))
        return -points / denominator[..., None]

    def distance(self, p, q):
        """Return the great-circle distance of two points."""
        chord = np.linalg.norm(self.embed(p) - self.embed(q), axis=-1)
        ratio = np.clip(chord / (2.0 * self._radius), 0.0, 1.0)
        return 2.0 * self._radius * np.arcsin(ratio)

    def embed(self, points):
        """Map the coordinates to the sphere in R^4."""
        points = np.asarray(points, dtype=float)
        radius = self._radius
        squared = np.sum(np.square(points), axis=-1)[..., None]
        denominator = 1.0 + squared / (4.0 * radius ** 2)
        spatial = points / denominator
        height = radius * (1.0 - squared / (4.0 * radius ** 2)) / denominator
        return np.concatenate([spatial, height], axis=-1)


class PerturbedChart(ConformalChart):
    """The flat metric scaled by (1 + a sin x sin y sin z)^2."""

    __slots__ = ["_amplitude"]

    def __init__(self, amplitude):
        """Create a new perturbed metric.

        :param amplitude: an amplitude in (-1, 1)
        :raise MetricError: if the amplitude is out of range
        """
        if not -1 < amplitude < 1:
            raise MetricError("Invalid amplitude '{}'.".format(amplitude))

        self._amplitude = float(amplitude)

    @property
    def name(self):
        return "perturbed:{}".format(repr(self._amplitude))

    @property
    def amplitude(self):
        """Amplitude of the perturbation."""
        return self._amplitude

    @property
    def flat(self):
        return self._amplitude == 0

    @property
    def curvature_bound(self):
        a = abs(self._amplitude)
        return 12.0 * a / (1.0 - a) ** 4

    @property
    def injectivity_floor(self):
        if self.curvature_bound == 0:
            return math.inf

        return math.pi / math.sqrt(self.curvature_bound)

    def log_factor(self, points):
        sines = np.prod(np.sin(points), axis=-1)
        return np.log1p(self._amplitude * sines)

    def log_factor_gradient(self, points):
        points = np.asarray(points, dtype=float)
        sin = np.sin(points)
        cos = np.cos(points)
        partial = np.stack([
            cos[..., 0] * sin[..., 1] * sin[..., 2],
            sin[..., 0] * cos[..., 1] * sin[..., 2],
            sin[..., 0] * sin[..., 1] * cos[..., 2],
        ], axis=-1)
        factor = 1.0 + self._amplitude * np.prod(sin, axis=-1)
        return self._amplitude * partial / factor[..., None]


class ScaledChart(ManifoldChart):
    """A constant multiple of the metric of another chart.

    The geodesics and the parallel transport don't change. Lengths
    scale by the square root of the factor and the sectional
    curvature by its inverse.
    """

    __slots__ = ["_base", "_factor"]

    def __init__(self, base, factor):
        """Create a new scaled chart.

        :param base: a chart
        :param factor: a positive multiple of the metric
        :raise MetricError: if the factor is not positive
        """
        if not factor > 0:
            raise MetricError("Invalid scale factor '{}'.".format(factor))

        self._base = base
        self._factor = float(factor)

    @property
    def name(self):
        return "{}*{}".format(repr(self._factor), self._base.name)

    @property
    def base(self):
        """The scaled chart."""
        return self._base

    @property
    def factor(self):
        """The multiple of the metric."""
        return self._factor

    @property
    def curvature_bound(self):
        return self._base.curvature_bound / self._factor

    @property
    def injectivity_floor(self):
        return self._base.injectivity_floor * math.sqrt(self._factor)

    @property
    def flat(self):
        return self._base.flat

    @property
    def bound(self):
        return self._base.bound

    def wrap(self, points):
        return self._base.wrap(points)

    def difference(self, p, q):
        return self._base.difference(p, q)

    def metric(self, points):
        return self._factor * self._base.metric(points)

    def christoffel(self, points):
        return self._base.christoffel(points)

    def connection(self, points, u, v):
        return self._base.connection(points, u, v)

    def inner(self, points, u, v):
        return self._factor * self._base.inner(points, u, v)


def get_chart(identifier):
    """Return the chart of a metric identifier.

    :param identifier: a string or an instance of MetricIdentifier
    :return: an instance of ManifoldChart
    :raise IdentifierError: if the identifier is not valid
    :raise MetricError: if the parameter is not valid
    """
    if not isinstance(identifier, MetricIdentifier):
        identifier = MetricIdentifier.from_string(identifier)

    name = identifier.name
    parameter = identifier.parameter

    if name == "sphere":
        return SphereChart(parameter)

    if name == "flat-torus":
        return FlatTorusChart(parameter)

    if name == "perturbed":
        return PerturbedChart(parameter)

    return EuclideanChart()


def riemann_tensor(chart, points, step=FINITE_DIFFERENCE_STEP):
    """Evaluate the curvature tensor.

    The derivatives of the Christoffel symbols are central finite
    differences. The entry [..., l, i, j, k] is the component of
    R(e_i, e_j) e_k along e_l.

    :param chart: a chart
    :param points: an array of shape (..., 3)
    :param step: a step of the finite differences
    :return: an array of shape (..., 3, 3, 3, 3)
    """
    points = np.asarray(points, dtype=float)
    shifted = points[..., None, :] + step * _EYE
    below = points[..., None, :] - step * _EYE

    # The axis after the leading ones is the direction of the derivative.
    derivative = (chart.christoffel(shifted) - chart.christoffel(below)) \
        / (2.0 * step)
    symbols = chart.christoffel(points)

    return np.einsum("...iljk->...lijk", derivative) \
        - np.einsum("...jlik->...lijk", derivative) \
        + np.einsum("...lim,...mjk->...lijk", symbols, symbols) \
        - np.einsum("...ljm,...mik->...lijk", symbols, symbols)


def curvature_operator(chart, points, x, y, z, step=FINITE_DIFFERENCE_STEP):
    """Evaluate R(x, y) z."""
    tensor = riemann_tensor(chart, points, step)
    return np.einsum("...lijk,...i,...j,...k->...l", tensor, x, y, z)


def wedge_norm(chart, points, u, v):
    """Return the area of the parallelogram spanned by u and v."""
    value = chart.inner(points, u, u) * chart.inner(points, v, v) \
        - chart.inner(points, u, v) ** 2
    return np.sqrt(np.maximum(value, 0.0))


def sectional_curvature(chart, points, u, v, step=FINITE_DIFFERENCE_STEP):
    """Return the sectional curvature of the plane spanned by u and v.

    :param chart: a chart
    :param points: an array of shape (..., 3)
    :param u: tangent vectors
    :param v: tangent vectors
    :param step: a step of the finite differences
    :return: an array of curvatures
    """
    value = curvature_operator(chart, points, u, v, v, step)
    return chart.inner(points, value, u) \
        / wedge_norm(chart, points, u, v) ** 2


def orthonormal_frame(chart, points):
    """Return an orthonormal frame of the metric.

    :param chart: a chart
    :param points: an array of shape (..., 3)
    :return: an array of shape (..., 3, 3) of frame vectors in rows
    """
    lower = np.linalg.cholesky(chart.metric(points))
    return np.linalg.inv(lower)


def metric_curve(chart, points, closed=True):
    """Create a curve with the chord lengths measured in a chart.

    The chords are the coordinate displacements of the chart, so curves
    of a periodic chart may wrap around the box. Their lengths are the
    lengths of the coordinate segments in the metric.

    :param chart: a chart
    :param points: an array of shape (n, 3)
    :param closed: True if the curve is a loop
    :return: an instance of DiscreteCurve
    """
    points = np.asarray(points, dtype=float)

    if closed and len(points) > 3 and np.array_equal(points[0], points[-1]):
        points = points[:-1]

    following = np.roll(points, -1, axis=0) if closed else points[1:]
    start = points[:len(following)]
    chords = chart.difference(start, following)

    if isinstance(chart, EuclideanChart):
        return DiscreteCurve(points, closed, chords=chords)

    samples = start[:, None, :] + _NODES[None, :, None] * chords[:, None, :]
    speed = chart.norm(samples, np.broadcast_to(chords[:, None, :],
                                                samples.shape))
    lengths = speed @ _WEIGHTS
    return DiscreteCurve(points, closed, chords=chords, chord_lengths=lengths)


def metric_area(chart, mesh):
    """Return the area of a triangle mesh in the metric of a chart.

    The metric is evaluated at the centroids of the triangles.

    :param chart: a chart
    :param mesh: a triangle mesh
    :return: a real number
    """
    corners = mesh.vertices[mesh.triangles]
    first = chart.difference(corners[:, 0], corners[:, 1])
    second = chart.difference(corners[:, 0], corners[:, 2])
    centroids = corners[:, 0] + (first + second) / 3.0

    e = chart.inner(centroids, first, first)
    f = chart.inner(centroids, first, second)
    g = chart.inner(centroids, second, second)
    return math.fsum(0.5 * np.sqrt(np.maximum(e * g - f * f, 0.0)))
