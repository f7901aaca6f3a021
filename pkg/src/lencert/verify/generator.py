#
# Generators of test instances
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

from lencert.constants import LONG_CURVE_LENGTH, DEFAULT_SEED
from lencert.error import LencertError
from lencert.geometry import AnnulusSurface, DiscreteCurve, MeshError, \
    TriMesh, mesh_self_intersections
from lencert.identifier import MetricIdentifier
from lencert.structure import ReportData
from lencert.typing import Double, Int, Str

__all__ = [
    "GeneratorError",
    "Instance",
    "Family",
    "FAMILY_NAMES",
    "gen_offset_annulus",
    "gen_wiggly",
    "gen_shortcut",
    "generate_family",
]

log = logging.getLogger(__name__)

# The smallest number of points of a curve of an instance.
MIN_POINTS = 8

FAMILY_NAMES = ("offset", "wiggly", "shortcut")


class GeneratorError(LencertError):
    """The generator rejected its parameters."""
    pass


class Instance(object):
    """Curves and an annulus between them.

    An instance remembers the generator, the seed and the parameters
    it was generated from, so it can be generated again.
    """

    __slots__ = [
        "_curve0",
        "_curve1",
        "_sigma",
        "_eps",
        "_backend",
        "_generator",
        "_seed",
        "_parameters"
    ]

    def __init__(self, curve0, curve1, sigma, eps, backend="euclidean",
                 generator="", seed=DEFAULT_SEED, parameters=None):
        """Create a new instance.

        :param curve0: the first curve
        :param curve1: the second curve
        :param sigma: an annulus bounded by the curves
        :param eps: the turning and area bound
        :param backend: a metric identifier or its string
        :param generator: a name of the generator
        :param seed: a seed of the generator
        :param parameters: a dictionary of generator parameters
        """
        if not isinstance(backend, MetricIdentifier):
            backend = MetricIdentifier.from_string(backend)

        self._curve0 = curve0
        self._curve1 = curve1
        self._sigma = sigma
        self._eps = float(eps)
        self._backend = backend
        self._generator = generator
        self._seed = int(seed)
        self._parameters = dict(parameters or {})

    @property
    def curve0(self):
        """The first curve."""
        return self._curve0

    @property
    def curve1(self):
        """The second curve."""
        return self._curve1

    @property
    def sigma(self):
        """The annulus."""
        return self._sigma

    @property
    def eps(self):
        """The turning and area bound."""
        return self._eps

    @property
    def backend(self):
        """Identifier of the metric."""
        return self._backend

    @property
    def generator(self):
        """Name of the generator."""
        return self._generator

    @property
    def seed(self):
        """Seed of the generator."""
        return self._seed

    @property
    def parameters(self):
        """Parameters of the generator."""
        return dict(self._parameters)

    @property
    def provenance(self):
        """A dictionary describing the origin of the instance."""
        return {
            "generator": self._generator,
            "seed": self._seed,
            "parameters": self.parameters,
        }

    def scaled(self, factor, backend=None):
        """Return the instance with the coordinates multiplied.

        :param factor: a positive multiple of the coordinates
        :param backend: a metric identifier of the result or None
        :return: an instance of Instance
        """
        mesh = self._sigma.mesh

        return Instance(
            DiscreteCurve(factor * self._curve0.points, self._curve0.closed),
            DiscreteCurve(factor * self._curve1.points, self._curve1.closed),
            AnnulusSurface(
                TriMesh(factor * mesh.vertices, mesh.triangles),
                self._sigma.labels
            ),
            self._eps,
            backend or self._backend,
            self._generator,
            self._seed,
            self._parameters
        )

    def __repr__(self):
        return "Instance({}, seed={}, eps={})".format(
            self._generator or "?", self._seed, self._eps
        )


def _circle_angles(n, rng):
    """Return n equally spaced angles with a random phase."""
    phase = rng.uniform(0.0, 2.0 * math.pi / n)
    return phase + 2.0 * math.pi * np.arange(n) / n


def _ruled_annulus(inner, outer):
    """Triangulate the strip between two matched loops.

    :param inner: an array of shape (n, 3)
    :param outer: an array of shape (n, 3)
    :return: an instance of AnnulusSurface
    :raise GeneratorError: if the strip is not a valid annulus
    """
    n = len(inner)
    i = np.arange(n)
    j = (i + 1) % n
    triangles = np.concatenate([
        np.stack([i, j, n + i], axis=1),
        np.stack([j, n + j, n + i], axis=1),
    ])

    try:
        mesh = TriMesh(np.concatenate([inner, outer]), triangles)
        return AnnulusSurface(mesh)
    except MeshError as e:
        raise GeneratorError("Invalid annulus: {}".format(e)) from None


def _check_points(n, eps):
    """Check the guards shared by the generators."""
    if int(n) < MIN_POINTS:
        raise GeneratorError(
            "A curve needs at least {} points: n = {}.".format(MIN_POINTS, n)
        )

    if not eps > 0:
        raise GeneratorError(
            "The bound must be positive: eps = {}.".format(eps)
        )


def _check_area(sigma, eps):
    if sigma.area > eps ** 2:
        raise GeneratorError(
            "The area {} exceeds the budget {}.".format(sigma.area, eps ** 2)
        )


def _check_radius(R):
    if not 2 * math.pi * R >= LONG_CURVE_LENGTH:
        raise GeneratorError(
            "The radius must be at least {}: R = {}.".format(
                LONG_CURVE_LENGTH / (2 * math.pi), R
            )
        )


def _check_embedded(sigma):
    count = mesh_self_intersections(sigma.mesh)

    if count:
        raise GeneratorError(
            "The annulus intersects itself in {} pairs.".format(count)
        )


def _planar_circle(radius, angles):
    return np.stack([
        radius * np.cos(angles),
        radius * np.sin(angles),
        np.zeros_like(angles)
    ], axis=1)


def gen_offset_annulus(R, delta, n, eps=1e-3, seed=DEFAULT_SEED):
    """Generate two concentric circles and the flat annulus between them.

    :param R: a radius of the first circle
    :param delta: a positive offset of the second circle
    :param n: a number of points of each circle
    :param eps: the turning and area bound
    :param seed: a seed of the phase of the points
    :return: an instance of Instance
    :raise GeneratorError: if the parameters are rejected
    """
    return gen_wiggly(R, delta, 0.0, 0, n, eps, seed, generator="offset")


def gen_wiggly(R, delta, amplitude, frequency, n, eps=1e-3,
               seed=DEFAULT_SEED, generator="wiggly"):
    """Generate a circle and a wiggled offset of it.

    The second curve is the circle of radius R + delta lifted by
    amplitude sin(frequency theta + phase) along the axis. The annulus
    is ruled between the points with the same angle.

    :param R: a radius of the first circle
    :param delta: a positive offset of the second curve
    :param amplitude: an amplitude of the wiggle
    :param frequency: a number of waves of the wiggle
    :param n: a number of points of each curve
    :param eps: the turning and area bound
    :param seed: a seed of the phases
    :param generator: a name recorded in the instance
    :return: an instance of Instance
    :raise GeneratorError: if the parameters are rejected
    """
    if not delta > 0:
        raise GeneratorError(
            "The offset must be positive: delta = {}.".format(delta)
        )

    _check_radius(R)
    _check_points(n, eps)
    n = int(n)
    rng = np.random.default_rng(seed)
    angles = _circle_angles(n, rng)
    phase = rng.uniform(0.0, 2.0 * math.pi)

    inner = _planar_circle(R, angles)
    outer = _planar_circle(R + delta, angles)

    if amplitude:
        outer[:, 2] = amplitude * np.sin(frequency * angles + phase)

    sigma = _ruled_annulus(inner, outer)
    _check_area(sigma, eps)

    if amplitude:
        _check_embedded(sigma)

    parameters = {
        "R": float(R),
        "delta": float(delta),
        "n": n,
        "eps": float(eps),
    }

    if generator != "offset":
        parameters.update(amplitude=float(amplitude), frequency=frequency)

    log.debug("Generated the %s instance %s.", generator, parameters)
    return Instance(
        DiscreteCurve(inner), DiscreteCurve(outer), sigma, eps,
        generator=generator, seed=seed, parameters=parameters
    )


def gen_shortcut(R, eps, n, seed=DEFAULT_SEED, width=2.0, share=0.5):
    """Generate a circle with a bump and the circle shortcutting it.

    The first curve is the circle of radius R pushed outwards by a
    smooth bump of the half width given in arc length. The second
    curve is the circle with a slightly smaller radius, so it is
    shorter than the first one. The bump encloses the given share
    of the area budget.

    :param R: a radius of the circle
    :param eps: the turning and area bound
    :param n: a number of points of each curve
    :param seed: a seed of the position of the bump
    :param width: a half width of the bump
    :param share: a share of the area budget enclosed by the bump
    :return: an instance of Instance
    :raise GeneratorError: if the parameters are rejected
    """
    _check_radius(R)

    if not 0 < share < 1 or not 0 < width < math.pi * R:
        raise GeneratorError(
            "Invalid bump: width = {}, share = {}.".format(width, share)
        )

    _check_points(n, eps)
    n = int(n)
    rng = np.random.default_rng(seed)
    angles = _circle_angles(n, rng)
    center = rng.uniform(0.0, 2.0 * math.pi)

    # The profile cos^4 integrates to 3/4 over [-1, 1].
    height = share * eps ** 2 / (0.75 * width)
    delta = 0.5 * (1.0 - share) * eps ** 2 / (2.0 * math.pi * R)
    offset = (angles - center + math.pi) % (2.0 * math.pi) - math.pi
    u = np.clip(offset * R / width, -1.0, 1.0)
    bump = height * np.cos(0.5 * math.pi * u) ** 4

    outer = _planar_circle(R, angles) * (1.0 + bump / R)[:, None]
    inner = _planar_circle(R - delta, angles)

    sigma = _ruled_annulus(outer, inner)
    _check_area(sigma, eps)

    parameters = {
        "R": float(R),
        "eps": float(eps),
        "n": n,
        "width": float(width),
        "share": float(share),
    }

    log.debug("Generated the shortcut instance %s.", parameters)
    return Instance(
        DiscreteCurve(outer), DiscreteCurve(inner), sigma, eps,
        generator="shortcut", seed=seed, parameters=parameters
    )


class Family(ReportData):
    """Description of a family of instances parametrized by eps.

    The radius is radius_factor / eps. The offset encloses the share
    delta_share of the area budget and the wiggle amplitude is the
    multiple amplitude of the same width.
    """

    def __init__(self):
        self._name = "offset"
        self._radius_factor = 2.0
        self._points_per_unit = 2.0
        self._delta_share = 0.25
        self._amplitude = 0.0
        self._frequency = 0

    @property
    def name(self) -> Str:
        """Name of the generator."""
        return self._name

    @name.setter
    def name(self, value):
        self._name = value

    @property
    def radius_factor(self) -> Double:
        return self._radius_factor

    @radius_factor.setter
    def radius_factor(self, value):
        self._radius_factor = value

    @property
    def points_per_unit(self) -> Double:
        """Points of a curve per unit of length."""
        return self._points_per_unit

    @points_per_unit.setter
    def points_per_unit(self, value):
        self._points_per_unit = value

    @property
    def delta_share(self) -> Double:
        return self._delta_share

    @delta_share.setter
    def delta_share(self, value):
        self._delta_share = value

    @property
    def amplitude(self) -> Double:
        return self._amplitude

    @amplitude.setter
    def amplitude(self, value):
        self._amplitude = value

    @property
    def frequency(self) -> Int:
        return self._frequency

    @frequency.setter
    def frequency(self, value):
        self._frequency = value


def generate_family(family, eps, seed=DEFAULT_SEED):
    """Generate the member of a family for the given eps.

    :param family: an instance of Family
    :param eps: the turning and area bound
    :param seed: a seed of the generator
    :return: an instance of Instance
    :raise GeneratorError: if the parameters are rejected
    """
    if family.name not in FAMILY_NAMES:
        raise GeneratorError("Unknown family '{}'.".format(family.name))

    if not eps > 0:
        raise GeneratorError(
            "The bound must be positive: eps = {}.".format(eps)
        )

    R = family.radius_factor / eps
    n = int(math.ceil(2.0 * math.pi * R * family.points_per_unit))
    delta = family.delta_share * eps ** 2 / (2.0 * math.pi * R)

    if family.name == "offset":
        return gen_offset_annulus(R, delta, n, eps, seed)

    if family.name == "wiggly":
        return gen_wiggly(
            R, delta, family.amplitude * delta / family.delta_share,
            family.frequency, n, eps, seed
        )

    return gen_shortcut(R, eps, n, seed)
