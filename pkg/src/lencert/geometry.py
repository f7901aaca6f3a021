#
# Curves, meshes and the hypothesis checks
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
from scipy.spatial import cKDTree
from scipy.spatial.distance import directed_hausdorff

from lencert.constants import TOL_BOUNDARY_FACTOR, TURNING_SAMPLES_PER_UNIT, \
    EPS_THEOREM_BOUND, MIN_LENGTH, LONG_CURVE_LENGTH, SHORT_SEGMENT_LENGTH, \
    SHORT_SEGMENT_FACTOR, TANGENT_ESTIMATE_REACH, ENDPOINT_GAMMA0, \
    ENDPOINT_GAMMA1
from lencert.error import LencertError
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int

__all__ = [
    "CurveError",
    "CurveRangeError",
    "MeshError",
    "BoundaryMismatchError",
    "as_vec3",
    "DiscreteCurve",
    "TriMesh",
    "AnnulusSurface",
    "arc_length",
    "eval_point",
    "tangent",
    "TurningReport",
    "check_turning_condition",
    "TangentEstimateReport",
    "check_tangent_estimates",
    "count_short_segments",
    "HypothesisReport",
    "check_hypotheses",
    "mesh_self_intersections",
]

log = logging.getLogger(__name__)


class CurveError(LencertError):
    """Invalid curve."""
    pass


class CurveRangeError(CurveError):
    """Parameter outside of an open curve."""
    pass


class MeshError(LencertError):
    """Invalid triangle mesh."""
    pass


class BoundaryMismatchError(LencertError):
    """Boundary loops don't match the curves."""
    pass


def as_vec3(value):
    """Convert a value to a finite vector in R^3.

    :param value: a sequence of three numbers
    :return: a numpy array of shape (3,)
    :raise CurveError: if the value is not a finite 3-vector
    """
    vector = np.asarray(value, dtype=float)

    if vector.shape != (3, ) or not np.all(np.isfinite(vector)):
        raise CurveError("Invalid vector '{}'.".format(value))

    return vector


def _as_points(points):
    """Convert points to a finite array of shape (n, 3)."""
    points = np.array(points, dtype=float)

    if points.ndim != 2 or points.shape[1] != 3:
        raise CurveError(
            "Invalid shape '{}' of points.".format(points.shape)
        )

    if not np.all(np.isfinite(points)):
        raise CurveError("Points are not finite.")

    return points


class DiscreteCurve(object):
    """A polyline with the arc-length parametrization.

    A closed curve is evaluated periodically with the period equal
    to its length. Chords may be given explicitly, which is how
    periodic charts describe curves that wrap around the box, and
    chord lengths may be given in a metric other than the Euclidean
    one.

    .. code-block:: python

        curve = DiscreteCurve(points, closed=True)
        curve.eval_point(0.5 * curve.total_length)
    """

    __slots__ = [
        "_points",
        "_closed",
        "_chords",
        "_lengths",
        "_directions",
        "_cumulative",
        "_total_length",
        "_tree"
    ]

    def __init__(self, points, closed=True, chords=None, chord_lengths=None):
        """Create a new curve.

        :param points: an array of shape (n, 3)
        :param closed: True if the curve is a loop
        :param chords: displacement vectors of the segments or None
        :param chord_lengths: lengths of the segments or None
        :raise CurveError: if the curve is not valid
        """
        points = _as_points(points)

        if closed and len(points) > 3 and chords is None \
                and np.array_equal(points[0], points[-1]):
            points = points[:-1]

        minimum = 3 if closed else 2

        if len(points) < minimum:
            raise CurveError(
                "A curve needs at least {} points.".format(minimum)
            )

        if chords is None:
            following = np.roll(points, -1, axis=0) if closed else points[1:]
            chords = following - points[:len(following)]

        chords = np.array(chords, dtype=float)
        expected = len(points) if closed else len(points) - 1

        if chords.shape != (expected, 3):
            raise CurveError("Invalid shape of chords.")

        euclidean = np.linalg.norm(chords, axis=1)

        if chord_lengths is None:
            chord_lengths = euclidean

        chord_lengths = np.array(chord_lengths, dtype=float)

        if np.any(euclidean <= 0) or np.any(chord_lengths <= 0):
            raise CurveError("Consecutive points must be distinct.")

        self._points = points
        self._closed = bool(closed)
        self._chords = chords
        self._lengths = chord_lengths
        self._directions = chords / euclidean[:, None]
        self._total_length = math.fsum(chord_lengths)

        cumulative = np.concatenate([[0.0], np.cumsum(chord_lengths)])
        cumulative[-1] = self._total_length
        self._cumulative = cumulative
        self._tree = None

        for array in (self._points, self._chords, self._lengths,
                      self._directions, self._cumulative):
            array.setflags(write=False)

    @property
    def points(self):
        """Vertices of the polyline."""
        return self._points

    @property
    def closed(self):
        """Is the curve a loop?"""
        return self._closed

    @property
    def size(self):
        """Number of vertices."""
        return len(self._points)

    @property
    def chords(self):
        """Displacement vectors of the segments."""
        return self._chords

    @property
    def chord_lengths(self):
        """Lengths of the segments."""
        return self._lengths

    @property
    def directions(self):
        """Unit chord directions of the segments."""
        return self._directions

    @property
    def cumulative_arclength(self):
        """Arc length at the start of each segment and at the end."""
        return self._cumulative

    @property
    def total_length(self):
        """Length of the polyline."""
        return self._total_length

    def wrap(self, s):
        """Map parameters to the parameter domain.

        The curve is evaluated at the wrapped parameters, so the points
        at s and s + L agree only up to the rounding of the modulo.
        Wrapping a wrapped parameter returns it unchanged.

        :param s: a real or an array of reals
        :return: an array of parameters in [0, L]
        :raise CurveRangeError: if an open curve is evaluated outside [0, L]
        """
        s = np.asarray(s, dtype=float)
        length = self._total_length

        if not self._closed:
            if np.any(s < 0) or np.any(s > length):
                raise CurveRangeError(
                    "Parameter is out of range [0, {}].".format(length)
                )

            return s

        wrapped = np.mod(s, length)
        return np.where(wrapped >= length, 0.0, wrapped)

    def _locate(self, s):
        """Return wrapped parameters, segment indices and fractions."""
        wrapped = self.wrap(s)
        count = len(self._lengths)
        index = np.searchsorted(self._cumulative, wrapped, side="right") - 1
        index = np.clip(index, 0, count - 1)
        fraction = (wrapped - self._cumulative[index]) / self._lengths[index]
        return wrapped, index, np.clip(fraction, 0.0, 1.0)

    def eval_point(self, s):
        """Evaluate the curve at the arc-length parameter s.

        :param s: a real or an array of reals
        :return: a point or an array of points
        """
        _, index, fraction = self._locate(s)
        return self._points[index] + fraction[..., None] * self._chords[index]

    def tangent(self, s):
        """Evaluate the unit tangent at the arc-length parameter s.

        The tangent is the chord direction inside a segment. At a vertex
        it is the normalized sum of the adjacent chord directions.

        :param s: a real or an array of reals
        :return: a unit vector or an array of unit vectors
        """
        wrapped, index, _ = self._locate(s)
        count = len(self._lengths)
        directions = self._directions[index]

        at_vertex = wrapped == self._cumulative[index]

        if not self._closed:
            at_vertex &= index > 0

        previous = self._directions[(index - 1) % count]
        bisector = previous + directions
        norm = np.linalg.norm(bisector, axis=-1)
        use = at_vertex & (norm > 1e-12)

        safe = np.where(norm > 1e-12, norm, 1.0)
        bisector = bisector / safe[..., None]
        return np.where(use[..., None], bisector, directions)

    def arc_distance(self, s1, s2):
        """Distance of two parameters along the curve.

        :param s1: a real or an array of reals
        :param s2: a real or an array of reals
        :return: the arc-length distance
        """
        difference = np.abs(np.asarray(s1) - np.asarray(s2))

        if not self._closed:
            return difference

        difference = np.mod(difference, self._total_length)
        return np.minimum(difference, self._total_length - difference)

    def reversed(self):
        """Return the curve traversed backwards.

        :return: a new curve with the same length
        """
        if not self._closed:
            return DiscreteCurve(
                self._points[::-1],
                closed=False,
                chords=-self._chords[::-1],
                chord_lengths=self._lengths[::-1]
            )

        points = np.roll(self._points[::-1], 1, axis=0)
        return DiscreteCurve(
            points,
            closed=True,
            chords=-self._chords[::-1],
            chord_lengths=self._lengths[::-1]
        )

    def project(self, points):
        """Project points to the polyline.

        The nearest vertex is found first, then the two segments
        adjacent to it are measured.

        :param points: an array of shape (m, 3)
        :return: a tuple of Euclidean distances and arc-length parameters
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self._tree is None:
            self._tree = cKDTree(self._points)

        _, nearest = self._tree.query(points)
        count = len(self._lengths)
        best = np.linalg.norm(points - self._points[nearest], axis=1)
        parameter = self._cumulative[nearest].copy()

        for offset in (-1, 0):
            segment = nearest + offset

            if self._closed:
                segment = segment % count
                valid = np.ones(len(points), dtype=bool)
            else:
                valid = (segment >= 0) & (segment < count)
                segment = np.clip(segment, 0, count - 1)

            start = self._points[segment]
            chord = self._chords[segment]
            weight = np.einsum("ij,ij->i", points - start, chord)
            weight = np.clip(weight / np.einsum("ij,ij->i", chord, chord),
                             0.0, 1.0)
            distance = np.linalg.norm(points - start - weight[:, None] * chord,
                                      axis=1)
            closer = valid & (distance < best)
            best = np.where(closer, distance, best)
            parameter = np.where(
                closer,
                self._cumulative[segment] + weight * self._lengths[segment],
                parameter
            )

        return best, parameter

    def distance(self, points):
        """Euclidean distance of points to the polyline."""
        return self.project(points)[0]

    def __repr__(self):
        return "DiscreteCurve(size={}, closed={}, length={})".format(
            self.size, self._closed, self._total_length
        )


def arc_length(curve):
    """Return the total length of the polyline.

    :param curve: a discrete curve
    :return: a length
    """
    return curve.total_length


def eval_point(curve, s):
    """Evaluate the curve at the arc-length parameter s."""
    return curve.eval_point(s)


def tangent(curve, s):
    """Evaluate the unit tangent of the curve at s."""
    return curve.tangent(s)


class TriMesh(object):
    """A triangle mesh with detected boundary loops."""

    __slots__ = [
        "_vertices",
        "_triangles",
        "_areas",
        "_normals",
        "_boundary_loops",
        "_vertex_loop",
        "_edge_loop",
        "_centroids",
        "_reach",
        "_tree"
    ]

    def __init__(self, vertices, triangles):
        """Create a new mesh.

        :param vertices: an array of shape (n, 3)
        :param triangles: an integer array of shape (m, 3)
        :raise MeshError: if the mesh is not valid
        """
        try:
            vertices = _as_points(vertices)
        except CurveError as e:
            raise MeshError(str(e)) from None

        triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)

        if not len(triangles):
            raise MeshError("The mesh has no triangles.")

        if np.any(triangles < 0) or np.any(triangles >= len(vertices)):
            raise MeshError("Triangle indices are out of range.")

        corners = vertices[triangles]
        cross = np.cross(corners[:, 1] - corners[:, 0],
                         corners[:, 2] - corners[:, 0])
        doubled = np.linalg.norm(cross, axis=1)

        if np.any(doubled <= 0):
            raise MeshError("Triangle {} is degenerate.".format(
                int(np.argmax(doubled <= 0))
            ))

        self._vertices = vertices
        self._triangles = triangles
        self._areas = 0.5 * doubled
        self._normals = cross / doubled[:, None]
        self._boundary_loops = self._find_boundary_loops()

        self._vertex_loop = np.full(len(vertices), -1, dtype=np.int64)
        self._centroids = corners.mean(axis=1)
        self._reach = float(np.max(np.linalg.norm(
            corners - self._centroids[:, None], axis=2
        )))
        self._tree = None
        self._edge_loop = {}

        for number, loop in enumerate(self._boundary_loops):
            self._vertex_loop[loop] = number

            for a, b in zip(loop.tolist(), np.roll(loop, -1).tolist()):
                self._edge_loop[(min(a, b), max(a, b))] = number

    def _find_boundary_loops(self):
        """Chain boundary edges into loops."""
        t = self._triangles
        directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        undirected = np.sort(directed, axis=1)
        keys, inverse, counts = np.unique(
            undirected, axis=0, return_inverse=True, return_counts=True
        )
        inverse = inverse.reshape(-1)

        if np.any(counts > 2):
            raise MeshError("The mesh has a non-manifold edge.")

        boundary = directed[counts[inverse] == 1]
        successor = {}

        for a, b in boundary.tolist():
            if a in successor:
                raise MeshError(
                    "Boundary vertex {} is not manifold.".format(a)
                )
            successor[a] = b

        loops = []

        while successor:
            start = min(successor)
            loop = [start]
            current = successor.pop(start)

            while current != start:
                if current not in successor:
                    raise MeshError("Boundary edges don't form loops.")

                loop.append(current)
                current = successor.pop(current)

            loops.append(np.array(loop, dtype=np.int64))

        return loops

    @property
    def vertices(self):
        """Vertices of the mesh."""
        return self._vertices

    @property
    def triangles(self):
        """Vertex indices of the triangles."""
        return self._triangles

    @property
    def triangle_areas(self):
        """Areas of the triangles."""
        return self._areas

    @property
    def triangle_normals(self):
        """Unit normals of the triangles."""
        return self._normals

    @property
    def area(self):
        """Total area of the mesh."""
        return math.fsum(self._areas)

    @property
    def boundary_loops(self):
        """Boundary loops as arrays of vertex indices."""
        return self._boundary_loops

    @property
    def diameter(self):
        """Diagonal of the bounding box."""
        extent = self._vertices.max(axis=0) - self._vertices.min(axis=0)
        return float(np.linalg.norm(extent))

    @property
    def centroids(self):
        """Centroids of the triangles."""
        return self._centroids

    @property
    def reach(self):
        """Largest distance of a triangle corner to its centroid."""
        return self._reach

    def triangles_near(self, points, radius):
        """Indices of triangles that may come within radius of the points.

        :param points: an array of shape (m, 3) or a point
        :param radius: a distance
        :return: a sorted array of triangle indices
        """
        if self._tree is None:
            self._tree = cKDTree(self._centroids)

        found = self._tree.query_ball_point(
            np.atleast_2d(points), radius + self._reach
        )
        indices = set()

        for group in found:
            indices.update(group)

        return np.array(sorted(indices), dtype=np.int64)

    def vertex_loop(self, vertices):
        """Boundary loop of the given vertices, -1 for interior ones."""
        return self._vertex_loop[vertices]

    def edge_loop(self, a, b):
        """Boundary loop of the edge (a, b) or -1."""
        return self._edge_loop.get((min(a, b), max(a, b)), -1)

    def __repr__(self):
        return "TriMesh(vertices={}, triangles={}, loops={})".format(
            len(self._vertices), len(self._triangles),
            len(self._boundary_loops)
        )


class AnnulusSurface(object):
    """A triangulated annulus with two labeled boundary loops."""

    __slots__ = ["_mesh", "_labels"]

    def __init__(self, mesh, labels=(ENDPOINT_GAMMA0, ENDPOINT_GAMMA1)):
        """Create a new annulus.

        :param mesh: a triangle mesh
        :param labels: labels of the first and the second loop
        :raise MeshError: if the mesh doesn't have two boundary loops
        """
        if len(mesh.boundary_loops) != 2:
            raise MeshError(
                "An annulus has two boundary loops, not {}.".format(
                    len(mesh.boundary_loops)
                )
            )

        self._mesh = mesh
        self._labels = tuple(labels)

    @property
    def mesh(self):
        """The triangle mesh."""
        return self._mesh

    @property
    def loop0(self):
        """Vertices of the loop labeled as the first curve."""
        return self._mesh.boundary_loops[self._labels.index(ENDPOINT_GAMMA0)]

    @property
    def loop1(self):
        """Vertices of the loop labeled as the second curve."""
        return self._mesh.boundary_loops[self._labels.index(ENDPOINT_GAMMA1)]

    @property
    def labels(self):
        """Labels of the boundary loops in the mesh order."""
        return self._labels

    @property
    def area(self):
        """Area of the annulus."""
        return self._mesh.area

    def loop_label(self, number):
        """Label of the boundary loop with the given number."""
        return self._labels[number]

    def match(self, curve0, curve1):
        """Label the loops by Hausdorff distance to the curves.

        :param curve0: the first curve
        :param curve1: the second curve
        :return: a relabeled annulus
        :raise BoundaryMismatchError: if both loops match the same curve
        """
        choices = []

        for loop in self._mesh.boundary_loops:
            points = self._mesh.vertices[loop]
            d0 = directed_hausdorff(points, curve0.points)[0]
            d1 = directed_hausdorff(points, curve1.points)[0]
            choices.append(ENDPOINT_GAMMA0 if d0 <= d1 else ENDPOINT_GAMMA1)

        if choices[0] == choices[1]:
            raise BoundaryMismatchError(
                "Both boundary loops match '{}'.".format(choices[0])
            )

        return AnnulusSurface(self._mesh, labels=choices)

    def __repr__(self):
        return "AnnulusSurface(mesh={}, area={})".format(
            self._mesh, self.area
        )


class TurningReport(ReportData):
    """Result of the bounded turning check."""

    def __init__(self):
        self._max_deviation = 0.0
        self._window = 1.0
        self._eps = 0.0
        self._ok = False

    @property
    def max_deviation(self) -> Double:
        """Largest sampled |T(x) - T(y)|."""
        return self._max_deviation

    @max_deviation.setter
    def max_deviation(self, value):
        self._max_deviation = value

    @property
    def window(self) -> Double:
        return self._window

    @window.setter
    def window(self, value):
        self._window = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def ok(self) -> Bool:
        return self._ok

    @ok.setter
    def ok(self, value):
        self._ok = value


def _sample_parameters(curve, spacing):
    """Sample parameters of a curve with at most the given spacing."""
    length = curve.total_length
    count = max(int(math.ceil(length / spacing)), 1)

    if curve.closed:
        return np.arange(count) * (length / count)

    return np.linspace(0.0, length, count + 1)


def _offsets(window, spacing):
    """Offsets that are multiples of the spacing up to the window."""
    count = int(math.floor(window / spacing + 1e-9))

    if count < 1:
        return np.array([window])

    return np.arange(1, count + 1) * spacing


def check_turning_condition(curve, eps, window=1.0,
                            samples_per_unit=TURNING_SAMPLES_PER_UNIT):
    """Check the bounded turning condition of a curve.

    Sample pairs of parameters with the arc-length distance at most
    window and measure the largest difference of unit tangents.
    Offsets are multiples of a fixed spacing, so enlarging the window
    only adds pairs.

    :param curve: a discrete curve
    :param eps: a bound of the deviation
    :param window: a maximal arc-length distance of a pair
    :param samples_per_unit: a number of samples per unit length
    :return: a turning report
    """
    spacing = 1.0 / samples_per_unit
    s = _sample_parameters(curve, spacing)
    first = curve.tangent(s)
    deviation = 0.0

    for offset in _offsets(window, spacing):
        if curve.closed:
            second = curve.tangent(s + offset)
            difference = second - first
        else:
            valid = s + offset <= curve.total_length
            if not np.any(valid):
                break
            second = curve.tangent(s[valid] + offset)
            difference = second - first[valid]

        deviation = max(deviation, float(np.max(
            np.linalg.norm(difference, axis=1)
        )))

    report = TurningReport()
    report.max_deviation = deviation
    report.window = float(window)
    report.eps = float(eps)
    report.ok = deviation <= eps

    log.debug("Turning deviation %s over window %s.", deviation, window)
    return report


class TangentEstimateReport(ReportData):
    """Result of the arc-length estimates audit."""

    def __init__(self):
        self._position_deviation = 0.0
        self._tangent_deviation = 0.0
        self._reach = 0.0

    @property
    def position_deviation(self) -> Double:
        """Largest |γ(s) - γ(s0) - (s - s0)T(s0)|."""
        return self._position_deviation

    @position_deviation.setter
    def position_deviation(self, value):
        self._position_deviation = value

    @property
    def tangent_deviation(self) -> Double:
        """Largest |T(s) - T(s0)|."""
        return self._tangent_deviation

    @tangent_deviation.setter
    def tangent_deviation(self, value):
        self._tangent_deviation = value

    @property
    def reach(self) -> Double:
        return self._reach

    @reach.setter
    def reach(self, value):
        self._reach = value


def check_tangent_estimates(curve, reach=TANGENT_ESTIMATE_REACH,
                            base_spacing=1.0, offset_spacing=0.5):
    """Audit the arc-length estimates around sampled base points.

    The audit measures how far the curve leaves its tangent line
    and how far the tangent turns within the reach. A closed curve
    is measured at most half way around.

    :param curve: a discrete curve
    :param reach: a maximal parameter distance
    :param base_spacing: a spacing of the base points
    :param offset_spacing: a spacing of the offsets
    :return: a tangent estimate report
    """
    length = curve.total_length
    reach = min(reach, 0.5 * length) if curve.closed else min(reach, length)
    base = _sample_parameters(curve, base_spacing)
    origin = curve.eval_point(base)
    direction = curve.tangent(base)

    position = 0.0
    turning = 0.0
    steps = np.arange(1, int(math.floor(reach / offset_spacing)) + 1)

    for offset in np.concatenate([steps, -steps]) * offset_spacing:
        s = base + offset

        if curve.closed:
            valid = slice(None)
        else:
            valid = (s >= 0) & (s <= length)
            if not np.any(valid):
                continue

        points = curve.eval_point(s[valid])
        expected = origin[valid] + offset * direction[valid]
        position = max(position, float(np.max(
            np.linalg.norm(points - expected, axis=1)
        )))
        turning = max(turning, float(np.max(np.linalg.norm(
            curve.tangent(s[valid]) - direction[valid], axis=1
        ))))

    report = TangentEstimateReport()
    report.position_deviation = position
    report.tangent_deviation = turning
    report.reach = float(reach)
    return report


def count_short_segments(curve, eps, base_spacing=1.0, length_spacing=0.5):
    """Count sampled sub-segments that close up too early.

    A sub-segment of length in [1, 50) whose end-points are within
    10 eps of each other contradicts the bounded turning condition.

    :param curve: a discrete curve
    :param eps: a turning bound
    :return: a number of violating samples
    """
    total = curve.total_length
    upper = min(SHORT_SEGMENT_LENGTH, total - MIN_LENGTH) \
        if curve.closed else min(SHORT_SEGMENT_LENGTH, total)
    lengths = np.arange(MIN_LENGTH, upper, length_spacing)

    if not len(lengths):
        return 0

    base = _sample_parameters(curve, base_spacing)
    start = curve.eval_point(base)
    count = 0

    for length in lengths:
        s = base + length

        if curve.closed:
            valid = slice(None)
        else:
            valid = s <= total

        end = curve.eval_point(s[valid])
        distance = np.linalg.norm(end - start[valid], axis=1)
        count += int(np.count_nonzero(distance <= SHORT_SEGMENT_FACTOR * eps))

    return count


class HypothesisReport(ReportData):
    """Result of the hypothesis checks of an instance."""

    def __init__(self):
        self._eps = 0.0
        self._turning = TurningReport()
        self._estimates = TangentEstimateReport()
        self._length0 = 0.0
        self._length1 = 0.0
        self._length_ok = False
        self._boundary_deviation0 = 0.0
        self._boundary_deviation1 = 0.0
        self._boundary_tolerance = 0.0
        self._boundary_ok = False
        self._area = 0.0
        self._area_ok = False
        self._eps_in_theorem_range = False
        self._length_at_least_100 = False
        self._short_segment_violations = 0
        self._consequences_consistent = True
        self._passed = False

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def turning(self) -> TurningReport:
        """The bounded turning check of the first curve."""
        return self._turning

    @turning.setter
    def turning(self, value):
        self._turning = value

    @property
    def estimates(self) -> TangentEstimateReport:
        """The arc-length estimates of the first curve."""
        return self._estimates

    @estimates.setter
    def estimates(self, value):
        self._estimates = value

    @property
    def length0(self) -> Double:
        return self._length0

    @length0.setter
    def length0(self, value):
        self._length0 = value

    @property
    def length1(self) -> Double:
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
    def eps_in_theorem_range(self) -> Bool:
        """Is eps below the bound required by the theorem?"""
        return self._eps_in_theorem_range

    @eps_in_theorem_range.setter
    def eps_in_theorem_range(self, value):
        self._eps_in_theorem_range = value

    @property
    def length_at_least_100(self) -> Bool:
        return self._length_at_least_100

    @length_at_least_100.setter
    def length_at_least_100(self, value):
        self._length_at_least_100 = value

    @property
    def short_segment_violations(self) -> Int:
        """Sampled sub-segments with too close end-points."""
        return self._short_segment_violations

    @short_segment_violations.setter
    def short_segment_violations(self, value):
        self._short_segment_violations = value

    @property
    def consequences_consistent(self) -> Bool:
        """Do the length consequences hold whenever they should?"""
        return self._consequences_consistent

    @consequences_consistent.setter
    def consequences_consistent(self, value):
        self._consequences_consistent = value

    @property
    def passed(self) -> Bool:
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def check_hypotheses(curve0, curve1, sigma, eps, window=1.0,
                     tol_factor=TOL_BOUNDARY_FACTOR):
    """Check the hypotheses of the length comparison.

    The pass verdict covers the bounded turning of the first curve,
    its length, the boundary match and the area of the annulus. The
    length consequences are audited as well and an instance which
    passes inside the theorem range but violates them is reported as
    inconsistent.

    :param curve0: the first curve
    :param curve1: the second curve
    :param sigma: an annulus bounded by the curves
    :param eps: a turning and area bound
    :param window: a window of the turning check
    :param tol_factor: a boundary tolerance relative to the length
    :return: a hypothesis report
    :raise BoundaryMismatchError: if the loops cannot be matched
    """
    sigma = sigma.match(curve0, curve1)
    mesh = sigma.mesh
    length0 = curve0.total_length
    tolerance = tol_factor * length0

    report = HypothesisReport()
    report.eps = float(eps)
    report.turning = check_turning_condition(curve0, eps, window)
    report.estimates = check_tangent_estimates(curve0)
    report.length0 = length0
    report.length1 = curve1.total_length
    report.length_ok = length0 >= MIN_LENGTH

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

    report.area = sigma.area
    report.area_ok = sigma.area <= eps ** 2

    report.eps_in_theorem_range = 0 < eps < EPS_THEOREM_BOUND
    report.length_at_least_100 = length0 >= LONG_CURVE_LENGTH - tolerance
    report.short_segment_violations = count_short_segments(curve0, eps)

    report.passed = report.turning.ok and report.length_ok \
        and report.boundary_ok and report.area_ok

    report.consequences_consistent = not (
        report.passed
        and report.eps_in_theorem_range
        and not (report.length_at_least_100
                 and report.short_segment_violations == 0)
    )

    if not report.consequences_consistent:
        log.warning("The instance passes but violates a length consequence.")

    log.info("Hypotheses %s for eps %s.",
             "pass" if report.passed else "fail", eps)
    return report


def _triangle_axes(a, b):
    """Candidate separating axes of triangle pairs."""
    edges_a = np.stack([a[:, 1] - a[:, 0], a[:, 2] - a[:, 1],
                        a[:, 0] - a[:, 2]], axis=1)
    edges_b = np.stack([b[:, 1] - b[:, 0], b[:, 2] - b[:, 1],
                        b[:, 0] - b[:, 2]], axis=1)
    normal_a = np.cross(edges_a[:, 0], edges_a[:, 1])
    normal_b = np.cross(edges_b[:, 0], edges_b[:, 1])

    axes = [normal_a, normal_b]

    for i in range(3):
        axes.append(np.cross(normal_a, edges_a[:, i]))
        axes.append(np.cross(normal_b, edges_b[:, i]))

        for j in range(3):
            axes.append(np.cross(edges_a[:, i], edges_b[:, j]))

    return axes


def mesh_self_intersections(mesh, tolerance=1e-12):
    """Count intersecting pairs of triangles without common vertices.

    Candidate pairs come from a proximity query on triangle centroids,
    each candidate is decided by the separating axis test.

    :param mesh: a triangle mesh
    :param tolerance: a relative separation tolerance
    :return: a number of intersecting pairs
    """
    corners = mesh.vertices[mesh.triangles]
    pairs = cKDTree(mesh.centroids).query_pairs(
        2 * mesh.reach, output_type="ndarray"
    )

    if not len(pairs):
        return 0

    first = mesh.triangles[pairs[:, 0]]
    second = mesh.triangles[pairs[:, 1]]
    shared = (first[:, :, None] == second[:, None, :]).any(axis=(1, 2))
    pairs = pairs[~shared]

    if not len(pairs):
        return 0

    a = corners[pairs[:, 0]]
    b = corners[pairs[:, 1]]
    gap = tolerance * max(mesh.diameter, 1.0)
    separated = np.zeros(len(pairs), dtype=bool)

    for axis in _triangle_axes(a, b):
        norm = np.linalg.norm(axis, axis=1)
        usable = norm > 1e-300
        axis = axis / np.where(usable, norm, 1.0)[:, None]
        project_a = np.einsum("pij,pj->pi", a, axis)
        project_b = np.einsum("pij,pj->pi", b, axis)
        apart = (project_a.max(axis=1) < project_b.min(axis=1) - gap) | \
            (project_b.max(axis=1) < project_a.min(axis=1) - gap)
        separated |= usable & apart

    return int(np.count_nonzero(~separated))
