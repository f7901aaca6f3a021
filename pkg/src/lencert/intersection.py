#
# Cross-sections of annuli by normal disks
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
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.stats import qmc

from lencert.constants import TRANSVERSALITY_ANGLE, RIM_TOLERANCE, \
    PLANE_TOLERANCE_FACTOR, ENDPOINT_TOLERANCE, SAMPLING_SLACK, C_FIT, \
    DISK_RADIUS, ENDPOINT_GAMMA0, ENDPOINT_GAMMA1, ENDPOINT_RIM, \
    ENDPOINT_INTERIOR, ENDPOINT_BOUNDARY, ENDPOINT_NONE
from lencert.error import LencertError
from lencert.geometry import AnnulusSurface
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int, List, Str

__all__ = [
    "NoComponentError",
    "IntersectionComponent",
    "IntersectionCurve",
    "disk_mesh_intersect",
    "component_containing",
    "count_s_candidates",
    "LambdaSample",
    "sample_window",
    "LambdaEstimate",
    "estimate_lambda",
    "CoareaAudit",
    "swath_area",
    "coarea_audit",
    "PhiImageReport",
    "phi_image_audit",
]

log = logging.getLogger(__name__)

# Triangle edges as pairs of corners.
_EDGES = ((0, 1), (1, 2), (2, 0))


class NoComponentError(LencertError):
    """No component of the intersection ends at the point."""
    pass


class IntersectionComponent(object):
    """A connected component of a cross-section."""

    __slots__ = ["_points", "_segments", "_length", "_ends", "_kinds"]

    def __init__(self, points, segments, length, ends, kinds):
        """Create a new component.

        :param points: points of the traced polyline
        :param segments: indices of the segments of the component
        :param length: the total length of the segments
        :param ends: points of the free ends
        :param kinds: kinds of the free ends
        """
        self._points = points
        self._segments = segments
        self._length = length
        self._ends = ends
        self._kinds = kinds

    @property
    def points(self):
        """Points of the traced polyline."""
        return self._points

    @property
    def segments(self):
        """Indices of the segments."""
        return self._segments

    @property
    def length(self):
        """Length of the component."""
        return self._length

    @property
    def ends(self):
        """Free end-points, empty for a closed loop."""
        return self._ends

    @property
    def kinds(self):
        """Kinds of the free end-points."""
        return self._kinds

    @property
    def closed(self):
        """Is the component a closed loop?"""
        return not self._ends

    def __repr__(self):
        return "IntersectionComponent(length={}, kinds={})".format(
            self._length, list(self._kinds)
        )


class IntersectionCurve(object):
    """The intersection of a disk with a triangle mesh."""

    __slots__ = ["_segments", "_components", "_transversal", "_flagged"]

    def __init__(self, segments, components, transversal, flagged):
        """Create a new intersection.

        :param segments: an array of shape (m, 2, 3)
        :param components: a list of components
        :param transversal: False if any crossing is degenerate
        :param flagged: indices of non-transversal triangles
        """
        self._segments = segments
        self._components = components
        self._transversal = transversal
        self._flagged = flagged

    @property
    def segments(self):
        """Crossing segments clipped to the disk."""
        return self._segments

    @property
    def components(self):
        """Connected components."""
        return self._components

    @property
    def transversal(self):
        """Is the intersection transversal?"""
        return self._transversal

    @property
    def flagged_triangles(self):
        """Triangles met in a non-transversal way."""
        return self._flagged

    @property
    def total_length(self):
        """Total length of the segments."""
        if not len(self._segments):
            return 0.0

        return math.fsum(np.linalg.norm(
            self._segments[:, 1] - self._segments[:, 0], axis=1
        ))

    def __repr__(self):
        return "IntersectionCurve(components={}, length={})".format(
            len(self._components), self.total_length
        )


def _crossings(disk, mesh, candidates, tolerance):
    """Compute the plane crossings of the candidate triangles.

    Edge crossings are evaluated from the lower vertex index, so
    both triangles of an edge produce the same point.
    """
    vertices = mesh.vertices
    triangles = mesh.triangles[candidates]
    distance = disk.plane_distance(vertices[triangles])
    sign = np.where(np.abs(distance) <= tolerance, 0, np.sign(distance))
    sign = sign.astype(np.int64)
    vertex_count = len(vertices)

    starts, ends, keys, owners, edges = [], [], [], [], []
    coplanar = []

    for number, triangle in enumerate(triangles.tolist()):
        signs = sign[number]
        zeros = [i for i in range(3) if signs[i] == 0]

        if len(zeros) == 3:
            coplanar.append(number)
            continue

        points = []

        if len(zeros) == 2:
            third = 3 - sum(zeros)
            a, b = triangle[zeros[0]], triangle[zeros[1]]

            if signs[third] < 0 and mesh.edge_loop(a, b) < 0:
                continue

            points = [(vertices[a], a, None), (vertices[b], b, None)]
            edges.append((min(a, b), max(a, b)))

        elif (signs > 0).any() and (signs < 0).any():
            for i in zeros:
                points.append((vertices[triangle[i]], triangle[i], None))

            for i, j in _EDGES:
                if signs[i] * signs[j] >= 0:
                    continue

                a, b = sorted((triangle[i], triangle[j]))
                da = disk.plane_distance(vertices[a])
                db = disk.plane_distance(vertices[b])
                weight = da / (da - db)
                point = vertices[a] + weight * (vertices[b] - vertices[a])
                key = vertex_count * (1 + a) + b
                points.append((point, key, (a, b)))

        if len(points) != 2:
            continue

        starts.append(points[0][0])
        ends.append(points[1][0])
        keys.append((points[0][1], points[1][1]))
        owners.append(candidates[number])

        for _, _, edge in points:
            if edge is not None:
                edges.append(edge)

    return starts, ends, keys, owners, edges, candidates[coplanar]


def _clip(disk, starts, ends):
    """Clip segments in the disk plane to the disk.

    :return: clipped end-points, kept mask and rim flags
    """
    center, normal = disk.center, disk.normal

    def project(points):
        offset = points - center
        return offset - (offset @ normal)[:, None] * normal

    q0, q1 = project(starts), project(ends)
    delta = q1 - q0
    a = np.einsum("ij,ij->i", delta, delta)
    b = 2.0 * np.einsum("ij,ij->i", q0, delta)
    c = np.einsum("ij,ij->i", q0, q0) - disk.radius ** 2
    discriminant = b * b - 4 * a * c
    root = np.sqrt(np.maximum(discriminant, 0.0))
    safe = np.where(a > 0, a, 1.0)

    low = np.where(a > 0, (-b - root) / (2 * safe), 0.0)
    high = np.where(a > 0, (-b + root) / (2 * safe), 1.0)
    kept = np.where(a > 0, discriminant > 0, c <= 0)

    low = np.maximum(low, 0.0)
    high = np.minimum(high, 1.0)
    kept &= low < high

    direction = ends - starts
    clipped_starts = starts + low[:, None] * direction
    clipped_ends = starts + high[:, None] * direction
    rims = np.stack([low > 0, high < 1], axis=1)
    return clipped_starts, clipped_ends, kept, rims


def _endpoint_kind(mesh, labels, key, point, rim, disk):
    """Classify a free end of a component by the mesh topology."""
    if rim or np.linalg.norm(point - disk.center) >= \
            disk.radius - RIM_TOLERANCE:
        return ENDPOINT_RIM

    vertex_count = len(mesh.vertices)

    if key < 0:
        return ENDPOINT_RIM

    if key < vertex_count:
        loop = int(mesh.vertex_loop(key))
    else:
        a, b = divmod(key, vertex_count)
        loop = mesh.edge_loop(a - 1, b)

    if loop < 0:
        return ENDPOINT_INTERIOR

    if loop < len(labels):
        return labels[loop]

    return ENDPOINT_BOUNDARY


def _chain(mesh, labels, disk, segments, keys, rims):
    """Chain segments with shared keys into components."""
    nodes, inverse = np.unique(keys.reshape(-1), return_inverse=True)
    inverse = inverse.reshape(-1, 2)
    count = len(nodes)

    graph = coo_matrix(
        (np.ones(len(inverse)), (inverse[:, 0], inverse[:, 1])),
        shape=(count, count)
    )
    _, labels_of_nodes = connected_components(graph, directed=False)
    degree = np.bincount(inverse.reshape(-1), minlength=count)

    positions = np.zeros((count, 3))
    positions[inverse[:, 1]] = segments[:, 1]
    positions[inverse[:, 0]] = segments[:, 0]
    rim_nodes = np.zeros(count, dtype=bool)
    rim_nodes[inverse[rims]] = True

    adjacency = {}

    for index, (u, v) in enumerate(inverse.tolist()):
        adjacency.setdefault(u, []).append((index, v))
        adjacency.setdefault(v, []).append((index, u))

    segment_lengths = np.linalg.norm(segments[:, 1] - segments[:, 0], axis=1)
    segment_labels = labels_of_nodes[inverse[:, 0]]
    components = []

    # Components are ordered by their first segment.
    _, first = np.unique(segment_labels, return_index=True)

    for label in segment_labels[np.sort(first)]:
        members = np.flatnonzero(segment_labels == label)
        component_nodes = np.flatnonzero(labels_of_nodes == label)
        free = [n for n in component_nodes.tolist() if degree[n] == 1]
        start = free[0] if free else int(inverse[members[0], 0])

        path = [start]
        visited = set()
        current = start

        while True:
            step = next(
                ((i, other) for i, other in adjacency[current]
                 if i not in visited),
                None
            )

            if step is None:
                break

            visited.add(step[0])
            current = step[1]
            path.append(current)

        kinds = tuple(
            _endpoint_kind(mesh, labels, int(nodes[n]), positions[n],
                           rim_nodes[n], disk)
            for n in free
        )

        components.append(IntersectionComponent(
            points=positions[path],
            segments=members,
            length=math.fsum(segment_lengths[members]),
            ends=[positions[n] for n in free],
            kinds=kinds
        ))

    return components


def disk_mesh_intersect(disk, mesh, labels=None):
    """Intersect a disk with a triangle mesh.

    Triangles crossing the disk plane produce segments, which are
    clipped to the disk and chained into components by the mesh
    edges and vertices they pass through. Nearly tangent triangles
    and boundary edges are flagged as non-transversal.

    .. code-block:: python

        curve = disk_mesh_intersect(disk_at(sc, s), sigma)
        curve.total_length

    :param disk: a disk
    :param mesh: a triangle mesh or an annulus
    :param labels: labels of the boundary loops or None
    :return: an instance of IntersectionCurve
    """
    if isinstance(mesh, AnnulusSurface):
        labels = mesh.labels
        mesh = mesh.mesh

    if labels is None:
        labels = (ENDPOINT_GAMMA0, ENDPOINT_GAMMA1)

    tolerance = PLANE_TOLERANCE_FACTOR * max(mesh.diameter, 1.0)
    candidates = mesh.triangles_near(disk.center, disk.radius)
    empty = IntersectionCurve(np.zeros((0, 2, 3)), [], True, [])

    if not len(candidates):
        return empty

    starts, ends, keys, owners, edges, coplanar = _crossings(
        disk, mesh, candidates, tolerance
    )

    limit = math.sin(TRANSVERSALITY_ANGLE)
    flagged = set(coplanar.tolist())

    for owner in owners:
        cross = np.cross(mesh.triangle_normals[owner], disk.normal)
        if np.linalg.norm(cross) < limit:
            flagged.add(owner)

    for a, b in edges:
        if mesh.edge_loop(a, b) < 0:
            continue

        direction = mesh.vertices[b] - mesh.vertices[a]
        direction = direction / np.linalg.norm(direction)

        if abs(np.dot(direction, disk.normal)) < limit:
            flagged.add(-1)

    transversal = not flagged
    flagged.discard(-1)

    if not starts:
        return IntersectionCurve(empty.segments, [], transversal,
                                 sorted(flagged))

    starts, ends, kept, rims = _clip(disk, np.array(starts), np.array(ends))
    keys = np.array(keys, dtype=np.int64)

    # Clipped ends get their own keys.
    rim_keys = -1 - np.arange(2 * len(keys)).reshape(-1, 2)
    keys = np.where(rims, rim_keys, keys)[kept]
    segments = np.stack([starts, ends], axis=1)[kept]
    rims = rims[kept]

    if not len(segments):
        return IntersectionCurve(empty.segments, [], transversal,
                                 sorted(flagged))

    components = _chain(mesh, labels, disk, segments, keys, rims)
    return IntersectionCurve(segments, components, transversal,
                             sorted(flagged))


def component_containing(curve, x, tolerance=ENDPOINT_TOLERANCE):
    """Find the component with a free end at x.

    :param curve: an intersection curve
    :param x: a point
    :param tolerance: a matching distance
    :return: a tuple of the component, its far end and the far kind
    :raise NoComponentError: if no component ends at x
    """
    best = None

    for component in curve.components:
        if len(component.ends) != 2:
            continue

        for i, end in enumerate(component.ends):
            distance = float(np.linalg.norm(end - x))

            if distance <= tolerance and (best is None or distance < best[0]):
                best = (distance, component, 1 - i)

    if best is None:
        raise NoComponentError("No component ends at '{}'.".format(
            np.asarray(x).tolist()
        ))

    _, component, far = best
    return component, component.ends[far], component.kinds[far]


def count_s_candidates(curve, eps):
    """Count short components with both ends on the first curve.

    Such a component bounds a small disk of the annulus together
    with an arc of the first curve.

    :param curve: an intersection curve
    :param eps: the turning bound
    :return: a number of candidates
    """
    return sum(
        1 for c in curve.components
        if c.kinds == (ENDPOINT_GAMMA0, ENDPOINT_GAMMA0)
        and c.length <= 2 * eps
    )


class LambdaSample(ReportData):
    """The cross-section of the annulus at a sampled point."""

    def __init__(self):
        self._t = 0.0
        self._length = 0.0
        self._transversal = True
        self._in_lambda = False
        self._phi_kind = ENDPOINT_NONE
        self._phi_point = []
        self._s_candidates = 0

    @property
    def t(self) -> Double:
        """Parameter of the sampled point."""
        return self._t

    @t.setter
    def t(self, value):
        self._t = value

    @property
    def length(self) -> Double:
        """Length of the cross-section."""
        return self._length

    @length.setter
    def length(self, value):
        self._length = value

    @property
    def transversal(self) -> Bool:
        return self._transversal

    @transversal.setter
    def transversal(self, value):
        self._transversal = value

    @property
    def in_lambda(self) -> Bool:
        return self._in_lambda

    @in_lambda.setter
    def in_lambda(self, value):
        self._in_lambda = value

    @property
    def phi_kind(self) -> Str:
        """Kind of the far end-point."""
        return self._phi_kind

    @phi_kind.setter
    def phi_kind(self, value):
        self._phi_kind = value

    @property
    def phi_point(self) -> List[Double]:
        """The far end-point or an empty list."""
        return self._phi_point

    @phi_point.setter
    def phi_point(self, value):
        self._phi_point = value

    @property
    def s_candidates(self) -> Int:
        return self._s_candidates

    @s_candidates.setter
    def s_candidates(self, value):
        self._s_candidates = value


def _window_parameters(J, n_samples, seed):
    """Scrambled Halton parameters in the window."""
    start, end = J
    sampler = qmc.Halton(d=1, scramble=True, seed=seed)
    return start + (end - start) * sampler.random(n_samples)[:, 0]


def sample_window(assignment, sigma, J, eps, n_samples, seed=0):
    """Intersect the assigned disks of sampled points with the annulus.

    :param assignment: a disk assignment
    :param sigma: an annulus
    :param J: a parameter window
    :param eps: the turning bound
    :param n_samples: a number of samples
    :param seed: a seed of the low-discrepancy sequence
    :return: a list of LambdaSample
    """
    curve = assignment.smoothed_curve.source
    samples = []

    for t in _window_parameters(J, n_samples, seed):
        x = curve.eval_point(t)
        section = disk_mesh_intersect(assignment.disk(t), sigma)

        sample = LambdaSample()
        sample.t = float(t)
        sample.length = section.total_length
        sample.transversal = section.transversal
        sample.in_lambda = section.transversal and sample.length <= eps
        sample.s_candidates = count_s_candidates(section, eps)

        if sample.in_lambda:
            try:
                _, point, kind = component_containing(section, x)
            except NoComponentError:
                log.debug("No component ends at the point %s.", t)
            else:
                sample.phi_kind = kind
                sample.phi_point = point.tolist()

        samples.append(sample)

    return samples


class LambdaEstimate(ReportData):
    """Sampled share of the window with short transversal sections."""

    def __init__(self):
        self._window_start = 0.0
        self._window_end = 0.0
        self._eps = 0.0
        self._fraction = 0.0
        self._slack = SAMPLING_SLACK
        self._samples = []
        self._passed = False

    @property
    def window_start(self) -> Double:
        return self._window_start

    @window_start.setter
    def window_start(self, value):
        self._window_start = value

    @property
    def window_end(self) -> Double:
        return self._window_end

    @window_end.setter
    def window_end(self, value):
        self._window_end = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def fraction(self) -> Double:
        return self._fraction

    @fraction.setter
    def fraction(self, value):
        self._fraction = value

    @property
    def slack(self) -> Double:
        return self._slack

    @slack.setter
    def slack(self, value):
        self._slack = value

    @property
    def samples(self) -> List[LambdaSample]:
        return self._samples

    @samples.setter
    def samples(self, value):
        self._samples = value

    @property
    def passed(self) -> Bool:
        """Is the fraction at least 1 - 2 eps - slack?"""
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def estimate_lambda(assignment, sigma, J, eps, n_samples, seed=0,
                    slack=SAMPLING_SLACK, samples=None):
    """Estimate the share of the window where the sections are short.

    :param assignment: a disk assignment
    :param sigma: an annulus
    :param J: a parameter window
    :param eps: the turning bound
    :param n_samples: a number of samples
    :param seed: a seed of the low-discrepancy sequence
    :param slack: an allowed sampling error
    :param samples: already computed samples or None
    :return: an instance of LambdaEstimate
    """
    if samples is None:
        samples = sample_window(assignment, sigma, J, eps, n_samples, seed)

    inside = sum(1 for s in samples if s.in_lambda)

    estimate = LambdaEstimate()
    estimate.window_start = float(J[0])
    estimate.window_end = float(J[1])
    estimate.eps = float(eps)
    estimate.fraction = inside / len(samples) if samples else 1.0
    estimate.slack = float(slack)
    estimate.samples = samples
    estimate.passed = estimate.fraction >= 1 - 2 * eps - slack

    if not estimate.passed:
        log.warning("Window %s has the fraction %s.", J, estimate.fraction)

    return estimate


class CoareaAudit(ReportData):
    """Sampled integral of the section lengths against the area."""

    def __init__(self):
        self._integral_est = 0.0
        self._area = 0.0
        self._swath_area = 0.0
        self._ratio = 0.0
        self._passed = True

    @property
    def integral_est(self) -> Double:
        """Estimated integral of the section lengths over the window."""
        return self._integral_est

    @integral_est.setter
    def integral_est(self, value):
        self._integral_est = value

    @property
    def area(self) -> Double:
        return self._area

    @area.setter
    def area(self, value):
        self._area = value

    @property
    def swath_area(self) -> Double:
        """Area of the annulus between the end leaves of the window."""
        return self._swath_area

    @swath_area.setter
    def swath_area(self, value):
        self._swath_area = value

    @property
    def ratio(self) -> Double:
        """The integral divided by the swath area."""
        return self._ratio

    @ratio.setter
    def ratio(self, value):
        self._ratio = value

    @property
    def passed(self) -> Bool:
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def _clip_polygon(polygon, point, normal):
    """Keep the part of a polygon with <p - point, normal> >= 0."""
    result = []
    count = len(polygon)

    for i in range(count):
        current, following = polygon[i], polygon[(i + 1) % count]
        dc = np.dot(current - point, normal)
        df = np.dot(following - point, normal)

        if dc >= 0:
            result.append(current)

        if dc * df < 0:
            weight = dc / (dc - df)
            result.append(current + weight * (following - current))

    return result


def _polygon_area(polygon):
    """Area of a planar polygon in space."""
    if len(polygon) < 3:
        return 0.0

    origin = polygon[0]
    total = np.zeros(3)

    for a, b in zip(polygon[1:-1], polygon[2:]):
        total += np.cross(a - origin, b - origin)

    return 0.5 * float(np.linalg.norm(total))


def swath_area(assignment, sigma, J):
    """Area of the annulus between the end leaves of the window.

    Triangles within a unit distance of the window are clipped to
    the slab between the planes of the first and the last disk.

    :param assignment: a disk assignment
    :param sigma: an annulus
    :param J: a parameter window
    :return: an area
    """
    mesh = sigma.mesh
    curve = assignment.smoothed_curve.source
    start, end = J
    count = max(int(math.ceil(2 * (end - start))), 1) + 1
    points = curve.eval_point(np.linspace(start, end, count))
    candidates = mesh.triangles_near(points, DISK_RADIUS)

    first = assignment.disk(start)
    last = assignment.disk(end)
    total = 0.0

    for corners in mesh.vertices[mesh.triangles[candidates]]:
        polygon = _clip_polygon(list(corners), first.center, first.normal)
        polygon = _clip_polygon(polygon, last.center, -last.normal)
        total += _polygon_area(polygon)

    return total


def coarea_audit(assignment, sigma, J, n_samples, eps=None, seed=0,
                 c_fit=C_FIT, samples=None):
    """Compare the integral of the section lengths with the area.

    :param assignment: a disk assignment
    :param sigma: an annulus
    :param J: a parameter window
    :param n_samples: a number of samples
    :param eps: the turning bound or None
    :param seed: a seed of the low-discrepancy sequence
    :param c_fit: the fitted constant of the bound
    :param samples: already computed samples or None
    :return: an instance of CoareaAudit
    """
    if samples is None:
        samples = sample_window(
            assignment, sigma, J, eps or 0.0, n_samples, seed
        )

    width = J[1] - J[0]
    lengths = [s.length for s in samples]

    audit = CoareaAudit()
    audit.integral_est = width * math.fsum(lengths) / len(lengths) \
        if lengths else 0.0
    audit.area = sigma.area
    audit.swath_area = swath_area(assignment, sigma, J)
    audit.ratio = audit.integral_est / audit.swath_area \
        if audit.swath_area > 0 else 0.0
    audit.passed = audit.integral_est <= \
        (1 + c_fit * (eps or 0.0)) * audit.area

    log.debug("Co-area audit of %s: %s against %s.", J,
              audit.integral_est, audit.swath_area)
    return audit


class PhiImageReport(ReportData):
    """Sampled image of the end-point map."""

    def __init__(self):
        self._window_measures = []
        self._total_measure = 0.0
        self._phi_count = 0
        self._on_gamma0 = 0
        self._on_gamma1 = 0
        self._coincident_pairs = 0
        self._injective = True

    @property
    def window_measures(self) -> List[Double]:
        """Measured image of each window."""
        return self._window_measures

    @window_measures.setter
    def window_measures(self, value):
        self._window_measures = value

    @property
    def total_measure(self) -> Double:
        return self._total_measure

    @total_measure.setter
    def total_measure(self, value):
        self._total_measure = value

    @property
    def phi_count(self) -> Int:
        return self._phi_count

    @phi_count.setter
    def phi_count(self, value):
        self._phi_count = value

    @property
    def on_gamma0(self) -> Int:
        """Images on the first curve."""
        return self._on_gamma0

    @on_gamma0.setter
    def on_gamma0(self, value):
        self._on_gamma0 = value

    @property
    def on_gamma1(self) -> Int:
        return self._on_gamma1

    @on_gamma1.setter
    def on_gamma1(self, value):
        self._on_gamma1 = value

    @property
    def coincident_pairs(self) -> Int:
        """Pairs of distinct samples with the same image."""
        return self._coincident_pairs

    @coincident_pairs.setter
    def coincident_pairs(self, value):
        self._coincident_pairs = value

    @property
    def injective(self) -> Bool:
        return self._injective

    @injective.setter
    def injective(self, value):
        self._injective = value


def _union_length(intervals, period):
    """Measure of a union of intervals on a circle."""
    pieces = []

    for a, b in intervals:
        shift = math.floor(a / period) * period
        a, b = a - shift, b - shift

        if b > period:
            pieces += [(a, period), (0.0, b - period)]
        else:
            pieces.append((a, b))

    if not pieces:
        return 0.0

    pieces.sort()
    total = 0.0
    current_start, current_end = pieces[0]

    for a, b in pieces[1:]:
        if a > current_end:
            total += current_end - current_start
            current_start, current_end = a, b
        else:
            current_end = max(current_end, b)

    return min(total + current_end - current_start, period)


def _image_intervals(t, u, spacing, period):
    """Intervals of the second curve covered between neighbour samples.

    Samples are joined when they are at most two sampling spacings
    apart, the image between them is the shorter arc of the circle.
    """
    order = np.argsort(t)
    t, u = t[order], u[order]
    intervals = []

    for i in range(len(t) - 1):
        if t[i + 1] - t[i] > 2 * spacing:
            continue

        step = (u[i + 1] - u[i] + 0.5 * period) % period - 0.5 * period
        intervals.append((u[i], u[i] + step) if step >= 0
                         else (u[i] + step, u[i]))

    return intervals


def phi_image_audit(windows, curve1, tolerance=ENDPOINT_TOLERANCE):
    """Audit the images of the end-point map.

    The images on the second curve are projected to its arc-length
    parameters. Neighbouring samples of a window cover the arc between
    their images and the union of the covered arcs is measured.

    :param windows: a list of lambda estimates
    :param curve1: the second curve
    :param tolerance: a distance of coincident images
    :return: an instance of PhiImageReport
    """
    report = PhiImageReport()
    period = curve1.total_length
    images = []
    measures = []

    for estimate in windows:
        width = estimate.window_end - estimate.window_start
        chosen = [
            s for s in estimate.samples if s.phi_kind == ENDPOINT_GAMMA1
        ]
        report.on_gamma0 += sum(
            1 for s in estimate.samples if s.phi_kind == ENDPOINT_GAMMA0
        )

        if len(chosen) < 2:
            measures.append(0.0)
            images.extend(s.phi_point for s in chosen)
            continue

        points = [s.phi_point for s in chosen]
        _, parameters = curve1.project(points)
        spacing = width / max(len(estimate.samples), 1)
        t = np.array([s.t for s in chosen])
        measures.append(_union_length(
            _image_intervals(t, parameters, spacing, period), period
        ))
        images.extend(points)

    report.window_measures = measures
    report.total_measure = math.fsum(measures)
    report.on_gamma1 = len(images)
    report.phi_count = report.on_gamma1 + report.on_gamma0

    if len(images) > 1:
        pairs = cKDTree(np.array(images)).query_pairs(tolerance)
        report.coincident_pairs = len(pairs)

    report.injective = report.coincident_pairs == 0
    return report
