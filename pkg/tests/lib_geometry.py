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

import numpy as np

from lencert.geometry import DiscreteCurve, TriMesh
from lencert.verify.generator import gen_offset_annulus

__all__ = [
    "circle_points",
    "circle_curve",
    "rectangle_curve",
    "strip_mesh",
    "offset_instance",
]


def circle_points(radius, count, z=0.0, phase=0.0):
    """Return points of a regular polygon inscribed in a circle."""
    angles = phase + 2 * math.pi * np.arange(count) / count
    return np.stack([
        radius * np.cos(angles),
        radius * np.sin(angles),
        np.full(count, z)
    ], axis=1)


def circle_curve(radius, count=None, z=0.0):
    """Return a closed polygon with about four points per unit."""
    if count is None:
        count = int(math.ceil(8 * math.pi * radius))

    return DiscreteCurve(circle_points(radius, count, z))


def rectangle_curve(width, height, spacing=None):
    """Return a closed rectangle in the plane z = 0.

    The long sides run along the x axis. The vertices are the corners
    unless a spacing of the subdivision is given.
    """
    corners = np.array([
        [0.0, 0.0, 0.0],
        [width, 0.0, 0.0],
        [width, height, 0.0],
        [0.0, height, 0.0],
    ])

    if spacing is None:
        return DiscreteCurve(corners)

    points = []

    for a, b in zip(corners, np.roll(corners, -1, axis=0)):
        count = max(int(math.ceil(np.linalg.norm(b - a) / spacing)), 1)

        for u in np.arange(count) / count:
            points.append(a + u * (b - a))

    return DiscreteCurve(np.array(points))


def strip_mesh(inner, outer):
    """Triangulate the strip between two polygons with the same size."""
    n = len(inner)
    vertices = np.concatenate([inner, outer])
    triangles = []

    for i in range(n):
        j = (i + 1) % n
        triangles.append([i, j, n + i])
        triangles.append([j, n + j, n + i])

    return TriMesh(vertices, np.array(triangles))


def offset_instance(eps, share=0.5, seed=0):
    """Return concentric circles of radius 2 / eps and their annulus.

    The annulus has the area share * eps^2.
    """
    radius = 2.0 / eps
    delta = share * eps ** 2 / (2 * math.pi * radius)
    count = int(math.ceil(4 * math.pi * radius))
    return gen_offset_annulus(radius, delta, count, eps, seed)
