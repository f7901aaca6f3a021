#
# Cutoff function and smoothing of polylines
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
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import comb

from lencert.constants import CUTOFF_HALF_WIDTH, CUTOFF_MAX_ORDER, C_CERT, \
    MIN_LENGTH, TURNING_SAMPLES_PER_UNIT
from lencert.error import LencertError
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int, List

__all__ = [
    "SmoothingError",
    "CutoffFunction",
    "make_cutoff",
    "blend_coefficients",
    "SmoothedCurve",
    "smooth",
    "boundary_gap",
    "ClosenessCertificate",
    "closeness_certificate",
    "sample_parameters",
]

log = logging.getLogger(__name__)

# Below this argument the transition function underflows to zero.
_UNDERFLOW_LIMIT = 1e-3

# Number of parameters evaluated at once.
_CHUNK_SIZE = 100000


class SmoothingError(LencertError):
    """The curve cannot be smoothed."""
    pass


@lru_cache(maxsize=None)
def _transition_polynomial(order):
    """Polynomial p with f^(n)(x) = p(1/x) exp(-1/x)."""
    if order == 0:
        return Polynomial([1.0])

    previous = _transition_polynomial(order - 1)
    return Polynomial([0.0, 0.0, 1.0]) * (previous - previous.deriv())


def _transition(x, order):
    """Derivative of f(x) = exp(-1/x) extended by zero."""
    x = np.asarray(x, dtype=float)
    inside = x > _UNDERFLOW_LIMIT
    safe = np.where(inside, x, 1.0)
    value = _transition_polynomial(order)(1.0 / safe) * np.exp(-1.0 / safe)
    return np.where(inside, value, 0.0)


class CutoffFunction(object):
    """A smooth monotone cutoff function.

    The function is 0 on (-inf, -1/4], 1 on [1/4, inf) and blends
    the two with the quotient f(x) / (f(x) + f(1 - x)) of the
    transition function f(x) = exp(-1/x). It is symmetric, so its
    value at zero is 1/2.
    """

    __slots__ = ["_max_order", "_half_width"]

    def __init__(self, max_order=CUTOFF_MAX_ORDER,
                 half_width=CUTOFF_HALF_WIDTH):
        """Create a new cutoff function.

        :param max_order: the highest available derivative
        :param half_width: the half width of the transition
        """
        self._max_order = max_order
        self._half_width = half_width

    @property
    def max_order(self):
        """The highest available derivative."""
        return self._max_order

    @property
    def half_width(self):
        """Half width of the transition interval."""
        return self._half_width

    def _step_derivatives(self, x, max_order):
        """Derivatives of the unit step S on [0, 1]."""
        numerator = [_transition(x, n) for n in range(max_order + 1)]
        mirrored = [_transition(1.0 - x, n) for n in range(max_order + 1)]
        denominator = [
            numerator[n] + (-1) ** n * mirrored[n]
            for n in range(max_order + 1)
        ]

        values = []

        for n in range(max_order + 1):
            value = numerator[n]

            for j in range(n):
                value = value - comb(n, j, exact=True) \
                    * values[j] * denominator[n - j]

            values.append(value / denominator[0])

        return values

    def derivatives(self, u, max_order=0):
        """Evaluate the cutoff and its derivatives.

        :param u: a real or an array of reals
        :param max_order: the highest derivative to evaluate
        :return: a list of arrays for orders 0 to max_order
        :raise SmoothingError: if the order is not available
        """
        if max_order > self._max_order:
            raise SmoothingError(
                "Derivative of order {} is not available.".format(max_order)
            )

        u = np.asarray(u, dtype=float)
        scale = 1.0 / (2.0 * self._half_width)
        x = scale * u + 0.5

        below = x <= 0.0
        above = x >= 1.0
        inner = np.clip(x, 0.0, 1.0)
        values = self._step_derivatives(inner, max_order)

        result = []

        for n, value in enumerate(values):
            outside = 1.0 if n == 0 else 0.0
            value = np.where(below, 0.0, value)
            value = np.where(above, outside, value)
            result.append(scale ** n * value)

        return result

    def __call__(self, u, order=0):
        """Evaluate a derivative of the cutoff.

        :param u: a real or an array of reals
        :param order: an order of the derivative
        :return: a real or an array of reals
        """
        return self.derivatives(u, order)[order]

    def __repr__(self):
        return "CutoffFunction(max_order={})".format(self._max_order)


def make_cutoff():
    """Return the default cutoff function.

    :return: an instance of CutoffFunction
    """
    return CutoffFunction()


def blend_coefficients(chi, r, order=0):
    """Blending weights of the forward and the backward chord.

    A point of a piece is P + a(r) D+ + b(r) D- with a = r chi(r)
    and b = -r (1 - chi(r)). Derivatives are taken in r.

    :param chi: a cutoff function
    :param r: the local parameter in [-1/2, 1/2]
    :param order: an order of the derivative
    :return: a tuple of arrays a^(order) and b^(order)
    """
    r = np.asarray(r, dtype=float)
    values = chi.derivatives(r, order)

    if order == 0:
        a = r * values[0]
        return a, a - r

    a = r * values[order] + order * values[order - 1]

    if order == 1:
        return a, a - 1.0

    return a, a


def sample_parameters(start, stop, samples_per_unit):
    """Uniform parameters in [start, stop) with a fixed density."""
    count = max(int(math.ceil((stop - start) * samples_per_unit)), 1)
    return start + np.arange(count) * ((stop - start) / count)


class SmoothedCurve(object):
    """The smoothing of a closed polyline.

    The parameter domain [0, L] is divided into k pieces of length
    L/k. The nodes are the points of the polyline at the midpoints
    (i + 1/2) L/k of the pieces. On each piece the curve blends the
    chords to the neighbouring nodes with the cutoff function, so
    it is smooth and it coincides with the broken line through the
    nodes near the piece boundaries.

    .. code-block:: python

        sc = smooth(curve, make_cutoff())
        sc.evaluate(s, order=1)
    """

    __slots__ = [
        "_source",
        "_chi",
        "_k",
        "_length",
        "_nodes",
        "_forward",
        "_backward"
    ]

    def __init__(self, source, chi=None, k=None):
        """Create a new smoothed curve.

        :param source: a closed discrete curve
        :param chi: a cutoff function or None
        :param k: a number of pieces or None
        :raise SmoothingError: if the curve cannot be smoothed
        """
        if not source.closed:
            raise SmoothingError("Only closed curves can be smoothed.")

        length = source.total_length

        if length < MIN_LENGTH:
            raise SmoothingError(
                "The curve is too short: {}.".format(length)
            )

        if k is None:
            k = int(math.ceil(length))

        if not length <= k <= 2 * length:
            raise SmoothingError(
                "Invalid number of pieces '{}'.".format(k)
            )

        self._source = source
        self._chi = chi or make_cutoff()
        self._k = int(k)
        self._length = length
        self._nodes = source.eval_point(self.node_parameters)
        self._forward, self._backward = self._node_chords(self._nodes)

    def _node_chords(self, nodes):
        """Return the chords to the next and to the previous nodes."""
        forward = np.roll(nodes, -1, axis=0) - nodes
        backward = np.roll(nodes, 1, axis=0) - nodes
        return forward, backward

    @property
    def source(self):
        """The smoothed polyline."""
        return self._source

    @property
    def chi(self):
        """The cutoff function."""
        return self._chi

    @property
    def k(self):
        """Number of pieces."""
        return self._k

    @property
    def length(self):
        """Period of the curve."""
        return self._length

    @property
    def piece_length(self):
        """Length L/k of a piece."""
        return self._length / self._k

    @property
    def node_parameters(self):
        """Parameters of the nodes."""
        return (np.arange(self._k) + 0.5) * (self._length / self._k)

    @property
    def nodes(self):
        """Points of the polyline at the node parameters."""
        return self._nodes

    def locate(self, s):
        """Return the pieces and local parameters of s.

        :param s: a real or an array of reals
        :return: a tuple of piece indices and local parameters
        """
        s = self._source.wrap(s)
        scaled = s * (self._k / self._length)
        index = np.clip(np.floor(scaled).astype(np.int64), 0, self._k - 1)
        return index, scaled - index - 0.5

    def evaluate_on_piece(self, s, index, order=0):
        """Evaluate the formula of a given piece at s.

        The parameter is not wrapped, so the formula can be extended
        beyond the piece to compare one-sided limits.

        :param s: a real or an array of reals
        :param index: a piece index or an array of indices
        :param order: an order of the derivative
        :return: a point or an array of points
        """
        s = np.asarray(s, dtype=float)
        index = np.asarray(index, dtype=np.int64) % self._k
        r = s * (self._k / self._length) - index - 0.5
        return self._blend(index, r, order)

    def _blend(self, index, r, order):
        """Evaluate the blended chords."""
        a, b = blend_coefficients(self._chi, r, order)
        value = a[..., None] * self._forward[index] \
            + b[..., None] * self._backward[index]

        if order == 0:
            return self._nodes[index] + value

        return (self._k / self._length) ** order * value

    def evaluate(self, s, order=0):
        """Evaluate the curve or its derivative at s.

        :param s: a real or an array of reals
        :param order: an order of the derivative
        :return: a point or an array of points
        """
        index, r = self.locate(s)
        return self._blend(index, r, order)

    def __call__(self, s):
        """Evaluate the curve at s."""
        return self.evaluate(s)

    def derivative(self, s, order=1):
        """Evaluate a derivative of the curve at s."""
        return self.evaluate(s, order)

    def __repr__(self):
        return "SmoothedCurve(k={}, length={})".format(
            self._k, self._length
        )


def smooth(curve, chi=None):
    """Smooth a closed polyline.

    :param curve: a closed discrete curve
    :param chi: a cutoff function or None
    :return: an instance of SmoothedCurve
    :raise SmoothingError: if the curve cannot be smoothed
    """
    return SmoothedCurve(curve, chi)


def boundary_gap(sc, order=1):
    """Measure the mismatch of the pieces at their boundaries.

    :param sc: a smoothed curve
    :param order: the highest compared derivative
    :return: the largest mismatch of the one-sided limits
    """
    left = np.arange(sc.k)
    right = (left + 1) % sc.k
    boundary = (left + 1) * sc.piece_length
    wrapped = np.where(right == 0, 0.0, boundary)
    gap = 0.0

    for n in range(order + 1):
        difference = sc.evaluate_on_piece(boundary, left, n) \
            - sc.evaluate_on_piece(wrapped, right, n)
        gap = max(gap, float(np.max(np.linalg.norm(difference, axis=1))))

    return gap


class ClosenessCertificate(ReportData):
    """Sampled distances of a smoothed curve to its polyline."""

    def __init__(self):
        self._eps = 0.0
        self._c0_dev = 0.0
        self._c1_dev = 0.0
        self._cm_dev = []
        self._c_cert = C_CERT
        self._samples = 0
        self._passed = False

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def c0_dev(self) -> Double:
        """Largest distance of the points."""
        return self._c0_dev

    @c0_dev.setter
    def c0_dev(self, value):
        self._c0_dev = value

    @property
    def c1_dev(self) -> Double:
        """Largest distance of the first derivatives."""
        return self._c1_dev

    @c1_dev.setter
    def c1_dev(self, value):
        self._c1_dev = value

    @property
    def cm_dev(self) -> List[Double]:
        """Largest norms of the derivatives of order 2 and higher."""
        return self._cm_dev

    @cm_dev.setter
    def cm_dev(self, value):
        self._cm_dev = value

    @property
    def c_cert(self) -> Double:
        return self._c_cert

    @c_cert.setter
    def c_cert(self, value):
        self._c_cert = value

    @property
    def samples(self) -> Int:
        return self._samples

    @samples.setter
    def samples(self, value):
        self._samples = value

    @property
    def passed(self) -> Bool:
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def closeness_certificate(sc, eps, interval=None,
                          samples_per_unit=TURNING_SAMPLES_PER_UNIT,
                          c_cert=C_CERT):
    """Certify that the smoothed curve stays close to the polyline.

    Sample the parameter interval and measure the distance of the
    points, the distance of the first derivatives to the unit
    tangents and the norms of the higher derivatives. The raw
    numbers are returned even if the certificate fails.

    :param sc: a smoothed curve
    :param eps: the turning bound of the polyline
    :param interval: a parameter interval or None for the whole curve
    :param samples_per_unit: a number of samples per unit length
    :param c_cert: the certified constant
    :return: an instance of ClosenessCertificate
    """
    start, stop = interval if interval is not None else (0.0, sc.length)
    s = sample_parameters(start, stop, samples_per_unit)
    orders = range(2, sc.chi.max_order + 1)

    c0 = 0.0
    c1 = 0.0
    cm = [0.0 for _ in orders]

    for i in range(0, len(s), _CHUNK_SIZE):
        chunk = s[i:i + _CHUNK_SIZE]
        source = sc.source

        c0 = max(c0, float(np.max(np.linalg.norm(
            sc.evaluate(chunk) - source.eval_point(chunk), axis=1
        ))))
        c1 = max(c1, float(np.max(np.linalg.norm(
            sc.evaluate(chunk, 1) - source.tangent(chunk), axis=1
        ))))

        for j, order in enumerate(orders):
            cm[j] = max(cm[j], float(np.max(np.linalg.norm(
                sc.evaluate(chunk, order), axis=1
            ))))

    certificate = ClosenessCertificate()
    certificate.eps = float(eps)
    certificate.c0_dev = c0
    certificate.c1_dev = c1
    certificate.cm_dev = cm
    certificate.c_cert = float(c_cert)
    certificate.samples = len(s)
    certificate.passed = max([c0, c1] + cm) <= c_cert * eps

    log.debug("Closeness deviations %s, %s, %s.", c0, c1, cm)
    return certificate
