#
# Smoothing of curves by geodesic blending
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

from lencert.constants import C_CERT, FINITE_DIFFERENCE_STEP
from lencert.riemannian.chart import metric_curve
from lencert.riemannian.integrator import exp_map, log_map, LogMapError
from lencert.smoothing import SmoothedCurve, SmoothingError, \
    blend_coefficients, sample_parameters
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int

__all__ = [
    "RiemannianSmoothedCurve",
    "smooth_riemannian",
    "BlendCertificate",
    "blend_certificate",
]

log = logging.getLogger(__name__)


class RiemannianSmoothedCurve(SmoothedCurve):
    """The smoothing of a closed polyline in a chart.

    The chords of the Euclidean smoothing are replaced by the
    inverse exponential map at the nodes and the blended vector is
    mapped back by the exponential map at the same node. The first
    derivative is a central difference of the blended curve.
    """

    __slots__ = ["_chart"]

    def __init__(self, chart, source, chi=None, k=None):
        """Create a new smoothed curve.

        :param chart: a chart
        :param source: a closed curve with chord lengths of the chart
        :param chi: a cutoff function or None
        :param k: a number of pieces or None
        :raise SmoothingError: if the curve cannot be smoothed
        """
        self._chart = chart
        super().__init__(source, chi, k)

    @property
    def chart(self):
        """The chart of the curve."""
        return self._chart

    def _node_chords(self, nodes):
        forward = np.roll(nodes, -1, axis=0)
        backward = np.roll(nodes, 1, axis=0)

        try:
            vectors = log_map(
                self._chart,
                np.concatenate([nodes, nodes]),
                np.concatenate([forward, backward])
            )
        except LogMapError as e:
            raise SmoothingError(
                "Can't join the nodes: {}".format(e)
            ) from None

        return vectors[:len(nodes)], vectors[len(nodes):]

    def tangent_vectors(self, index, r, order=0):
        """Return the blended vectors at the nodes.

        The derivatives are taken in the curve parameter.

        :param index: piece indices
        :param r: local parameters
        :param order: an order of the derivative
        :return: an array of tangent vectors at the nodes
        """
        a, b = blend_coefficients(self._chi, r, order)
        value = a[..., None] * self._forward[index] \
            + b[..., None] * self._backward[index]
        return (self._k / self._length) ** order * value

    def _blend(self, index, r, order):
        if order == 0:
            return exp_map(
                self._chart,
                self._nodes[index],
                self.tangent_vectors(index, r)
            ).endpoint

        if order == 1:
            delta = FINITE_DIFFERENCE_STEP * self._k / self._length
            below = self._blend(index, r - delta, 0)
            above = self._blend(index, r + delta, 0)
            return self._chart.difference(below, above) \
                / (2.0 * FINITE_DIFFERENCE_STEP)

        raise SmoothingError(
            "Derivatives of order '{}' are not supported.".format(order)
        )

    def __repr__(self):
        return "RiemannianSmoothedCurve({}, k={}, length={})".format(
            self._chart.name, self._k, self._length
        )


def smooth_riemannian(chart, curve, chi=None):
    """Smooth a closed polyline of a chart.

    The chord lengths are measured in the metric of the chart.

    :param chart: a chart
    :param curve: a closed discrete curve
    :param chi: a cutoff function or None
    :return: an instance of RiemannianSmoothedCurve
    :raise SmoothingError: if the curve cannot be smoothed
    """
    source = metric_curve(chart, curve.points, curve.closed)
    return RiemannianSmoothedCurve(chart, source, chi)


class BlendCertificate(ReportData):
    """Sampled deviations of the blended vectors at the nodes."""

    def __init__(self):
        self._eps = 0.0
        self._c0_dev = 0.0
        self._c1_dev = 0.0
        self._c2_dev = 0.0
        self._c_cert = C_CERT
        self._samples = 0
        self._passed = False

    @property
    def eps(self) -> Double:
        """The turning bound."""
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def c0_dev(self) -> Double:
        """Largest distance of the blended vectors to the exact ones."""
        return self._c0_dev

    @c0_dev.setter
    def c0_dev(self, value):
        self._c0_dev = value

    @property
    def c1_dev(self) -> Double:
        """Largest distance of their first derivatives."""
        return self._c1_dev

    @c1_dev.setter
    def c1_dev(self, value):
        self._c1_dev = value

    @property
    def c2_dev(self) -> Double:
        """Largest norm of the second derivative of the blended vectors."""
        return self._c2_dev

    @c2_dev.setter
    def c2_dev(self, value):
        self._c2_dev = value

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


def blend_certificate(rsc, eps, interval=None, samples_per_unit=8,
                      c_cert=C_CERT, step=FINITE_DIFFERENCE_STEP):
    """Compare the blended vectors with the exact ones.

    On each piece the curve and its smoothing are exp(P, xi) and
    exp(P, xi~) at the node P of the piece. The exact vectors xi are
    computed by the inverse exponential map and differentiated by
    central differences.

    :param rsc: a smoothed curve of a chart
    :param eps: the turning bound of the polyline
    :param interval: a parameter interval or None for the whole curve
    :param samples_per_unit: a number of samples per unit length
    :param c_cert: the certified constant
    :param step: a step of the finite differences
    :return: an instance of BlendCertificate
    :raise SmoothingError: if the exact vectors cannot be computed
    """
    chart = rsc.chart
    source = rsc.source
    start, stop = interval if interval is not None else (0.0, rsc.length)
    s = sample_parameters(start, stop, samples_per_unit)

    index, r = rsc.locate(s)
    nodes = rsc.nodes[index]
    shifted = np.stack([s - step, s, s + step])

    try:
        exact = log_map(
            chart, nodes[None, :, :], source.eval_point(shifted)
        )
    except LogMapError as e:
        raise SmoothingError(
            "Can't invert the curve at the nodes: {}".format(e)
        ) from None

    derivative = (exact[2] - exact[0]) / (2.0 * step)

    c0 = chart.norm(nodes, rsc.tangent_vectors(index, r) - exact[1])
    c1 = chart.norm(nodes, rsc.tangent_vectors(index, r, 1) - derivative)
    c2 = chart.norm(nodes, rsc.tangent_vectors(index, r, 2))

    certificate = BlendCertificate()
    certificate.eps = float(eps)
    certificate.c0_dev = float(np.max(c0))
    certificate.c1_dev = float(np.max(c1))
    certificate.c2_dev = float(np.max(c2))
    certificate.c_cert = float(c_cert)
    certificate.samples = len(s)
    certificate.passed = max(
        certificate.c0_dev, certificate.c1_dev, certificate.c2_dev
    ) <= c_cert * eps

    log.debug("Blend deviations %s, %s, %s.", certificate.c0_dev,
              certificate.c1_dev, certificate.c2_dev)
    return certificate
