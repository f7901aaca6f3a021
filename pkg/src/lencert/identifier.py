#
# Identifiers of metric backends
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
from lencert.error import LencertError

__all__ = [
    "IdentifierError",
    "MetricIdentifier",
]

# Names of the built-in metrics and whether they take a parameter.
METRIC_NAMES = {
    "euclidean": False,
    "sphere": True,
    "flat-torus": True,
    "perturbed": True,
}


class IdentifierError(LencertError):
    """Invalid identifier of a metric backend."""
    pass


class MetricIdentifier(object):
    """Identifier of a metric backend.

    Backends are named by strings like ``euclidean``, ``sphere:1000``,
    ``flat-torus:50`` or ``perturbed:0.01``.
    """

    __slots__ = ["_name", "_parameter"]

    def __init__(self, name, parameter=None):
        """Describe a metric backend.

        :param name: a name of the metric
        :param parameter: a real parameter or None
        :raise IdentifierError: if the description is not valid
        """
        if name not in METRIC_NAMES:
            raise IdentifierError("Unknown metric '{}'.".format(name))

        if METRIC_NAMES[name] and parameter is None:
            raise IdentifierError(
                "Metric '{}' requires a parameter.".format(name)
            )

        if not METRIC_NAMES[name] and parameter is not None:
            raise IdentifierError(
                "Metric '{}' takes no parameter.".format(name)
            )

        self._name = name
        self._parameter = parameter

    @classmethod
    def from_string(cls, identifier):
        """Parse an identifier.

        :param identifier: a string
        :return: an instance of MetricIdentifier
        :raise IdentifierError: if the string is not valid
        """
        name, _, value = identifier.strip().partition(":")

        if not value:
            return cls(name)

        try:
            parameter = float(value)
        except ValueError:
            raise IdentifierError(
                "Invalid parameter of '{}'.".format(identifier)
            ) from None

        return cls(name, parameter)

    @property
    def name(self):
        """Name of the metric."""
        return self._name

    @property
    def parameter(self):
        """Parameter of the metric or None."""
        return self._parameter

    @property
    def is_euclidean(self):
        """Is this the Euclidean backend?"""
        return self._name == "euclidean"

    def __str__(self):
        """Return the string representation."""
        if self._parameter is None:
            return self._name

        return "{}:{}".format(self._name, repr(self._parameter))

    def __eq__(self, other):
        """Compare identifiers."""
        return isinstance(other, MetricIdentifier) and str(self) == str(other)

    def __hash__(self):
        return hash(str(self))
