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
import unittest

from lencert.identifier import IdentifierError, MetricIdentifier


class MetricIdentifierTestCase(unittest.TestCase):
    """Test the identifiers of metric backends."""

    def assert_identifier(self, identifier, name, parameter):
        """Check the identifier."""
        self.assertEqual(identifier.name, name)
        self.assertEqual(identifier.parameter, parameter)

    def test_identifier(self):
        """Test the identifier object."""
        identifier = MetricIdentifier("euclidean")
        self.assert_identifier(identifier, "euclidean", None)
        self.assertTrue(identifier.is_euclidean)
        self.assertEqual(str(identifier), "euclidean")

        identifier = MetricIdentifier("sphere", 1000.0)
        self.assert_identifier(identifier, "sphere", 1000.0)
        self.assertFalse(identifier.is_euclidean)
        self.assertEqual(str(identifier), "sphere:1000.0")

    def test_from_string(self):
        """Test the parsing of identifiers."""
        self.assert_identifier(
            MetricIdentifier.from_string("euclidean"), "euclidean", None
        )
        self.assert_identifier(
            MetricIdentifier.from_string("sphere:1000"), "sphere", 1000.0
        )
        self.assert_identifier(
            MetricIdentifier.from_string(" flat-torus:50 "),
            "flat-torus", 50.0
        )
        self.assert_identifier(
            MetricIdentifier.from_string("perturbed:0.01"),
            "perturbed", 0.01
        )

        identifier = MetricIdentifier.from_string("sphere:2.5")
        self.assertEqual(
            MetricIdentifier.from_string(str(identifier)),
            identifier
        )

    def test_invalid_identifier(self):
        """Test the invalid identifiers."""
        with self.assertRaises(IdentifierError) as cm:
            MetricIdentifier.from_string("hyperbolic:1")

        self.assertEqual(str(cm.exception), "Unknown metric 'hyperbolic'.")

        with self.assertRaises(IdentifierError) as cm:
            MetricIdentifier.from_string("sphere")

        self.assertEqual(
            str(cm.exception),
            "Metric 'sphere' requires a parameter."
        )

        with self.assertRaises(IdentifierError) as cm:
            MetricIdentifier.from_string("euclidean:1")

        self.assertEqual(
            str(cm.exception),
            "Metric 'euclidean' takes no parameter."
        )

        with self.assertRaises(IdentifierError) as cm:
            MetricIdentifier.from_string("sphere:big")

        self.assertEqual(
            str(cm.exception),
            "Invalid parameter of 'sphere:big'."
        )
