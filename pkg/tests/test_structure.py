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
import json
import unittest

import numpy as np

from lencert.structure import ReportData, StructureError, format_report
from lencert.typing import Bool, Double, Int, List, Optional, Str


class SimpleData(ReportData):

    def __init__(self):
        self._ratio = 0.0
        self._passed = False

    @property
    def ratio(self) -> Double:
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


class ComplicatedData(ReportData):

    def __init__(self):
        self._name = ""
        self._values = []
        self._nested = SimpleData()
        self._items = []
        self._error = None

    @property
    def name(self) -> Str:
        return self._name

    @name.setter
    def name(self, value):
        self._name = value

    @property
    def values(self) -> List[Double]:
        return self._values

    @values.setter
    def values(self, value):
        self._values = value

    @property
    def nested(self) -> SimpleData:
        return self._nested

    @nested.setter
    def nested(self, value):
        self._nested = value

    @property
    def items(self) -> List[SimpleData]:
        return self._items

    @items.setter
    def items(self, value):
        self._items = value

    @property
    def error(self) -> Optional[Str]:
        return self._error

    @error.setter
    def error(self, value):
        self._error = value


class ReportDataTestCase(unittest.TestCase):
    """Test the report structures."""

    def test_empty_structure(self):
        with self.assertRaises(StructureError) as cm:
            class NoData(ReportData):
                pass

            NoData()

        self.assertEqual(str(cm.exception), "No fields found.")

    def test_readonly_structure(self):
        with self.assertRaises(StructureError) as cm:
            class ReadOnlyData(ReportData):
                @property
                def x(self) -> Int:
                    return 1

            ReadOnlyData()

        self.assertEqual(str(cm.exception), "Field 'x' cannot be set.")

    def test_writeonly_structure(self):
        with self.assertRaises(StructureError) as cm:
            class WriteOnlyData(ReportData):
                def __init__(self):
                    self._x = 0

                def set_x(self, x):
                    self._x = x

                x = property(None, set_x)

            WriteOnlyData()

        self.assertEqual(str(cm.exception), "Field 'x' cannot be get.")

    def test_no_type_structure(self):
        with self.assertRaises(StructureError) as cm:
            class NoTypeData(ReportData):
                def __init__(self):
                    self._x = 0

                @property
                def x(self):
                    return self._x

                @x.setter
                def x(self, x):
                    self._x = x

            NoTypeData()

        self.assertEqual(str(cm.exception), "Field 'x' has unknown type.")

    class SkipData(ReportData):

        def __init__(self):
            self._x = 0
            self._y = 1

        @property
        def x(self) -> Int:
            return self._x

        @x.setter
        def x(self, value):
            self._x = value

        @property
        def _private(self) -> Int:
            return self._y

        @_private.setter
        def _private(self, value):
            self._y = value

        def method(self):
            return self._x

    def test_fields(self):
        self.assertEqual(set(SimpleData.fields()), {"ratio", "passed"})

        fields = ComplicatedData.fields()
        self.assertIs(fields["nested"].report_type, SimpleData)
        self.assertIs(fields["items"].report_type, SimpleData)
        self.assertIsNone(fields["values"].report_type)

    def test_skip_members(self):
        structure = self.SkipData.to_structure(self.SkipData())
        self.assertEqual(structure, {"x": 0})

    def test_get_simple_structure(self):
        data = SimpleData()
        self.assertEqual(
            SimpleData.to_structure(data),
            {"ratio": 0.0, "passed": False}
        )

        data.ratio = np.float64(0.5)
        data.passed = np.bool_(True)
        structure = SimpleData.to_structure(data)

        self.assertEqual(structure, {"ratio": 0.5, "passed": True})
        self.assertIs(type(structure["ratio"]), float)
        self.assertIs(type(structure["passed"]), bool)

    def test_get_simple_structure_list(self):
        d1 = SimpleData()
        d1.ratio = 1.0

        d2 = SimpleData()
        d2.passed = True

        self.assertEqual(SimpleData.to_structure_list([d1, d2]), [
            {"ratio": 1.0, "passed": False},
            {"ratio": 0.0, "passed": True},
        ])

    def test_apply_simple_structure(self):
        data = SimpleData.from_structure({"ratio": 2, "passed": True})

        self.assertEqual(data.ratio, 2.0)
        self.assertIs(type(data.ratio), float)
        self.assertEqual(data.passed, True)

    def test_apply_simple_invalid_structure(self):
        with self.assertRaises(StructureError) as cm:
            SimpleData.from_structure({"y": 1})

        self.assertEqual(str(cm.exception), "Field 'y' doesn't exist.")

        with self.assertRaises(StructureError):
            SimpleData.from_structure({"passed": 1})

        with self.assertRaises(StructureError):
            SimpleData.from_structure({"ratio": "1.0"})

    def test_apply_structure_with_invalid_type(self):
        with self.assertRaises(TypeError):
            SimpleData.from_structure(["ratio"])

        with self.assertRaises(TypeError):
            SimpleData.from_structure_list({"ratio": 1.0})

        with self.assertRaises(TypeError):
            SimpleData.to_structure(None)

    def test_compare_simple_structure(self):
        data = SimpleData()

        self.assertEqual(data, data)
        self.assertEqual(data, SimpleData())
        self.assertNotEqual(data, None)
        self.assertNotEqual(data, ComplicatedData())
        self.assertNotEqual(data, SimpleData.from_structure({"ratio": 1.0}))

    def test_simple_string(self):
        data = SimpleData()
        self.assertEqual(str(data), "SimpleData(passed=False, ratio=0.0)")
        self.assertEqual(
            format_report(data, skip=["ratio"], add={"k": 1}),
            "SimpleData(k=1, passed=False)"
        )

    def _get_complicated(self):
        data = ComplicatedData()
        data.name = "window"
        data.values = np.array([0.25, 0.5])
        data.nested.ratio = 0.75
        data.items = [SimpleData(), SimpleData()]
        data.items[1].passed = True
        return data

    def test_get_complicated_structure(self):
        structure = ComplicatedData.to_structure(self._get_complicated())

        self.assertEqual(structure, {
            "name": "window",
            "values": [0.25, 0.5],
            "nested": {"ratio": 0.75, "passed": False},
            "items": [
                {"ratio": 0.0, "passed": False},
                {"ratio": 0.0, "passed": True},
            ],
            "error": None,
        })

        # The structure is JSON-native.
        self.assertEqual(json.loads(json.dumps(structure)), structure)

    def test_apply_complicated_structure(self):
        structure = ComplicatedData.to_structure(self._get_complicated())
        data = ComplicatedData.from_structure(structure)

        self.assertEqual(data.name, "window")
        self.assertEqual(data.values, [0.25, 0.5])
        self.assertIsInstance(data.nested, SimpleData)
        self.assertEqual(data.nested.ratio, 0.75)
        self.assertEqual(len(data.items), 2)
        self.assertEqual(data.items[1].passed, True)
        self.assertEqual(data.error, None)

        data = ComplicatedData.from_structure({"error": "failed"})
        self.assertEqual(data.error, "failed")

    def test_compare_complicated_structure(self):
        self.assertEqual(self._get_complicated(), self._get_complicated())

        other = self._get_complicated()
        other.items[0].ratio = 1.0

        self.assertNotEqual(self._get_complicated(), other)
