#
# Reports convertible to JSON structures
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
import inspect
from typing import get_type_hints

from lencert.error import LencertError
from lencert.typing import get_native, check_native, get_type_arguments, \
    is_base_type, Structure

__all__ = [
    "StructureError",
    "ReportField",
    "ReportData",
    "format_report",
]


class StructureError(LencertError):
    """Invalid definition or structure of a report."""
    pass


class ReportField(object):
    """A field of a report.

    A field holds a native value, a nested report or a list of
    nested reports.
    """

    __slots__ = [
        "_name",
        "_type_hint",
        "_report_type",
        "_many"
    ]

    def __init__(self, name, type_hint):
        self._name = name
        self._type_hint = type_hint
        self._report_type = None
        self._many = False

        if is_base_type(type_hint, ReportData):
            self._report_type = type_hint
        elif is_base_type(type_hint, list):
            (item_hint, ) = get_type_arguments(type_hint)

            if is_base_type(item_hint, ReportData):
                self._report_type = item_hint
                self._many = True

    @property
    def name(self):
        return self._name

    @property
    def type_hint(self):
        return self._type_hint

    @property
    def report_type(self):
        """Type of the nested reports or None."""
        return self._report_type

    def get_value(self, report):
        return getattr(report, self._name)

    def dump(self, report):
        """Return the native value of the field.

        :param report: a report
        :return: a native value
        """
        value = self.get_value(report)

        if self._report_type is None:
            return get_native(value)

        if self._many:
            return self._report_type.to_structure_list(value)

        return self._report_type.to_structure(value)

    def load(self, report, value):
        """Set the field from its native value.

        :param report: a report
        :param value: a native value
        :raise StructureError: if the value doesn't match the field
        """
        if self._many:
            value = self._report_type.from_structure_list(value)
        elif self._report_type is not None:
            value = self._report_type.from_structure(value)
        else:
            try:
                value = check_native(self._type_hint, value)
            except TypeError as e:
                raise StructureError(
                    "Field '{}' has invalid value: {}".format(self._name, e)
                ) from None

        setattr(report, self._name, value)


def _collect_fields(report_class):
    """Create the fields of the public properties of a report class.

    :param report_class: a subclass of ReportData
    :return: a dictionary of fields
    :raise StructureError: if a property can't be a field
    """
    fields = {}

    for name, member in inspect.getmembers(report_class):
        if name.startswith("_") or not isinstance(member, property):
            continue

        if not member.fset:
            raise StructureError("Field '{}' cannot be set.".format(name))

        if not member.fget:
            raise StructureError("Field '{}' cannot be get.".format(name))

        type_hint = get_type_hints(member.fget).get("return")

        if not type_hint:
            raise StructureError(
                "Field '{}' has unknown type.".format(name)
            )

        fields[name] = ReportField(name, type_hint)

    if not fields:
        raise StructureError("No fields found.")

    return fields


class ReportData(object):
    """Object representation of a report.

    Every public property of a subclass with a getter, a setter and
    a return type hint is a field. Reports convert to dictionaries of
    native values, so they can be dumped to JSON and loaded back.

    .. code-block:: python

        class Ratio(ReportData):

            def __init__(self):
                self._value = 0.0

            @property
            def value(self) -> Double:
                return self._value

            @value.setter
            def value(self, value):
                self._value = value

        structure = Ratio.to_structure(Ratio())
    """

    __report_fields__ = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.__report_fields__ = _collect_fields(cls)

    @classmethod
    def fields(cls):
        """Return the fields of the report."""
        return dict(cls.__report_fields__)

    @classmethod
    def from_structure(cls, structure: Structure):
        """Create a report from a structure.

        Missing fields keep their default values.

        :param structure: a dictionary of native values
        :return: a report
        :raise StructureError: if a field doesn't exist
        """
        if not isinstance(structure, dict):
            raise TypeError(
                "Invalid type '{}'.".format(type(structure).__name__)
            )

        report = cls()

        for name, value in structure.items():
            if name not in cls.__report_fields__:
                raise StructureError(
                    "Field '{}' doesn't exist.".format(name)
                )

            cls.__report_fields__[name].load(report, value)

        return report

    @classmethod
    def to_structure(cls, report) -> Structure:
        """Convert a report to a dictionary of native values."""
        if not isinstance(report, cls):
            raise TypeError(
                "Invalid type '{}'.".format(type(report).__name__)
            )

        return {
            name: field.dump(report)
            for name, field in cls.__report_fields__.items()
        }

    @classmethod
    def from_structure_list(cls, structures):
        if not isinstance(structures, list):
            raise TypeError(
                "Invalid type '{}'.".format(type(structures).__name__)
            )

        return [cls.from_structure(s) for s in structures]

    @classmethod
    def to_structure_list(cls, reports):
        return [cls.to_structure(r) for r in reports]

    def __eq__(self, other):
        """Reports are equal if their structures are equal."""
        if not isinstance(other, ReportData):
            return NotImplemented

        return type(self) is type(other) \
            and self.to_structure(self) == other.to_structure(other)

    __hash__ = None

    def __repr__(self):
        return format_report(self)


def format_report(report, skip=None, add=None):
    """Return a string with the fields of a report sorted by name.

    :param report: a report
    :param skip: a list of names to leave out or None
    :param add: a dictionary of extra attributes or None
    :return: a string
    """
    values = {
        name: field.get_value(report)
        for name, field in report.fields().items()
        if name not in (skip or ())
    }
    values.update(add or {})

    attributes = sorted(
        "{}={}".format(name, repr(value)) for name, value in values.items()
    )
    return "{}({})".format(type(report).__name__, ", ".join(attributes))
