#
# Type hints and native conversions
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
# Report fields are annotated with these hints. Values are converted
# to native JSON types when a report is turned into a structure.
#
import inspect
from typing import Dict, List, Optional

import numpy as np

__all__ = [
    "Bool",
    "Int",
    "Double",
    "Str",
    "List",
    "Dict",
    "Optional",
    "Structure",
    "Point",
    "Points",
    "get_native",
    "check_native",
    "is_base_type",
    "get_type_arguments",
    "get_type_name",
]

# Basic types.
Bool = bool
Int = int
Double = float
Str = str

# Structured data.
Structure = Dict[Str, object]

# Geometric values are numpy arrays.
Point = np.ndarray
Points = np.ndarray


def get_native(value):
    """Decompose a value into a native Python object.

    Numpy scalars and arrays are converted to Python numbers
    and nested lists, containers are converted recursively.

    :param value: a value
    :return: a native Python object
    """
    if isinstance(value, np.ndarray):
        return get_native(value.tolist())

    if isinstance(value, np.bool_):
        return bool(value)

    if isinstance(value, np.integer):
        return int(value)

    if isinstance(value, np.floating):
        return float(value)

    if isinstance(value, tuple):
        return list(map(get_native, value))

    if isinstance(value, list):
        return list(map(get_native, value))

    if isinstance(value, dict):
        return {k: get_native(v) for k, v in value.items()}

    return value


def check_native(type_hint, value):
    """Convert a native value to the given type hint.

    Integers are accepted for doubles, nothing else is coerced.

    :param type_hint: a type hint
    :param value: a native value
    :return: a converted value
    :raise TypeError: if the value doesn't match the hint
    """
    if value is None and Optional[type_hint] == type_hint:
        return None

    origin = getattr(type_hint, "__origin__", None)

    if origin is list:
        (item_hint, ) = get_type_arguments(type_hint)
        _check_instance(list, value, type_hint)
        return [check_native(item_hint, item) for item in value]

    if origin is dict:
        key_hint, value_hint = get_type_arguments(type_hint)
        _check_instance(dict, value, type_hint)
        return {
            check_native(key_hint, k): check_native(value_hint, v)
            for k, v in value.items()
        }

    if origin is not None:
        # Optional values.
        args = [
            a for a in get_type_arguments(type_hint) if a is not type(None)
        ]

        if value is None:
            return None

        return check_native(args[0], value)

    if type_hint is Double and isinstance(value, int) \
            and not isinstance(value, bool):
        return float(value)

    if type_hint is Int and isinstance(value, bool):
        raise TypeError(
            "Invalid value '{}' of type '{}'.".format(value, "Int")
        )

    _check_instance(type_hint, value, type_hint)
    return value


def _check_instance(native_type, value, type_hint):
    """Check the type of a native value."""
    if type_hint is object or isinstance(value, native_type):
        return

    raise TypeError("Invalid value '{}' of type '{}'.".format(
        value, get_type_name(type_hint)
    ))


def is_base_type(type_hint, base_type):
    """Does the hint describe the base type or its subclass?

    Generic hints are reduced to their origin, so List[Double] is
    based on list and List[WindowAudit] is not based on ReportData.

    :param type_hint: a type hint
    :param base_type: a class
    :return: True or False
    """
    origin = getattr(type_hint, "__origin__", type_hint)
    return origin == base_type \
        or (inspect.isclass(origin) and issubclass(origin, base_type))


def get_type_arguments(type_hint):
    """Return the arguments of a generic hint, like (Str, Double)."""
    return getattr(type_hint, "__args__", ())


def get_type_name(type_hint):
    """Return the name of a hint used in error messages."""
    names = {Bool: "Bool", Int: "Int", Double: "Double", Str: "Str"}
    return names.get(type_hint, getattr(type_hint, "__name__", str(type_hint)))
