#
# Errors and their exit codes
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

from lencert.constants import EXIT_VERDICT_FAIL

__all__ = [
    "LencertError",
    "ErrorRule",
    "ErrorMapper",
]

log = logging.getLogger(__name__)


class LencertError(Exception):
    """A default error of the library."""
    pass


class ErrorRule(object):
    """Rule mapping an exception type and its subclasses to an exit code."""

    __slots__ = [
        "_exception_type",
        "_exit_code"
    ]

    def __init__(self, exception_type, exit_code):
        """Create a new error rule.

        :param exception_type: a type of the Python error
        :param exit_code: an exit code of the command line
        """
        self._exception_type = exception_type
        self._exit_code = exit_code

    @property
    def exception_type(self):
        return self._exception_type

    @property
    def exit_code(self):
        return self._exit_code

    def match_type(self, exception_type):
        """Is this rule matching the given exception type?"""
        return issubclass(exception_type, self._exception_type)


class ErrorMapper(object):
    """Map exceptions raised by a command to its exit code.

    Errors of the library without a rule map to the default code.
    Other exceptions have no exit code.
    """

    __slots__ = [
        "_default_code",
        "_rules"
    ]

    def __init__(self, default_code=EXIT_VERDICT_FAIL):
        """Create a new error mapper.

        :param default_code: an exit code of unmapped library errors
        """
        self._default_code = default_code
        self._rules = []

    @property
    def rules(self):
        """Rules in the order of their priority."""
        return list(reversed(self._rules))

    def add_rule(self, rule):
        """Add a rule with a higher priority than the previous ones.

        :param rule: an instance of ErrorRule
        """
        self._rules.append(rule)

    def exit_code(self, code):
        """Return a class decorator mapping the class to the code.

        .. code-block:: python

            @mapper.exit_code(2)
            class ExampleError(LencertError):
                pass

        :param code: an exit code
        :return: a decorator
        """
        def decorated(cls):
            self.add_rule(ErrorRule(cls, code))
            return cls

        return decorated

    def get_exit_code(self, exception_type):
        """Get an exit code of the exception type.

        :param exception_type: a subclass of Exception
        :return: an exit code
        :raise LookupError: if no exit code is found
        """
        for rule in reversed(self._rules):
            if rule.match_type(exception_type):
                log.debug("Mapped %s to the exit code %s.",
                          exception_type.__name__, rule.exit_code)
                return rule.exit_code

        if issubclass(exception_type, LencertError):
            return self._default_code

        raise LookupError(
            "No exit code found for '{}'.".format(exception_type.__name__)
        )
