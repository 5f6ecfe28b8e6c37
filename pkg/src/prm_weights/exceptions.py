"""Exceptions raised by the workbench.

Every exception carries the exit code the command line reports for it.
"""

from __future__ import annotations

from typing import ClassVar


class PrmWeightsError(Exception):
    """Base class for all workbench errors."""

    exit_code: ClassVar[int] = 1
    """Process exit code used by the command line."""


class FieldError(PrmWeightsError, ValueError):
    """Invalid finite field parameters or elements."""


class ParameterError(PrmWeightsError, ValueError):
    """Code or geometry parameters outside their supported range."""


class DegreeError(PrmWeightsError, ValueError):
    """A polynomial has the wrong degree or is not homogeneous."""


class PolynomialSyntaxError(PrmWeightsError, ValueError):
    """Polynomial text could not be parsed."""


class ConfigError(PrmWeightsError):
    """The configuration file is invalid."""


class BudgetExceededError(PrmWeightsError):
    """An enumeration or search would exceed its budget (count or wall clock)."""

    exit_code = 3


class WitnessMismatchError(PrmWeightsError):
    """A witness polynomial does not have the weight it claims."""

    exit_code = 2


class DiscrepancyError(PrmWeightsError):
    """An exact prediction disagrees with the brute-force oracle."""

    exit_code = 2
