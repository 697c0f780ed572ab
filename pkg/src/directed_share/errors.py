# SPDX-License-Identifier: GPL-3.0-or-later
# Copyright (c) 2025 Santiago Bossa
#
# This file is part of directed-share.
#
# directed-share is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# directed-share is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with directed-share.  If not, see the LICENSE file in the project root.

"""
Exception hierarchy shared by every *directed_share* subpackage.

All library errors derive from :class:`DirectedShareError`, so the CLI can
turn any of them into exit code ``1`` with a one-line reason. The concrete
classes also subclass the closest builtin (``ValueError`` / ``RuntimeError``)
so callers that only know the builtins keep working.

Public API
----------
- :class:`DirectedShareError`
- :class:`ValidationError`, :class:`InconsistentSessionError`
- :class:`ContractError`, :class:`InsufficientNegativesError`,
  :class:`DegenerateSampleError`
- :class:`ConvergenceError`
- :class:`CalibrationError`
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "DirectedShareError",
    "ValidationError",
    "InconsistentSessionError",
    "ContractError",
    "InsufficientNegativesError",
    "DegenerateSampleError",
    "ConvergenceError",
    "CalibrationError",
]


# --------------------------------------------------------------------------- #
# Root
# --------------------------------------------------------------------------- #
class DirectedShareError(Exception):
    """Base class for every error raised by the package."""


# --------------------------------------------------------------------------- #
# Input data
# --------------------------------------------------------------------------- #
class ValidationError(DirectedShareError, ValueError):
    """Input data violates a domain rule (off-grid rating, bad CSV, ...)."""


class InconsistentSessionError(ValidationError):
    """A 10-item session whose items match neither provenance set."""


# --------------------------------------------------------------------------- #
# Preconditions
# --------------------------------------------------------------------------- #
class ContractError(DirectedShareError, ValueError):
    """A caller broke an operation's precondition."""


class InsufficientNegativesError(ContractError):
    """The shown-but-not-shared pool is smaller than the positive count."""


class DegenerateSampleError(ContractError):
    """Sample statistics are undefined (zero variance)."""


# --------------------------------------------------------------------------- #
# Numerical
# --------------------------------------------------------------------------- #
class ConvergenceError(DirectedShareError, RuntimeError):
    """An optimizer ran out of iterations.

    Attributes
    ----------
    best_fit :
        Best solution found before giving up (may be ``None``).
    """

    def __init__(self, message: str, best_fit: Any = None):
        super().__init__(message)
        self.best_fit = best_fit


class CalibrationError(DirectedShareError):
    """A synthetic-study profile cannot be generated as requested."""
