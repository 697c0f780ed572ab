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
Explicit ratings on the 0.5 - 5.0 half-step scale.

Ratings are stored as integer *half units* (``0.5 -> 1``, ``4.0 -> 8``) so
comparisons against the Like threshold never depend on float equality.
"""

from __future__ import annotations

import math
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from ..errors import ValidationError
from .records import check_id

__all__ = ["RatingsTable", "to_half_units", "from_half_units", "RATING_MIN", "RATING_MAX"]

RATING_MIN = 0.5
RATING_MAX = 5.0

_GRID_TOL = 1e-9


def to_half_units(value: float) -> int:
    """Convert a rating to half units, validating the grid.

    Examples
    --------
    >>> to_half_units(4.0)
    8
    >>> to_half_units("3.5")
    7
    """
    try:
        x = float(value) * 2.0
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"rating is not a number: {value!r}") from exc
    if not math.isfinite(x):
        raise ValidationError(f"rating is not finite: {value!r}")
    half = round(x)
    if abs(x - half) > _GRID_TOL or not 1 <= half <= 10:
        raise ValidationError(f"rating off the 0.5-5.0 half-step grid: {value!r}")
    return int(half)


def from_half_units(half: int) -> float:
    return half / 2.0


# --------------------------------------------------------------------------- #
# RatingsTable
# --------------------------------------------------------------------------- #
class RatingsTable:
    """Immutable ``(user, item) -> rating`` table.

    Use :meth:`from_rows` to build one; it validates ids, the half-step grid
    and uniqueness of ``(user, item)``.
    """

    __slots__ = ("_entries",)

    def __init__(self, half_units: Optional[Mapping[Tuple[str, str], int]] = None):
        entries = dict(half_units or {})
        for (user, item), half in entries.items():
            check_id(user, "user")
            check_id(item, "item")
            if not isinstance(half, int) or not 1 <= half <= 10:
                raise ValidationError(f"bad half-unit rating for ({user}, {item}): {half!r}")
        self._entries: Mapping[Tuple[str, str], int] = MappingProxyType(entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[str, str, float]]) -> "RatingsTable":
        """Build from ``(user, item, rating)`` rows.

        Raises
        ------
        ValidationError
            Off-grid value or a second rating for the same ``(user, item)``.
        """
        entries: Dict[Tuple[str, str], int] = {}
        for user, item, value in rows:
            key = (user, item)
            if key in entries:
                raise ValidationError(f"duplicate rating for user {user!r}, item {item!r}")
            entries[key] = to_half_units(value)
        return cls(entries)

    # ------------------------------------------------------------------ #
    def get(self, user: str, item: str) -> Optional[float]:
        """Return the rating or ``None`` when absent."""
        half = self._entries.get((user, item))
        return None if half is None else from_half_units(half)

    def half_unit_items(self) -> Iterator[Tuple[Tuple[str, str], int]]:
        return iter(self._entries.items())

    def by_user(self, user: str) -> Dict[str, float]:
        return {i: from_half_units(h) for (u, i), h in self._entries.items() if u == user}

    @property
    def users(self) -> List[str]:
        return sorted({u for u, _ in self._entries})

    def rows(self) -> List[Tuple[str, str, float]]:
        """All ratings as sorted ``(user, item, rating)`` tuples."""
        return sorted((u, i, from_half_units(h)) for (u, i), h in self._entries.items())

    def __iter__(self) -> Iterator[Tuple[str, str, float]]:
        return iter(self.rows())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: object) -> bool:
        return key in self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatingsTable):
            return NotImplemented
        return dict(self._entries) == dict(other._entries)

    def __repr__(self) -> str:
        return f"RatingsTable(n={len(self._entries)})"
