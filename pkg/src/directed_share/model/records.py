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
Identifiers, share events and item metadata.

This module defines the small immutable records the rest of the package
passes around: :class:`ShareRecord` (a directed ``sender -> recipient``
event on one item, shared or shown-but-not-shared) and :class:`ItemMeta`
(external rating and popularity of an item).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NewType

from ..errors import ValidationError

__all__ = ["UserId", "ItemId", "check_id", "ShareRecord", "ItemMeta"]

UserId = NewType("UserId", str)
ItemId = NewType("ItemId", str)


# --------------------------------------------------------------------------- #
# check_id
# --------------------------------------------------------------------------- #
def check_id(value: object, kind: str = "id") -> str:
    """Return *value* if it is a non-empty string, else raise.

    Examples
    --------
    >>> check_id("u1", "user")
    'u1'
    """
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{kind} must be a non-empty string, got {value!r}")
    return value


# --------------------------------------------------------------------------- #
# ShareRecord
# --------------------------------------------------------------------------- #
@dataclass(frozen=True, order=True)
class ShareRecord:
    """A directed share decision.

    Attributes
    ----------
    sender, recipient :
        Participants of the dyad; never equal.
    item :
        Item the sender was shown.
    shared :
        ``True`` when the sender shared *item* with *recipient*, ``False``
        when it was shown but not shared.
    """

    sender: str
    recipient: str
    item: str
    shared: bool

    def __post_init__(self) -> None:
        check_id(self.sender, "sender")
        check_id(self.recipient, "recipient")
        check_id(self.item, "item")
        if self.sender == self.recipient:
            raise ValidationError(f"share from {self.sender!r} to itself")
        object.__setattr__(self, "shared", bool(self.shared))


# --------------------------------------------------------------------------- #
# ItemMeta
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class ItemMeta:
    """External item characteristics.

    Attributes
    ----------
    item :
        Item id.
    ext_rating :
        Average external rating on a 1-10 scale.
    ext_popularity :
        Non-negative popularity count (e.g. number of external votes).
    """

    item: str
    ext_rating: float
    ext_popularity: float

    def __post_init__(self) -> None:
        check_id(self.item, "item")
        r, p = float(self.ext_rating), float(self.ext_popularity)
        if not math.isfinite(r) or not 1.0 <= r <= 10.0:
            raise ValidationError(f"ext_rating of {self.item!r} outside [1,10]: {r}")
        if not math.isfinite(p) or p < 0:
            raise ValidationError(f"ext_popularity of {self.item!r} negative: {p}")
        object.__setattr__(self, "ext_rating", r)
        object.__setattr__(self, "ext_popularity", p)
