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
Dyad sessions and the study-group classifier.

Both members of a pair see the same list of items: the union of the
recommendations computed for each of them. Which of those lists a
participant actually saw decides their :class:`StudyGroup`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, Tuple

from ..errors import ContractError, InconsistentSessionError, ValidationError
from .records import check_id

__all__ = [
    "StudyGroup",
    "DyadSession",
    "assign_group",
    "MIN_SHOWN",
    "MAX_SHOWN",
    "SINGLE_LIST_SIZE",
]

MIN_SHOWN = 10
MAX_SHOWN = 20
# A single recommendation list holds at most this many items; anything larger
# must mix both partners' lists.
SINGLE_LIST_SIZE = 10


# --------------------------------------------------------------------------- #
# StudyGroup
# --------------------------------------------------------------------------- #
class StudyGroup(str, Enum):
    """Which recommendation lists a participant saw."""

    BOTH_SHOWN = "both-shown"
    OWN_SHOWN = "own-shown"
    OTHER_SHOWN = "other-shown"

    @property
    def label(self) -> str:
        """Display label, e.g. ``"Own-Shown"``."""
        return "-".join(part.capitalize() for part in self.value.split("-"))


# --------------------------------------------------------------------------- #
# DyadSession
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class DyadSession:
    """Items shown to a pair, with the provenance of each item.

    Attributes
    ----------
    user_a, user_b :
        The two partners.
    shown_items :
        Items in ingestion order, without duplicates.
    own_recs_a, own_recs_b :
        Items recommended from each partner's own profile. Their union is
        exactly the shown set; an item may belong to both.
    """

    user_a: str
    user_b: str
    shown_items: Tuple[str, ...]
    own_recs_a: FrozenSet[str]
    own_recs_b: FrozenSet[str]

    def __post_init__(self) -> None:
        check_id(self.user_a, "user_a")
        check_id(self.user_b, "user_b")
        object.__setattr__(self, "shown_items", tuple(self.shown_items))
        object.__setattr__(self, "own_recs_a", frozenset(self.own_recs_a))
        object.__setattr__(self, "own_recs_b", frozenset(self.own_recs_b))

        if self.user_a == self.user_b:
            raise ValidationError(f"session pairs {self.user_a!r} with itself")
        shown = set(self.shown_items)
        if len(shown) != len(self.shown_items):
            raise ValidationError(f"session {self.pair}: duplicate shown items")
        if shown != (self.own_recs_a | self.own_recs_b):
            raise ValidationError(
                f"session {self.pair}: shown items differ from the union of both lists"
            )
        if not MIN_SHOWN <= len(shown) <= MAX_SHOWN:
            raise ValidationError(
                f"session {self.pair}: {len(shown)} items shown, "
                f"expected {MIN_SHOWN}..{MAX_SHOWN}"
            )

    # ------------------------------------------------------------------ #
    @classmethod
    def from_provenance(
        cls, user_a: str, user_b: str, rows: Iterable[Tuple[str, str]]
    ) -> "DyadSession":
        """Build from ``(item, provenance)`` rows, provenance in
        ``{"own_a", "own_b", "both"}``."""
        shown = []
        own_a, own_b = set(), set()
        for item, prov in rows:
            if prov not in ("own_a", "own_b", "both"):
                raise ValidationError(f"unknown provenance {prov!r} for item {item!r}")
            if item not in own_a and item not in own_b:
                shown.append(item)
            if prov in ("own_a", "both"):
                own_a.add(item)
            if prov in ("own_b", "both"):
                own_b.add(item)
        return cls(user_a, user_b, tuple(shown), frozenset(own_a), frozenset(own_b))

    def provenance(self, item: str) -> str:
        in_a, in_b = item in self.own_recs_a, item in self.own_recs_b
        if in_a and in_b:
            return "both"
        if in_a:
            return "own_a"
        if in_b:
            return "own_b"
        raise KeyError(item)

    @property
    def pair(self) -> Tuple[str, str]:
        return (self.user_a, self.user_b)

    @property
    def members(self) -> FrozenSet[str]:
        return frozenset(self.pair)

    def partner_of(self, participant: str) -> str:
        if participant == self.user_a:
            return self.user_b
        if participant == self.user_b:
            return self.user_a
        raise ContractError(f"{participant!r} is not part of session {self.pair}")

    def own_recs_of(self, participant: str) -> FrozenSet[str]:
        if participant == self.user_a:
            return self.own_recs_a
        if participant == self.user_b:
            return self.own_recs_b
        raise ContractError(f"{participant!r} is not part of session {self.pair}")


# --------------------------------------------------------------------------- #
# assign_group
# --------------------------------------------------------------------------- #
def assign_group(participant: str, session: DyadSession) -> StudyGroup:
    """Classify *participant* by the lists they saw in *session*.

    Rules
    -----
    * More than 10 items shown -> ``BOTH_SHOWN`` (both lists were merged).
    * Otherwise ``OWN_SHOWN`` if every item came from the participant's own
      list, ``OTHER_SHOWN`` if every item came from the partner's list.
    * When both lists cover the whole 10-item set, ``user_a`` is
      ``OWN_SHOWN`` and ``user_b`` is ``OTHER_SHOWN`` so partners stay dual.

    Raises
    ------
    ContractError
        *participant* is not a member of *session*.
    InconsistentSessionError
        A 10-item session mixes provenance.
    """
    own = session.own_recs_of(participant)
    other = session.own_recs_of(session.partner_of(participant))

    if len(session.shown_items) > SINGLE_LIST_SIZE:
        return StudyGroup.BOTH_SHOWN

    shown = set(session.shown_items)
    covered_own, covered_other = shown <= own, shown <= other
    if covered_own and covered_other:
        return StudyGroup.OWN_SHOWN if participant == session.user_a else StudyGroup.OTHER_SHOWN
    if covered_own:
        return StudyGroup.OWN_SHOWN
    if covered_other:
        return StudyGroup.OTHER_SHOWN
    raise InconsistentSessionError(
        f"session {session.pair}: {len(shown)} items mix both provenance lists"
    )
