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
The :class:`Study` aggregate and the share-pool helpers built on it.

A study bundles everything ingested for one run: Likes, ratings, share
decisions, dyad sessions, item metadata and the ego-network friend lists.
Share decisions are stored *materialized*: every item shown to a sender
appears once, either shared or not.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from ..errors import ValidationError
from .likes import LikesMatrix
from .ratings import RatingsTable
from .records import ItemMeta, ShareRecord, check_id
from .session import DyadSession, StudyGroup, assign_group

log = logging.getLogger("directed_share.model")

__all__ = [
    "Study",
    "build_friends",
    "materialize_non_shares",
    "validate_shares",
    "participant_groups",
]


# --------------------------------------------------------------------------- #
# Friends
# --------------------------------------------------------------------------- #
def build_friends(pairs: Iterable[Tuple[str, str]]) -> Dict[str, FrozenSet[str]]:
    """Return an undirected adjacency map from ``(user, friend)`` pairs."""
    adj: Dict[str, Set[str]] = defaultdict(set)
    for user, friend in pairs:
        check_id(user, "user")
        check_id(friend, "friend")
        if user == friend:
            raise ValidationError(f"{user!r} listed as its own friend")
        adj[user].add(friend)
        adj[friend].add(user)
    return {u: frozenset(fs) for u, fs in adj.items()}


# --------------------------------------------------------------------------- #
# Share pool
# --------------------------------------------------------------------------- #
def _session_index(sessions: Iterable[DyadSession]) -> Dict[Tuple[str, str], DyadSession]:
    index: Dict[Tuple[str, str], DyadSession] = {}
    for s in sessions:
        for sender in s.pair:
            key = (sender, s.partner_of(sender))
            if key in index:
                raise ValidationError(f"participant {sender!r} appears in two sessions")
            index[key] = s
    return index


def validate_shares(
    sessions: Iterable[DyadSession], shares: Iterable[ShareRecord]
) -> None:
    """Check every record belongs to a session and names a shown item.

    Raises
    ------
    ValidationError
        Unknown sender/recipient pair, unshown item, or contradicting labels
        for the same ``(sender, recipient, item)``.
    """
    index = _session_index(sessions)
    seen: Dict[Tuple[str, str, str], bool] = {}
    for rec in shares:
        session = index.get((rec.sender, rec.recipient))
        if session is None:
            raise ValidationError(
                f"share {rec.sender!r} -> {rec.recipient!r} has no matching session"
            )
        if rec.item not in session.own_recs_a and rec.item not in session.own_recs_b:
            raise ValidationError(
                f"item {rec.item!r} shared by {rec.sender!r} was not shown in its session"
            )
        key = (rec.sender, rec.recipient, rec.item)
        if key in seen and seen[key] != rec.shared:
            raise ValidationError(f"contradicting share labels for {key}")
        seen[key] = rec.shared


def materialize_non_shares(
    sessions: Iterable[DyadSession], shares: Iterable[ShareRecord]
) -> List[ShareRecord]:
    """Return one record per (sender, shown item) of every session.

    Items present among the shared records of *shares* are labelled
    ``shared=True``; every other shown item becomes a shown-but-not-shared
    record. Output order: session order, ``user_a`` before ``user_b``, shown
    order within a session.
    """
    sessions = list(sessions)
    shares = list(shares)
    validate_shares(sessions, shares)
    positive = {(r.sender, r.recipient, r.item) for r in shares if r.shared}

    out: List[ShareRecord] = []
    for s in sessions:
        for sender in s.pair:
            recipient = s.partner_of(sender)
            for item in s.shown_items:
                out.append(
                    ShareRecord(sender, recipient, item, (sender, recipient, item) in positive)
                )
    return out


# --------------------------------------------------------------------------- #
# Study
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Study:
    """Everything known about one study population.

    Attributes
    ----------
    likes :
        Likes relation (external Likes; merge with :func:`to_unary` ratings
        before computing similarities if desired).
    ratings :
        Explicit ratings.
    shares :
        Materialized share decisions (see :func:`materialize_non_shares`).
    sessions :
        Dyad sessions in ingestion order.
    items :
        Item metadata keyed by item id (may not cover every item).
    friends :
        Undirected ego-network adjacency.
    """

    likes: LikesMatrix
    ratings: RatingsTable
    shares: Tuple[ShareRecord, ...]
    sessions: Tuple[DyadSession, ...]
    items: Mapping[str, ItemMeta] = field(default_factory=dict)
    friends: Mapping[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "shares", tuple(self.shares))
        object.__setattr__(self, "sessions", tuple(self.sessions))

    @property
    def participants(self) -> List[str]:
        return sorted({u for s in self.sessions for u in s.pair})

    def session_of(self, participant: str) -> Optional[DyadSession]:
        for s in self.sessions:
            if participant in s.pair:
                return s
        return None

    @property
    def positives(self) -> List[ShareRecord]:
        return [r for r in self.shares if r.shared]

    @property
    def negatives(self) -> List[ShareRecord]:
        return [r for r in self.shares if not r.shared]


def participant_groups(study: Study) -> Dict[str, StudyGroup]:
    """Map every participant to its :class:`StudyGroup`."""
    groups: Dict[str, StudyGroup] = {}
    for s in study.sessions:
        for p in s.pair:
            groups[p] = assign_group(p, s)
    return groups
