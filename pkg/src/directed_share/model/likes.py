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
Unary user <-> item relation.

:class:`LikesMatrix` stores the Likes relation indexed both ways. Only the
user orientation is accepted at construction time; the item orientation is
derived from it, so the two maps are exact transposes by construction.
Users (or items) with no likes are not stored.

Public API
----------
- :class:`LikesMatrix`
- :func:`to_unary`
- :func:`merge_likes`
"""

from __future__ import annotations

from collections import defaultdict
from types import MappingProxyType
from typing import (
    TYPE_CHECKING,
    AbstractSet,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import numpy as np
import scipy.sparse as sps

from ..errors import ContractError, ValidationError
from .records import check_id

if TYPE_CHECKING:  # pragma: no cover
    from .ratings import RatingsTable

__all__ = ["LikesMatrix", "to_unary", "merge_likes"]

_EMPTY: FrozenSet[str] = frozenset()


# --------------------------------------------------------------------------- #
# LikesMatrix
# --------------------------------------------------------------------------- #
class LikesMatrix:
    """Immutable sparse Likes relation with both orientations indexed.

    Parameters
    ----------
    user_to_items :
        Mapping ``user -> iterable of liked items``. Duplicates collapse.

    Examples
    --------
    >>> m = LikesMatrix({"u": ["a", "b"], "v": ["b"]})
    >>> sorted(m.users_of("b"))
    ['u', 'v']
    """

    __slots__ = ("_u2i", "_i2u", "_n")

    def __init__(self, user_to_items: Optional[Mapping[str, Iterable[str]]] = None):
        u2i: Dict[str, FrozenSet[str]] = {}
        i2u: Dict[str, Set[str]] = defaultdict(set)
        for user, items in (user_to_items or {}).items():
            check_id(user, "user")
            liked = frozenset(items)
            if not liked:
                continue
            for item in liked:
                check_id(item, "item")
                i2u[item].add(user)
            u2i[user] = liked
        self._u2i: Mapping[str, FrozenSet[str]] = MappingProxyType(u2i)
        self._i2u: Mapping[str, FrozenSet[str]] = MappingProxyType(
            {i: frozenset(us) for i, us in i2u.items()}
        )
        self._n = sum(len(v) for v in u2i.values())

    # ------------------------------------------------------------------ #
    # Constructors
    # ------------------------------------------------------------------ #
    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "LikesMatrix":
        """Build from ``(user, item)`` pairs."""
        acc: Dict[str, Set[str]] = defaultdict(set)
        for user, item in pairs:
            acc[user].add(item)
        return cls(acc)

    # ------------------------------------------------------------------ #
    # Views
    # ------------------------------------------------------------------ #
    @property
    def user_to_items(self) -> Mapping[str, FrozenSet[str]]:
        return self._u2i

    @property
    def item_to_users(self) -> Mapping[str, FrozenSet[str]]:
        return self._i2u

    def items_of(self, user: str) -> FrozenSet[str]:
        """Return L(user); empty for unknown users."""
        return self._u2i.get(user, _EMPTY)

    def users_of(self, item: str) -> FrozenSet[str]:
        """Return the likers of *item*; empty for unknown items."""
        return self._i2u.get(item, _EMPTY)

    def likes(self, user: str, item: str) -> bool:
        return item in self._u2i.get(user, _EMPTY)

    @property
    def users(self) -> List[str]:
        return sorted(self._u2i)

    @property
    def items(self) -> List[str]:
        return sorted(self._i2u)

    @property
    def n_likes(self) -> int:
        return self._n

    def pairs(self) -> Iterator[Tuple[str, str]]:
        """Yield ``(user, item)`` in sorted order."""
        for user in sorted(self._u2i):
            for item in sorted(self._u2i[user]):
                yield user, item

    # ------------------------------------------------------------------ #
    # Checks / conversions
    # ------------------------------------------------------------------ #
    def check_transpose(self) -> bool:
        """Full scan: ``i in L(u)`` iff ``u in likers(i)``."""
        for user, items in self._u2i.items():
            for item in items:
                if user not in self._i2u.get(item, _EMPTY):
                    return False
        for item, users in self._i2u.items():
            for user in users:
                if item not in self._u2i.get(user, _EMPTY):
                    return False
        return True

    def to_csr(
        self,
        users: Optional[Sequence[str]] = None,
        items: Optional[Sequence[str]] = None,
    ) -> Tuple[sps.csr_matrix, List[str], List[str]]:
        """Return a binary ``users x items`` CSR matrix plus both index lists.

        Rows/columns follow *users* / *items* (default: sorted ids). Likes
        outside the given index are dropped.
        """
        row_ids = list(users) if users is not None else self.users
        col_ids = list(items) if items is not None else self.items
        col_pos = {c: j for j, c in enumerate(col_ids)}
        rows: List[int] = []
        cols: List[int] = []
        for r, user in enumerate(row_ids):
            for item in self._u2i.get(user, _EMPTY):
                j = col_pos.get(item)
                if j is not None:
                    rows.append(r)
                    cols.append(j)
        data = np.ones(len(rows), dtype=np.float64)
        mat = sps.csr_matrix(
            (data, (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=(len(row_ids), len(col_ids)),
        )
        return mat, row_ids, col_ids

    # ------------------------------------------------------------------ #
    # Dunder
    # ------------------------------------------------------------------ #
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LikesMatrix):
            return NotImplemented
        return dict(self._u2i) == dict(other._u2i)

    def __hash__(self) -> int:
        return hash(frozenset(self._u2i.items()))

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"LikesMatrix(users={len(self._u2i)}, items={len(self._i2u)}, likes={self._n})"


# --------------------------------------------------------------------------- #
# to_unary
# --------------------------------------------------------------------------- #
def to_unary(ratings: "RatingsTable", threshold: float = 4.0) -> LikesMatrix:
    """Turn ratings into Likes: ``(u, i)`` is a Like iff rating >= *threshold*.

    Parameters
    ----------
    ratings :
        Validated ratings table (half-step grid).
    threshold :
        Like threshold on the half-step grid (default ``4.0``).

    Raises
    ------
    ContractError
        If *threshold* is not on the half-step grid.
    """
    from .ratings import to_half_units

    try:
        cut = to_half_units(threshold)
    except ValidationError as exc:
        raise ContractError(f"like threshold off the half-step grid: {threshold!r}") from exc
    return LikesMatrix.from_pairs(
        (user, item) for (user, item), half in ratings.half_unit_items() if half >= cut
    )


# --------------------------------------------------------------------------- #
# merge_likes
# --------------------------------------------------------------------------- #
def merge_likes(a: LikesMatrix, b: LikesMatrix) -> LikesMatrix:
    """Per-user set union of two Likes relations."""
    merged: Dict[str, AbstractSet[str]] = dict(a.user_to_items)
    for user, items in b.user_to_items.items():
        merged[user] = merged.get(user, _EMPTY) | items
    return LikesMatrix(merged)
