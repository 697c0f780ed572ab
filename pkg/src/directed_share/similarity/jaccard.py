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
Jaccard similarity over Like sets.

Public API
----------
- :func:`jaccard`               -- plain set Jaccard (empty/empty -> 0)
- :func:`jaccard_users`         -- over L(u), L(v)
- :func:`jaccard_items`         -- over the likers of two items
- :func:`user_item_preference`  -- mean item-item Jaccard against L(u)

Notes
-----
Sums over sets go through :func:`math.fsum`, so results do not depend on
set iteration order (which varies between interpreter runs).
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, AbstractSet, Optional

from ..model.likes import LikesMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .cache import ItemSimilarityCache

__all__ = [
    "SimilarityScore",
    "jaccard",
    "jaccard_users",
    "jaccard_items",
    "user_item_preference",
]

SimilarityScore = float


def jaccard(a: AbstractSet[str], b: AbstractSet[str]) -> SimilarityScore:
    """Return ``|a & b| / |a | b|``; two empty sets give ``0.0``.

    Examples
    --------
    >>> jaccard({"a", "b"}, {"b", "c"})
    0.3333333333333333
    >>> jaccard(set(), set())
    0.0
    """
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def jaccard_users(u: str, v: str, likes: LikesMatrix) -> SimilarityScore:
    """Jaccard of the two users' Like sets (unknown users count as empty)."""
    return jaccard(likes.items_of(u), likes.items_of(v))


def jaccard_items(i: str, j: str, likes: LikesMatrix) -> SimilarityScore:
    """Jaccard of the two items' liker sets."""
    return jaccard(likes.users_of(i), likes.users_of(j))


def user_item_preference(
    u: str,
    i: str,
    likes: LikesMatrix,
    *,
    exclude_self: bool = False,
    cache: Optional["ItemSimilarityCache"] = None,
) -> SimilarityScore:
    """Estimate how much *u* would like *i*.

    Mean of ``jaccard_items(i, j)`` over ``j in L(u)``.

    Parameters
    ----------
    u, i :
        User and item.
    likes :
        Likes relation.
    exclude_self :
        Drop ``j == i`` from the average. By default ``i`` counts with
        self-similarity 1 when *u* already likes it.
    cache :
        Optional exact item-item table; used instead of recomputing pairs.

    Returns
    -------
    float
        In ``[0, 1]``; ``0.0`` when the averaged set is empty.
    """
    profile = likes.items_of(u)
    if exclude_self and i in profile:
        profile = profile - {i}
    if not profile:
        return 0.0
    if cache is not None:
        total = math.fsum(cache.get(i, j) for j in profile)
    else:
        likers_i = likes.users_of(i)
        total = math.fsum(jaccard(likers_i, likes.users_of(j)) for j in profile)
    return min(1.0, total / len(profile))
