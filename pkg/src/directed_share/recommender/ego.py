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
Ego-network recommender.

For a user ``u`` the ``k`` most Jaccard-similar friends are selected and
every item they like is scored by similarity-weighted popularity::

    Score(i, u) = sum_j JSim(u, f_j) * Likes(f_j, i) / sum_j JSim(u, f_j)

The ``n`` best items not already liked by ``u`` are returned.

Public API
----------
- :class:`RecommendationList`
- :func:`top_k_friends`
- :func:`score_item`
- :func:`recommend`
- :func:`recommend_many`
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import AbstractSet, Iterator, List, Mapping, Sequence, Tuple

import pandas as pd

from ..errors import ContractError
from ..model.likes import LikesMatrix
from ..similarity.jaccard import SimilarityScore, jaccard_users
from ..util.parallel import parallel_map

log = logging.getLogger("directed_share.recommender")

__all__ = [
    "RecommendationList",
    "top_k_friends",
    "score_item",
    "recommend",
    "recommend_many",
    "DEFAULT_K",
    "DEFAULT_N",
]

DEFAULT_K = 20
DEFAULT_N = 10

Neighbor = Tuple[str, SimilarityScore]


# --------------------------------------------------------------------------- #
# RecommendationList
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class RecommendationList:
    """Ranked recommendations for one user.

    Attributes
    ----------
    user :
        Target user.
    entries :
        ``(item, score)`` pairs, descending by score then ascending item id.
    """

    user: str
    entries: Tuple[Tuple[str, float], ...] = ()

    @property
    def items(self) -> List[str]:
        return [i for i, _ in self.entries]

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_frame(self) -> pd.DataFrame:
        """Return the ``item_id,score`` table written by the CLI."""
        return pd.DataFrame(list(self.entries), columns=["item_id", "score"])


# --------------------------------------------------------------------------- #
# Neighbors / scoring
# --------------------------------------------------------------------------- #
def top_k_friends(
    u: str, friends: AbstractSet[str], likes: LikesMatrix, k: int = DEFAULT_K
) -> List[Neighbor]:
    """Return the *k* friends most similar to *u*.

    Friends with similarity 0 are kept when fewer than *k* positive ones
    exist; ties are broken by ascending user id. *u* itself is ignored if it
    appears among *friends*.

    Raises
    ------
    ContractError
        ``k < 1``.
    """
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    scored = [(f, jaccard_users(u, f, likes)) for f in friends if f != u]
    scored.sort(key=lambda fs: (-fs[1], fs[0]))
    return scored[:k]


def score_item(
    u: str, neighbors: Sequence[Neighbor], item: str, likes: LikesMatrix
) -> float:
    """Similarity-weighted share of *neighbors* that like *item*.

    Returns ``0.0`` when every neighbor similarity is 0.

    Raises
    ------
    ContractError
        *neighbors* is empty.
    """
    if not neighbors:
        raise ContractError(f"no neighbors given to score {item!r} for {u!r}")
    denom = math.fsum(sim for _, sim in neighbors)
    if denom == 0.0:
        return 0.0
    num = math.fsum(sim for f, sim in neighbors if likes.likes(f, item))
    return num / denom


def recommend(
    u: str,
    friends: AbstractSet[str],
    likes: LikesMatrix,
    k: int = DEFAULT_K,
    n: int = DEFAULT_N,
) -> RecommendationList:
    """Top-*n* items for *u* from its ego network.

    Candidates are the items liked by at least one selected neighbor, minus
    ``L(u)``. Only positive scores are returned, so the list may be shorter
    than *n* (or empty when *u* has no friends or no similar friend).

    Raises
    ------
    ContractError
        ``k < 1`` or ``n < 1``.
    """
    if n < 1:
        raise ContractError(f"n must be >= 1, got {n}")
    neighbors = top_k_friends(u, friends, likes, k)
    if not neighbors or math.fsum(s for _, s in neighbors) == 0.0:
        log.debug("no similar friends for %s", u)
        return RecommendationList(u)

    own = likes.items_of(u)
    candidates = set()
    for f, _ in neighbors:
        candidates |= likes.items_of(f)
    candidates -= own

    scored = [(i, score_item(u, neighbors, i, likes)) for i in candidates]
    scored = [(i, s) for i, s in scored if s > 0.0]
    scored.sort(key=lambda it: (-it[1], it[0]))
    return RecommendationList(u, tuple(scored[:n]))


def recommend_many(
    users: Sequence[str],
    friends: Mapping[str, AbstractSet[str]],
    likes: LikesMatrix,
    k: int = DEFAULT_K,
    n: int = DEFAULT_N,
    *,
    jobs: int = 1,
) -> List[RecommendationList]:
    """Run :func:`recommend` for every user, results in input order."""
    return parallel_map(
        lambda u: recommend(u, friends.get(u, frozenset()), likes, k, n),
        users,
        jobs=jobs,
        name="recommend",
    )
