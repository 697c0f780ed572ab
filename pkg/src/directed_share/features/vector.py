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
Share-prediction feature vectors.

Six features describe a ``(sender, recipient, item)`` triple, in this fixed
column order (the short names are the ones used in tree text)::

    sharer_sim        sender-item preference estimate
    recip_sim         recipient-item preference estimate
    sharer_recip_sim  sender-recipient Like-set Jaccard
    sharer_prom       sender promiscuity (shares in the training data)
    ext_rating        external average rating, 1-10
    ext_pop           external popularity count

Public API
----------
- :data:`FEATURE_NAMES`
- :class:`FeatureVector`, :class:`TrainingInstance`
- :func:`promiscuity`, :func:`promiscuity_counts`
- :func:`featurize`, :func:`featurize_records`
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from ..errors import ContractError
from ..model.likes import LikesMatrix
from ..model.records import ItemMeta, ShareRecord
from ..similarity.cache import ItemSimilarityCache
from ..similarity.jaccard import jaccard_users, user_item_preference

log = logging.getLogger("directed_share.features")

__all__ = [
    "FEATURE_NAMES",
    "PROMISCUITY_COLUMN",
    "FeatureVector",
    "TrainingInstance",
    "promiscuity",
    "promiscuity_counts",
    "featurize",
    "featurize_records",
    "feature_indices",
]

FEATURE_NAMES = (
    "sharer_sim",
    "recip_sim",
    "sharer_recip_sim",
    "sharer_prom",
    "ext_rating",
    "ext_pop",
)
PROMISCUITY_COLUMN = FEATURE_NAMES.index("sharer_prom")


def feature_indices(names: Optional[Iterable[str]]) -> List[int]:
    """Map short feature names to column indices (``None`` -> all columns).

    Raises
    ------
    ContractError
        Unknown name or an empty selection.
    """
    if names is None:
        return list(range(len(FEATURE_NAMES)))
    out: List[int] = []
    for name in names:
        if name not in FEATURE_NAMES:
            raise ContractError(f"unknown feature {name!r}; expected one of {FEATURE_NAMES}")
        idx = FEATURE_NAMES.index(name)
        if idx not in out:
            out.append(idx)
    if not out:
        raise ContractError("empty feature set")
    return sorted(out)


# --------------------------------------------------------------------------- #
# FeatureVector
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class FeatureVector:
    """The six predictor values of one directed share decision."""

    sender_item_sim: float
    recipient_item_sim: float
    sender_recipient_sim: float
    sender_promiscuity: float
    item_ext_rating: float
    item_ext_popularity: float

    def __post_init__(self) -> None:
        for name in (
            "sender_item_sim",
            "recipient_item_sim",
            "sender_recipient_sim",
            "sender_promiscuity",
            "item_ext_rating",
            "item_ext_popularity",
        ):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ContractError(f"{name} is not finite: {v}")
            object.__setattr__(self, name, v)
        for name in ("sender_item_sim", "recipient_item_sim", "sender_recipient_sim"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ContractError(f"{name} outside [0,1]: {getattr(self, name)}")
        if self.sender_promiscuity < 0 or self.item_ext_popularity < 0:
            raise ContractError("promiscuity and popularity must be non-negative")

    def as_array(self) -> np.ndarray:
        """Values in :data:`FEATURE_NAMES` order."""
        return np.array(
            [
                self.sender_item_sim,
                self.recipient_item_sim,
                self.sender_recipient_sim,
                self.sender_promiscuity,
                self.item_ext_rating,
                self.item_ext_popularity,
            ],
            dtype=np.float64,
        )

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "FeatureVector":
        if len(values) != len(FEATURE_NAMES):
            raise ContractError(f"expected {len(FEATURE_NAMES)} values, got {len(values)}")
        return cls(*(float(v) for v in values))

    def with_promiscuity(self, value: float) -> "FeatureVector":
        return replace(self, sender_promiscuity=float(value))


@dataclass(frozen=True)
class TrainingInstance:
    """A labelled feature vector, optionally tied to its share record.

    The label is stored separately from ``record.shared`` so label-permuted
    copies can be built for null experiments.
    """

    features: FeatureVector
    label: bool
    record: Optional[ShareRecord] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "label", bool(self.label))

    @property
    def sender(self) -> Optional[str]:
        return None if self.record is None else self.record.sender


# --------------------------------------------------------------------------- #
# Promiscuity
# --------------------------------------------------------------------------- #
def promiscuity(sender: str, training_shares: Iterable[ShareRecord]) -> int:
    """Number of ``shared=True`` records by *sender* in *training_shares*."""
    return sum(1 for r in training_shares if r.sender == sender and r.shared)


def promiscuity_counts(training_shares: Iterable[ShareRecord]) -> Dict[str, int]:
    """Promiscuity of every sender at once."""
    return dict(Counter(r.sender for r in training_shares if r.shared))


# --------------------------------------------------------------------------- #
# Featurization
# --------------------------------------------------------------------------- #
def _vector(
    sender: str,
    recipient: str,
    item: str,
    likes: LikesMatrix,
    meta: ItemMeta,
    prom: int,
    cache: Optional[ItemSimilarityCache],
    exclude_self: bool,
) -> FeatureVector:
    return FeatureVector(
        sender_item_sim=user_item_preference(
            sender, item, likes, exclude_self=exclude_self, cache=cache
        ),
        recipient_item_sim=user_item_preference(
            recipient, item, likes, exclude_self=exclude_self, cache=cache
        ),
        sender_recipient_sim=jaccard_users(sender, recipient, likes),
        sender_promiscuity=prom,
        item_ext_rating=meta.ext_rating,
        item_ext_popularity=meta.ext_popularity,
    )


def featurize(
    sender: str,
    recipient: str,
    item: str,
    likes: LikesMatrix,
    meta: Optional[ItemMeta],
    training_shares: Iterable[ShareRecord],
    *,
    cache: Optional[ItemSimilarityCache] = None,
    exclude_self: bool = False,
) -> FeatureVector:
    """Build the feature vector of one triple.

    Raises
    ------
    ContractError
        *meta* is missing or describes another item. Batch callers should
        use :func:`featurize_records`, which skips such triples instead.
    """
    if meta is None:
        raise ContractError(f"no item metadata for {item!r}")
    if meta.item != item:
        raise ContractError(f"metadata for {meta.item!r} passed for item {item!r}")
    return _vector(
        sender,
        recipient,
        item,
        likes,
        meta,
        promiscuity(sender, training_shares),
        cache,
        exclude_self,
    )


def featurize_records(
    records: Sequence[ShareRecord],
    likes: LikesMatrix,
    items: Mapping[str, ItemMeta],
    training_shares: Optional[Iterable[ShareRecord]] = None,
    *,
    cache: Optional[ItemSimilarityCache] = None,
    exclude_self: bool = False,
) -> List[TrainingInstance]:
    """Featurize every record whose item has metadata.

    Promiscuity is counted over *training_shares* (default: *records*).
    Records without metadata are dropped and reported in the log.
    """
    counts = promiscuity_counts(records if training_shares is None else training_shares)
    out: List[TrainingInstance] = []
    skipped = 0
    for rec in records:
        meta = items.get(rec.item)
        if meta is None:
            skipped += 1
            log.debug("skip %s -> %s / %s: no item metadata", rec.sender, rec.recipient, rec.item)
            continue
        fv = _vector(
            rec.sender,
            rec.recipient,
            rec.item,
            likes,
            meta,
            counts.get(rec.sender, 0),
            cache,
            exclude_self,
        )
        out.append(TrainingInstance(fv, rec.shared, rec))
    if skipped:
        log.info("skipped %d of %d records without item metadata", skipped, len(records))
    return out
