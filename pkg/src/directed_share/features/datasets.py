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
Balanced datasets and the ``features.csv`` table.

:func:`build_balanced_datasets` keeps every positive instance and draws the
same number of negatives, without replacement, from the shown-but-not-shared
pool. Dataset ``i`` uses the substream ``(seed, "dataset", i)`` so datasets
can be built in any order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ContractError, InsufficientNegativesError, ValidationError
from ..io.csvio import read_frame, write_frame
from ..model.records import ShareRecord
from ..util.parallel import parallel_map
from ..util.rng import derive_seed, substream
from .vector import FEATURE_NAMES, FeatureVector, TrainingInstance

log = logging.getLogger("directed_share.features")

__all__ = [
    "BalancedDataset",
    "build_balanced_datasets",
    "FEATURES_COLUMNS",
    "write_features",
    "read_features",
]


# --------------------------------------------------------------------------- #
# BalancedDataset
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class BalancedDataset:
    """Equal numbers of positive and negative instances.

    Attributes
    ----------
    instances :
        Positives first (input order), then the sampled negatives (pool
        order).
    seed :
        Seed of the substream the negatives were drawn from.
    """

    instances: Tuple[TrainingInstance, ...]
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "instances", tuple(self.instances))
        n_pos = sum(1 for x in self.instances if x.label)
        if 2 * n_pos != len(self.instances):
            raise ContractError(
                f"dataset not balanced: {n_pos} positives of {len(self.instances)}"
            )

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def n_positive(self) -> int:
        return len(self.instances) // 2

    def matrix(self) -> np.ndarray:
        """Feature matrix, one row per instance."""
        if not self.instances:
            return np.empty((0, len(FEATURE_NAMES)))
        return np.vstack([x.features.as_array() for x in self.instances])

    def labels(self) -> np.ndarray:
        return np.array([x.label for x in self.instances], dtype=bool)


def build_balanced_datasets(
    instances: Sequence[TrainingInstance],
    m: int = 10,
    seed: int = 0,
    *,
    jobs: int = 1,
) -> List[BalancedDataset]:
    """Sample *m* balanced datasets from *instances*.

    Raises
    ------
    ContractError
        ``m < 1`` or no positive instances.
    InsufficientNegativesError
        Fewer negatives than positives.
    """
    if m < 1:
        raise ContractError(f"m must be >= 1, got {m}")
    pos = [x for x in instances if x.label]
    neg = [x for x in instances if not x.label]
    if not pos:
        raise ContractError("no positive instances to balance")
    if len(neg) < len(pos):
        raise InsufficientNegativesError(
            f"{len(neg)} negatives available for {len(pos)} positives"
        )

    def one(i: int) -> BalancedDataset:
        rng = substream(seed, "dataset", i)
        picked = np.sort(rng.choice(len(neg), size=len(pos), replace=False))
        return BalancedDataset(
            tuple(pos) + tuple(neg[j] for j in picked), derive_seed(seed, "dataset", i)
        )

    datasets = parallel_map(one, range(m), jobs=jobs, name="dataset")
    log.info("built %d balanced datasets of %d instances", m, 2 * len(pos))
    return datasets


# --------------------------------------------------------------------------- #
# features.csv
# --------------------------------------------------------------------------- #
FEATURES_COLUMNS = (
    "sender",
    "recipient",
    "item",
    "sender_item_sim",
    "recipient_item_sim",
    "sender_recipient_sim",
    "sender_promiscuity",
    "ext_rating",
    "ext_popularity",
    "label",
)


def write_features(path: Union[str, Path], instances: Sequence[TrainingInstance]) -> Path:
    """Write instances (which must carry their share record) to CSV."""
    rows = []
    for x in instances:
        if x.record is None:
            raise ContractError("instance without a share record cannot be written")
        f = x.features
        rows.append(
            (
                x.record.sender,
                x.record.recipient,
                x.record.item,
                f.sender_item_sim,
                f.recipient_item_sim,
                f.sender_recipient_sim,
                int(f.sender_promiscuity),
                f.item_ext_rating,
                f.item_ext_popularity,
                int(x.label),
            )
        )
    return write_frame(path, pd.DataFrame(rows, columns=list(FEATURES_COLUMNS)))


def read_features(path: Union[str, Path]) -> List[TrainingInstance]:
    df = read_frame(path, FEATURES_COLUMNS)
    out: List[TrainingInstance] = []
    for n, row in enumerate(
        df[list(FEATURES_COLUMNS)].itertuples(index=False, name=None), start=1
    ):
        sender, recipient, item, *values, label = row
        if label not in ("0", "1"):
            raise ValidationError(f"{path}: row {n}: label must be 0 or 1, got {label!r}")
        try:
            fv = FeatureVector.from_array([float(v) for v in values])
            rec = ShareRecord(sender, recipient, item, label == "1")
        except (ValueError, ContractError) as exc:
            raise ValidationError(f"{path}: row {n}: {exc}") from exc
        out.append(TrainingInstance(fv, rec.shared, rec))
    return out
