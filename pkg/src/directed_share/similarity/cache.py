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
Exact, precomputed item-item Jaccard table.

The cache stores every item pair with at least one common liker. Pairs that
are absent have similarity 0; the diagonal is 1. It is built once and never
mutated afterwards.

CSV layout: ``item_i,item_j,similarity`` with ``item_i < item_j``.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import ValidationError
from ..io.csvio import read_frame, write_frame
from ..model.likes import LikesMatrix

log = logging.getLogger("directed_share.similarity")

__all__ = ["ItemSimilarityCache", "CACHE_COLUMNS"]

CACHE_COLUMNS = ("item_i", "item_j", "similarity")


def _key(i: str, j: str) -> Tuple[str, str]:
    return (i, j) if i < j else (j, i)


class ItemSimilarityCache:
    """Read-only ``(item, item) -> Jaccard`` lookup.

    Parameters
    ----------
    values :
        Off-diagonal similarities keyed by item pair (either order).
    """

    __slots__ = ("_values",)

    def __init__(self, values: Optional[Mapping[Tuple[str, str], float]] = None):
        table: Dict[Tuple[str, str], float] = {}
        for (i, j), v in (values or {}).items():
            if i == j:
                continue
            v = float(v)
            if not math.isfinite(v) or not 0.0 <= v <= 1.0:
                raise ValidationError(f"similarity for ({i}, {j}) outside [0,1]: {v}")
            if v > 0.0:
                table[_key(i, j)] = v
        self._values: Mapping[Tuple[str, str], float] = MappingProxyType(table)

    # ------------------------------------------------------------------ #
    @classmethod
    def build(
        cls, likes: LikesMatrix, items: Optional[Sequence[str]] = None
    ) -> "ItemSimilarityCache":
        """Compute all non-zero pairs from the sparse co-like product.

        ``co = X.T @ X`` counts common likers, the diagonal holds liker-set
        sizes, and ``J = co / (s_i + s_j - co)``.
        """
        x, _, cols = likes.to_csr(items=items)
        co = (x.T @ x).tocoo()
        sizes = np.asarray(x.sum(axis=0)).ravel()
        upper = co.row < co.col
        r, c, inter = co.row[upper], co.col[upper], co.data[upper]
        sims = inter / (sizes[r] + sizes[c] - inter)
        values = {(cols[a], cols[b]): float(s) for a, b, s in zip(r, c, sims)}
        log.debug("item similarity cache: %d items, %d non-zero pairs", len(cols), len(values))
        return cls(values)

    # ------------------------------------------------------------------ #
    def get(self, i: str, j: str) -> float:
        if i == j:
            return 1.0
        return self._values.get(_key(i, j), 0.0)

    def pairs(self) -> Iterator[Tuple[str, str, float]]:
        """Yield ``(item_i, item_j, similarity)`` sorted by pair."""
        for (i, j) in sorted(self._values):
            yield i, j, self._values[(i, j)]

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ItemSimilarityCache):
            return NotImplemented
        return dict(self._values) == dict(other._values)

    def __repr__(self) -> str:
        return f"ItemSimilarityCache(pairs={len(self._values)})"

    # ------------------------------------------------------------------ #
    # CSV
    # ------------------------------------------------------------------ #
    def dump_csv(self, path: Union[str, Path]) -> Path:
        return write_frame(path, pd.DataFrame(list(self.pairs()), columns=list(CACHE_COLUMNS)))

    @classmethod
    def load_csv(cls, path: Union[str, Path]) -> "ItemSimilarityCache":
        """Load a dump, validating ordering, uniqueness and the ``[0, 1]`` range."""
        df = read_frame(path, CACHE_COLUMNS)
        values: Dict[Tuple[str, str], float] = {}
        for n, (i, j, raw) in enumerate(
            df[list(CACHE_COLUMNS)].itertuples(index=False, name=None), start=1
        ):
            if not i < j:
                raise ValidationError(f"{path}: row {n}: expected item_i < item_j")
            if (i, j) in values:
                raise ValidationError(f"{path}: row {n}: duplicate pair ({i}, {j})")
            try:
                v = float(raw)
            except ValueError as exc:
                raise ValidationError(f"{path}: row {n}: bad similarity {raw!r}") from exc
            if not math.isfinite(v) or not 0.0 <= v <= 1.0:
                raise ValidationError(f"{path}: row {n}: similarity outside [0,1]: {v}")
            values[(i, j)] = v
        return cls(values)
