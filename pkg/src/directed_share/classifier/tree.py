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
Axis-aligned binary decision trees (CART-style, Gini impurity).

Training is greedy recursive partitioning:

* candidate thresholds are midpoints between consecutive distinct values of
  a feature among the node's rows;
* a split must leave at least ``min_leaf`` rows on each side;
* the split with the lowest weighted child impurity wins; ties go to the
  lowest feature index, then the smallest threshold;
* a split is only taken if it strictly lowers impurity;
* leaves predict the majority label, ties predict Non-shared.

Rows with ``value <= threshold`` go left.

Public API
----------
- :class:`TreeParams`
- :class:`Leaf`, :class:`Split`, :class:`DecisionTree`
- :func:`train_tree`, :func:`fit_arrays`, :func:`predict`
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ContractError
from ..features.datasets import BalancedDataset
from ..features.vector import FEATURE_NAMES, FeatureVector, TrainingInstance, feature_indices

log = logging.getLogger("directed_share.classifier")

__all__ = [
    "TreeParams",
    "Leaf",
    "Split",
    "Node",
    "DecisionTree",
    "train_tree",
    "fit_arrays",
    "predict",
    "gini",
]


# --------------------------------------------------------------------------- #
# Parameters / nodes
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class TreeParams:
    """Tree growth limits.

    Attributes
    ----------
    max_depth :
        Maximum number of split levels (``>= 1``).
    min_leaf :
        Minimum rows per child (``>= 1``).
    criterion :
        Impurity measure; only ``"gini"`` is implemented.
    """

    max_depth: int = 5
    min_leaf: int = 5
    criterion: Literal["gini"] = "gini"

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ContractError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_leaf < 1:
            raise ContractError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.criterion != "gini":
            raise ContractError(f"unsupported split criterion {self.criterion!r}")


@dataclass(frozen=True)
class Leaf:
    label: bool


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "Node"
    right: "Node"

    def __post_init__(self) -> None:
        if not np.isfinite(self.threshold):
            raise ContractError(f"non-finite threshold {self.threshold!r}")
        if not 0 <= self.feature < len(FEATURE_NAMES):
            raise ContractError(f"feature index out of range: {self.feature}")


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class DecisionTree:
    """A trained (or loaded) tree over the six-feature vector."""

    root: Node
    feature_names: Tuple[str, ...] = field(default=FEATURE_NAMES)

    def predict(self, fv: Union[FeatureVector, Sequence[float], np.ndarray]) -> bool:
        x = fv.as_array() if isinstance(fv, FeatureVector) else fv
        node = self.root
        while isinstance(node, Split):
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.label

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict(row) for row in np.asarray(X)], dtype=bool)

    @property
    def depth(self) -> int:
        def walk(n: Node) -> int:
            return 0 if isinstance(n, Leaf) else 1 + max(walk(n.left), walk(n.right))

        return walk(self.root)

    @property
    def n_leaves(self) -> int:
        def walk(n: Node) -> int:
            return 1 if isinstance(n, Leaf) else walk(n.left) + walk(n.right)

        return walk(self.root)

    def features_used(self) -> List[str]:
        used = set()
        stack: List[Node] = [self.root]
        while stack:
            n = stack.pop()
            if isinstance(n, Split):
                used.add(n.feature)
                stack += [n.left, n.right]
        return [self.feature_names[i] for i in sorted(used)]


def predict(tree: DecisionTree, fv: Union[FeatureVector, Sequence[float]]) -> bool:
    """Root-to-leaf descent; ``<= threshold`` goes left."""
    return tree.predict(fv)


# --------------------------------------------------------------------------- #
# Training
# --------------------------------------------------------------------------- #
def gini(n_pos: float, n: float) -> float:
    if n == 0:
        return 0.0
    p = n_pos / n
    return 2.0 * p * (1.0 - p)


def _majority(y: np.ndarray) -> Leaf:
    return Leaf(bool(2 * int(y.sum()) > len(y)))


def _best_split(
    X: np.ndarray, y: np.ndarray, columns: Sequence[int], min_leaf: int
) -> Optional[Tuple[float, int, float]]:
    """Return ``(weighted impurity, feature, threshold)`` of the best split."""
    n = len(y)
    best: Optional[Tuple[float, int, float]] = None
    for f in columns:
        order = np.argsort(X[:, f], kind="mergesort")
        xs, ys = X[order, f], y[order].astype(np.float64)
        left_pos = np.cumsum(ys)[:-1]
        n_left = np.arange(1, n, dtype=np.float64)
        boundary = xs[:-1] < xs[1:]
        valid = boundary & (n_left >= min_leaf) & (n - n_left >= min_leaf)
        if not valid.any():
            continue
        total_pos = ys.sum()
        pl = left_pos / n_left
        pr = (total_pos - left_pos) / (n - n_left)
        weighted = (n_left * 2 * pl * (1 - pl) + (n - n_left) * 2 * pr * (1 - pr)) / n
        weighted = np.where(valid, weighted, np.inf)
        k = int(np.argmin(weighted))  # first minimum = smallest threshold
        if best is None or weighted[k] < best[0]:
            lo, hi = float(xs[k]), float(xs[k + 1])
            thr = (lo + hi) / 2.0
            if not lo <= thr < hi:
                thr = lo
            best = (float(weighted[k]), int(f), thr)
    return best


def _grow(
    X: np.ndarray, y: np.ndarray, columns: Sequence[int], params: TreeParams, depth: int
) -> Node:
    n = len(y)
    n_pos = int(y.sum())
    parent = gini(n_pos, n)
    if depth >= params.max_depth or parent == 0.0 or n < 2 * params.min_leaf:
        return _majority(y)
    found = _best_split(X, y, columns, params.min_leaf)
    if found is None or not found[0] < parent:
        return _majority(y)
    weighted, f, thr = found
    assert weighted <= parent + 1e-12, "accepted split increased impurity"
    mask = X[:, f] <= thr
    return Split(
        f,
        thr,
        _grow(X[mask], y[mask], columns, params, depth + 1),
        _grow(X[~mask], y[~mask], columns, params, depth + 1),
    )


def fit_arrays(
    X: np.ndarray,
    y: np.ndarray,
    params: TreeParams = TreeParams(),
    features: Optional[Sequence[str]] = None,
) -> DecisionTree:
    """Train on a ``(n, 6)`` matrix and boolean labels.

    Only the columns named in *features* (default: all) are split on.

    Raises
    ------
    ContractError
        Empty data, shape mismatch or an empty/unknown feature selection.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=bool)
    if X.ndim != 2 or X.shape[1] != len(FEATURE_NAMES) or X.shape[0] != y.shape[0]:
        raise ContractError(f"bad training shapes X={X.shape} y={y.shape}")
    if len(y) == 0:
        raise ContractError("cannot train a tree on no data")
    columns = feature_indices(features)
    tree = DecisionTree(_grow(X, y, columns, params, 0))
    log.debug("trained tree: depth=%d leaves=%d", tree.depth, tree.n_leaves)
    return tree


def train_tree(
    data: Union[BalancedDataset, Sequence[TrainingInstance]],
    params: TreeParams = TreeParams(),
    features: Optional[Sequence[str]] = None,
) -> DecisionTree:
    """Train a tree on a balanced dataset (or any list of instances)."""
    instances = data.instances if isinstance(data, BalancedDataset) else tuple(data)
    if not instances:
        raise ContractError("cannot train a tree on no data")
    X = np.vstack([x.features.as_array() for x in instances])
    y = np.array([x.label for x in instances], dtype=bool)
    return fit_arrays(X, y, params, features)
