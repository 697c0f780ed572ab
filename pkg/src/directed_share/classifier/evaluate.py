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
Evaluation: confusion metrics, stratified cross-validation and ablations.

Cross-validation runs, for every balanced dataset, ``folds`` train/test
rounds on label-stratified folds. Fold metrics are averaged per dataset and
the dataset means are averaged into the grand mean.

With ``promiscuity_scope="fold"`` (default) the ``sharer_prom`` column of
both the training and the held-out rows is recomputed from the positive
labels of the training rows only, so held-out labels never reach a feature.

Public API
----------
- :class:`Scores`, :class:`Metrics`, :func:`metrics`
- :class:`FoldResult`, :class:`EvalReport`, :func:`cross_validate`
- :data:`COARSE_ABLATION`, :data:`DETAILED_ABLATION`, :func:`ablation`
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import ContractError
from ..features.datasets import BalancedDataset
from ..features.vector import PROMISCUITY_COLUMN, feature_indices
from ..util.parallel import parallel_map
from ..util.rng import substream
from .tree import TreeParams, fit_arrays

log = logging.getLogger("directed_share.classifier")

__all__ = [
    "Scores",
    "Metrics",
    "metrics",
    "FoldResult",
    "EvalReport",
    "stratified_folds",
    "cross_validate",
    "AblationRow",
    "COARSE_ABLATION",
    "DETAILED_ABLATION",
    "ablation",
    "ablation_frame",
]

PromiscuityScope = Literal["fold", "global"]


# --------------------------------------------------------------------------- #
# Metrics
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    accuracy: float

    def __post_init__(self) -> None:
        for name in ("precision", "recall", "accuracy"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractError(f"{name} outside [0,1]: {v}")


@dataclass(frozen=True)
class Metrics(Scores):
    """Scores plus the confusion counts they came from.

    ``precision_defined`` is ``False`` when nothing was predicted positive;
    precision is then reported as 0.
    """

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    precision_defined: bool = True


def metrics(predictions: Sequence[bool], truth: Sequence[bool]) -> Metrics:
    """Precision, recall and accuracy of *predictions* against *truth*.

    Raises
    ------
    ContractError
        Different lengths or empty input.
    """
    if len(predictions) != len(truth):
        raise ContractError(f"{len(predictions)} predictions for {len(truth)} labels")
    if not len(truth):
        raise ContractError("no predictions to score")
    p = np.asarray(predictions, dtype=bool)
    t = np.asarray(truth, dtype=bool)
    tp = int(np.sum(p & t))
    fp = int(np.sum(p & ~t))
    fn = int(np.sum(~p & t))
    tn = int(np.sum(~p & ~t))
    defined = tp + fp > 0
    return Metrics(
        precision=tp / (tp + fp) if defined else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        accuracy=(tp + tn) / len(t),
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        precision_defined=defined,
    )


def _mean_scores(items: Sequence[Scores]) -> Scores:
    return Scores(
        precision=float(np.mean([s.precision for s in items])),
        recall=float(np.mean([s.recall for s in items])),
        accuracy=float(np.mean([s.accuracy for s in items])),
    )


# --------------------------------------------------------------------------- #
# Cross-validation
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class FoldResult:
    dataset: int
    fold: int
    metrics: Metrics


@dataclass(frozen=True)
class EvalReport:
    """Cross-validation results.

    Attributes
    ----------
    folds :
        Every ``(dataset, fold)`` result in index order.
    dataset_means :
        Fold-averaged scores per dataset.
    grand :
        Mean of ``dataset_means``.
    """

    folds: Tuple[FoldResult, ...]
    dataset_means: Tuple[Scores, ...]
    grand: Scores

    @property
    def precision(self) -> float:
        return self.grand.precision

    @property
    def recall(self) -> float:
        return self.grand.recall

    @property
    def accuracy(self) -> float:
        return self.grand.accuracy

    def folds_frame(self) -> pd.DataFrame:
        """Per-fold table (plot-ready)."""
        return pd.DataFrame(
            [
                (
                    r.dataset,
                    r.fold,
                    r.metrics.precision,
                    r.metrics.recall,
                    r.metrics.accuracy,
                    int(r.metrics.precision_defined),
                )
                for r in self.folds
            ],
            columns=["dataset", "fold", "precision", "recall", "accuracy", "precision_defined"],
        )

    def summary_frame(self, group: str = "all") -> pd.DataFrame:
        g = self.grand
        return pd.DataFrame(
            [(group, g.precision, g.recall, g.accuracy)],
            columns=["group", "precision", "recall", "accuracy"],
        )


def stratified_folds(labels: np.ndarray, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Assign a fold to every row, dealing shuffled positives then negatives
    round-robin so per-fold positive counts differ by at most one."""
    labels = np.asarray(labels, dtype=bool)
    pos = rng.permutation(np.flatnonzero(labels))
    neg = rng.permutation(np.flatnonzero(~labels))
    fold_of = np.empty(len(labels), dtype=np.int64)
    fold_of[pos] = np.arange(len(pos)) % folds
    fold_of[neg] = (len(pos) + np.arange(len(neg))) % folds
    return fold_of


def _fold_promiscuity(
    senders: Sequence[Optional[str]], y: np.ndarray, train: np.ndarray
) -> Dict[str, int]:
    return dict(
        Counter(s for s, lab, tr in zip(senders, y, train) if tr and lab and s is not None)
    )


def _run_fold(
    X: np.ndarray,
    y: np.ndarray,
    senders: Sequence[Optional[str]],
    fold_of: np.ndarray,
    fold: int,
    params: TreeParams,
    features: Optional[Sequence[str]],
    scope: PromiscuityScope,
) -> Metrics:
    test = fold_of == fold
    train = ~test
    if scope == "fold":
        counts = _fold_promiscuity(senders, y, train)
        X = X.copy()
        X[:, PROMISCUITY_COLUMN] = [counts.get(s, 0) for s in senders]
    tree = fit_arrays(X[train], y[train], params, features)
    return metrics(tree.predict_many(X[test]), y[test])


def cross_validate(
    datasets: Sequence[BalancedDataset],
    params: TreeParams = TreeParams(),
    folds: int = 10,
    seed: int = 0,
    *,
    features: Optional[Sequence[str]] = None,
    promiscuity_scope: PromiscuityScope = "fold",
    jobs: int = 1,
) -> EvalReport:
    """Stratified k-fold evaluation averaged over *datasets*.

    Dataset ``d`` is shuffled with the substream ``(seed, "cv", d)``.

    Raises
    ------
    ContractError
        ``folds < 2``, no datasets, a dataset smaller than ``folds``,
        an unknown promiscuity scope, or (fold scope with ``sharer_prom``
        selected) an instance without a sender.
    """
    if folds < 2:
        raise ContractError(f"folds must be >= 2, got {folds}")
    if not datasets:
        raise ContractError("no datasets to cross-validate")
    if promiscuity_scope not in ("fold", "global"):
        raise ContractError(f"unknown promiscuity scope {promiscuity_scope!r}")
    used = feature_indices(features)
    for d, ds in enumerate(datasets):
        if len(ds) < folds:
            raise ContractError(f"dataset {d} has {len(ds)} rows, fewer than {folds} folds")

    if promiscuity_scope == "fold" and PROMISCUITY_COLUMN in used:
        missing = sum(1 for ds in datasets for x in ds.instances if x.sender is None)
        if missing:
            raise ContractError(
                f"{missing} instances have no sender, so promiscuity cannot be "
                "recounted per fold; attach share records or pass "
                "promiscuity_scope='global'"
            )

    prepared = []
    for d, ds in enumerate(datasets):
        y = ds.labels()
        fold_of = stratified_folds(y, folds, substream(seed, "cv", d))
        prepared.append((ds.matrix(), y, [x.sender for x in ds.instances], fold_of))

    grid = [(d, f) for d in range(len(datasets)) for f in range(folds)]

    def job(cell: Tuple[int, int]) -> Metrics:
        d, f = cell
        X, y, senders, fold_of = prepared[d]
        return _run_fold(X, y, senders, fold_of, f, params, features, promiscuity_scope)

    results = parallel_map(job, grid, jobs=jobs, name="fold")
    fold_results = tuple(FoldResult(d, f, m) for (d, f), m in zip(grid, results))
    means = tuple(
        _mean_scores([r.metrics for r in fold_results if r.dataset == d])
        for d in range(len(datasets))
    )
    report = EvalReport(fold_results, means, _mean_scores(means))
    log.info(
        "cross-validation over %d datasets x %d folds: precision=%.4f recall=%.4f accuracy=%.4f",
        len(datasets),
        folds,
        report.precision,
        report.recall,
        report.accuracy,
    )
    return report


# --------------------------------------------------------------------------- #
# Ablation
# --------------------------------------------------------------------------- #
COARSE_ABLATION: Dict[str, Tuple[str, ...]] = {
    "item": ("ext_rating", "ext_pop"),
    "recipient": ("recip_sim", "sharer_recip_sim"),
    "sender": ("sharer_sim", "sharer_prom"),
    "sender+recipient": ("sharer_sim", "sharer_prom", "recip_sim", "sharer_recip_sim"),
}

DETAILED_ABLATION: Dict[str, Tuple[str, ...]] = {
    "item:ext_rating": ("ext_rating",),
    "item:ext_pop": ("ext_pop",),
    "item:both": COARSE_ABLATION["item"],
    "recipient:recip_sim": ("recip_sim",),
    "recipient:sharer_recip_sim": ("sharer_recip_sim",),
    "recipient:both": COARSE_ABLATION["recipient"],
    "sender:sharer_sim": ("sharer_sim",),
    "sender:sharer_prom": ("sharer_prom",),
    "sender:both": COARSE_ABLATION["sender"],
    "sender+recipient": COARSE_ABLATION["sender+recipient"],
}


@dataclass(frozen=True)
class AblationRow:
    group: str
    features: Tuple[str, ...]
    report: EvalReport


def ablation(
    feature_groups: Dict[str, Sequence[str]],
    datasets: Sequence[BalancedDataset],
    params: TreeParams = TreeParams(),
    folds: int = 10,
    seed: int = 0,
    *,
    promiscuity_scope: PromiscuityScope = "fold",
    jobs: int = 1,
) -> List[AblationRow]:
    """Cross-validate once per feature group, rows in *feature_groups* order.

    Raises
    ------
    ContractError
        A group with no features (or an unknown feature name).
    """
    for group, names in feature_groups.items():
        if not names:
            raise ContractError(f"feature group {group!r} is empty")
        feature_indices(names)
    rows = []
    for group, names in feature_groups.items():
        log.info("ablation group %s: %s", group, ",".join(names))
        report = cross_validate(
            datasets,
            params,
            folds,
            seed,
            features=names,
            promiscuity_scope=promiscuity_scope,
            jobs=jobs,
        )
        rows.append(AblationRow(group, tuple(names), report))
    return rows


def ablation_frame(rows: Sequence[AblationRow]) -> pd.DataFrame:
    """``group,precision,recall,accuracy`` table."""
    return pd.DataFrame(
        [(r.group, r.report.precision, r.report.recall, r.report.accuracy) for r in rows],
        columns=["group", "precision", "recall", "accuracy"],
    )
