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
Subcommand implementations.

Every command takes the resolved :class:`~directed_share.cli.params.RunConfig`
and returns the text to print on stdout (possibly empty). Data outputs go to
``cfg.out`` through the atomic writers of :mod:`directed_share.io`.
"""

from __future__ import annotations

import logging
from collections import Counter
from pathlib import Path
from typing import Callable, Dict, List, Sequence

import pandas as pd

from ..classifier import text as tree_text
from ..classifier.evaluate import (
    COARSE_ABLATION,
    DETAILED_ABLATION,
    ablation,
    ablation_frame,
    cross_validate,
)
from ..classifier.tree import TreeParams, train_tree
from ..config import dump_kv
from ..diffusion.baseline import baseline_ic
from ..diffusion.cascade import run as run_cascade
from ..diffusion.config import CascadeConfig
from ..diffusion.graph import read_graph_csv, read_seeds_csv
from ..errors import ContractError, ValidationError
from ..features.datasets import build_balanced_datasets, read_features, write_features
from ..features.vector import TrainingInstance, featurize_records
from ..io.csvio import read_friends, read_likes, read_study, write_frame, write_study, write_text
from ..model.study import Study, participant_groups
from ..recommender.ego import recommend, recommend_many
from ..similarity.cache import ItemSimilarityCache
from ..stats.analysis import analyze
from ..stats.lmm import condition_lrt, read_observations
from ..stats.ttest import SampleSummary, cohens_d, pooled_t_from_summary, welch_t_from_summary
from ..synthgen.generate import generate_study, write_synthetic
from ..synthgen.profile import StudyProfile
from .params import PipelineParams, RunConfig

log = logging.getLogger("directed_share.cli")

__all__ = ["COMMANDS"]


def _out(cfg: RunConfig) -> Path:
    assert cfg.out is not None
    return cfg.out


def _kv_lines(values: Dict[str, object]) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in values.items())


def _fmt(v: object) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# --------------------------------------------------------------------------- #
# Pipeline helpers
# --------------------------------------------------------------------------- #
def _featurize_study(study: Study, params: PipelineParams) -> List[TrainingInstance]:
    cache = ItemSimilarityCache.build(study.likes)
    return featurize_records(
        list(study.shares),
        study.likes,
        study.items,
        study.positives,
        cache=cache,
        exclude_self=params.exclude_self,
    )


def _instances(cfg: RunConfig, params: PipelineParams) -> List[TrainingInstance]:
    if "features" in cfg.inputs:
        return read_features(cfg.inputs["features"])
    return _featurize_study(read_study(cfg.inputs["data"]), params)


# --------------------------------------------------------------------------- #
# Commands
# --------------------------------------------------------------------------- #
def cmd_ingest(cfg: RunConfig) -> str:
    study = read_study(cfg.inputs["data"])
    write_study(study, _out(cfg) / "study")
    groups = Counter(g.value for g in participant_groups(study).values())
    summary = {
        "participants": len(study.participants),
        "sessions": len(study.sessions),
        "likes": study.likes.n_likes,
        "ratings": len(study.ratings),
        "shares": len(study.positives),
        "non_shares": len(study.negatives),
        "items_with_meta": len(study.items),
        **{f"group.{g}": n for g, n in sorted(groups.items())},
    }
    write_text(_out(cfg) / "summary.txt", dump_kv(summary))
    return ""


def cmd_recommend(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    likes = read_likes(cfg.inputs["likes"])
    friends = read_friends(cfg.inputs["friends"])
    if params.user:
        user = params.user
        if user not in friends and not likes.items_of(user):
            raise ContractError(
                f"user {user!r} is in neither the likes nor the friends file"
            )
        rl = recommend(user, friends.get(user, frozenset()), likes, params.k, params.n)
        write_frame(
            _out(cfg) / "recommendations.csv",
            pd.DataFrame(list(rl.entries), columns=["item_id", "score"]),
        )
        log.info("%d recommendations for %s", len(rl.entries), user)
        return ""
    users = sorted(friends)
    lists = recommend_many(users, friends, likes, params.k, params.n, jobs=cfg.jobs)
    rows = [
        (rl.user, rank, item, score)
        for rl in lists
        for rank, (item, score) in enumerate(rl.entries, start=1)
    ]
    write_frame(
        _out(cfg) / "recommendations.csv",
        pd.DataFrame(rows, columns=["user_id", "rank", "item_id", "score"]),
    )
    log.info("recommendations for %d users", len(users))
    return ""


def cmd_featurize(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    instances = _featurize_study(read_study(cfg.inputs["data"]), params)
    write_features(_out(cfg) / "features.csv", instances)
    return ""


def cmd_train(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    tree_params = cfg.params(TreeParams)
    data = build_balanced_datasets(_instances(cfg, params), 1, cfg.seed)[0]
    tree = train_tree(data, tree_params, params.feature_subset)
    write_text(_out(cfg) / "tree.txt", tree_text.dumps(tree))
    return ""


def cmd_evaluate(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    tree_params = cfg.params(TreeParams)
    datasets = build_balanced_datasets(
        _instances(cfg, params), params.datasets, cfg.seed, jobs=cfg.jobs
    )
    report = cross_validate(
        datasets,
        tree_params,
        params.folds,
        cfg.seed,
        features=params.feature_subset,
        promiscuity_scope=params.promiscuity_scope,
        jobs=cfg.jobs,
    )
    write_frame(_out(cfg) / "folds.csv", report.folds_frame())
    write_frame(_out(cfg) / "report.csv", report.summary_frame())
    return _kv_lines(
        {"precision": report.precision, "recall": report.recall, "accuracy": report.accuracy}
    )


def cmd_ablate(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    tree_params = cfg.params(TreeParams)
    groups = DETAILED_ABLATION if params.ablation == "detailed" else COARSE_ABLATION
    datasets = build_balanced_datasets(
        _instances(cfg, params), params.datasets, cfg.seed, jobs=cfg.jobs
    )
    rows = ablation(
        dict(groups),
        datasets,
        tree_params,
        params.folds,
        cfg.seed,
        promiscuity_scope=params.promiscuity_scope,
        jobs=cfg.jobs,
    )
    write_frame(_out(cfg) / "ablation.csv", ablation_frame(rows))
    return ""


def cmd_simulate(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    config = cfg.params(CascadeConfig)
    graph = read_graph_csv(cfg.inputs["graph"])
    seeds = read_seeds_csv(cfg.inputs["seeds"])
    if params.model == "ic":
        result = baseline_ic(graph, seeds, params.ic_p, config.max_steps, cfg.seed)
    else:
        likes = read_likes(cfg.inputs["likes"]) if "likes" in cfg.inputs else None
        cache = ItemSimilarityCache.build(likes) if likes is not None else None
        result = run_cascade(graph, seeds, config, cfg.seed, likes, cache=cache)
    write_frame(_out(cfg) / "timeseries.csv", result.timeseries_frame())
    write_frame(_out(cfg) / "summary.csv", result.summary_frame())
    return _kv_lines(
        {
            "steps": result.steps,
            "shares_attempted": result.total_attempted,
            "shares_accepted": result.total_accepted,
            "adoptions": len(result.adopter_pairs()),
        }
    )


def _parse_summary(raw: str) -> SampleSummary:
    parts = raw.split(",")
    if len(parts) != 3:
        raise ValidationError(f"expected n,mean,sd, got {raw!r}")
    try:
        return SampleSummary(int(parts[0]), float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ValidationError(f"expected n,mean,sd, got {raw!r}") from exc


def cmd_stats_ttest(cfg: RunConfig, summaries: Sequence[str], pooled: bool) -> str:
    a, b = (_parse_summary(s) for s in summaries)
    test = pooled_t_from_summary(a, b) if pooled else welch_t_from_summary(a, b)
    text = _kv_lines(
        {
            "variant": test.variant,
            "t": test.t,
            "df": test.df,
            "p": test.p,
            "p_greater": test.p_greater,
            "p_less": test.p_less,
            "cohens_d": cohens_d(a, b),
        }
    )
    if cfg.out is not None:
        write_text(cfg.out / "ttest.txt", text)
    return text


def cmd_stats_lmm(cfg: RunConfig) -> str:
    cmp = condition_lrt(read_observations(cfg.inputs["ratings"]))
    values: Dict[str, object] = {}
    for prefix, fit in (("full", cmp.full), ("null", cmp.null)):
        values.update({f"{prefix}.{k}": v for k, v in fit.as_dict().items()})
    values.update({"chi_square": cmp.lrt.chi_square, "df": cmp.lrt.df, "p": cmp.lrt.p})
    text = _kv_lines(values)
    if cfg.out is not None:
        write_text(cfg.out / "lmm.txt", text)
    return text


def cmd_stats_analyze(cfg: RunConfig) -> str:
    params = cfg.params(PipelineParams)
    tables = analyze(read_study(cfg.inputs["data"]), lmm=params.lmm, jobs=cfg.jobs)
    for name, df in tables.items():
        write_frame(_out(cfg) / f"{name}.csv", df)
    return ""


def cmd_synth(cfg: RunConfig) -> str:
    profile = cfg.params(StudyProfile)
    synth = generate_study(profile, cfg.seed)
    write_synthetic(synth, _out(cfg))
    return ""


COMMANDS: Dict[str, Callable[[RunConfig], str]] = {
    "ingest": cmd_ingest,
    "recommend": cmd_recommend,
    "featurize": cmd_featurize,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "simulate": cmd_simulate,
    "stats lmm": cmd_stats_lmm,
    "stats analyze": cmd_stats_analyze,
    "synth": cmd_synth,
}
