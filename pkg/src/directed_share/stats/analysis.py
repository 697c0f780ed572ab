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
Study-level comparison tables.

Each table is a :class:`pandas.DataFrame` with one row per study group and
a pooled row at the end. Rows whose samples are too small (or constant) for
a test keep their counts and carry ``NaN`` in the test columns.

Groups are always those of the participant whose ratings are compared: the
sender for sender-side tables and the recipient for recipient-side tables.

Public API
----------
- :func:`sender_rating_table`
- :func:`sender_recipient_table`
- :func:`recipient_table`
- :func:`promiscuity_correlations`
- :func:`lmm_shared_table`, :func:`lmm_recipient_table`
- :func:`analyze`
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import ContractError, ConvergenceError, DegenerateSampleError
from ..model.session import StudyGroup
from ..model.study import Study, participant_groups
from ..util.parallel import parallel_map
from .lmm import LmmObservation, condition_lrt
from .ttest import SampleSummary, cohens_d, paired_t, pearson_test, welch_t_from_summary

log = logging.getLogger("directed_share.stats")

__all__ = [
    "ALL_USERS",
    "COMBINED",
    "COMPARISON_COLUMNS",
    "LMM_COLUMNS",
    "sender_rating_table",
    "sender_recipient_table",
    "recipient_table",
    "promiscuity_correlations",
    "lmm_shared_table",
    "lmm_recipient_table",
    "analyze",
]

ALL_USERS = "All users"
COMBINED = "Combined"
OWN_ALGORITHM = "Own Algorithm"
OTHER_ALGORITHM = "Other Algorithm"

COMPARISON_COLUMNS = [
    "group",
    "n_a",
    "mean_a",
    "sd_a",
    "n_b",
    "mean_b",
    "sd_b",
    "t",
    "df",
    "p",
    "p_greater",
    "effect_size",
]
LMM_COLUMNS = ["group", "n", "condition_effect", "chi_square", "p"]

_GROUPS = (StudyGroup.BOTH_SHOWN, StudyGroup.OWN_SHOWN, StudyGroup.OTHER_SHOWN)
_NAN = float("nan")


# --------------------------------------------------------------------------- #
# Row builders
# --------------------------------------------------------------------------- #
def _describe(values: Sequence[float]) -> Tuple[int, float, float]:
    x = np.asarray(values, dtype=np.float64)
    mean = float(x.mean()) if x.size else _NAN
    sd = float(x.std(ddof=1)) if x.size >= 2 else _NAN
    return int(x.size), mean, sd


def _comparison(
    group: str, a: Sequence[float], b: Sequence[float], *, paired: bool = False
) -> List[object]:
    row: List[object] = [group, *_describe(a), *_describe(b)]
    try:
        sa, sb = SampleSummary.of(a), SampleSummary.of(b)
        if paired:
            test = paired_t([x - y for x, y in zip(a, b)])
        else:
            test = welch_t_from_summary(sa, sb)
        d = cohens_d(sa, sb)
    except (ContractError, DegenerateSampleError) as exc:
        log.info("%s: no test (%s)", group, exc)
        return row + [_NAN] * 5
    return row + [test.t, test.df, test.p, test.p_greater, d]


def _frame(rows: List[List[object]], columns: List[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=columns)


# --------------------------------------------------------------------------- #
# t-test tables
# --------------------------------------------------------------------------- #
def sender_rating_table(study: Study) -> pd.DataFrame:
    """Sender ratings of shared (``a``) vs shown-but-not-shared (``b``) items.

    Welch t-test and Cohen's d per sender group, then all senders pooled.
    Unrated items are skipped.
    """
    groups = participant_groups(study)
    shared: Dict[StudyGroup, List[float]] = defaultdict(list)
    other: Dict[StudyGroup, List[float]] = defaultdict(list)
    for rec in study.shares:
        r = study.ratings.get(rec.sender, rec.item)
        if r is None or rec.sender not in groups:
            continue
        (shared if rec.shared else other)[groups[rec.sender]].append(r)

    rows = [_comparison(g.label, shared[g], other[g]) for g in _GROUPS]
    rows.append(
        _comparison(
            ALL_USERS,
            [r for g in _GROUPS for r in shared[g]],
            [r for g in _GROUPS for r in other[g]],
        )
    )
    return _frame(rows, COMPARISON_COLUMNS)


def sender_recipient_table(study: Study) -> pd.DataFrame:
    """Paired sender (``a``) vs recipient (``b``) ratings of shared items.

    Only shares rated by both sides count. The Both-Shown group is also
    split by whether the item came from the sender's own recommendation
    list or only from the partner's.
    """
    groups = participant_groups(study)
    pairs: Dict[str, List[Tuple[float, float]]] = defaultdict(list)
    for rec in study.positives:
        rs = study.ratings.get(rec.sender, rec.item)
        rr = study.ratings.get(rec.recipient, rec.item)
        if rs is None or rr is None or rec.sender not in groups:
            continue
        g = groups[rec.sender]
        pairs[g.label].append((rs, rr))
        if g is StudyGroup.BOTH_SHOWN:
            session = study.session_of(rec.sender)
            assert session is not None
            own = rec.item in session.own_recs_of(rec.sender)
            split = OWN_ALGORITHM if own else OTHER_ALGORITHM
            pairs[f"{g.label}: {split}"].append((rs, rr))

    order = [
        StudyGroup.BOTH_SHOWN.label,
        f"{StudyGroup.BOTH_SHOWN.label}: {OWN_ALGORITHM}",
        f"{StudyGroup.BOTH_SHOWN.label}: {OTHER_ALGORITHM}",
        StudyGroup.OWN_SHOWN.label,
        StudyGroup.OTHER_SHOWN.label,
    ]
    pooled = [p for g in _GROUPS for p in pairs[g.label]]
    rows = []
    for name, ps in [(name, pairs[name]) for name in order] + [(ALL_USERS, pooled)]:
        rows.append(
            _comparison(name, [s for s, _ in ps], [r for _, r in ps], paired=True)
        )
    return _frame(rows, COMPARISON_COLUMNS)


def _recipient_samples(
    study: Study,
) -> Dict[StudyGroup, Tuple[List[LmmObservation], List[LmmObservation]]]:
    """Recipient-rated shared and recommended items per recipient group.

    *Recommended* items are the recipient's own recommendations shown in the
    session that the partner did not share.
    """
    groups = participant_groups(study)
    received: Dict[str, set] = defaultdict(set)
    for rec in study.positives:
        received[rec.recipient].add(rec.item)

    out: Dict[StudyGroup, Tuple[List[LmmObservation], List[LmmObservation]]] = {
        g: ([], []) for g in (StudyGroup.BOTH_SHOWN, StudyGroup.OWN_SHOWN)
    }
    for session in study.sessions:
        for recipient in session.pair:
            g = groups[recipient]
            if g not in out:
                continue
            got = received.get(recipient, set())
            for item in session.shown_items:
                r = study.ratings.get(recipient, item)
                if r is None:
                    continue
                if item in got:
                    out[g][0].append(LmmObservation(r, recipient, item, 1))
                elif item in session.own_recs_of(recipient):
                    out[g][1].append(LmmObservation(r, recipient, item, 0))
    return out


def recipient_table(study: Study) -> pd.DataFrame:
    """Recipient ratings of shared (``a``) vs recommended (``b``) items.

    Other-Shown recipients saw no list built for them and are left out.
    """
    samples = _recipient_samples(study)
    rows = []
    for g, (shared, recommended) in samples.items():
        rows.append(
            _comparison(g.label, [o.rating for o in shared], [o.rating for o in recommended])
        )
    rows.append(
        _comparison(
            COMBINED,
            [o.rating for s, _ in samples.values() for o in s],
            [o.rating for _, r in samples.values() for o in r],
        )
    )
    return _frame(rows, COMPARISON_COLUMNS)


# --------------------------------------------------------------------------- #
# Correlation
# --------------------------------------------------------------------------- #
def promiscuity_correlations(study: Study) -> pd.DataFrame:
    """Correlation between each sender's share count and mean rating of the
    shared items, by the sender and by the recipient.

    Senders with no rated share are left out of the corresponding row.
    """
    by_sender: Dict[str, List[Tuple[Optional[float], Optional[float]]]] = defaultdict(list)
    for rec in study.positives:
        by_sender[rec.sender].append(
            (study.ratings.get(rec.sender, rec.item), study.ratings.get(rec.recipient, rec.item))
        )

    rows = []
    for side, pick in (("sender", 0), ("recipient", 1)):
        counts, means = [], []
        for sender in sorted(by_sender):
            shares = by_sender[sender]
            rated = [s[pick] for s in shares if s[pick] is not None]
            if rated:
                counts.append(float(len(shares)))
                means.append(math.fsum(rated) / len(rated))
        try:
            res = pearson_test(counts, means)
            rows.append([side, res.n, res.r, res.p])
        except (ContractError, DegenerateSampleError) as exc:
            log.info("%s correlation undefined (%s)", side, exc)
            rows.append([side, len(counts), _NAN, _NAN])
    return pd.DataFrame(rows, columns=["rating_by", "n", "r", "p"])


# --------------------------------------------------------------------------- #
# Mixed-model tables
# --------------------------------------------------------------------------- #
def _lmm_row(job: Tuple[str, List[LmmObservation]]) -> List[object]:
    name, data = job
    try:
        cmp = condition_lrt(data)
    except ConvergenceError as exc:
        log.warning("%s: lmm did not converge (%s)", name, exc)
        return [name, len(data), _NAN, _NAN, _NAN]
    except (ContractError, DegenerateSampleError) as exc:
        log.info("%s: no lmm test (%s)", name, exc)
        return [name, len(data), _NAN, _NAN, _NAN]
    return [name, len(data), cmp.full.condition_effect, cmp.lrt.chi_square, cmp.lrt.p]


def _lmm_table(jobs_in: List[Tuple[str, List[LmmObservation]]], jobs: int) -> pd.DataFrame:
    rows = parallel_map(_lmm_row, jobs_in, jobs=jobs, name="lmm")
    return pd.DataFrame(rows, columns=LMM_COLUMNS)


def lmm_shared_table(study: Study, *, jobs: int = 1) -> pd.DataFrame:
    """``rating ~ shared + (1|sender) + (1|item)`` against the model without
    ``shared``, per sender group and pooled."""
    groups = participant_groups(study)
    data: Dict[StudyGroup, List[LmmObservation]] = defaultdict(list)
    for rec in study.shares:
        r = study.ratings.get(rec.sender, rec.item)
        if r is None or rec.sender not in groups:
            continue
        data[groups[rec.sender]].append(LmmObservation(r, rec.sender, rec.item, int(rec.shared)))
    work = [(g.label, data[g]) for g in _GROUPS]
    work.append((ALL_USERS, [o for g in _GROUPS for o in data[g]]))
    return _lmm_table(work, jobs)


def lmm_recipient_table(study: Study, *, jobs: int = 1) -> pd.DataFrame:
    """Recipient ratings, shared vs recommended, per recipient group and
    combined."""
    samples = _recipient_samples(study)
    work = [(g.label, s + r) for g, (s, r) in samples.items()]
    work.append((COMBINED, [o for s, r in samples.values() for o in s + r]))
    return _lmm_table(work, jobs)


# --------------------------------------------------------------------------- #
# All at once
# --------------------------------------------------------------------------- #
TABLES: Dict[str, Callable[..., pd.DataFrame]] = {
    "sender_ratings": sender_rating_table,
    "sender_recipient": sender_recipient_table,
    "recipient_shared_vs_recommended": recipient_table,
    "promiscuity_correlation": promiscuity_correlations,
}


def analyze(study: Study, *, lmm: bool = True, jobs: int = 1) -> Dict[str, pd.DataFrame]:
    """Every table above keyed by a file-friendly name."""
    out = {name: fn(study) for name, fn in TABLES.items()}
    if lmm:
        out["lmm_shared_or_not"] = lmm_shared_table(study, jobs=jobs)
        out["lmm_recipient"] = lmm_recipient_table(study, jobs=jobs)
    log.info("analysis produced %d tables", len(out))
    return out
