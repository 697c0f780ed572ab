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
Synthetic study populations with known ground truth.

Generative process
------------------
1. Latent traits ``x_u`` and ``y_i`` (standard normal, ``dim`` columns) plus
   an item bias. Partners' traits correlate by ``homophily``. The affinity
   of ``u`` for ``i`` is ``x_u . y_i / sqrt(dim) + bias_i``.
2. Like counts are log-normal with the profile's mean and sd; items are
   drawn without replacement with weights ``exp(like_temperature * aff)``.
3. Each participant befriends its partner and a random set of background
   users, and gets a 10-item list from the ego-network recommender.
4. Dyads see either both lists merged or one partner's list only.
5. A sender orders the shown items by
   ``rho * aff(sender) + aff(recipient)`` plus Gumbel noise and shares a
   geometric-length prefix. The total number of shares is then adjusted to
   the target exactly.
6. Participants rate a subset of the items they saw (shared items first in
   line). Ratings are ``offset + rating_slope * aff + noise`` rounded to the
   half-step grid, with ``offset`` found by bisection so the sample mean
   matches the target.

Every stage draws from its own substream of the master seed.

Public API
----------
- :class:`GroundTruth`, :class:`SyntheticStudy`
- :func:`generate_study`
- :func:`write_synthetic`, :func:`read_ground_truth`, :func:`write_ground_truth`
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Set, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import CalibrationError, ValidationError
from ..io.csvio import read_frame, write_frame, write_study
from ..model.likes import LikesMatrix
from ..model.ratings import RATING_MAX, RATING_MIN, RatingsTable
from ..model.records import ItemMeta, ShareRecord
from ..model.session import SINGLE_LIST_SIZE, DyadSession
from ..model.study import Study, build_friends, materialize_non_shares
from ..recommender.ego import recommend
from ..util.rng import substream
from .profile import StudyProfile

log = logging.getLogger("directed_share.synthgen")

__all__ = [
    "GroundTruth",
    "SyntheticStudy",
    "generate_study",
    "write_synthetic",
    "write_ground_truth",
    "read_ground_truth",
    "TRUTH_DIR",
    "TRUTH_FILE",
]

TRUTH_DIR = "truth"
TRUTH_FILE = "groundtruth.csv"
TRUTH_COLUMNS = ["kind", "user_id", "recipient_id", "item_id", "field", "value"]

_MAX_RETRIES = 6
_BISECTION_STEPS = 60


# --------------------------------------------------------------------------- #
# Ground truth
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class GroundTruth:
    """Hidden generative state of a synthetic study.

    Attributes
    ----------
    user_traits, item_traits :
        Latent trait vectors.
    item_bias :
        Additive item term of the affinity.
    share_scores :
        Noise-free sharing score ``rho * aff(sender) + aff(recipient)`` for
        every ``(sender, recipient, item)`` shown.
    """

    user_traits: Mapping[str, Tuple[float, ...]]
    item_traits: Mapping[str, Tuple[float, ...]]
    item_bias: Mapping[str, float]
    share_scores: Mapping[Tuple[str, str, str], float]

    def affinity(self, user: str, item: str) -> float:
        x, y = self.user_traits[user], self.item_traits[item]
        return math.fsum(a * b for a, b in zip(x, y)) / math.sqrt(len(x)) + self.item_bias[item]

    def to_frame(self) -> pd.DataFrame:
        rows: List[Tuple[str, str, str, str, str, str]] = []
        for u in sorted(self.user_traits):
            for k, v in enumerate(self.user_traits[u]):
                rows.append(("user", u, "", "", f"trait{k}", repr(v)))
        for i in sorted(self.item_traits):
            for k, v in enumerate(self.item_traits[i]):
                rows.append(("item", "", "", i, f"trait{k}", repr(v)))
            rows.append(("item", "", "", i, "bias", repr(self.item_bias[i])))
        for (s, r, i), v in sorted(self.share_scores.items()):
            rows.append(("share", s, r, i, "score", repr(v)))
        return pd.DataFrame(rows, columns=TRUTH_COLUMNS)

    @classmethod
    def from_frame(cls, df: pd.DataFrame) -> "GroundTruth":
        users: Dict[str, Dict[int, float]] = {}
        items: Dict[str, Dict[int, float]] = {}
        bias: Dict[str, float] = {}
        scores: Dict[Tuple[str, str, str], float] = {}
        for kind, user, recipient, item, name, raw in df[TRUTH_COLUMNS].itertuples(
            index=False, name=None
        ):
            value = float(raw)
            if kind == "user":
                users.setdefault(user, {})[_trait_index(name)] = value
            elif kind == "item" and name == "bias":
                bias[item] = value
            elif kind == "item":
                items.setdefault(item, {})[_trait_index(name)] = value
            elif kind == "share":
                scores[(user, recipient, item)] = value
            else:
                raise ValidationError(f"unknown ground-truth row kind {kind!r}")
        return cls(
            {u: tuple(t[k] for k in sorted(t)) for u, t in users.items()},
            {i: tuple(t[k] for k in sorted(t)) for i, t in items.items()},
            bias,
            scores,
        )


def _trait_index(name: str) -> int:
    if not name.startswith("trait") or not name[5:].isdigit():
        raise ValidationError(f"bad ground-truth field {name!r}")
    return int(name[5:])


def write_ground_truth(truth: GroundTruth, path: Union[str, Path]) -> Path:
    return write_frame(path, truth.to_frame())


def read_ground_truth(path: Union[str, Path]) -> GroundTruth:
    return GroundTruth.from_frame(read_frame(path, TRUTH_COLUMNS))


@dataclass(frozen=True)
class SyntheticStudy:
    study: Study
    truth: GroundTruth
    profile: StudyProfile
    seed: int


def write_synthetic(synth: SyntheticStudy, directory: Union[str, Path]) -> List[Path]:
    """Write the study CSVs to *directory* and the ground truth under
    ``truth/`` so pipeline inputs never include it."""
    d = Path(directory)
    written = write_study(synth.study, d)
    written.append(write_ground_truth(synth.truth, d / TRUTH_DIR / TRUTH_FILE))
    return written


# --------------------------------------------------------------------------- #
# Stages
# --------------------------------------------------------------------------- #
def _ids(prefix: str, n: int) -> List[str]:
    width = max(4, len(str(n)))
    return [f"{prefix}{k:0{width}d}" for k in range(n)]


def _lognormal_params(mean: float, sd: float) -> Tuple[float, float]:
    s2 = math.log1p((sd / mean) ** 2)
    return math.log(mean) - s2 / 2.0, math.sqrt(s2)


def _adjust_total(
    counts: np.ndarray, caps: np.ndarray, target: int, rng: np.random.Generator, what: str
) -> np.ndarray:
    """Move single units between entries until ``counts.sum() == target``."""
    if target > int(caps.sum()):
        raise CalibrationError(
            f"{what}: target {target} exceeds the capacity of {int(caps.sum())}"
        )
    counts = np.minimum(counts, caps).astype(np.int64)
    start = int(counts.sum())
    while counts.sum() < target:
        counts[rng.choice(np.flatnonzero(counts < caps))] += 1
    while counts.sum() > target:
        counts[rng.choice(np.flatnonzero(counts > 0))] -= 1
    log.debug("%s: adjusted total %d -> %d", what, start, target)
    return counts


def _recommendation_lists(
    participants: List[str],
    friends: Dict[str, Set[str]],
    background: List[str],
    likes: LikesMatrix,
    profile: StudyProfile,
    rng: np.random.Generator,
) -> Dict[str, List[str]]:
    lists: Dict[str, List[str]] = {}
    for u in participants:
        k = profile.neighbors
        for attempt in range(_MAX_RETRIES + 1):
            recs = recommend(u, friends[u], likes, k, SINGLE_LIST_SIZE).items
            if len(recs) == SINGLE_LIST_SIZE:
                break
            log.debug(
                "%s: %d recommendations with k=%d (retry %d)", u, len(recs), k, attempt + 1
            )
            spare = [b for b in background if b not in friends[u]]
            if spare:
                n_new = min(len(spare), profile.friends_per_participant)
                friends[u].update(rng.choice(spare, size=n_new, replace=False).tolist())
            k *= 2
        else:
            raise CalibrationError(
                f"recommender produced only {len(recs)} items for {u!r}; "
                "raise n_background, friends_per_participant or likes_mean"
            )
        lists[u] = recs
    return lists


def _discretize(values: np.ndarray) -> np.ndarray:
    return np.clip(np.round(values * 2.0) / 2.0, RATING_MIN, RATING_MAX)


def _calibrate_offset(latent: np.ndarray, target: float) -> float:
    lo, hi = RATING_MIN - 10.0, RATING_MAX + 10.0
    for step in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        m = float(_discretize(mid + latent).mean())
        log.debug("rating offset bisection %d: offset=%.6f mean=%.6f", step, mid, m)
        if m < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------- #
# generate_study
# --------------------------------------------------------------------------- #
def generate_study(profile: StudyProfile, seed: int) -> SyntheticStudy:
    """Draw a synthetic study for *profile* (see module docstring).

    Raises
    ------
    CalibrationError
        The profile cannot be met: too many shares or ratings for the items
        shown, or an ego network too sparse for a full recommendation list.
    """
    n_part = profile.n_participants
    participants = _ids("p", n_part)
    background = _ids("f", profile.n_background)
    items = _ids("m", profile.n_items)
    users = participants + background
    d = profile.dim

    # -- traits ---------------------------------------------------------- #
    rng = substream(seed, "traits")
    x = rng.standard_normal((len(users), d))
    h = profile.homophily
    x[1:n_part:2] = h * x[0:n_part:2] + math.sqrt(1.0 - h * h) * x[1:n_part:2]
    y = rng.standard_normal((profile.n_items, d))
    bias = rng.normal(0.0, 0.5, profile.n_items)
    aff = x @ y.T / math.sqrt(d) + bias

    # -- likes ----------------------------------------------------------- #
    rng = substream(seed, "likes")
    mu, sigma = _lognormal_params(profile.likes_mean, profile.likes_sd)
    counts = np.rint(rng.lognormal(mu, sigma, len(users))).astype(np.int64)
    counts[:n_part] = np.maximum(counts[:n_part], profile.min_participant_likes)
    counts = np.clip(counts, 1, max(1, profile.n_items // 2))
    keys = profile.like_temperature * aff + rng.gumbel(size=aff.shape)
    order = np.argsort(-keys, axis=1, kind="stable")
    likes = LikesMatrix(
        {u: [items[j] for j in order[k, : counts[k]]] for k, u in enumerate(users)}
    )

    # -- ego networks and recommendation lists --------------------------- #
    rng = substream(seed, "friends")
    friends: Dict[str, Set[str]] = {}
    n_friends = min(profile.friends_per_participant, profile.n_background)
    for k, u in enumerate(participants):
        partner = participants[k ^ 1]
        picked = rng.choice(background, size=n_friends, replace=False).tolist()
        friends[u] = {partner, *picked}
    lists = _recommendation_lists(participants, friends, background, likes, profile, rng)

    # -- sessions -------------------------------------------------------- #
    rng = substream(seed, "sessions")
    sessions: List[DyadSession] = []
    for k in range(profile.n_pairs):
        a, b = participants[2 * k], participants[2 * k + 1]
        ra, rb = lists[a], lists[b]
        if rng.random() < profile.both_shown_fraction:
            shown = list(dict.fromkeys(ra + rb))
            sessions.append(DyadSession(a, b, tuple(shown), frozenset(ra), frozenset(rb)))
        elif rng.random() < 0.5:
            sessions.append(DyadSession(a, b, tuple(ra), frozenset(ra), frozenset()))
        else:
            sessions.append(DyadSession(a, b, tuple(rb), frozenset(), frozenset(rb)))

    # -- shares ---------------------------------------------------------- #
    rng = substream(seed, "shares")
    row = {u: k for k, u in enumerate(users)}
    col = {i: k for k, i in enumerate(items)}
    senders: List[Tuple[str, str, List[str]]] = []
    scores: Dict[Tuple[str, str, str], float] = {}
    for s in sessions:
        for sender in s.pair:
            recipient = s.partner_of(sender)
            shown = list(s.shown_items)
            base = np.array(
                [
                    profile.rho * aff[row[sender], col[i]] + aff[row[recipient], col[i]]
                    for i in shown
                ]
            )
            for i, v in zip(shown, base):
                scores[(sender, recipient, i)] = float(v)
            noisy = base + profile.share_noise * rng.gumbel(size=len(shown))
            ranked = [shown[j] for j in np.argsort(-noisy, kind="stable")]
            senders.append((sender, recipient, ranked))

    p = 1.0 / (1.0 + profile.shares_per_person)
    prefix = rng.geometric(p, size=len(senders)) - 1
    caps = np.array([len(r) for _, _, r in senders])
    target = int(round(profile.shares_per_person * n_part))
    prefix = _adjust_total(prefix, caps, target, rng, "shares")
    positives = [
        ShareRecord(sender, recipient, item, True)
        for (sender, recipient, ranked), n in zip(senders, prefix)
        for item in ranked[:n]
    ]
    records = materialize_non_shares(sessions, positives)

    # -- ratings --------------------------------------------------------- #
    rng = substream(seed, "ratings")
    involved: Dict[str, Set[str]] = {u: set() for u in participants}
    for r in positives:
        involved[r.sender].add(r.item)
        involved[r.recipient].add(r.item)
    seen = {u: list(s.shown_items) for s in sessions for u in s.pair}
    caps = np.array([len(seen[u]) for u in participants])
    n_rated = np.maximum(rng.poisson(profile.ratings_per_person, n_part), 2)
    target = int(round(profile.ratings_per_person * n_part))
    n_rated = _adjust_total(n_rated, caps, target, rng, "ratings")

    cells: List[Tuple[str, str]] = []
    for u, n in zip(participants, n_rated):
        pool = seen[u]
        w = np.array([3.0 if i in involved[u] else 1.0 for i in pool])
        picked = rng.choice(len(pool), size=int(n), replace=False, p=w / w.sum())
        cells.extend((u, pool[j]) for j in sorted(picked))
    latent = np.array([profile.rating_slope * aff[row[u], col[i]] for u, i in cells])
    latent += rng.normal(0.0, profile.rating_noise, len(cells))
    offset = _calibrate_offset(latent, profile.mean_rating)
    values = _discretize(offset + latent)
    ratings = RatingsTable.from_rows(
        (u, i, float(v)) for (u, i), v in zip(cells, values)
    )

    # -- item metadata --------------------------------------------------- #
    rng = substream(seed, "items")
    ext = np.clip(np.round(6.5 + 0.2 * bias + rng.normal(0.0, 1.0, len(items)), 1), 1.0, 10.0)
    pop = np.floor(rng.lognormal(11.0, 1.5, len(items)))
    metas = {i: ItemMeta(i, float(ext[k]), float(pop[k])) for k, i in enumerate(items)}

    study = Study(
        likes=likes,
        ratings=ratings,
        shares=tuple(records),
        sessions=tuple(sessions),
        items=metas,
        friends=build_friends((u, f) for u in participants for f in sorted(friends[u])),
    )
    truth = GroundTruth(
        {u: tuple(float(v) for v in x[k]) for k, u in enumerate(users)},
        {i: tuple(float(v) for v in y[k]) for k, i in enumerate(items)},
        {i: float(bias[k]) for k, i in enumerate(items)},
        scores,
    )
    log.info(
        "synthetic study: %d pairs, %d likes, %d ratings (mean %.3f), %d shares",
        profile.n_pairs,
        likes.n_likes,
        len(ratings),
        float(values.mean()) if len(values) else float("nan"),
        len(positives),
    )
    return SyntheticStudy(study, truth, profile, int(seed))
