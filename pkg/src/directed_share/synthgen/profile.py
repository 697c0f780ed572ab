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

"""Aggregate targets and generative knobs of a synthetic study."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Any, Dict, Mapping

from ..config import coerce_fields
from ..errors import ContractError

__all__ = ["StudyProfile"]


@dataclass(frozen=True)
class StudyProfile:
    """Targets and knobs for :func:`~directed_share.synthgen.generate_study`.

    Attributes
    ----------
    n_pairs :
        Number of dyads; participants are ``2 * n_pairs``.
    likes_mean, likes_sd :
        Mean and standard deviation of Likes per person (log-normal counts).
    ratings_per_person :
        Ratings per participant; the total is hit exactly.
    mean_rating :
        Target mean of all ratings on the half-step grid.
    shares_per_person :
        Shares per participant; the total is hit exactly.
    dim :
        Dimension of the latent user and item traits.
    rho :
        Weight of the sender's affinity relative to the recipient's when a
        sender orders shown items for sharing.
    homophily :
        Correlation between the latent traits of two partners.
    n_items :
        Item catalogue size.
    n_background :
        Non-participant users that populate the ego networks.
    friends_per_participant :
        Background friends drawn for each participant (the partner is a
        friend too).
    neighbors :
        ``k`` passed to the recommender on the first attempt; doubled on
        every retry when a list comes out short.
    both_shown_fraction :
        Share of dyads shown both partners' lists merged.
    share_noise :
        Scale of the Gumbel noise added to the sharing order.
    rating_slope, rating_noise :
        Ratings are ``offset + rating_slope * affinity + N(0, rating_noise)``
        before rounding to the half-step grid.
    like_temperature :
        Sharpness of Like sampling over item affinity.
    min_participant_likes :
        Floor on a participant's Like count.
    """

    n_pairs: int = 87
    likes_mean: float = 18.2
    likes_sd: float = 31.8
    ratings_per_person: float = 8.18
    mean_rating: float = 3.85
    shares_per_person: float = 2.66
    dim: int = 8
    rho: float = 3.0
    homophily: float = 0.3
    n_items: int = 400
    n_background: int = 400
    friends_per_participant: int = 40
    neighbors: int = 20
    both_shown_fraction: float = 0.5
    share_noise: float = 1.0
    rating_slope: float = 0.8
    rating_noise: float = 0.6
    like_temperature: float = 2.0
    min_participant_likes: int = 5

    def __post_init__(self) -> None:
        for name in (
            "n_pairs",
            "dim",
            "n_items",
            "n_background",
            "friends_per_participant",
            "neighbors",
            "min_participant_likes",
        ):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in (
            "likes_mean",
            "ratings_per_person",
            "shares_per_person",
            "like_temperature",
        ):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ContractError(f"{name} must be positive, got {v}")
        for name in ("likes_sd", "share_noise", "rating_slope", "rating_noise"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ContractError(f"{name} must be >= 0, got {v}")
        if not 0.5 <= self.mean_rating <= 5.0:
            raise ContractError(f"mean_rating outside [0.5,5]: {self.mean_rating}")
        if not math.isfinite(self.rho) or self.rho < 1.0:
            raise ContractError(f"rho must be >= 1, got {self.rho}")
        if not -1.0 < self.homophily < 1.0:
            raise ContractError(f"homophily outside (-1,1): {self.homophily}")
        if not 0.0 <= self.both_shown_fraction <= 1.0:
            raise ContractError(
                f"both_shown_fraction outside [0,1]: {self.both_shown_fraction}"
            )

    @property
    def n_participants(self) -> int:
        return 2 * self.n_pairs

    @classmethod
    def from_kv(cls, values: Mapping[str, str]) -> "StudyProfile":
        return cls(**coerce_fields(cls, values))

    def as_kv(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}
