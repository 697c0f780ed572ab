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


"""Ratings with a planted condition effect for checking the mixed model."""

from __future__ import annotations

import math
from typing import List

import numpy as np

from ..errors import ContractError
from ..stats.lmm import LmmObservation
from ..util.rng import substream

__all__ = ["planted_effect_ratings"]


def planted_effect_ratings(
    n_participants: int,
    n_items: int,
    beta: float,
    sigma_p: float,
    sigma_m: float,
    sigma_e: float,
    seed: int,
    *,
    intercept: float = 3.5,
) -> List[LmmObservation]:
    """One rating per (participant, item) cell of a full grid.

    ``rating = intercept + beta * condition + u_p + v_m + e`` with Gaussian
    ``u_p``, ``v_m`` and ``e``. Half of the cells (rounded up) get
    ``condition = 1``, placed at random.

    Raises
    ------
    ContractError
        Fewer than two participants or items, or a negative or non-finite
        standard deviation.
    """
    if n_participants < 2 or n_items < 2:
        raise ContractError("need at least 2 participants and 2 items")
    for name, s in (("sigma_p", sigma_p), ("sigma_m", sigma_m), ("sigma_e", sigma_e)):
        if not math.isfinite(s) or s < 0:
            raise ContractError(f"{name} must be finite and >= 0, got {s}")

    rng = substream(seed, "planted")
    n = n_participants * n_items
    u = rng.normal(0.0, sigma_p, n_participants)
    v = rng.normal(0.0, sigma_m, n_items)
    e = rng.normal(0.0, sigma_e, n)
    cond = rng.permutation(np.arange(n) < (n + 1) // 2).astype(np.int64)

    pw = len(str(n_participants - 1))
    iw = len(str(n_items - 1))
    out: List[LmmObservation] = []
    for k in range(n):
        p, m = divmod(k, n_items)
        rating = intercept + beta * cond[k] + u[p] + v[m] + e[k]
        out.append(LmmObservation(float(rating), f"p{p:0{pw}d}", f"m{m:0{iw}d}", int(cond[k])))
    return out
