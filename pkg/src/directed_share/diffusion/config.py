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

"""Parameters of the preference-salience cascade."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Literal, Mapping

from ..config import coerce_fields
from ..errors import ContractError

__all__ = ["CascadeConfig"]


@dataclass(frozen=True)
class CascadeConfig:
    """Share propensity ``sigmoid(a*pref(u,i) + b*pref(v,i) + c)`` plus gates.

    Attributes
    ----------
    pref_threshold :
        Sender preference needed for an item to be shareable, in ``[0, 1]``.
    salience_window :
        Steps an item stays salient after it is seeded or received.
    a, b, c :
        Sender weight, recipient weight and bias; ``a >= b >= 0``.
    quota :
        Default accepted shares per node (per step, or in total with
        ``quota_mode="lifetime"``).
    quotas :
        Per-node overrides, ``quota.<user>=<n>`` in config files.
    quota_mode :
        ``"step"`` or ``"lifetime"``.
    adoption :
        ``"preference"`` adopts with probability ``pref(v, i)``;
        ``"always"`` adopts on every receipt.
    max_steps :
        Hard stop for :func:`~directed_share.diffusion.run`.
    """

    pref_threshold: float = 0.2
    salience_window: int = 2
    a: float = 3.0
    b: float = 1.0
    c: float = -2.0
    quota: int = 1
    quotas: Mapping[str, int] = field(default_factory=dict, metadata={"kv_prefix": "quota"})
    quota_mode: Literal["step", "lifetime"] = "step"
    adoption: Literal["preference", "always"] = "preference"
    max_steps: int = 50

    def __post_init__(self) -> None:
        object.__setattr__(self, "quotas", dict(self.quotas))
        if not 0.0 <= self.pref_threshold <= 1.0:
            raise ContractError(f"pref_threshold outside [0,1]: {self.pref_threshold}")
        if self.salience_window < 1:
            raise ContractError(f"salience_window must be >= 1, got {self.salience_window}")
        if self.max_steps < 1:
            raise ContractError(f"max_steps must be >= 1, got {self.max_steps}")
        if any(math.isnan(x) for x in (self.a, self.b, self.c)):
            raise ContractError("a, b and c must not be NaN")
        if not self.a >= self.b >= 0:
            raise ContractError(f"expected a >= b >= 0, got a={self.a} b={self.b}")
        if self.quota < 0 or any(q < 0 for q in self.quotas.values()):
            raise ContractError("quotas must be >= 0")
        if self.quota_mode not in ("step", "lifetime"):
            raise ContractError(f"unknown quota_mode {self.quota_mode!r}")
        if self.adoption not in ("preference", "always"):
            raise ContractError(f"unknown adoption model {self.adoption!r}")

    def quota_for(self, u: str) -> int:
        return self.quotas.get(u, self.quota)

    # ------------------------------------------------------------------ #
    @classmethod
    def from_kv(cls, values: Mapping[str, str]) -> "CascadeConfig":
        return cls(**coerce_fields(cls, values))

    def as_kv(self) -> Dict[str, Any]:
        """Flat mapping suitable for ``resolved-config.txt``."""
        out: Dict[str, Any] = {}
        for f in fields(self):
            if f.name == "quotas":
                for user, q in self.quotas.items():
                    out[f"quota.{user}"] = q
            else:
                out[f.name] = getattr(self, f.name)
        return out
