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
Run configuration of the command-line tool.

A run is described by a :class:`RunConfig`: the subcommand, its input and
output paths, the master seed and the flat ``key=value`` parameters merged
from ``--config`` and ``--set``. The parameters are mapped onto the typed
dataclasses a command needs (:class:`PipelineParams`,
:class:`~directed_share.classifier.TreeParams`,
:class:`~directed_share.diffusion.CascadeConfig`,
:class:`~directed_share.synthgen.StudyProfile`) by
:func:`~directed_share.config.coerce_fields`.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Mapping, Optional, Set, Tuple, Type

from ..classifier.tree import TreeParams
from ..config import coerce_fields, is_mapping_hint
from ..diffusion.config import CascadeConfig
from ..errors import ContractError
from ..recommender.ego import DEFAULT_K, DEFAULT_N
from ..synthgen.profile import StudyProfile

__all__ = ["PipelineParams", "RunConfig", "COMMAND_PARAMS", "parse_set"]

# Keys of resolved-config.txt that describe the run rather than a component.
RUN_KEYS = ("command", "seed")


@dataclass(frozen=True)
class PipelineParams:
    """Parameters shared by the pipeline commands.

    Attributes
    ----------
    k, n :
        Neighbors and list length for ``recommend``.
    user :
        Restrict ``recommend`` to one user; empty means every user in the
        friends file.
    datasets, folds :
        Balanced datasets sampled and cross-validation folds.
    promiscuity_scope :
        ``"fold"`` recomputes the promiscuity feature from each training
        fold; ``"global"`` keeps the value computed from all shares.
    exclude_self :
        Leave the scored item out of the user's profile when estimating
        user-item preference.
    features :
        Comma-separated feature subset for ``train`` and ``evaluate``; empty
        means all six.
    ablation :
        ``"coarse"`` (four groups) or ``"detailed"`` (ten rows).
    model :
        ``simulate`` model, preference-salience ``"cascade"`` or
        independent-cascade ``"ic"``.
    ic_p :
        Transmission probability of the independent cascade.
    lmm :
        Whether ``stats analyze`` fits the mixed models.
    """

    k: int = DEFAULT_K
    n: int = DEFAULT_N
    user: str = ""
    datasets: int = 10
    folds: int = 10
    promiscuity_scope: Literal["fold", "global"] = "fold"
    exclude_self: bool = False
    features: str = ""
    ablation: Literal["coarse", "detailed"] = "coarse"
    model: Literal["cascade", "ic"] = "cascade"
    ic_p: float = 0.1
    lmm: bool = True

    def __post_init__(self) -> None:
        for name in ("k", "n", "datasets"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.folds < 2:
            raise ContractError(f"folds must be >= 2, got {self.folds}")
        if not 0.0 <= self.ic_p <= 1.0:
            raise ContractError(f"ic_p outside [0,1]: {self.ic_p}")

    @property
    def feature_subset(self) -> Optional[List[str]]:
        names = [s.strip() for s in self.features.split(",") if s.strip()]
        return names or None


COMMAND_PARAMS: Dict[str, Tuple[Type[Any], ...]] = {
    "ingest": (),
    "recommend": (PipelineParams,),
    "featurize": (PipelineParams,),
    "train": (PipelineParams, TreeParams),
    "evaluate": (PipelineParams, TreeParams),
    "ablate": (PipelineParams, TreeParams),
    "simulate": (PipelineParams, CascadeConfig),
    "stats": (PipelineParams,),
    "synth": (StudyProfile,),
}


def parse_set(items: Iterable[str]) -> Dict[str, str]:
    """Parse repeated ``--set key=value`` arguments."""
    out: Dict[str, str] = {}
    for raw in items:
        key, sep, value = raw.partition("=")
        if not sep or not key.strip():
            raise ContractError(f"--set expects key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def _known_keys(cls: Type[Any], values: Mapping[str, str]) -> Set[str]:
    hints = typing.get_type_hints(cls)
    known: Set[str] = set()
    for f in dataclasses.fields(cls):
        if is_mapping_hint(hints[f.name]):
            prefix = f.metadata.get("kv_prefix", f.name) + "."
            known.update(k for k in values if k.startswith(prefix))
        else:
            known.add(f.name)
    return known


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to repeat one run.

    Attributes
    ----------
    command :
        Subcommand (``"stats ttest"`` style for nested ones).
    seed :
        Master seed; every random stream is derived from it.
    out :
        Output directory, ``None`` when the command prints only.
    inputs :
        Named input paths.
    values :
        Merged ``key=value`` parameters (``--set`` over ``--config``).
    """

    command: str
    seed: int = 0
    out: Optional[Path] = None
    jobs: int = 1
    inputs: Mapping[str, str] = field(default_factory=dict)
    values: Mapping[str, str] = field(default_factory=dict)

    def params(self, cls: Type[Any]) -> Any:
        return cls(**coerce_fields(cls, self.values))

    def unused_keys(self) -> List[str]:
        head = self.command.split()[0]
        known: Set[str] = set()
        for cls in COMMAND_PARAMS.get(head, ()):
            known |= _known_keys(cls, self.values)
        return sorted(
            k
            for k in self.values
            if k not in known and k not in RUN_KEYS and not k.startswith("input.")
        )

    def resolved(self) -> Dict[str, Any]:
        """Flat mapping written to ``resolved-config.txt``."""
        out: Dict[str, Any] = {"command": self.command, "seed": self.seed}
        for name, path in self.inputs.items():
            out[f"input.{name}"] = path
        head = self.command.split()[0]
        for cls in COMMAND_PARAMS.get(head, ()):
            obj = self.params(cls)
            kv = obj.as_kv() if hasattr(obj, "as_kv") else {
                f.name: getattr(obj, f.name) for f in fields(obj)
            }
            out.update(kv)
        return out
