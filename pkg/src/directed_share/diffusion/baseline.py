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

"""Independent-cascade baseline with a fixed transmission probability."""

from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set, Union

from ..errors import ContractError
from ..util.rng import KeyedUniform
from .cascade import CascadeResult
from .graph import SocialGraph

log = logging.getLogger("directed_share.diffusion")

__all__ = ["baseline_ic", "DEFAULT_IC_ITEM"]

DEFAULT_IC_ITEM = "item"


def _as_assignments(
    seeds: Union[Mapping[str, Iterable[str]], Iterable[str]]
) -> Dict[str, FrozenSet[str]]:
    if isinstance(seeds, Mapping):
        return {u: frozenset(items) for u, items in seeds.items()}
    return {u: frozenset([DEFAULT_IC_ITEM]) for u in seeds}


def baseline_ic(
    graph: SocialGraph,
    seeds: Union[Mapping[str, Iterable[str]], Iterable[str]],
    p: float,
    max_steps: int,
    rng_seed: int,
) -> CascadeResult:
    """Independent cascade, run separately for every seeded item.

    Each node that becomes active at step ``t`` gets one chance per
    out-edge to activate an inactive neighbor at step ``t + 1``, with
    probability *p*. The draw for edge ``u -> v`` and item ``i`` is keyed by
    ``("ic", i, u, v)``.

    Parameters
    ----------
    seeds :
        ``user -> items`` assignments, or plain nodes (one item,
        :data:`DEFAULT_IC_ITEM`).

    Raises
    ------
    ContractError
        ``p`` outside ``[0, 1]``, ``max_steps < 1`` or a seed not in *graph*.
    """
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"p outside [0,1]: {p}")
    if max_steps < 1:
        raise ContractError(f"max_steps must be >= 1, got {max_steps}")
    if len(graph) == 0:
        return CascadeResult({}, {}, {}, {}, 0)
    assignments = _as_assignments(seeds)
    for u in assignments:
        if not graph.has_node(u):
            raise ContractError(f"seed {u!r} is not in the graph")

    draws = KeyedUniform(rng_seed)
    by_item: Dict[str, Set[str]] = {}
    for u, items in assignments.items():
        for i in items:
            by_item.setdefault(i, set()).add(u)

    series: Dict[str, List[int]] = {}
    attempted: Dict[str, int] = {}
    accepted: Dict[str, int] = {}
    final: Dict[str, FrozenSet[str]] = {}
    steps = 0
    for item in sorted(by_item):
        active = set(by_item[item])
        frontier = sorted(active)
        counts = [len(active)]
        tries = hits = 0
        t = 0
        while frontier and t < max_steps:
            fresh: Set[str] = set()
            for u in frontier:
                for v in graph.out_neighbors(u):
                    if v in active:
                        continue
                    tries += 1
                    if draws.uniform("ic", item, u, v) < p:
                        if v not in fresh:
                            hits += 1
                        fresh.add(v)
            active |= fresh
            frontier = sorted(fresh)
            t += 1
            counts.append(len(active))
        series[item] = counts
        attempted[item] = tries
        accepted[item] = hits
        final[item] = frozenset(active)
        steps = max(steps, t)

    log.debug("independent cascade: %d items, %d steps", len(by_item), steps)
    return CascadeResult(
        {i: tuple(c) for i, c in series.items()}, attempted, accepted, final, steps
    )
