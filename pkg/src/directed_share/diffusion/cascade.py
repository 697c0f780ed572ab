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
Preference-salience cascade simulator.

Each node holds a set of adopted items and a map of salient items to the
number of steps they stay salient. One synchronous :func:`step`:

1. For every node ``u`` (ascending id) collect the eligible triples
   ``(u, v, i)``: ``i`` salient at ``u`` with ``pref(u, i) >= pref_threshold``
   and ``v`` an out-neighbor. Triples are tried by decreasing share
   probability, ties by recipient then item id. A triple is accepted when
   its keyed uniform draw falls below the probability; trying stops once
   the node's quota is used up.
2. All salience counters decrement and expired items are dropped.
3. Every accepted share makes ``i`` salient at ``v`` for
   ``salience_window`` steps and gives ``v`` one adoption draw.

Every draw is addressed by ``(kind, step, nodes, item)`` through
:class:`~directed_share.util.rng.KeyedUniform`, so two runs that differ only
in parameters see the same randomness for the same event.

Public API
----------
- :class:`CascadeState`, :class:`CascadeResult`
- :class:`PreferenceOracle`
- :func:`share_probability`, :func:`initial_state`, :func:`step`, :func:`run`
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import pandas as pd
from scipy.special import expit

from ..errors import ContractError
from ..model.likes import LikesMatrix
from ..similarity.cache import ItemSimilarityCache
from ..similarity.jaccard import user_item_preference
from ..util.rng import KeyedUniform
from .config import CascadeConfig
from .graph import SocialGraph

log = logging.getLogger("directed_share.diffusion")

__all__ = [
    "PreferenceOracle",
    "CascadeState",
    "CascadeResult",
    "StepStats",
    "share_probability",
    "initial_state",
    "step",
    "run",
]


# --------------------------------------------------------------------------- #
# Preferences
# --------------------------------------------------------------------------- #
class PreferenceOracle:
    """Memoized ``user_item_preference`` over one immutable Likes relation."""

    __slots__ = ("likes", "cache", "_memo")

    def __init__(
        self,
        likes: Optional[LikesMatrix] = None,
        cache: Optional[ItemSimilarityCache] = None,
    ):
        self.likes = likes if likes is not None else LikesMatrix()
        self.cache = cache
        self._memo: Dict[Tuple[str, str], float] = {}

    def __call__(self, u: str, i: str) -> float:
        key = (u, i)
        v = self._memo.get(key)
        if v is None:
            v = user_item_preference(u, i, self.likes, cache=self.cache)
            self._memo[key] = v
        return v


def _propensity(pu: float, pv: float, config: CascadeConfig) -> float:
    return float(expit(config.a * pu + config.b * pv + config.c))


def share_probability(
    u: str,
    v: str,
    i: str,
    likes: LikesMatrix,
    config: CascadeConfig,
    *,
    graph: Optional[SocialGraph] = None,
    state: Optional["CascadeState"] = None,
    prefs: Optional[PreferenceOracle] = None,
) -> float:
    """Probability that *u* shares *i* with *v* in one step.

    Returns 0 when a gate fails: no edge ``u -> v`` (checked if *graph* is
    given), *i* not salient at *u* (checked if *state* is given), or
    ``pref(u, i) < pref_threshold``.
    """
    if graph is not None and not graph.has_edge(u, v):
        return 0.0
    if state is not None and i not in state.salient.get(u, {}):
        return 0.0
    pref = prefs if prefs is not None else PreferenceOracle(likes)
    pu = pref(u, i)
    if pu < config.pref_threshold:
        return 0.0
    return _propensity(pu, pref(v, i), config)


# --------------------------------------------------------------------------- #
# State
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class CascadeState:
    """Per-node adopted and salient items at a given step.

    ``sent`` counts accepted shares per node over the whole run, which is
    what a lifetime quota is checked against.
    """

    step: int
    adopted: Mapping[str, FrozenSet[str]]
    salient: Mapping[str, Mapping[str, int]]
    sent: Mapping[str, int] = field(default_factory=dict)

    def adopters(self, item: str) -> List[str]:
        return sorted(u for u, items in self.adopted.items() if item in items)

    def n_salient(self) -> int:
        return sum(len(s) for s in self.salient.values())

    @property
    def quiescent(self) -> bool:
        return self.n_salient() == 0

    def items(self) -> List[str]:
        out = set()
        for s in self.adopted.values():
            out |= s
        return sorted(out)


@dataclass(frozen=True)
class StepStats:
    attempted: Mapping[str, int]
    accepted: Mapping[str, int]


def initial_state(
    graph: SocialGraph, seed_assignments: Mapping[str, Iterable[str]], config: CascadeConfig
) -> CascadeState:
    """Seed items are adopted by, and salient at, their owners.

    Raises
    ------
    ContractError
        A seed owner is not a node of *graph*.
    """
    adopted: Dict[str, FrozenSet[str]] = {}
    salient: Dict[str, Dict[str, int]] = {}
    for u, items in seed_assignments.items():
        if not graph.has_node(u):
            raise ContractError(f"seed owner {u!r} is not in the graph")
        items = frozenset(items)
        if not items:
            continue
        adopted[u] = items
        salient[u] = {i: config.salience_window for i in items}
    return CascadeState(0, adopted, salient, {})


# --------------------------------------------------------------------------- #
# step
# --------------------------------------------------------------------------- #
def _step(
    state: CascadeState,
    graph: SocialGraph,
    config: CascadeConfig,
    draws: KeyedUniform,
    prefs: PreferenceOracle,
) -> Tuple[CascadeState, StepStats]:
    t = state.step
    attempted: Dict[str, int] = {}
    accepted: Dict[str, int] = {}
    sent = dict(state.sent)
    receipts: List[Tuple[str, str]] = []

    for u in sorted(state.salient):
        quota = config.quota_for(u)
        if config.quota_mode == "lifetime":
            quota -= sent.get(u, 0)
        if quota <= 0:
            continue
        candidates = [
            i for i in sorted(state.salient[u]) if prefs(u, i) >= config.pref_threshold
        ]
        eligible = [
            (_propensity(prefs(u, i), prefs(v, i), config), v, i)
            for i in candidates
            for v in graph.out_neighbors(u)
        ]
        eligible.sort(key=lambda e: (-e[0], e[1], e[2]))
        n_ok = 0
        for p, v, i in eligible:
            attempted[i] = attempted.get(i, 0) + 1
            if draws.uniform("share", t, u, v, i) < p:
                accepted[i] = accepted.get(i, 0) + 1
                receipts.append((v, i))
                n_ok += 1
                if n_ok >= quota:
                    break
        if n_ok:
            sent[u] = sent.get(u, 0) + n_ok

    salient: Dict[str, Dict[str, int]] = {}
    for u, items in state.salient.items():
        kept = {i: c - 1 for i, c in items.items() if c > 1}
        if kept:
            salient[u] = kept
    adopted = {u: set(items) for u, items in state.adopted.items()}
    for v, i in sorted(set(receipts)):
        salient.setdefault(v, {})[i] = config.salience_window
        if i in adopted.get(v, ()):
            continue
        if config.adoption == "always" or draws.uniform("adopt", t, v, i) < prefs(v, i):
            adopted.setdefault(v, set()).add(i)

    new_state = CascadeState(
        t + 1,
        {u: frozenset(s) for u, s in adopted.items()},
        salient,
        sent,
    )
    return new_state, StepStats(attempted, accepted)


def step(
    state: CascadeState,
    graph: SocialGraph,
    likes: LikesMatrix,
    config: CascadeConfig,
    rng: KeyedUniform,
    *,
    prefs: Optional[PreferenceOracle] = None,
) -> CascadeState:
    """Advance *state* by one synchronous step (see module docstring)."""
    return _step(state, graph, config, rng, prefs or PreferenceOracle(likes))[0]


# --------------------------------------------------------------------------- #
# run
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class CascadeResult:
    """Outcome of one simulation.

    Attributes
    ----------
    timeseries :
        ``item -> adopter count`` at step 0 (seeds) and after every step.
    attempted, accepted :
        Share attempts and accepted shares per item.
    final_adopters :
        ``item -> adopters`` at the end of the run.
    steps :
        Number of steps executed.
    """

    timeseries: Mapping[str, Tuple[int, ...]]
    attempted: Mapping[str, int]
    accepted: Mapping[str, int]
    final_adopters: Mapping[str, FrozenSet[str]]
    steps: int

    @property
    def total_attempted(self) -> int:
        return sum(self.attempted.values())

    @property
    def total_accepted(self) -> int:
        return sum(self.accepted.values())

    def adopter_pairs(self) -> FrozenSet[Tuple[str, str]]:
        """All ``(user, item)`` adoptions, for set comparisons between runs."""
        return frozenset((u, i) for i, us in self.final_adopters.items() for u in us)

    def timeseries_frame(self) -> pd.DataFrame:
        rows = [
            (t, item, n)
            for item in sorted(self.timeseries)
            for t, n in enumerate(self.timeseries[item])
        ]
        return pd.DataFrame(rows, columns=["step", "item_id", "adopters"])

    def summary_frame(self) -> pd.DataFrame:
        rows = [
            (
                item,
                len(self.final_adopters.get(item, ())),
                self.attempted.get(item, 0),
                self.accepted.get(item, 0),
            )
            for item in sorted(self.timeseries)
        ]
        return pd.DataFrame(
            rows, columns=["item_id", "final_adopters", "shares_attempted", "shares_accepted"]
        )


def _counts(state: CascadeState, items: Iterable[str]) -> Dict[str, int]:
    out = {i: 0 for i in items}
    for adopted in state.adopted.values():
        for i in adopted:
            if i in out:
                out[i] += 1
    return out


def run(
    graph: SocialGraph,
    seed_assignments: Mapping[str, Iterable[str]],
    config: CascadeConfig,
    rng_seed: int,
    likes: Optional[LikesMatrix] = None,
    *,
    cache: Optional[ItemSimilarityCache] = None,
) -> CascadeResult:
    """Step from the seeded state until ``max_steps`` or quiescence."""
    if len(graph) == 0:
        return CascadeResult({}, {}, {}, {}, 0)
    prefs = PreferenceOracle(likes, cache)
    draws = KeyedUniform(rng_seed)
    state = initial_state(graph, seed_assignments, config)
    items = state.items()
    series: Dict[str, List[int]] = {i: [n] for i, n in _counts(state, items).items()}
    attempted: Dict[str, int] = {i: 0 for i in items}
    accepted: Dict[str, int] = {i: 0 for i in items}

    while state.step < config.max_steps and not state.quiescent:
        state, stats = _step(state, graph, config, draws, prefs)
        for i, n in stats.attempted.items():
            attempted[i] = attempted.get(i, 0) + n
        for i, n in stats.accepted.items():
            accepted[i] = accepted.get(i, 0) + n
        for i, n in _counts(state, items).items():
            series[i].append(n)

    final = {i: frozenset(state.adopters(i)) for i in items}
    log.debug(
        "cascade finished after %d steps: %d attempted, %d accepted",
        state.step,
        sum(attempted.values()),
        sum(accepted.values()),
    )
    return CascadeResult(
        {i: tuple(v) for i, v in series.items()}, attempted, accepted, final, state.step
    )
