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
Directed social graph used by the simulators, plus ``graph.csv`` and
``seeds.csv`` readers.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set, Tuple, Union

import networkx as nx

from ..errors import ValidationError
from ..io.csvio import read_frame
from ..model.records import check_id

__all__ = ["SocialGraph", "read_graph_csv", "read_seeds_csv"]


class SocialGraph:
    """Immutable directed graph; an edge ``u -> v`` means *u* may share with *v*.

    Parameters
    ----------
    edges :
        ``(src, dst)`` pairs. Self-loops are rejected.
    nodes :
        Extra isolated nodes.
    """

    __slots__ = ("_g", "_succ")

    def __init__(self, edges: Iterable[Tuple[str, str]] = (), nodes: Iterable[str] = ()):
        g = nx.DiGraph()
        for n in nodes:
            g.add_node(check_id(n, "node"))
        for src, dst in edges:
            check_id(src, "src")
            check_id(dst, "dst")
            if src == dst:
                raise ValidationError(f"self-loop on {src!r}")
            g.add_edge(src, dst)
        self._g = nx.freeze(g)
        self._succ: Dict[str, Tuple[str, ...]] = {
            n: tuple(sorted(g.successors(n))) for n in g.nodes
        }

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "SocialGraph":
        """Copy *g*; undirected edges become two directed ones."""
        edges: List[Tuple[str, str]] = []
        for u, v in g.edges():
            edges.append((str(u), str(v)))
            if not g.is_directed():
                edges.append((str(v), str(u)))
        return cls(edges, (str(n) for n in g.nodes))

    @classmethod
    def from_friends(cls, friends: Mapping[str, Iterable[str]]) -> "SocialGraph":
        """Both directions of every friendship."""
        return cls(
            ((u, f) for u, fs in friends.items() for f in fs),
            friends.keys(),
        )

    # ------------------------------------------------------------------ #
    @property
    def nx(self) -> nx.DiGraph:
        """Frozen underlying graph."""
        return self._g

    @property
    def nodes(self) -> List[str]:
        return sorted(self._g.nodes)

    def out_neighbors(self, u: str) -> Tuple[str, ...]:
        """Successors of *u* in ascending id order."""
        return self._succ.get(u, ())

    def has_node(self, u: str) -> bool:
        return u in self._succ

    def has_edge(self, u: str, v: str) -> bool:
        return self._g.has_edge(u, v)

    def number_of_edges(self) -> int:
        return self._g.number_of_edges()

    def __len__(self) -> int:
        return self._g.number_of_nodes()

    def __repr__(self) -> str:
        return f"SocialGraph(nodes={len(self)}, edges={self.number_of_edges()})"


# --------------------------------------------------------------------------- #
# CSV
# --------------------------------------------------------------------------- #
def read_graph_csv(path: Union[str, Path]) -> SocialGraph:
    """Read ``src,dst`` edges."""
    df = read_frame(path, ("src", "dst"))
    try:
        return SocialGraph(df[["src", "dst"]].itertuples(index=False, name=None))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def read_seeds_csv(path: Union[str, Path]) -> Dict[str, FrozenSet[str]]:
    """Read ``user_id,item_id`` seed assignments."""
    df = read_frame(path, ("user_id", "item_id"))
    acc: Dict[str, Set[str]] = {}
    for n, (user, item) in enumerate(
        df[["user_id", "item_id"]].itertuples(index=False, name=None), start=1
    ):
        try:
            check_id(user, "user")
            check_id(item, "item")
        except ValidationError as exc:
            raise ValidationError(f"{path}: row {n}: {exc}") from exc
        acc.setdefault(user, set()).add(item)
    return {u: frozenset(items) for u, items in acc.items()}
