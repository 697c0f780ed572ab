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
Indented text format for decision trees.

Every split prints two lines at its depth, prefixed by ``"| "`` per level::

    sharer_sim <= 0.0101: Non-shared
    sharer_sim > 0.0101
    | sharer_prom <= 1: Non-shared
    | sharer_prom > 1: Shared

A branch ending in a leaf carries ``": <label>"``; otherwise its subtree
follows one level deeper. A tree that is a single leaf is printed as the
bare label. The reader also accepts ``<=1`` without a space and trailing
whitespace.
"""

from __future__ import annotations

import math
import re
from typing import List, Optional, Tuple

from ..errors import ValidationError
from ..features.vector import FEATURE_NAMES
from .tree import DecisionTree, Leaf, Node, Split

__all__ = ["dumps", "loads", "format_threshold", "LABELS"]

LABELS = {True: "Shared", False: "Non-shared"}
_FROM_LABEL = {v: k for k, v in LABELS.items()}

_LINE = re.compile(
    r"^(?P<bars>(?:\|\s*)*)"
    r"(?P<feature>[A-Za-z_]\w*)\s*"
    r"(?P<op><=|>)\s*"
    r"(?P<threshold>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"(?:\s*:\s*(?P<label>Shared|Non-shared))?$"
)


def format_threshold(value: float) -> str:
    """Shortest round-tripping text; integral values drop the ``.0``."""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


# --------------------------------------------------------------------------- #
# dumps
# --------------------------------------------------------------------------- #
def dumps(tree: DecisionTree) -> str:
    if isinstance(tree.root, Leaf):
        return LABELS[tree.root.label] + "\n"
    lines: List[str] = []
    _emit(tree.root, 0, lines, tree.feature_names)
    return "\n".join(lines) + "\n"


def _emit(node: Split, depth: int, lines: List[str], names) -> None:
    prefix = "| " * depth
    head = f"{names[node.feature]} "
    thr = format_threshold(node.threshold)
    for op, child in (("<=", node.left), (">", node.right)):
        if isinstance(child, Leaf):
            lines.append(f"{prefix}{head}{op} {thr}: {LABELS[child.label]}")
        else:
            lines.append(f"{prefix}{head}{op} {thr}")
            _emit(child, depth + 1, lines, names)


# --------------------------------------------------------------------------- #
# loads
# --------------------------------------------------------------------------- #
_Parsed = Tuple[int, int, str, float, Optional[str], int]


def loads(text: str) -> DecisionTree:
    """Parse the indented format back into a :class:`DecisionTree`.

    Raises
    ------
    ValidationError
        Malformed line, unknown feature, non-finite threshold, or a ``>``
        branch that does not match its ``<=`` sibling.
    """
    raw = [(n, line.rstrip()) for n, line in enumerate(text.splitlines(), start=1)]
    raw = [(n, line) for n, line in raw if line.strip()]
    if not raw:
        raise ValidationError("empty tree text")
    if len(raw) == 1 and raw[0][1].strip() in _FROM_LABEL:
        return DecisionTree(Leaf(_FROM_LABEL[raw[0][1].strip()]))

    parsed = [_parse_line(n, line) for n, line in raw]
    pos, root = _parse_node(parsed, 0, 0)
    if pos != len(parsed):
        raise ValidationError(f"line {parsed[pos][5]}: unexpected trailing content")
    return DecisionTree(root)


def _parse_line(lineno: int, line: str) -> _Parsed:
    m = _LINE.match(line.strip())
    if m is None:
        raise ValidationError(f"line {lineno}: cannot parse {line!r}")
    name = m.group("feature")
    if name not in FEATURE_NAMES:
        raise ValidationError(f"line {lineno}: unknown feature {name!r}")
    thr = float(m.group("threshold"))
    if not math.isfinite(thr):
        raise ValidationError(f"line {lineno}: non-finite threshold")
    depth = m.group("bars").count("|")
    op = 0 if m.group("op") == "<=" else 1
    return depth, op, name, thr, m.group("label"), lineno


def _parse_node(lines: List[_Parsed], pos: int, depth: int) -> Tuple[int, Node]:
    if pos >= len(lines):
        raise ValidationError("tree text ends before a branch is complete")
    d, op, name, thr, label, lineno = lines[pos]
    if d != depth or op != 0:
        raise ValidationError(f"line {lineno}: expected a '<=' branch at depth {depth}")
    pos, left = _parse_branch(lines, pos, depth, label)

    if pos >= len(lines):
        raise ValidationError(f"line {lineno}: missing '>' branch")
    d2, op2, name2, thr2, label2, lineno2 = lines[pos]
    if d2 != depth or op2 != 1 or name2 != name or thr2 != thr:
        raise ValidationError(
            f"line {lineno2}: expected '{name} > {format_threshold(thr)}' at depth {depth}"
        )
    pos, right = _parse_branch(lines, pos, depth, label2)
    return pos, Split(FEATURE_NAMES.index(name), thr, left, right)


def _parse_branch(
    lines: List[_Parsed], pos: int, depth: int, label: Optional[str]
) -> Tuple[int, Node]:
    if label is not None:
        return pos + 1, Leaf(_FROM_LABEL[label])
    return _parse_node(lines, pos + 1, depth + 1)
