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
CSV ingestion and atomic output.

Readers
-------
Every reader takes a path to a UTF-8, comma-separated file with a header row
and returns validated model objects. Problems are reported as
:class:`~directed_share.errors.ValidationError` naming the file (and the
1-based data row where it applies).

================  =========================================
file              columns
================  =========================================
likes.csv         user_id,item_id
ratings.csv       user_id,item_id,rating
shares.csv        sender_id,recipient_id,item_id,shared
items.csv         item_id,ext_rating,ext_popularity
sessions.csv      user_a,user_b,item_id,provenance
friends.csv       user_id,friend_id
================  =========================================

Writers
-------
:func:`write_frame` and :func:`write_text` write to a temporary file in the
target directory and ``os.replace`` it into place, so readers never observe a
half-written output.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple, TypeVar, Union

import pandas as pd

from ..errors import DirectedShareError, ValidationError
from ..model.likes import LikesMatrix
from ..model.ratings import RatingsTable, to_half_units
from ..model.records import ItemMeta, ShareRecord
from ..model.session import DyadSession
from ..model.study import Study, build_friends, materialize_non_shares

__all__ = [
    "read_frame",
    "frame_rows",
    "parse_rows",
    "read_likes",
    "read_ratings",
    "read_shares",
    "read_items",
    "read_sessions",
    "read_friends",
    "read_study",
    "write_frame",
    "write_text",
    "write_study",
    "STUDY_FILES",
]

PathLike = Union[str, Path]
T = TypeVar("T")

STUDY_FILES = {
    "likes": "likes.csv",
    "ratings": "ratings.csv",
    "shares": "shares.csv",
    "items": "items.csv",
    "sessions": "sessions.csv",
    "friends": "friends.csv",
}


# --------------------------------------------------------------------------- #
# Low-level helpers
# --------------------------------------------------------------------------- #
def read_frame(path: PathLike, columns: Sequence[str]) -> pd.DataFrame:
    """Read *path* as strings and check the required *columns* are present."""
    p = Path(path)
    try:
        df = pd.read_csv(p, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as exc:
        raise ValidationError(f"file not found: {p}") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ValidationError(f"{p}: unreadable CSV ({exc})") from exc
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ValidationError(f"{p}: missing column(s) {', '.join(missing)}")
    return df


def frame_rows(df: pd.DataFrame, columns: Sequence[str]) -> List[Tuple[str, ...]]:
    """The *columns* of *df* as plain tuples, in file order."""
    return list(df[list(columns)].itertuples(index=False, name=None))


def parse_rows(
    path: PathLike, rows: Sequence[Tuple[str, ...]], fn: Callable[[Tuple[str, ...]], T]
) -> List[T]:
    """Apply *fn* to every row, turning its errors into a
    :class:`ValidationError` that names *path* and the 1-based row."""
    out: List[T] = []
    for n, row in enumerate(rows, start=1):
        try:
            out.append(fn(row))
        except DirectedShareError as exc:
            raise ValidationError(f"{path}: row {n}: {exc}") from exc
        except ValueError as exc:
            raise ValidationError(f"{path}: row {n}: {exc}") from exc
    return out


# --------------------------------------------------------------------------- #
# Readers
# --------------------------------------------------------------------------- #
def read_likes(path: PathLike) -> LikesMatrix:
    cols = ("user_id", "item_id")
    rows = frame_rows(read_frame(path, cols), cols)
    try:
        return LikesMatrix.from_pairs(rows)
    except DirectedShareError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def read_ratings(path: PathLike) -> RatingsTable:
    cols = ("user_id", "item_id", "rating")
    rows = frame_rows(read_frame(path, cols), cols)
    checked = parse_rows(path, rows, lambda r: (r[0], r[1], to_half_units(r[2]) / 2.0))
    try:
        return RatingsTable.from_rows(checked)
    except DirectedShareError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _parse_flag(raw: str) -> bool:
    if raw not in ("0", "1"):
        raise ValidationError(f"shared must be 0 or 1, got {raw!r}")
    return raw == "1"


def read_shares(path: PathLike) -> List[ShareRecord]:
    cols = ("sender_id", "recipient_id", "item_id", "shared")
    rows = frame_rows(read_frame(path, cols), cols)
    return parse_rows(path, rows, lambda r: ShareRecord(r[0], r[1], r[2], _parse_flag(r[3])))


def read_items(path: PathLike) -> Dict[str, ItemMeta]:
    cols = ("item_id", "ext_rating", "ext_popularity")
    rows = frame_rows(read_frame(path, cols), cols)
    metas = parse_rows(path, rows, lambda r: ItemMeta(r[0], float(r[1]), float(r[2])))
    out: Dict[str, ItemMeta] = {}
    for m in metas:
        if m.item in out:
            raise ValidationError(f"{path}: duplicate item {m.item!r}")
        out[m.item] = m
    return out


def read_sessions(path: PathLike) -> List[DyadSession]:
    """Group rows by ``(user_a, user_b)`` in first-appearance order."""
    cols = ("user_a", "user_b", "item_id", "provenance")
    rows = frame_rows(read_frame(path, cols), cols)
    grouped: Dict[Tuple[str, str], List[Tuple[str, str]]] = {}
    for a, b, item, prov in rows:
        grouped.setdefault((a, b), []).append((item, prov))
    sessions: List[DyadSession] = []
    for (a, b), items in grouped.items():
        try:
            sessions.append(DyadSession.from_provenance(a, b, items))
        except DirectedShareError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    return sessions


def read_friends(path: PathLike) -> Dict[str, frozenset]:
    cols = ("user_id", "friend_id")
    rows = frame_rows(read_frame(path, cols), cols)
    try:
        return build_friends(rows)
    except DirectedShareError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def read_study(directory: PathLike) -> Study:
    """Read a study directory. ``items.csv`` and ``friends.csv`` are optional."""
    d = Path(directory)
    if not d.is_dir():
        raise ValidationError(f"data directory not found: {d}")
    sessions = read_sessions(d / STUDY_FILES["sessions"])
    shares = read_shares(d / STUDY_FILES["shares"])
    try:
        materialized = materialize_non_shares(sessions, shares)
    except DirectedShareError as exc:
        raise ValidationError(f"{d / STUDY_FILES['shares']}: {exc}") from exc
    items_path = d / STUDY_FILES["items"]
    friends_path = d / STUDY_FILES["friends"]
    return Study(
        likes=read_likes(d / STUDY_FILES["likes"]),
        ratings=read_ratings(d / STUDY_FILES["ratings"]),
        shares=tuple(materialized),
        sessions=tuple(sessions),
        items=read_items(items_path) if items_path.exists() else {},
        friends=read_friends(friends_path) if friends_path.exists() else {},
    )


# --------------------------------------------------------------------------- #
# Atomic writers
# --------------------------------------------------------------------------- #
def write_text(path: PathLike, text: str) -> Path:
    """Atomically write *text* (UTF-8, ``\\n`` line endings) to *path*."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{p.name}.", suffix=".tmp", dir=p.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return p


def write_frame(path: PathLike, df: pd.DataFrame) -> Path:
    """Atomically write *df* as CSV without the index."""
    return write_text(path, df.to_csv(index=False, lineterminator="\n"))


def write_study(study: Study, directory: PathLike) -> List[Path]:
    """Write the observable part of *study* using the ingestion schemas."""
    d = Path(directory)
    written = [
        write_frame(
            d / STUDY_FILES["likes"],
            pd.DataFrame(list(study.likes.pairs()), columns=["user_id", "item_id"]),
        ),
        write_frame(
            d / STUDY_FILES["ratings"],
            pd.DataFrame(study.ratings.rows(), columns=["user_id", "item_id", "rating"]),
        ),
        write_frame(
            d / STUDY_FILES["shares"],
            pd.DataFrame(
                [(r.sender, r.recipient, r.item, int(r.shared)) for r in study.shares],
                columns=["sender_id", "recipient_id", "item_id", "shared"],
            ),
        ),
        write_frame(
            d / STUDY_FILES["items"],
            pd.DataFrame(
                [
                    (m.item, m.ext_rating, m.ext_popularity)
                    for _, m in sorted(study.items.items())
                ],
                columns=["item_id", "ext_rating", "ext_popularity"],
            ),
        ),
        write_frame(
            d / STUDY_FILES["sessions"],
            pd.DataFrame(
                [
                    (s.user_a, s.user_b, item, s.provenance(item))
                    for s in study.sessions
                    for item in s.shown_items
                ],
                columns=["user_a", "user_b", "item_id", "provenance"],
            ),
        ),
        write_frame(
            d / STUDY_FILES["friends"],
            pd.DataFrame(
                sorted(
                    (u, f) for u, fs in study.friends.items() for f in fs if u < f
                ),
                columns=["user_id", "friend_id"],
            ),
        ),
    ]
    return written
