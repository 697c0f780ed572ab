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
Order-preserving parallel map.

Currently exposes :func:`parallel_map`, a thin wrapper around
``concurrent.futures.ThreadPoolExecutor`` that logs any exception raised by
a job (with its index) before re-raising it, instead of letting the pool
swallow the traceback.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

log = logging.getLogger("directed_share.parallel")

T = TypeVar("T")
R = TypeVar("R")

__all__ = ["parallel_map"]


# --------------------------------------------------------------------------- #
# parallel_map
# --------------------------------------------------------------------------- #
def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], *, jobs: int = 1, name: str = "job"
) -> List[R]:
    """Apply *fn* to every item and return results in input order.

    Parameters
    ----------
    fn :
        Pure function to apply.
    items :
        Inputs; materialized into a list first.
    jobs :
        Worker threads. ``1`` (default) runs sequentially in the caller's
        thread, which keeps logs bit-stable.
    name :
        Label used when logging a failing job.

    Returns
    -------
    list
        ``[fn(x) for x in items]``, reduced in index order regardless of
        completion order.
    """
    work = list(items)
    if jobs <= 1 or len(work) <= 1:
        return [_guarded(fn, x, i, name) for i, x in enumerate(work)]

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_guarded, fn, x, i, name) for i, x in enumerate(work)]
        return [f.result() for f in futures]


def _guarded(fn: Callable[[T], R], x: T, index: int, name: str) -> R:
    try:
        return fn(x)
    except Exception:
        log.exception("%s %d failed", name, index)
        raise
