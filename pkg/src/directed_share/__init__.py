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
directed_share
==============
Ego-network recommendation, share prediction, preference-salience diffusion
and the statistics used to analyze directed sharing studies.

Exports
-------
- :class:`LikesMatrix`, :class:`RatingsTable`, :class:`ShareRecord`,
  :class:`DyadSession`, :class:`Study` - study model
- :func:`recommend` - ego-network recommender
- :func:`featurize`, :func:`build_balanced_datasets` - share features
- :func:`train_tree`, :func:`cross_validate` - decision tree and evaluation
- :func:`simulate` - preference-salience cascade; :func:`baseline_ic`
- :func:`welch_t_from_summary`, :func:`fit_lmm` - statistics
- :func:`generate_study` - synthetic studies
- ``__version__`` - package version (PEP 440), fallback ``"0.0.0"``
"""

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as _version

# --------------------------------------------------------------------------- #
# Public API re-exports
# --------------------------------------------------------------------------- #
from .classifier import cross_validate, train_tree
from .diffusion import CascadeConfig, SocialGraph, baseline_ic
from .diffusion import run as simulate
from .errors import DirectedShareError
from .features import build_balanced_datasets, featurize
from .model import DyadSession, LikesMatrix, RatingsTable, ShareRecord, Study
from .recommender import recommend
from .stats import fit_lmm, likelihood_ratio_test, welch_t_from_summary
from .synthgen import StudyProfile, generate_study

__all__: list = [
    "LikesMatrix",
    "RatingsTable",
    "ShareRecord",
    "DyadSession",
    "Study",
    "recommend",
    "featurize",
    "build_balanced_datasets",
    "train_tree",
    "cross_validate",
    "SocialGraph",
    "CascadeConfig",
    "simulate",
    "baseline_ic",
    "welch_t_from_summary",
    "fit_lmm",
    "likelihood_ratio_test",
    "StudyProfile",
    "generate_study",
    "DirectedShareError",
    "__version__",
]

# --------------------------------------------------------------------------- #
# Version
# --------------------------------------------------------------------------- #
try:
    __version__: str = _version("directed-share")
except PackageNotFoundError:
    __version__ = "0.0.0"
