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
Crossed random-intercepts linear mixed model, fitted by maximum likelihood.

Model::

    rating = b0 [+ b1 * condition] + u[participant] + v[item] + e

with ``u ~ N(0, s2_p)``, ``v ~ N(0, s2_m)`` and ``e ~ N(0, s2_e)``. The
marginal covariance is ``s2_e * H`` with ``H = I + g_p Zp Zp' + g_m Zm Zm'``
and ``g = s2 / s2_e``. The fixed effects and ``s2_e`` are profiled out, so
the optimizer only sees the two log variance ratios. ``H`` is never formed:
every quantity goes through the ``q x q`` matrix ``A = I + S Z'Z S``
(``q`` = participants + items, ``S = diag(sqrt(g))``), for which
``log|H| = log|A|``.

Zero variance components are legitimate optima, so the fit compares the
interior optimum against both one-component edges and the OLS corner and
keeps the best, preferring the simpler model on ties.

Public API
----------
- :class:`LmmObservation`, :class:`LmmFit`, :class:`LrtResult`,
  :class:`LmmComparison`
- :func:`fit_lmm`, :func:`likelihood_ratio_test`, :func:`condition_lrt`
- :func:`read_observations`, :func:`observations_frame`
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import sparse
from scipy import stats as sps
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize

from ..errors import ContractError, ConvergenceError, DegenerateSampleError
from ..io.csvio import frame_rows, parse_rows, read_frame
from ..model.records import check_id

log = logging.getLogger("directed_share.lmm")

__all__ = [
    "LmmObservation",
    "LmmFit",
    "LrtResult",
    "LmmComparison",
    "fit_lmm",
    "likelihood_ratio_test",
    "condition_lrt",
    "read_observations",
    "observations_frame",
    "OBSERVATION_COLUMNS",
]

OBSERVATION_COLUMNS = ("rating", "participant_id", "item_id", "condition")

_LOG_BOUNDS = (-25.0, 12.0)
_TIE_TOL = 1e-9
_LOG_2PI = math.log(2.0 * math.pi)


# --------------------------------------------------------------------------- #
# Data
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class LmmObservation:
    """One rating with its grouping factors and 0/1 condition flag."""

    rating: float
    participant: str
    item: str
    condition: int

    def __post_init__(self) -> None:
        check_id(self.participant, "participant")
        check_id(self.item, "item")
        rating = float(self.rating)
        if not math.isfinite(rating):
            raise ContractError(f"rating must be finite, got {self.rating!r}")
        if self.condition not in (0, 1):
            raise ContractError(f"condition must be 0 or 1, got {self.condition!r}")
        object.__setattr__(self, "rating", rating)
        object.__setattr__(self, "condition", int(self.condition))


def _fingerprint(rows: Sequence[LmmObservation]) -> str:
    h = hashlib.blake2b(digest_size=16)
    for r in sorted(rows, key=lambda r: (r.participant, r.item, r.condition, r.rating)):
        h.update(f"{r.rating!r}\t{r.participant}\t{r.item}\t{r.condition}\n".encode())
    return h.hexdigest()


class _Design:
    """Cross-products of the fixed and random design matrices."""

    def __init__(self, rows: Sequence[LmmObservation], include_condition: bool):
        self.n = len(rows)
        participants = sorted({r.participant for r in rows})
        items = sorted({r.item for r in rows})
        if len(participants) < 2 or len(items) < 2:
            raise ContractError(
                f"need at least 2 participants and 2 items, got "
                f"{len(participants)} and {len(items)}"
            )
        self.n_participants = len(participants)
        self.n_items = len(items)

        y = np.array([r.rating for r in rows], dtype=np.float64)
        cond = np.array([r.condition for r in rows], dtype=np.float64)
        cols = [np.ones(self.n)]
        if include_condition:
            if np.ptp(cond) == 0:
                raise ContractError("condition column is constant; its effect is not estimable")
            cols.append(cond)
        X = np.column_stack(cols)

        p_index = {p: k for k, p in enumerate(participants)}
        m_index = {m: self.n_participants + k for k, m in enumerate(items)}
        q = self.n_participants + self.n_items
        obs = np.arange(self.n)
        Z = sparse.csr_matrix(
            (
                np.ones(2 * self.n),
                (
                    np.concatenate([obs, obs]),
                    np.array(
                        [p_index[r.participant] for r in rows] + [m_index[r.item] for r in rows]
                    ),
                ),
            ),
            shape=(self.n, q),
        )
        self.q = q
        self.y = y
        self.X = X
        self.ZtZ = (Z.T @ Z).toarray()
        self.ZtX = np.asarray(Z.T @ X)
        self.Zty = np.asarray(Z.T @ y).ravel()
        self.XtX = X.T @ X
        self.Xty = X.T @ y
        self.yty = float(y @ y)

    def profile(self, g_p: float, g_m: float) -> Tuple[np.ndarray, float, float]:
        """Return ``(beta, s2_e, loglik)`` at the variance ratios ``(g_p, g_m)``."""
        s = np.sqrt(
            np.concatenate([np.full(self.n_participants, g_p), np.full(self.n_items, g_m)])
        )
        A = np.eye(self.q) + s[:, None] * self.ZtZ * s[None, :]
        factor = cho_factor(A, lower=True)
        log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
        SX = s[:, None] * self.ZtX
        Sy = s * self.Zty
        AX = cho_solve(factor, SX)
        Ay = cho_solve(factor, Sy)
        XHX = self.XtX - SX.T @ AX
        XHy = self.Xty - SX.T @ Ay
        yHy = self.yty - float(Sy @ Ay)
        beta = np.linalg.solve(XHX, XHy)
        rss = max(yHy - float(beta @ XHy), 0.0)
        if rss == 0.0:
            return beta, 0.0, math.inf
        s2 = rss / self.n
        ll = -0.5 * self.n * (_LOG_2PI + 1.0 + math.log(s2)) - 0.5 * log_det
        return beta, s2, ll

    def ols_is_exact(self, beta: np.ndarray) -> bool:
        if np.ptp(self.y) == 0:
            return True
        resid = self.y - self.X @ beta
        spread = float(np.sum((self.y - self.y.mean()) ** 2))
        return float(resid @ resid) <= 1e-20 * spread


# --------------------------------------------------------------------------- #
# Fit
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class LmmFit:
    """Maximum-likelihood fit of the crossed random-intercepts model.

    Attributes
    ----------
    beta :
        ``(intercept,)`` or ``(intercept, condition)``.
    var_participant, var_item, var_residual :
        Variance components, all ``>= 0``.
    loglik :
        Maximized log-likelihood (``inf`` for a degenerate, exactly fitted
        sample).
    fingerprint :
        Digest of the observations; fits are comparable only when equal.
    """

    beta: Tuple[float, ...]
    var_participant: float
    var_item: float
    var_residual: float
    loglik: float
    include_condition: bool
    n_obs: int
    n_participants: int
    n_items: int
    fingerprint: str
    degenerate: bool = False

    @property
    def intercept(self) -> float:
        return self.beta[0]

    @property
    def condition_effect(self) -> Optional[float]:
        return self.beta[1] if self.include_condition else None

    def as_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "intercept": self.intercept,
            "var_participant": self.var_participant,
            "var_item": self.var_item,
            "var_residual": self.var_residual,
            "loglik": self.loglik,
            "n_obs": self.n_obs,
            "n_participants": self.n_participants,
            "n_items": self.n_items,
        }
        if self.include_condition:
            out["condition"] = self.condition_effect
        return out


def _ratios(theta: Sequence[float], free: Tuple[bool, bool]) -> Tuple[float, float]:
    it = iter(theta)
    g_p = math.exp(next(it)) if free[0] else 0.0
    g_m = math.exp(next(it)) if free[1] else 0.0
    return g_p, g_m


class _Optimum:
    __slots__ = ("free", "theta", "loglik", "converged")

    def __init__(self, free: Tuple[bool, bool], theta: np.ndarray, loglik: float, converged: bool):
        self.free = free
        self.theta = theta
        self.loglik = loglik
        self.converged = converged

    @property
    def ratios(self) -> Tuple[float, float]:
        return _ratios(self.theta, self.free)


def _maximize(
    design: _Design,
    free: Tuple[bool, bool],
    starts: Iterable[Sequence[float]],
    *,
    tol: float,
    max_restarts: int,
    maxiter: int,
) -> _Optimum:
    def objective(theta: np.ndarray) -> float:
        return -design.profile(*_ratios(theta, free))[2]

    dim = sum(free)
    best: Optional[_Optimum] = None
    for x0 in starts:
        x = np.clip(np.asarray(x0, dtype=np.float64), *_LOG_BOUNDS)
        ll = -objective(x)
        converged = False
        for attempt in range(max_restarts + 1):
            if attempt >= 2:
                log.warning(
                    "lmm optimizer restart %d (components=%s, loglik=%.10g)", attempt, free, ll
                )
            res = minimize(
                objective,
                x,
                method="L-BFGS-B",
                bounds=[_LOG_BOUNDS] * dim,
                options={"maxiter": maxiter, "ftol": 1e-14, "gtol": 1e-9},
            )
            new_ll = -float(res.fun)
            gain = new_ll - ll
            if new_ll > ll:
                x, ll = np.asarray(res.x, dtype=np.float64), new_ll
            if gain < tol:
                converged = True
                break
        cand = _Optimum(free, x, ll, converged)
        if best is None or cand.loglik > best.loglik:
            best = cand
    assert best is not None
    return best


def fit_lmm(
    data: Iterable[LmmObservation],
    include_condition: bool = True,
    *,
    tol: float = 1e-8,
    max_restarts: int = 10,
    maxiter: int = 500,
) -> LmmFit:
    """Fit ``rating ~ [condition] + (1|participant) + (1|item)`` by ML.

    Parameters
    ----------
    data :
        Complete observations.
    include_condition :
        Whether the condition fixed effect is part of the model.
    tol :
        A restart of the optimizer that improves the log-likelihood by less
        than *tol* marks convergence.
    max_restarts :
        Restarts allowed before giving up.

    Raises
    ------
    ContractError
        Fewer than two participants or items, or a constant condition column
        with ``include_condition=True``.
    ConvergenceError
        No convergence within *max_restarts*; ``best_fit`` holds the best
        fit found.
    """
    rows = list(data)
    design = _Design(rows, include_condition)
    fingerprint = _fingerprint(rows)

    def build(g_p: float, g_m: float, degenerate: bool = False) -> LmmFit:
        beta, s2, ll = design.profile(g_p, g_m)
        return LmmFit(
            tuple(float(b) for b in beta),
            g_p * s2,
            g_m * s2,
            s2,
            ll,
            include_condition,
            design.n,
            design.n_participants,
            design.n_items,
            fingerprint,
            degenerate,
        )

    corner = build(0.0, 0.0)
    if design.ols_is_exact(np.asarray(corner.beta)):
        log.warning(
            "degenerate lmm sample: fixed effects fit %d ratings exactly", design.n
        )
        return LmmFit(
            corner.beta,
            0.0,
            0.0,
            0.0,
            math.inf,
            include_condition,
            design.n,
            design.n_participants,
            design.n_items,
            fingerprint,
            degenerate=True,
        )

    kw = dict(tol=tol, max_restarts=max_restarts, maxiter=maxiter)
    p_edge = _maximize(design, (True, False), [(0.0,)], **kw)
    m_edge = _maximize(design, (False, True), [(0.0,)], **kw)
    interior = _maximize(
        design,
        (True, True),
        [(0.0, 0.0), (max(p_edge.theta[0], -10.0), max(m_edge.theta[0], -10.0))],
        **kw,
    )

    # simpler models first; a later candidate must beat them by more than _TIE_TOL
    chosen_ratios = (0.0, 0.0)
    chosen_ll = corner.loglik
    converged = True
    for cand in (p_edge, m_edge, interior):
        if cand.loglik > chosen_ll + _TIE_TOL:
            chosen_ratios, chosen_ll, converged = cand.ratios, cand.loglik, cand.converged

    fit = build(*chosen_ratios)
    log.debug(
        "lmm fit: n=%d beta=%s s2_p=%.4g s2_m=%.4g s2_e=%.4g loglik=%.6f",
        fit.n_obs,
        fit.beta,
        fit.var_participant,
        fit.var_item,
        fit.var_residual,
        fit.loglik,
    )
    if not converged:
        raise ConvergenceError(
            f"lmm optimizer did not converge within {max_restarts} restarts", best_fit=fit
        )
    return fit


# --------------------------------------------------------------------------- #
# Likelihood-ratio test
# --------------------------------------------------------------------------- #
@dataclass(frozen=True)
class LrtResult:
    chi_square: float
    df: int
    p: float
    loglik_full: float
    loglik_null: float


def likelihood_ratio_test(full: LmmFit, null: LmmFit) -> LrtResult:
    """``chi2 = 2 (loglik_full - loglik_null)``, clamped at 0, on 1 df.

    Raises
    ------
    ContractError
        The fits were made on different data, or *null* carries the
        condition effect while *full* does not.
    DegenerateSampleError
        Either log-likelihood is infinite.
    """
    if full.fingerprint != null.fingerprint:
        raise ContractError("fits were made on different data (fingerprints differ)")
    if null.include_condition and not full.include_condition:
        raise ContractError("null model includes the condition effect but full does not")
    if not (math.isfinite(full.loglik) and math.isfinite(null.loglik)):
        raise DegenerateSampleError("log-likelihood is infinite; sample is degenerate")
    chi = max(0.0, 2.0 * (full.loglik - null.loglik))
    return LrtResult(chi, 1, float(sps.chi2.sf(chi, 1)), full.loglik, null.loglik)


@dataclass(frozen=True)
class LmmComparison:
    full: LmmFit
    null: LmmFit
    lrt: LrtResult


def condition_lrt(data: Iterable[LmmObservation], **kwargs) -> LmmComparison:
    """Fit the model with and without the condition effect and compare them."""
    rows = list(data)
    full = fit_lmm(rows, True, **kwargs)
    null = fit_lmm(rows, False, **kwargs)
    return LmmComparison(full, null, likelihood_ratio_test(full, null))


# --------------------------------------------------------------------------- #
# I/O
# --------------------------------------------------------------------------- #
def _observation(row: Tuple[str, ...]) -> LmmObservation:
    rating, participant, item, condition = row
    if condition not in ("0", "1"):
        raise ContractError(f"condition must be 0 or 1, got {condition!r}")
    return LmmObservation(float(rating), participant, item, int(condition))


def read_observations(path: Union[str, Path]) -> List[LmmObservation]:
    """Read a ratings-long CSV (``rating,participant_id,item_id,condition``)."""
    df = read_frame(path, OBSERVATION_COLUMNS)
    return parse_rows(path, frame_rows(df, OBSERVATION_COLUMNS), _observation)


def observations_frame(rows: Iterable[LmmObservation]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.rating, r.participant, r.item, r.condition) for r in rows],
        columns=list(OBSERVATION_COLUMNS),
    )
