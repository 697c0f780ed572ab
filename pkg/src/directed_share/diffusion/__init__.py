"""Preference-salience cascade simulator and independent-cascade baseline."""

from .baseline import DEFAULT_IC_ITEM, baseline_ic
from .cascade import (
    CascadeResult,
    CascadeState,
    PreferenceOracle,
    StepStats,
    initial_state,
    run,
    share_probability,
    step,
)
from .config import CascadeConfig
from .graph import SocialGraph, read_graph_csv, read_seeds_csv

__all__ = [
    "SocialGraph",
    "read_graph_csv",
    "read_seeds_csv",
    "CascadeConfig",
    "PreferenceOracle",
    "CascadeState",
    "CascadeResult",
    "StepStats",
    "share_probability",
    "initial_state",
    "step",
    "run",
    "baseline_ic",
    "DEFAULT_IC_ITEM",
]
