"""Synthetic study populations and planted-effect rating tables."""

from .generate import (
    TRUTH_DIR,
    TRUTH_FILE,
    GroundTruth,
    SyntheticStudy,
    generate_study,
    read_ground_truth,
    write_ground_truth,
    write_synthetic,
)
from .planted import planted_effect_ratings
from .profile import StudyProfile

__all__ = [
    "StudyProfile",
    "GroundTruth",
    "SyntheticStudy",
    "generate_study",
    "write_synthetic",
    "write_ground_truth",
    "read_ground_truth",
    "planted_effect_ratings",
    "TRUTH_DIR",
    "TRUTH_FILE",
]
