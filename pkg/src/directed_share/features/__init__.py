"""Feature vectors, promiscuity and balanced datasets for share prediction."""

from .datasets import (
    FEATURES_COLUMNS,
    BalancedDataset,
    build_balanced_datasets,
    read_features,
    write_features,
)
from .vector import (
    FEATURE_NAMES,
    PROMISCUITY_COLUMN,
    FeatureVector,
    TrainingInstance,
    feature_indices,
    featurize,
    featurize_records,
    promiscuity,
    promiscuity_counts,
)

__all__ = [
    "FEATURE_NAMES",
    "PROMISCUITY_COLUMN",
    "FeatureVector",
    "TrainingInstance",
    "feature_indices",
    "featurize",
    "featurize_records",
    "promiscuity",
    "promiscuity_counts",
    "BalancedDataset",
    "build_balanced_datasets",
    "FEATURES_COLUMNS",
    "read_features",
    "write_features",
]
