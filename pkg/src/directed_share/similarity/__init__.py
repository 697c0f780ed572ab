"""Jaccard similarities and user-item preference estimates."""

from .cache import ItemSimilarityCache
from .jaccard import (
    SimilarityScore,
    jaccard,
    jaccard_items,
    jaccard_users,
    user_item_preference,
)

__all__ = [
    "SimilarityScore",
    "jaccard",
    "jaccard_users",
    "jaccard_items",
    "user_item_preference",
    "ItemSimilarityCache",
]
