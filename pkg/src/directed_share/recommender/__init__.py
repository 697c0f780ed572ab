"""Ego-network item recommendations."""

from .ego import (
    DEFAULT_K,
    DEFAULT_N,
    RecommendationList,
    recommend,
    recommend_many,
    score_item,
    top_k_friends,
)

__all__ = [
    "DEFAULT_K",
    "DEFAULT_N",
    "RecommendationList",
    "top_k_friends",
    "score_item",
    "recommend",
    "recommend_many",
]
