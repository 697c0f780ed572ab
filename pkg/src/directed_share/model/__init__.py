"""Core study model.

This package exposes the in-memory representation of a directed-sharing
study: the Likes relation, explicit ratings, share decisions, item metadata,
dyad sessions and the rules that classify participants into study groups.
"""

from .likes import LikesMatrix, merge_likes, to_unary
from .ratings import RatingsTable, from_half_units, to_half_units
from .records import ItemId, ItemMeta, ShareRecord, UserId, check_id
from .session import DyadSession, StudyGroup, assign_group
from .study import (
    Study,
    build_friends,
    materialize_non_shares,
    participant_groups,
    validate_shares,
)

__all__ = [
    "LikesMatrix",
    "to_unary",
    "merge_likes",
    "RatingsTable",
    "to_half_units",
    "from_half_units",
    "UserId",
    "ItemId",
    "check_id",
    "ShareRecord",
    "ItemMeta",
    "DyadSession",
    "StudyGroup",
    "assign_group",
    "Study",
    "build_friends",
    "materialize_non_shares",
    "validate_shares",
    "participant_groups",
]
