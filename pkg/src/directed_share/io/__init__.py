"""CSV ingestion of study files and atomic writers for run outputs."""

from .csvio import (
    STUDY_FILES,
    frame_rows,
    parse_rows,
    read_frame,
    read_friends,
    read_items,
    read_likes,
    read_ratings,
    read_sessions,
    read_shares,
    read_study,
    write_frame,
    write_study,
    write_text,
)

__all__ = [
    "STUDY_FILES",
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
]
