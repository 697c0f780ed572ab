"""Miscellaneous utilities."""

from .parallel import parallel_map
from .rng import KeyedUniform, derive_seed, substream

__all__ = ["parallel_map", "KeyedUniform", "derive_seed", "substream"]
