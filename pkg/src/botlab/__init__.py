"""Social-bot influence workbench."""

from .graph import SocialGraph, compute_stats

__version__ = "0.1.0"
__all__ = ["SocialGraph", "compute_stats", "__version__"]
