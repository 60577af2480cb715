"""API and programming-task knowledge graphs with fused search.

    >>> import kgfuse
    >>> cfg = kgfuse.Config.load("kgfuse.json")
    >>> kgfuse.run_stage("all", cfg)
    >>> ix = kgfuse.Index(cfg)
    >>> ix.search_text("how to insert an item in List with add()")["best_task"]
"""

from ._core import (
    Config,
    Index,
    KgfuseError,
    __version__,
    match_api_packet,
    overlap_score,
    run_stage,
)

__all__ = [
    "Config",
    "Index",
    "KgfuseError",
    "__version__",
    "match_api_packet",
    "overlap_score",
    "run_stage",
]
