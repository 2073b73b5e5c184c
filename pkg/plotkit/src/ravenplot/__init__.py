"""Figure rendering for ravenbandit CSV exports.

Reads only the exported CSV files (never the bandit library itself) and
draws the benchmark's figure types: regret-reduction scaling lines,
sweep grids, cumulative curves, per-policy boxplots, and sample-moment
distributions.
"""

from .render import (
    EmptyDataError,
    FigureRequest,
    KINDS,
    SchemaError,
    render,
)

__version__ = "0.1.0"

__all__ = ["EmptyDataError", "FigureRequest", "KINDS", "SchemaError", "render"]
