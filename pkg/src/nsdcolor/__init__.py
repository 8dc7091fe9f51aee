"""nsdcolor: neighbor-sum-distinguishing total colorings.

A vertex's value under a total coloring is its own color plus the colors of
its incident edges; a total coloring is neighbor-sum distinguishing when
adjacent vertices always get different values.  The package bundles an exact
branch-and-bound solver for the least such palette size, a standalone
certificate verifier, a balanced-coloring engine with Moser-Tardos style
resampling, and a staged constructive pipeline that assembles the asymptotic
upper-bound coloring and reports honestly when desk-scale inputs fall outside
its guarantees.
"""

from .coloring import TotalColoring
from .graphs import Graph

__version__ = "0.1.0"

__all__ = ["Graph", "TotalColoring", "__version__"]
