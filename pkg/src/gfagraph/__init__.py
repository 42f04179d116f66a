import gfagraph.aggregate as aggregate
import gfagraph.complexity as complexity
import gfagraph.graph as graph
import gfagraph.io as io
import gfagraph.oracle as oracle
import gfagraph.sampling as sampling
import gfagraph.utils as utils
from gfagraph.aggregate.pipeline import StageSpec, gfaBlock, runPipeline
from gfagraph.core.config import GfaConfig
from gfagraph.core.tensor import FeatureMap

from .__deps__ import _OPTIONAL_VISUALIZATION_ENABLED


# Lazy import of optional deps
def __getattr__(attr):
    if attr == "visualization":
        if _OPTIONAL_VISUALIZATION_ENABLED:
            import gfagraph.visualization as visualization

            return visualization
        else:
            raise AttributeError(
                """
                gfagraph.visualization optional feature is not enabled.
                Please install with pip install gfagraph[visualization] to use this function.
                """
            )
    raise AttributeError(f"module 'gfagraph' has no attribute {attr!r}")


__version__ = "0.1.0"
__all__ = [
    "aggregate",
    "complexity",
    "graph",
    "io",
    "oracle",
    "sampling",
    "utils",
    "FeatureMap",
    "GfaConfig",
    "StageSpec",
    "gfaBlock",
    "runPipeline",
]
