from gfagraph.visualization.heatmap import PREDEFINED_STYLES, plotScoreMap

__all__ = ["plotScoreMap", "PREDEFINED_STYLES"]
