from gfagraph.utils.helpers import chunkBounds, mapRowChunks, roundHalfAway

__all__ = ["roundHalfAway", "chunkBounds", "mapRowChunks"]
