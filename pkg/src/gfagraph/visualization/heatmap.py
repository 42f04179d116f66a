import matplotlib
import matplotlib.pyplot as plt
import numpy as np
from numpy.typing import ArrayLike

from gfagraph.__logger__ import get_logger
from gfagraph.exceptions import DomainError

logger = get_logger(__name__)

PREDEFINED_STYLES = {
    "gfagraph": {
        "cmap": ["black", "darkslateblue", "deepskyblue", "gold", "white"],
        "facecolor": "white",
        "framecolor": "silver",
        "tickscolor": "black",
    },
    "dark": {
        "cmap": ["black", "dimgray", "lightgray", "white"],
        "facecolor": "black",
        "framecolor": "silver",
        "tickscolor": "white",
    },
}


def plotScoreMap(
    values: ArrayLike,
    shape: tuple[int, int] | None = None,
    title: str = "RMS-G score",
    style: str = "gfagraph",
    filename: str | None = None,
    **kwargs,
):
    """Plot a per-node map (scores, degrees, ...) as a heatmap; brighter means larger.

    Args:
        values (ArrayLike): ``N`` node values in row-major order, or an ``H x W`` array.
        shape (tuple[int, int], optional): The spatial shape when ``values`` is flat.
        title (str, optional): The figure title. Defaults to `RMS-G score`.
        style (str, optional): One of the predefined styles. Defaults to `gfagraph`.
        filename (str, optional): If provided, the figure is saved to this file.
        **kwargs: Style options overriding the predefined style.

    Returns:
        matplotlib.figure.Figure: The figure containing the heatmap.
    """
    array = np.asarray(values, dtype=np.float64)
    if shape is not None:
        if array.size != shape[0] * shape[1]:
            logger.error("%s values do not fit shape %s", array.size, shape)
            raise DomainError(f"{array.size} values do not fit the shape {shape}.")
        array = array.reshape(shape)
    if array.ndim != 2:
        logger.error("heatmap needs a 2-D array, got shape %s", array.shape)
        raise DomainError(f"A heatmap needs a 2-D array, got shape {array.shape}.")

    kwargs = {**PREDEFINED_STYLES.get(style, {}), **kwargs}
    cmap = matplotlib.colors.LinearSegmentedColormap.from_list(
        "", kwargs.get("cmap", ["black", "white"])
    )

    height, width = array.shape
    scale = 6.0 / max(height, width)
    fig, ax = plt.subplots(figsize=(max(2.0, width * scale) + 1.0, max(2.0, height * scale)))
    fig.patch.set_facecolor(kwargs.get("facecolor", "white"))
    ax.set_facecolor(kwargs.get("facecolor", "white"))
    image = ax.imshow(array, cmap=cmap, interpolation="nearest")
    colorbar = fig.colorbar(image, ax=ax)
    colorbar.ax.tick_params(colors=kwargs.get("tickscolor", "black"))
    ax.tick_params(axis="x", colors=kwargs.get("tickscolor", "black"))
    ax.tick_params(axis="y", colors=kwargs.get("tickscolor", "black"))
    for spine in ax.spines.values():
        spine.set_color(kwargs.get("framecolor", "black"))
    ax.set_title(title, color=kwargs.get("tickscolor", "black"))
    plt.tight_layout()

    if filename is not None:
        logger.info("saving heatmap %s", filename)
        fig.savefig(filename, dpi=150, bbox_inches="tight")
    return fig
