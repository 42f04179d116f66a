import numpy as np
import pytest

matplotlib = pytest.importorskip("matplotlib")
matplotlib.use("Agg")

from gfagraph.exceptions import DomainError  # noqa: E402
from gfagraph.visualization.heatmap import plotScoreMap  # noqa: E402


class TestPlotScoreMap:
    def test_flat_values_with_shape(self, tmp_path):
        path = tmp_path / "scores.png"
        fig = plotScoreMap(np.arange(12.0), (3, 4), filename=str(path))
        assert path.exists()
        assert fig.axes[0].get_title() == "RMS-G score"
        matplotlib.pyplot.close(fig)

    def test_dark_style(self):
        fig = plotScoreMap(np.ones((5, 5)), style="dark", title="degrees")
        assert fig.axes[0].get_title() == "degrees"
        matplotlib.pyplot.close(fig)

    def test_wrong_shape(self):
        with pytest.raises(DomainError):
            plotScoreMap(np.arange(10.0), (3, 4))
        with pytest.raises(DomainError):
            plotScoreMap(np.arange(10.0))

    def test_cli_heatmap(self, tmp_path):
        from gfagraph.cli import main

        image = tmp_path / "in.pgm"
        image.write_bytes(b"P5\n4 4\n255\n" + bytes(range(0, 160, 10)))
        heatmap = tmp_path / "heat.png"
        args = ["score", "--input", str(image), "--out", str(tmp_path / "s.pgm")]
        assert main(args + ["--heatmap", str(heatmap)]) == 0
        assert heatmap.read_bytes()[:4] == b"\x89PNG"

    def test_cli_unknown_heatmap_format(self, tmp_path):
        from gfagraph.cli import main

        image = tmp_path / "in.pgm"
        image.write_bytes(b"P5\n4 4\n255\n" + bytes(range(0, 160, 10)))
        out = tmp_path / "s.pgm"
        args = ["score", "--input", str(image), "--out", str(out)]
        assert main(args + ["--heatmap", str(tmp_path / "heat.xyz")]) == 3
        assert not out.exists()
