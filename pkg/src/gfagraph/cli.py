import argparse
import csv
import io
import sys
import time
from pathlib import Path

import numpy as np

from gfagraph.__deps__ import _OPTIONAL_VISUALIZATION_ENABLED
from gfagraph.__logger__ import get_logger, setLogFile
from gfagraph.aggregate.aggregation import ProjectionWeights
from gfagraph.aggregate.pipeline import StageSpec, runPipeline
from gfagraph.complexity.quotas import allocateQuotas
from gfagraph.complexity.scoring import computeScores
from gfagraph.core.config import POOLING_MODES, SCORING_STRATEGIES, GfaConfig
from gfagraph.core.tensor import FeatureMap
from gfagraph.exceptions import ConfigurationError, DomainError, ParseError
from gfagraph.graph.construction import buildGraph, graphStats
from gfagraph.io.config import encodeJson, loadConfig
from gfagraph.io.formats import atomicWrite, atomicWriteAll, encodePgm16, encodeTensor, readInput
from gfagraph.oracle.reference import countEdges
from gfagraph.sampling.candidates import CandidateTable, buildCandidates

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CONFIG = 3

BENCH_COLUMNS = (
    "side",
    "nodes",
    "candidates_total",
    "edges_total",
    "similarity_evaluations",
    "budget_ratio",
    "candidate_bound_ratio",
    "mean_abs_deviation",
    "seconds",
)


class UsageError(Exception):
    """Raised for invalid command lines."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class CliConfig:
    """A parsed command line: the subcommand, its arguments and the loaded ```GfaConfig```."""

    def __init__(self, command: str, args: argparse.Namespace, config: GfaConfig):
        self.command = command
        self.args = args
        self.config = config

    def __repr__(self) -> str:
        return f"CliConfig({self.command!r}, {self.config!r})"


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from error
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _sizes(text: str) -> list[int]:
    return [_positive(part) for part in text.split(",") if part.strip()]


def buildParser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gfagraph",
        description="Graph-based feature aggregation on images and feature tensors.",
    )
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(sub):
        sub.add_argument("--config", default=None, help="flat JSON file with GfaConfig fields")
        sub.add_argument("--seed", type=int, default=None, help="overrides the configured seed")
        sub.add_argument("--threads", type=_positive, default=1, help="worker threads")
        sub.add_argument("--log-file", default=None, help="append debug logs to this file")

    score = subparsers.add_parser("score", help="write the per-node complexity map")
    score.add_argument("--input", required=True, help="PPM/PGM image or FTEN tensor")
    score.add_argument("--strategy", choices=SCORING_STRATEGIES, default=None)
    score.add_argument("--pooling", choices=POOLING_MODES, default=None)
    score.add_argument("--out", required=True, help="16-bit PGM; a .json sidecar is written next to it")
    score.add_argument("--heatmap", default=None, help="optional image rendered with matplotlib")
    common(score)

    graph = subparsers.add_parser("graph", help="build the dual-scale graph and report statistics")
    graph.add_argument("--input", required=True, help="PPM/PGM image or FTEN tensor")
    graph.add_argument("--stats", default=None, help="graph statistics JSON")
    graph.add_argument("--degree-map", default=None, help="per-node degrees as a 16-bit PGM")
    graph.add_argument("--dump-candidates", type=int, default=None, metavar="NODE")
    graph.add_argument("--candidates-out", default=None, help="JSON file for --dump-candidates")
    common(graph)

    aggregate = subparsers.add_parser("aggregate", help="run GFA blocks on a tensor")
    aggregate.add_argument("--input", required=True, help="PPM/PGM image or FTEN tensor")
    aggregate.add_argument(
        "--weights",
        action="append",
        default=None,
        help="FTEN projection (C_in x C_out x 1); once for all passes or once per pass",
    )
    aggregate.add_argument("--out", required=True, help="output FTEN tensor")
    aggregate.add_argument("--stats", default=None, help="per-pass statistics JSON")
    aggregate.add_argument("--blocks", type=int, default=1)
    aggregate.add_argument("--channels", type=_positive, default=None)
    common(aggregate)

    bench = subparsers.add_parser("bench", help="edge counts and timings on random tensors")
    bench.add_argument("--sizes", type=_sizes, default=[32, 64], help="comma separated sides")
    bench.add_argument("--channels", type=_positive, default=8)
    bench.add_argument("--out", required=True, help="CSV file")
    common(bench)
    return parser


def parseArgs(argv: list[str]) -> CliConfig:
    """Parse ``argv`` and load the configuration it names."""
    args = buildParser().parse_args(argv)
    if args.command is None:
        raise UsageError("gfagraph: a subcommand is required")
    config = loadConfig(args.config)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    if args.command == "score":
        if Path(args.out).suffix.lower() == ".json":
            raise UsageError(
                "gfagraph score: --out must not end in .json, the sidecar takes that name"
            )
        changes = {}
        if args.strategy is not None:
            changes["strategy"] = args.strategy
        if args.pooling is not None:
            changes["pooling"] = args.pooling
        config = config.replace(**changes)
    if args.command == "graph":
        if args.dump_candidates is not None and args.candidates_out is None:
            raise UsageError("gfagraph graph: --dump-candidates needs --candidates-out")
        if args.stats is None and args.degree_map is None and args.candidates_out is None:
            raise UsageError("gfagraph graph: nothing to write, give --stats or --degree-map")
    if args.command == "aggregate":
        if args.weights is not None and len(args.weights) > 2:
            raise UsageError("gfagraph aggregate: --weights may be given at most twice")
        if args.blocks < 0:
            raise UsageError("gfagraph aggregate: --blocks must be nonnegative")
        if args.weights is not None and args.channels is not None:
            raise UsageError(
                "gfagraph aggregate: --channels and --weights exclude each other, "
                "the weights fix the output width"
            )
    return CliConfig(args.command, args, config)


def sidecarPath(out: str) -> Path:
    """Return the JSON file written next to a score map: the score map path with a .json suffix."""
    return Path(out).with_suffix(".json")


def normalizeScores(scores: np.ndarray) -> tuple[np.ndarray, dict]:
    """Min-max normalize scores to ``[0, 65535]``; a constant map becomes all zeros."""
    low, high = float(np.min(scores)), float(np.max(scores))
    if high > low:
        levels = np.floor((scores - low) / (high - low) * 65535.0 + 0.5)
    else:
        levels = np.zeros_like(scores)
    return levels.astype(np.int64), {"min": low, "max": high}


def _renderHeatmap(
    scores: np.ndarray, shape: tuple[int, int], cfg: GfaConfig, path: str
) -> bytes:
    if not _OPTIONAL_VISUALIZATION_ENABLED:
        logger.error("heatmap requested without matplotlib")
        raise ConfigurationError(
            "--heatmap needs matplotlib, install gfagraph[visualization]."
        )
    import matplotlib.pyplot as plt

    from gfagraph.visualization.heatmap import plotScoreMap

    fig = plotScoreMap(scores, shape, title=f"{cfg.strategy} score ({cfg.pooling})")
    buffer = io.BytesIO()
    try:
        fig.savefig(
            buffer, format=Path(path).suffix[1:] or "png", dpi=150, bbox_inches="tight"
        )
    except ValueError as error:
        logger.error("cannot render heatmap %s: %s", path, error)
        raise ConfigurationError(f"Cannot render the heatmap {path}: {error}") from error
    finally:
        plt.close(fig)
    return buffer.getvalue()


def _runScore(cli: CliConfig) -> None:
    args, cfg = cli.args, cli.config
    fmap = readInput(args.input)
    scores = computeScores(fmap, cfg.strategy, cfg.pooling)
    levels, extent = normalizeScores(scores)
    height, width = fmap.getSpatialShape()
    outputs = [
        (args.out, encodePgm16(levels.reshape(height, width))),
        (sidecarPath(args.out), encodeJson(extent)),
    ]
    if args.heatmap is not None:
        heatmap = _renderHeatmap(scores, (height, width), cfg, args.heatmap)
        outputs.append((args.heatmap, heatmap))
    atomicWriteAll(outputs)


def _buildDualGraph(fmap: FeatureMap, cfg: GfaConfig, threads: int):
    table = CandidateTable.fromShape(
        fmap.getSpatialShape(), cfg.localWindow, cfg.gridSize, "both"
    )
    scores = computeScores(fmap, cfg.strategy, cfg.pooling)
    budget = allocateQuotas(scores, cfg.avgDegree, table.counts)
    return buildGraph(fmap, table, budget.targets, cfg.iterations, threads)


def _runGraph(cli: CliConfig) -> None:
    args, cfg = cli.args, cli.config
    fmap = readInput(args.input)
    shape = fmap.getSpatialShape()
    outputs = []
    if args.dump_candidates is not None:
        candidates = buildCandidates(
            args.dump_candidates, shape, cfg.localWindow, cfg.gridSize, "both"
        )
        outputs.append((args.candidates_out, encodeJson(candidates.toDict())))
    if args.stats is not None or args.degree_map is not None:
        graph = _buildDualGraph(fmap, cfg, args.threads)
        if args.stats is not None:
            outputs.append((args.stats, encodeJson(graphStats(graph))))
        if args.degree_map is not None:
            degrees = np.minimum(graph.getDegrees(), 65535).reshape(shape)
            outputs.append((args.degree_map, encodePgm16(degrees)))
    atomicWriteAll(outputs)


def _checkWeightChain(
    projections: list[ProjectionWeights], inChannels: int, blocks: int
) -> None:
    """
    Explicit projections are shared by every block, so each one must accept the width the
    previous pass produces, and with more than one block a block must keep its width.
    """
    width = inChannels
    for index, projection in enumerate(projections):
        if projection.getInChannels() != width:
            logger.error(
                "projection %s expects %s channels, pass input has %s",
                index,
                projection.getInChannels(),
                width,
            )
            raise ConfigurationError(
                f"Projection {index} ({projection.path}) maps {projection.getInChannels()} "
                f"channels, but pass {index} receives {width}."
            )
        width = projection.getOutChannels()
    if blocks > 1 and width != inChannels:
        logger.error(
            "weights change the width from %s to %s over %s blocks", inChannels, width, blocks
        )
        raise ConfigurationError(
            f"The weights map {inChannels} to {width} channels, so they cannot be "
            f"reused by {blocks} blocks; use --blocks 1 or width-preserving weights."
        )


def _runAggregate(cli: CliConfig) -> None:
    args, cfg = cli.args, cli.config
    fmap = readInput(args.input)
    weights = None
    if args.weights:
        projections = [ProjectionWeights.fromFile(path) for path in args.weights]
        passes = len(cfg.passKinds())
        if len(projections) == 1:
            weights = projections * passes
        elif len(projections) == passes:
            weights = projections
        else:
            logger.error("%s weight files for %s passes", len(projections), passes)
            raise ConfigurationError(
                f"Give one weight file or one per pass ({passes}), got {len(projections)}."
            )
        _checkWeightChain(weights, fmap.channels, args.blocks)
    result = runPipeline(
        fmap, [StageSpec(args.blocks, cfg, args.channels, weights)], args.threads
    )
    outputs = [(args.out, encodeTensor(result.output))]
    if args.stats is not None:
        outputs.append((args.stats, encodeJson(result.statsDict())))
    atomicWriteAll(outputs)


def benchRows(
    sizes: list[int], channels: int, cfg: GfaConfig, threads: int = 1
) -> list[dict]:
    """
    Build the dual-scale graph of a seeded random ``side x side x channels`` tensor for every
    side and collect edge counts and timings, one dictionary per side.
    """
    rows = []
    for side in sizes:
        rng = np.random.default_rng((cfg.seed, side))
        fmap = FeatureMap.fromArray(rng.standard_normal((side, side, channels)))
        start = time.perf_counter()
        graph = _buildDualGraph(fmap, cfg, threads)
        seconds = time.perf_counter() - start
        counts = countEdges(graph, cfg.avgDegree, cfg.localWindow, cfg.gridSize)
        row = {
            "side": side,
            "nodes": side * side,
            "candidates_total": counts["candidates_total"],
            "edges_total": counts["edges_total"],
            "similarity_evaluations": graph.similarityEvaluations,
            "budget_ratio": counts["budget_ratio"],
            "candidate_bound_ratio": counts["candidate_bound_ratio"],
            "mean_abs_deviation": graph.getMeanAbsDeviation(),
            "seconds": seconds,
        }
        logger.info("bench %s", row)
        rows.append(row)
    return rows


def _runBench(cli: CliConfig) -> None:
    args = cli.args
    rows = benchRows(args.sizes, args.channels, cli.config, args.threads)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    atomicWrite(args.out, buffer.getvalue().encode("utf-8"))


_COMMANDS = {
    "score": _runScore,
    "graph": _runGraph,
    "aggregate": _runAggregate,
    "bench": _runBench,
}


def main(argv: list[str] | None = None) -> int:
    """
    Run the command line.

    Returns
    -------
    int
        0 on success, 1 for usage errors, 2 for I/O and parse errors and 3 for invalid
        configurations or inputs.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        buildParser().print_usage(sys.stderr)
        return EXIT_USAGE
    logToFile = False
    try:
        cli = parseArgs(argv)
        if cli.args.log_file is not None:
            setLogFile(cli.args.log_file)
            logToFile = True
        logger.info("running %s", cli)
        _COMMANDS[cli.command](cli)
    except UsageError as error:
        buildParser().print_usage(sys.stderr)
        print(error, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as error:
        logger.error("%s", error)
        print(f"gfagraph: error: {error}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, DomainError, IndexError) as error:
        logger.error("%s", error)
        print(f"gfagraph: error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as stop:
        return int(stop.code or 0)
    finally:
        if logToFile:
            setLogFile(None)
    return EXIT_OK
