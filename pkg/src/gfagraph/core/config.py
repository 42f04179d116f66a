from gfagraph.__logger__ import get_logger
from gfagraph.exceptions import ConfigurationError

logger = get_logger(__name__)

SCORING_STRATEGIES = ("none", "sobel", "rescaling-residual", "local-entropy")
POOLING_MODES = ("rms", "mean")
PASS_ORDERS = ("global-then-local", "local-then-global")
PASS_TOPOLOGIES = ("dual", "local-only", "global-only")
CANDIDATE_MODES = ("local-only", "global-only", "both")


class GfaConfig:
    """All hyperparameters of a GFA block.

    The defaults follow the reference configuration: a dense local window of side 8,
    a sparse global grid of side 16, an average in-degree of 64 and 5 bisection
    iterations, with Sobel RMS-gradient scoring and the global pass before the local pass.

    The JSON form of a configuration is a flat object whose keys are exactly the
    attribute names listed in ```GfaConfig.FIELDS```.
    """

    FIELDS = (
        "localWindow",
        "gridSize",
        "avgDegree",
        "iterations",
        "pooling",
        "strategy",
        "order",
        "passes",
        "seed",
    )

    def __init__(
        self,
        localWindow: int = 8,
        gridSize: int = 16,
        avgDegree: int = 64,
        iterations: int = 5,
        pooling: str = "rms",
        strategy: str = "sobel",
        order: str = "global-then-local",
        passes: str = "dual",
        seed: int = 0,
    ):
        """
        The constructor validates every hyperparameter.

        Parameters
        ----------
        localWindow : int
            The side ``L`` of the dense local candidate window.
        gridSize : int
            The side ``G`` of the sparse global candidate lattice.
        avgDegree : int
            The target average in-degree; the total edge budget is ``N * avgDegree``.
        iterations : int
            The number ``T`` of bisection iterations per node.
        pooling : String
            Channel pooling of the complexity score, ``"rms"`` or ``"mean"``.
        strategy : String
            Complexity scoring, one of ```SCORING_STRATEGIES```.
        order : String
            Order of the two aggregation passes, one of ```PASS_ORDERS```.
        passes : String
            ``"dual"`` runs a local and a global pass, ``"local-only"`` and ``"global-only"``
            run a single pass.
        seed : int
            Seed of the default projection weights.

        Returns
        -------
        GfaConfig : gfagraph.core.config.GfaConfig
            A validated configuration.
        """
        for name, value in (
            ("localWindow", localWindow),
            ("gridSize", gridSize),
            ("avgDegree", avgDegree),
            ("iterations", iterations),
        ):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                logger.error("invalid %s: %s", name, value)
                raise ConfigurationError(
                    f"{name} must be a positive integer, got {value!r}."
                )
        for name, value, allowed in (
            ("pooling", pooling, POOLING_MODES),
            ("strategy", strategy, SCORING_STRATEGIES),
            ("order", order, PASS_ORDERS),
            ("passes", passes, PASS_TOPOLOGIES),
        ):
            if value not in allowed:
                logger.error("invalid %s: %s", name, value)
                raise ConfigurationError(
                    f"{name} must be one of {', '.join(allowed)}, got {value!r}."
                )
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            logger.error("invalid seed: %s", seed)
            raise ConfigurationError(
                f"seed must be a non-negative integer, got {seed!r}."
            )

        self.localWindow = localWindow
        self.gridSize = gridSize
        self.avgDegree = avgDegree
        self.iterations = iterations
        self.pooling = pooling
        self.strategy = strategy
        self.order = order
        self.passes = passes
        self.seed = seed

    @classmethod
    def fromDict(cls, values: dict) -> "GfaConfig":
        """
        Build a configuration from a flat dictionary. Missing keys take their default
        values, unknown keys raise a ```ConfigurationError```.
        """
        if not isinstance(values, dict):
            logger.error("configuration is not a JSON object: %r", values)
            raise ConfigurationError("A configuration must be a flat JSON object.")
        unknown = sorted(set(values) - set(cls.FIELDS))
        if unknown:
            logger.error("unknown configuration keys: %s", unknown)
            raise ConfigurationError(
                f"Unknown configuration keys: {', '.join(unknown)}."
            )
        return cls(**values)

    def toDict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}

    def replace(self, **changes) -> "GfaConfig":
        """Return a copy with some hyperparameters changed."""
        values = self.toDict()
        values.update(changes)
        return GfaConfig.fromDict(values)

    def passKinds(self) -> list[str]:
        """
        Return the aggregation passes of a block in execution order.

        Returns
        -------
        list[String]
            A list containing ``"local"`` and/or ``"global"``.
        """
        if self.passes == "local-only":
            return ["local"]
        if self.passes == "global-only":
            return ["global"]
        if self.order == "global-then-local":
            return ["global", "local"]
        return ["local", "global"]

    def __repr__(self) -> str:
        args = ", ".join(f"{name}={getattr(self, name)!r}" for name in self.FIELDS)
        return f"GfaConfig({args})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GfaConfig):
            return False
        return self.toDict() == other.toDict()
