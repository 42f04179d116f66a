import numpy as np
from numpy.typing import NDArray

from gfagraph.__logger__ import get_logger
from gfagraph.core.config import CANDIDATE_MODES
from gfagraph.core.tensor import nodeToCoord
from gfagraph.exceptions import ConfigurationError

logger = get_logger(__name__)


def _checkLocalWindow(L: int, shape: tuple[int, int]) -> None:
    if isinstance(L, bool) or int(L) != L or L < 1:
        logger.error("invalid local window %s", L)
        raise ConfigurationError(f"The local window L must be >= 1, got {L}.")
    if L > 2 * max(shape):
        logger.error("local window %s too large for shape %s", L, shape)
        raise ConfigurationError(
            f"The local window L={L} exceeds twice the image side for shape {shape}."
        )


def _checkGridSize(G: int, shape: tuple[int, int]) -> None:
    height, width = shape
    if isinstance(G, bool) or int(G) != G or G < 1:
        logger.error("invalid grid size %s", G)
        raise ConfigurationError(f"The grid size G must be >= 1, got {G}.")
    if G > height or G > width:
        logger.error("grid size %s too large for shape %s", G, shape)
        raise ConfigurationError(
            f"The grid size G={G} exceeds the image side for shape {shape}; the stride would be 0."
        )


def _checkMode(mode: str) -> None:
    if mode not in CANDIDATE_MODES:
        logger.error("unknown candidate mode %s", mode)
        raise ConfigurationError(
            f"Candidate mode must be one of {', '.join(CANDIDATE_MODES)}, got {mode!r}."
        )


def localOffsets(L: int) -> NDArray:
    """
    Return the window offsets along one axis. For odd ``L`` the window is symmetric,
    for even ``L`` it reaches one step further up/left than down/right so that an
    interior window always has exactly ``L*L`` cells.

    Parameters
    ----------
    L : int
        The window side.

    Returns
    -------
    NDArray
        The offsets ``-(L // 2), ..., ceil(L / 2) - 1``.
    """
    return np.arange(-(L // 2), (L + 1) // 2, dtype=np.int64)


def gridStrides(shape: tuple[int, int], G: int) -> tuple[int, int]:
    """Return the lattice strides ``(H // G, W // G)``."""
    height, width = shape
    return height // G, width // G


def sampleLocal(i: int, shape: tuple[int, int], L: int) -> NDArray:
    """
    Return the dense local candidates of node ``i``: all in-bounds nodes of the
    ``L x L`` window around it. Offsets outside the image are discarded, so the set
    shrinks at borders.

    Parameters
    ----------
    i : int
        The node index.
    shape : tuple[int, int]
        The spatial shape ``(H, W)``.
    L : int
        The window side.

    Returns
    -------
    NDArray
        Sorted node indices; ``i`` is always among them.
    """
    _checkLocalWindow(L, shape)
    height, width = shape
    u, v = nodeToCoord(i, shape)
    offsets = localOffsets(L)
    rows = u + offsets
    cols = v + offsets
    rows = rows[(rows >= 0) & (rows < height)]
    cols = cols[(cols >= 0) & (cols < width)]
    return (rows[:, None] * width + cols[None, :]).reshape(-1)


def sampleGlobal(i: int, shape: tuple[int, int], G: int) -> NDArray:
    """
    Return the sparse global candidates of node ``i``: the ``G x G`` mesh grid with
    strides ``H // G`` and ``W // G`` that passes through the residue of ``i`` on the
    stride lattice. Points beyond the image (non-divisible sizes) are discarded.

    Parameters
    ----------
    i : int
        The node index.
    shape : tuple[int, int]
        The spatial shape ``(H, W)``.
    G : int
        The grid side.

    Returns
    -------
    NDArray
        Sorted node indices, at most ``G*G`` of them.
    """
    _checkGridSize(G, shape)
    height, width = shape
    u, v = nodeToCoord(i, shape)
    strideH, strideW = gridStrides(shape, G)
    steps = np.arange(G, dtype=np.int64)
    rows = u % strideH + steps * strideH
    cols = v % strideW + steps * strideW
    rows = rows[rows < height]
    cols = cols[cols < width]
    return (rows[:, None] * width + cols[None, :]).reshape(-1)


class CandidateSet:
    """The candidate nodes of one owner node.

    ``local`` and ``globalSet`` are the two sampled parts, ``merged`` is their sorted
    union without duplicates and ``n`` its size.
    """

    def __init__(self, owner: int, local: NDArray, globalSet: NDArray):
        self.owner = int(owner)
        self.local = np.asarray(local, dtype=np.int64)
        self.globalSet = np.asarray(globalSet, dtype=np.int64)
        self.merged = np.union1d(self.local, self.globalSet).astype(np.int64)
        self.n = int(self.merged.size)

    def __repr__(self) -> str:
        return f"CandidateSet(owner={self.owner}, n={self.n})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CandidateSet):
            return False
        return (
            self.owner == other.owner
            and np.array_equal(self.local, other.local)
            and np.array_equal(self.globalSet, other.globalSet)
        )

    def toDict(self) -> dict:
        return {
            "node": self.owner,
            "local": self.local.tolist(),
            "global": self.globalSet.tolist(),
            "merged": self.merged.tolist(),
        }


def buildCandidates(
    i: int, shape: tuple[int, int], L: int, G: int, mode: str = "both"
) -> CandidateSet:
    """
    Build the dual-scale candidate set of a node.

    Parameters
    ----------
    i : int
        The node index.
    shape : tuple[int, int]
        The spatial shape ``(H, W)``.
    L : int
        The local window side. Only validated if the mode uses the local part.
    G : int
        The global grid side. Only validated if the mode uses the global part.
    mode : String
        ``"local-only"``, ``"global-only"`` or ``"both"``.

    Returns
    -------
    CandidateSet : gfagraph.sampling.candidates.CandidateSet
        The candidates of node ``i``.
    """
    _checkMode(mode)
    empty = np.zeros(0, dtype=np.int64)
    local = sampleLocal(i, shape, L) if mode != "global-only" else empty
    globalSet = sampleGlobal(i, shape, G) if mode != "local-only" else empty
    return CandidateSet(i, local, globalSet)


class CandidateTable:
    """The merged candidate lists of all nodes of a feature map.

    Row ``i`` of ``indices`` holds the sorted candidates of node ``i`` followed by ``-1``
    padding; ``counts[i]`` is the number of valid entries ``n_i``. All rows share the
    width ``max_i n_i``.
    """

    def __init__(self, shape: tuple[int, int], indices: NDArray, counts: NDArray):
        self.shape = (int(shape[0]), int(shape[1]))
        self.indices = np.asarray(indices, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.indices.flags.writeable = False
        self.counts.flags.writeable = False

    def __repr__(self) -> str:
        return (
            f"CandidateTable(shape={self.shape}, width={self.getWidth()}, "
            f"total={self.getTotal()})"
        )

    @classmethod
    def fromShape(
        cls, shape: tuple[int, int], L: int, G: int, mode: str = "both"
    ) -> "CandidateTable":
        """
        Build the candidate lists of every node at once. The rows are identical to
        ``buildCandidates(i, shape, L, G, mode).merged``.

        Parameters
        ----------
        shape : tuple[int, int]
            The spatial shape ``(H, W)``.
        L : int
            The local window side.
        G : int
            The global grid side.
        mode : String
            ``"local-only"``, ``"global-only"`` or ``"both"``.

        Returns
        -------
        CandidateTable : gfagraph.sampling.candidates.CandidateTable
            The candidate table.
        """
        _checkMode(mode)
        height, width = shape
        numberNodes = height * width
        nodes = np.arange(numberNodes, dtype=np.int64)
        u = nodes // width
        v = nodes % width
        parts = []

        if mode != "global-only":
            _checkLocalWindow(L, shape)
            offsets = localOffsets(L)
            du = np.repeat(offsets, offsets.size)
            dv = np.tile(offsets, offsets.size)
            rows = u[:, None] + du[None, :]
            cols = v[:, None] + dv[None, :]
            inside = (rows >= 0) & (rows < height) & (cols >= 0) & (cols < width)
            parts.append(np.where(inside, rows * width + cols, numberNodes))

        if mode != "local-only":
            _checkGridSize(G, shape)
            strideH, strideW = gridStrides(shape, G)
            steps = np.arange(G, dtype=np.int64)
            da = np.repeat(steps * strideH, G)
            db = np.tile(steps * strideW, G)
            rows = (u % strideH)[:, None] + da[None, :]
            cols = (v % strideW)[:, None] + db[None, :]
            inside = (rows < height) & (cols < width)
            parts.append(np.where(inside, rows * width + cols, numberNodes))

        # numberNodes marks empty slots and sorts behind every valid index
        merged = np.sort(np.concatenate(parts, axis=1), axis=1)
        duplicate = merged[:, 1:] == merged[:, :-1]
        merged[:, 1:][duplicate] = numberNodes
        merged = np.sort(merged, axis=1)
        counts = np.sum(merged < numberNodes, axis=1)
        merged = merged[:, : int(counts.max())]
        merged[merged == numberNodes] = -1
        logger.debug(
            "candidate table %s mode=%s L=%s G=%s total=%s",
            shape,
            mode,
            L,
            G,
            int(counts.sum()),
        )
        return cls(shape, merged, counts)

    @classmethod
    def fromCandidateSets(
        cls, shape: tuple[int, int], candidateSets: list[CandidateSet]
    ) -> "CandidateTable":
        """Build a table from one ```CandidateSet``` per node, given in node order."""
        numberNodes = shape[0] * shape[1]
        if len(candidateSets) != numberNodes:
            logger.error(
                "%s candidate sets given for %s nodes", len(candidateSets), numberNodes
            )
            raise ConfigurationError(
                f"Expected {numberNodes} candidate sets, got {len(candidateSets)}."
            )
        counts = np.array([c.n for c in candidateSets], dtype=np.int64)
        indices = np.full((numberNodes, int(counts.max())), -1, dtype=np.int64)
        for i, candidates in enumerate(candidateSets):
            if candidates.owner != i:
                logger.error("candidate set %s belongs to node %s", i, candidates.owner)
                raise ConfigurationError(
                    f"Candidate set at position {i} belongs to node {candidates.owner}."
                )
            indices[i, : candidates.n] = candidates.merged
        return cls(shape, indices, counts)

    def getNumberNodes(self) -> int:
        return self.indices.shape[0]

    def getWidth(self) -> int:
        return self.indices.shape[1]

    def getTotal(self) -> int:
        """Return ``sum_i n_i``."""
        return int(self.counts.sum())

    def getRow(self, i: int) -> NDArray:
        """Return the valid candidates of node ``i``."""
        nodeToCoord(i, self.shape)
        return self.indices[i, : self.counts[i]].copy()

    def getValidMask(self) -> NDArray:
        return self.indices >= 0
