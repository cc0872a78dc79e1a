"""Graph representation, edge-list ingestion, solver input matrices, and the
planted-partition benchmark generator.

Graphs are undirected and weighted. Node ids in input files may be arbitrary
non-negative integers; they are remapped to dense 0-based indices in
first-appearance order, and the remap is reported so callers can restore the
original ids in their output.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ParseError, ValidationError


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph: node count plus a canonical edge list.

    Each edge is stored once as ``(i, j, w)`` with ``i < j`` and ``w > 0``.
    Self-loops are rejected at construction; the matrix builders derive any
    diagonal they need from node strengths instead.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"node count must be positive, got {self.n}")
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise ValidationError(f"self-loop on node {i} is not allowed")
            if not w > 0:
                raise ValidationError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"duplicate edge for pair {key}")
            seen.add(key)
        object.__setattr__(
            self,
            "edges",
            tuple((min(i, j), max(i, j), float(w)) for i, j, w in self.edges),
        )

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def strengths(self) -> np.ndarray:
        """Weighted degree of every node."""
        s = np.zeros(self.n)
        for i, j, w in self.edges:
            s[i] += w
            s[j] += w
        return s

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix with a zero diagonal."""
        a = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            a[i, j] = a[j, i] = w
        return a


@dataclass(frozen=True)
class InteractionMatrix:
    """Dense symmetric non-negative matrix fed to the factorization solver."""

    v: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.v, dtype=np.float64))
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError(f"interaction matrix must be square, got {v.shape}")
        if not np.allclose(v, v.T):
            raise ValidationError("interaction matrix must be symmetric")
        if np.any(v < 0):
            raise ValidationError("interaction matrix entries must be non-negative")
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class PlantedPartition:
    """Ground-truth community labels for a generated or ingested graph."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValidationError("labels must be a non-empty vector")
        if labels.min() < 0:
            raise ValidationError("labels must be non-negative")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1


@dataclass(frozen=True)
class NgParams:
    """Planted-partition generator parameters.

    ``k_mean`` is the expected total degree of a node and ``k_out`` the
    expected number of its inter-community edges. Communities are ``c``
    equal blocks of ``n // c`` consecutive nodes.
    """

    n: int = 128
    c: int = 4
    k_mean: float = 16.0
    k_out: float = 0.0

    def __post_init__(self):
        if self.n < 2 or self.c < 1 or self.n % self.c != 0:
            raise ParameterError(
                f"n={self.n} must be a positive multiple of c={self.c}"
            )
        if self.n // self.c < 2:
            raise ParameterError("communities need at least 2 nodes each")
        if not 0 <= self.k_out <= self.k_mean:
            raise ParameterError(
                f"k_out={self.k_out} must lie in [0, k_mean={self.k_mean}]"
            )
        if self.c == 1 and self.k_out > 0:
            raise ParameterError("k_out must be 0 when there is a single community")
        p_in, p_out = self.edge_probabilities()
        if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
            raise ParameterError(
                f"derived probabilities p_in={p_in:.4f}, p_out={p_out:.4f} "
                "fall outside [0, 1]"
            )

    def edge_probabilities(self) -> tuple[float, float]:
        size = self.n // self.c
        p_in = (self.k_mean - self.k_out) / (size - 1)
        p_out = self.k_out / (self.n - size) if self.n > size else 0.0
        return p_in, p_out


@dataclass
class LoadReport:
    """What an edge-list load did beyond producing the Graph."""

    id_map: dict[int, int] = field(default_factory=dict)
    merged_duplicates: int = 0

    @property
    def has_warnings(self) -> bool:
        return self.merged_duplicates > 0

    def original_ids(self) -> list[int]:
        """Original node ids ordered by internal index."""
        inverse = {dense: orig for orig, dense in self.id_map.items()}
        return [inverse[i] for i in range(len(inverse))]


def _as_lines(source) -> list[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return source.splitlines()
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return data.splitlines()
    raise TypeError(f"unsupported source type {type(source)!r}")


def load_edge_list(source) -> tuple[Graph, LoadReport]:
    """Parse edge-list text into a Graph plus a load report.

    Parameters
    ----------
    source : str, bytes, or file-like
        Line-oriented text. Each non-comment line is ``i j`` or ``i j w``
        with whitespace separation; ``#``-prefixed lines are comments.
        Missing weights default to 1. Node ids are arbitrary non-negative
        integers, remapped to dense 0-based indices in first-appearance
        order.

    Returns
    -------
    (Graph, LoadReport)
        Duplicate unordered pairs are merged by summing weights; the report
        carries the id remap and the merged-duplicate count.

    Raises
    ------
    ParseError
        Wrong token count or a non-integer/non-numeric token.
    ValidationError
        Zero or negative weight, self-loop, or no nodes at all.
    """
    id_map: dict[int, int] = {}
    weights: dict[tuple[int, int], float] = {}
    merged = 0

    for lineno, raw in enumerate(_as_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(
                f"expected 'i j' or 'i j w', got {len(tokens)} tokens", line=lineno
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {tokens[:2]}", line=lineno)
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {tokens[:2]}", line=lineno)
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise ParseError(f"non-numeric weight {tokens[2]!r}", line=lineno)
        else:
            w = 1.0
        if not np.isfinite(w) or w <= 0:
            raise ValidationError(f"line {lineno}: weight must be positive, got {w}")
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop on node {u}")

        for node in (u, v):
            if node not in id_map:
                id_map[node] = len(id_map)
        key = (min(id_map[u], id_map[v]), max(id_map[u], id_map[v]))
        if key in weights:
            weights[key] += w
            merged += 1
        else:
            weights[key] = w

    if not id_map:
        raise ValidationError("edge list contains no edges")
    graph = Graph(
        n=len(id_map),
        edges=tuple((i, j, w) for (i, j), w in weights.items()),
    )
    return graph, LoadReport(id_map=id_map, merged_duplicates=merged)


def to_edge_list_text(graph: Graph) -> str:
    """Serialize a Graph back to edge-list text (internal 0-based ids)."""
    lines = [f"{i} {j} {w!r}" for i, j, w in graph.edges]
    return "\n".join(lines) + "\n"


def parse_partition_pairs(source) -> dict[int, int]:
    """Parse ``node_id community_id`` lines into a node -> community map.

    Ids stay as written (no remapping); duplicate node assignments are
    rejected. Shared by :func:`load_partition` and callers that compare
    partitions over arbitrary id universes.
    """
    assignments: dict[int, int] = {}
    for lineno, raw in enumerate(_as_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(
                f"expected 'node_id community_id', got {len(tokens)} tokens",
                line=lineno,
            )
        try:
            node, comm = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer token in {tokens}", line=lineno)
        if node < 0 or comm < 0:
            raise ParseError(f"negative id in {tokens}", line=lineno)
        if node in assignments:
            raise ValidationError(f"line {lineno}: duplicate assignment for node {node}")
        assignments[node] = comm
    return assignments


def load_partition(
    source, id_map: dict[int, int] | None = None, n: int | None = None
) -> PlantedPartition:
    """Parse ``node_id community_id`` lines into a PlantedPartition.

    When ``id_map`` (from a prior :func:`load_edge_list`) is given, node ids
    are translated through it and every mapped node must appear exactly once.
    Without it, ids must already be dense 0-based; ``n`` (when given) pins
    the expected node count. Community ids may be arbitrary non-negative
    integers and are renumbered densely in first-appearance order.
    """
    raw = parse_partition_pairs(source)

    assignments: dict[int, int] = {}
    community_map: dict[int, int] = {}
    for node, comm in raw.items():
        if id_map is not None:
            if node not in id_map:
                raise ValidationError(f"node {node} does not appear in the graph")
            node = id_map[node]
        if node in assignments:
            raise ValidationError(f"duplicate assignment for graph node {node}")
        if comm not in community_map:
            community_map[comm] = len(community_map)
        assignments[node] = community_map[comm]

    expected = n if n is not None else (len(id_map) if id_map is not None else None)
    if expected is None:
        expected = (max(assignments) + 1) if assignments else 0
    missing = [i for i in range(expected) if i not in assignments]
    if missing:
        raise ValidationError(f"missing assignment for node(s) {missing[:5]}")
    if len(assignments) != expected:
        extra = sorted(set(assignments) - set(range(expected)))
        raise ValidationError(f"assignment for unknown node(s) {extra[:5]}")
    labels = np.array([assignments[i] for i in range(expected)], dtype=np.int64)
    return PlantedPartition(labels=labels)


def build_interaction_matrix(graph: Graph) -> InteractionMatrix:
    """Symmetric weight matrix with each node's strength on the diagonal."""
    v = graph.adjacency()
    np.fill_diagonal(v, graph.strengths())
    return InteractionMatrix(v=v)


def build_adjacency_matrix(graph: Graph) -> InteractionMatrix:
    """Symmetric weight matrix with a zero diagonal.

    This is the default solver input for detection and benchmarking: a
    dominant strength diagonal rewards splitting dense groups into extra
    components, biasing runs toward more, smaller communities (see
    :func:`build_interaction_matrix` for that variant).
    """
    return InteractionMatrix(v=graph.adjacency())


def solver_input(graph: Graph, diagonal: str = "zero") -> InteractionMatrix:
    """Build the solver input matrix; ``diagonal`` is ``zero`` or ``strength``."""
    if diagonal == "zero":
        return build_adjacency_matrix(graph)
    if diagonal == "strength":
        return build_interaction_matrix(graph)
    raise ParameterError(f"diagonal must be 'zero' or 'strength', got {diagonal!r}")


def generate_ng_graph(
    params: NgParams, seed
) -> tuple[Graph, PlantedPartition]:
    """Generate one planted-partition realization.

    Every intra-community pair is an edge independently with probability
    ``(k_mean - k_out) / (block - 1)`` and every inter-community pair with
    ``k_out / (n - block)``; all weights are 1. Realizations condition on
    expected degree only, and are bit-identical for a fixed seed.
    """
    p_in, p_out = params.edge_probabilities()
    size = params.n // params.c
    labels = np.repeat(np.arange(params.c, dtype=np.int64), size)

    rng = np.random.default_rng(seed)
    u = rng.random((params.n, params.n))
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    upper = np.triu(u < prob, k=1)
    ii, jj = np.nonzero(upper)
    edges = tuple((int(i), int(j), 1.0) for i, j in zip(ii, jj))
    return Graph(n=params.n, edges=edges), PlantedPartition(labels=labels)
