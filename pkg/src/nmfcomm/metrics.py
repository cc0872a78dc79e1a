"""Partition quality metrics: weighted modularity and normalized mutual
information between hard partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedMetricError, ValidationError
from .graph import Graph
from .membership import UNASSIGNED


@dataclass(frozen=True)
class HardPartition:
    """Dense 0-based community labels with every id used at least once."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValidationError("labels must be a non-empty vector")
        if labels.min() < 0:
            raise ValidationError("labels must be non-negative (map sentinels first)")
        used = np.unique(labels)
        if used.size != labels.max() + 1:
            raise ValidationError("labels must be dense: every id in 0..C-1 used")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1

    @classmethod
    def from_labels(cls, labels, sentinel: int = UNASSIGNED) -> "HardPartition":
        """Build from an arbitrary label vector.

        Sentinel entries become fresh singleton communities; all ids are then
        renumbered densely in first-appearance order.
        """
        labels = np.asarray(labels, dtype=np.int64)
        out = np.empty_like(labels)
        mapping: dict[int, int] = {}
        nxt = 0
        for idx, lab in enumerate(labels.tolist()):
            if lab == sentinel:
                out[idx] = nxt  # singleton, never reused
                nxt += 1
            else:
                if lab not in mapping:
                    mapping[lab] = nxt
                    nxt += 1
                out[idx] = mapping[lab]
        return cls(labels=out)


def modularity(graph: Graph, partition: HardPartition) -> float:
    """Weighted modularity of a hard partition.

    Sum over communities of (intra-community weight / total weight) minus
    (community strength / twice total weight) squared. Requires at least
    one edge.
    """
    if partition.n != graph.n:
        raise ValidationError(
            f"partition covers {partition.n} nodes, graph has {graph.n}"
        )
    if not graph.edges:
        raise UndefinedMetricError("modularity is undefined for an edgeless graph")

    labels = partition.labels
    c = partition.n_communities
    m = graph.total_weight
    intra = np.zeros(c)
    for i, j, w in graph.edges:
        if labels[i] == labels[j]:
            intra[labels[i]] += w
    strength = graph.strengths()
    d = np.zeros(c)
    np.add.at(d, labels, strength)
    return float(np.sum(intra / m - (d / (2.0 * m)) ** 2))


def nmi(pa: HardPartition, pb: HardPartition) -> float:
    """Normalized mutual information via the confusion-matrix form.

    Natural logarithms (the ratio cancels the base); 0*log(0) = 0. Two
    identical single-community partitions score 1; if the entropy
    denominator vanishes otherwise, the score is 0.
    """
    if pa.n != pb.n:
        raise ValidationError(f"partition lengths differ: {pa.n} vs {pb.n}")
    n = pa.n
    ca, cb = pa.n_communities, pb.n_communities
    conf = np.zeros((ca, cb))
    np.add.at(conf, (pa.labels, pb.labels), 1.0)
    ni = conf.sum(axis=1)
    nj = conf.sum(axis=0)

    pos = conf > 0
    numer = -2.0 * float(
        np.sum(conf[pos] * np.log(conf[pos] * n / np.outer(ni, nj)[pos]))
    )
    denom = float(np.sum(ni * np.log(ni / n)) + np.sum(nj * np.log(nj / n)))
    if denom == 0.0:
        # both partitions put everything in one community
        return 1.0 if ca == cb == 1 else 0.0
    return numer / denom
