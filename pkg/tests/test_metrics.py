import numpy as np
import pytest

from nmfcomm.errors import UndefinedMetricError, ValidationError
from nmfcomm.graph import Graph
from nmfcomm.membership import UNASSIGNED
from nmfcomm.metrics import HardPartition, modularity, nmi

from conftest import random_graph


def modularity_oracle(graph: Graph, labels) -> float:
    """Direct double-sum over ordered node pairs, independent of the
    per-community implementation."""
    a = graph.adjacency()
    s = graph.strengths()
    two_m = float(a.sum())
    q = 0.0
    for i in range(graph.n):
        for j in range(graph.n):
            if labels[i] == labels[j]:
                q += a[i, j] - s[i] * s[j] / two_m
    return q / two_m


def random_partition(rng, n, c):
    labels = rng.integers(0, c, size=n)
    return HardPartition.from_labels(labels)


class TestHardPartition:
    def test_requires_dense_labels(self):
        with pytest.raises(ValidationError):
            HardPartition(labels=np.array([0, 2]))

    def test_from_labels_densifies(self):
        p = HardPartition.from_labels([5, 5, 9, 5])
        assert p.labels.tolist() == [0, 0, 1, 0]

    def test_sentinels_become_singletons(self):
        p = HardPartition.from_labels([UNASSIGNED, 3, UNASSIGNED, 3])
        assert p.labels.tolist() == [0, 1, 2, 1]
        assert p.n_communities == 3


class TestModularity:
    def test_single_community_is_zero(self, bridged_cliques):
        p = HardPartition.from_labels([0] * 6)
        assert modularity(bridged_cliques, p) == pytest.approx(0.0, abs=1e-15)

    def test_bridged_cliques_exact_value(self, bridged_cliques):
        p = HardPartition.from_labels([0, 0, 0, 1, 1, 1])
        q = modularity(bridged_cliques, p)
        assert q == pytest.approx(5.0 / 14.0, abs=1e-13)

    def test_all_singletons_negative(self):
        g = Graph(n=4, edges=((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)))
        p = HardPartition.from_labels(list(range(4)))
        s = g.strengths()
        expected = -float(np.sum((s / (2 * g.total_weight)) ** 2))
        assert modularity(g, p) == pytest.approx(expected, rel=1e-12)

    def test_matches_direct_summation_oracle(self):
        rng = np.random.default_rng(17)
        for trial in range(15):
            g = random_graph(rng, int(rng.integers(3, 16)))
            p = random_partition(rng, g.n, int(rng.integers(1, 5)))
            assert modularity(g, p) == pytest.approx(
                modularity_oracle(g, p.labels), abs=1e-12
            )

    def test_invariant_under_weight_scaling(self):
        rng = np.random.default_rng(18)
        g = random_graph(rng, 10)
        scaled = Graph(n=g.n, edges=tuple((i, j, 3.7 * w) for i, j, w in g.edges))
        p = random_partition(rng, g.n, 3)
        assert modularity(g, p) == pytest.approx(modularity(scaled, p), rel=1e-12)

    def test_two_disconnected_equal_communities_is_half(self, two_cliques):
        p = HardPartition.from_labels([0, 0, 0, 1, 1, 1])
        assert modularity(two_cliques, p) == pytest.approx(0.5, abs=1e-14)

    def test_edgeless_graph_undefined(self):
        g = Graph(n=3, edges=())
        with pytest.raises(UndefinedMetricError):
            modularity(g, HardPartition.from_labels([0, 0, 0]))

    def test_length_mismatch(self, two_cliques):
        with pytest.raises(ValidationError):
            modularity(two_cliques, HardPartition.from_labels([0, 0]))


class TestNmi:
    def test_identical_partitions(self):
        rng = np.random.default_rng(19)
        for trial in range(10):
            p = random_partition(rng, int(rng.integers(2, 40)), int(rng.integers(1, 6)))
            assert nmi(p, p) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_confusion_is_zero(self):
        pa = HardPartition.from_labels([0, 0, 1, 1])
        pb = HardPartition.from_labels([0, 1, 0, 1])
        assert nmi(pa, pb) == pytest.approx(0.0, abs=1e-15)

    def test_relabeling_invariance(self):
        pa = HardPartition.from_labels([0, 0, 1, 1])
        pb = HardPartition.from_labels([1, 1, 0, 0])
        assert nmi(pa, pb) == pytest.approx(1.0, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(20)
        for trial in range(30):
            n = int(rng.integers(2, 30))
            pa = random_partition(rng, n, int(rng.integers(1, 5)))
            pb = random_partition(rng, n, int(rng.integers(1, 5)))
            assert nmi(pa, pb) == pytest.approx(nmi(pb, pa), abs=1e-13)

    def test_permutation_of_community_ids(self):
        rng = np.random.default_rng(21)
        for trial in range(20):
            n = int(rng.integers(4, 30))
            pa = random_partition(rng, n, 4)
            pb = random_partition(rng, n, 4)
            relabel = rng.permutation(pb.n_communities)
            pb2 = HardPartition.from_labels(relabel[pb.labels])
            assert nmi(pa, pb2) == pytest.approx(nmi(pa, pb), abs=1e-13)

    def test_single_community_vs_split_is_zero(self):
        pa = HardPartition.from_labels([0, 0, 0, 0])
        pb = HardPartition.from_labels([0, 1, 0, 1])
        assert nmi(pa, pb) == 0.0

    def test_both_single_community_is_one(self):
        pa = HardPartition.from_labels([0, 0, 0])
        assert nmi(pa, pa) == 1.0

    def test_range_zero_one(self):
        rng = np.random.default_rng(22)
        for trial in range(30):
            n = int(rng.integers(2, 25))
            pa = random_partition(rng, n, int(rng.integers(1, 6)))
            pb = random_partition(rng, n, int(rng.integers(1, 6)))
            val = nmi(pa, pb)
            assert -1e-12 <= val <= 1.0 + 1e-12

    def test_length_mismatch(self):
        pa = HardPartition.from_labels([0, 0])
        pb = HardPartition.from_labels([0, 0, 1])
        with pytest.raises(ValidationError):
            nmi(pa, pb)
