import math
import random

import numpy as np
import pytest

from patchtriage.errors import LengthMismatch
from patchtriage.metrics import clustering_accuracy, contingency_table, nmi

from oracles import accuracy_oracle, nmi_oracle, random_label_pair


def test_contingency_table_small():
    a = [0, 0, 1, 1, 2]
    b = [1, 1, 0, 1, 0]
    table = contingency_table(a, b)
    assert table.tolist() == [[0, 2], [1, 1], [1, 0]]
    assert table.sum() == len(a)


def test_contingency_table_uses_sorted_uniques():
    table = contingency_table([5, 3, 5], [10, 10, 20])
    # rows: 3, 5  cols: 10, 20
    assert table.tolist() == [[1, 0], [1, 1]]


def test_accuracy_fixed_mapping():
    clusters = [0, 0, 1, 1]
    labels = [7, 7, 9, 8]
    assert clustering_accuracy(clusters, labels, mapping={0: 7, 1: 9}) == 0.75
    assert clustering_accuracy(clusters, labels, mapping={0: 8, 1: 8}) == 0.25


def test_accuracy_fixed_mapping_unmapped_cluster_never_agrees():
    assert clustering_accuracy([0, 1], [0, 1], mapping={0: 0}) == 0.5


def test_accuracy_optimal_finds_permutation():
    clusters = [0, 0, 1, 1, 2, 2]
    labels = [2, 2, 0, 0, 1, 1]
    assert clustering_accuracy(clusters, labels) == 1.0


def test_accuracy_optimal_at_least_fixed():
    rng = random.Random(3)
    for _ in range(20):
        clusters, labels = random_label_pair(rng)
        identity = {c: c for c in set(clusters)}
        assert clustering_accuracy(clusters, labels) >= clustering_accuracy(
            clusters, labels, mapping=identity
        )


def test_accuracy_matches_exhaustive_oracle():
    rng = random.Random(17)
    for _ in range(25):
        clusters, labels = random_label_pair(rng)
        got = clustering_accuracy(clusters, labels)
        want = accuracy_oracle(clusters, labels)
        assert math.isclose(got, want, abs_tol=1e-12), (clusters, labels)


def test_accuracy_rejects_bad_shapes():
    with pytest.raises(LengthMismatch):
        clustering_accuracy([0, 1], [0])
    with pytest.raises(LengthMismatch):
        clustering_accuracy([], [])
    with pytest.raises(LengthMismatch):
        clustering_accuracy(np.zeros((2, 2)), np.zeros((2, 2)))


def test_nmi_perfect_agreement():
    assert nmi([0, 1, 2, 0], [0, 1, 2, 0]) == pytest.approx(1.0)


def test_nmi_relabel_invariance_exact_case():
    assert nmi([0, 0, 1, 1], [5, 5, 3, 3]) == pytest.approx(1.0)


def test_nmi_constant_edge_cases():
    assert nmi([1, 1, 1], [1, 1, 1]) == 1.0
    assert nmi([2, 2, 2], [7, 7, 7]) == 1.0  # both constant, only one possible agreement
    assert nmi([1, 1, 1], [0, 1, 2]) == 0.0
    assert nmi([0, 1, 2], [4, 4, 4]) == 0.0


def test_nmi_symmetry():
    rng = random.Random(23)
    for _ in range(20):
        a, b = random_label_pair(rng)
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)


def test_nmi_relabel_invariance_random():
    rng = random.Random(29)
    for _ in range(20):
        a, b = random_label_pair(rng)
        shuffled = {v: i + 100 for i, v in enumerate(sorted(set(a)))}
        assert nmi([shuffled[v] for v in a], b) == pytest.approx(nmi(a, b), abs=1e-12)


def test_nmi_matches_entropy_oracle():
    rng = random.Random(31)
    for _ in range(30):
        a, b = random_label_pair(rng)
        assert nmi(a, b) == pytest.approx(nmi_oracle(a, b), abs=1e-9)


def test_nmi_bounded():
    rng = random.Random(37)
    for _ in range(30):
        a, b = random_label_pair(rng)
        assert 0.0 <= nmi(a, b) <= 1.0


def test_nmi_rejects_bad_shapes():
    with pytest.raises(LengthMismatch):
        nmi([0, 1], [0, 1, 2])
    with pytest.raises(LengthMismatch):
        nmi([], [])
