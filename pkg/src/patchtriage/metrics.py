"""Agreement metrics between two labelings of the same points."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LengthMismatch


def _check_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"labelings differ in shape: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise LengthMismatch("need at least one point")
    return a, b


def contingency_table(a, b) -> np.ndarray:
    """Joint count matrix; rows follow sorted unique values of a, columns of b."""
    a, b = _check_pair(a, b)
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def clustering_accuracy(predicted_clusters, true_labels, mapping: dict | None = None) -> float:
    """Fraction of points whose cluster maps onto their label.

    Without ``mapping``, the score is maximized over all injective mappings
    from cluster ids to label values (optimal one-to-one alignment via the
    Hungarian method). With a fixed ``mapping`` (cluster id -> label value),
    the score is plain agreement: how often mapping[cluster] equals the label.
    """
    predicted, labels = _check_pair(predicted_clusters, true_labels)
    n = predicted.size
    if mapping is not None:
        mapped = np.array([mapping.get(int(c)) for c in predicted], dtype=object)
        return float(np.sum(mapped == labels)) / n
    table = contingency_table(predicted, labels)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum()) / n


def nmi(labels_a, labels_b) -> float:
    """Normalized mutual information with arithmetic-mean normalization.

    2*I(A;B) / (H(A)+H(B)) with natural-log entropies. Both labelings
    constant: 1.0 (they agree perfectly in the only possible way). Exactly
    one constant: 0.0.
    """
    a, b = _check_pair(labels_a, labels_b)
    table = contingency_table(a, b).astype(float)
    n = table.sum()
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    ha = float(-np.sum(pa[pa > 0] * np.log(pa[pa > 0])))
    hb = float(-np.sum(pb[pb > 0] * np.log(pb[pb > 0])))
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    pij = table / n
    outer = np.outer(pa, pb)
    nz = pij > 0
    mutual = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    value = 2.0 * mutual / (ha + hb)
    # guard against float dust just outside [0, 1]
    return min(1.0, max(0.0, value))
