"""Constructed datasets shared by unit and acceptance tests."""

from imbaleval.metrics_core import ScoredDataset

N_NEG = 10_000
N_POS = 100


def inversion_pair():
    """Two classifiers on 100 positives / 10,000 negatives (imbalance 1:100).

    Negatives score uniformly on [0, 1). Classifier A ranks every positive
    between the 50th and 99th negative percentile: good overall, useless at
    FPR below 1e-3. Classifier B puts 20 positives above all negatives and the
    other 80 near the bottom: poor overall, best in the low-FPR region.
    """
    neg = [i / N_NEG for i in range(N_NEG)]
    pos_a = [0.5 + 0.49 * (j + 0.5) / N_POS for j in range(N_POS)]
    pos_b = [2.0] * 20 + [0.1 + 0.0005 * j for j in range(80)]
    labels = [True] * N_POS + [False] * N_NEG
    return (
        ScoredDataset.from_arrays(pos_a + neg, labels),
        ScoredDataset.from_arrays(pos_b + neg, labels),
    )
