"""Small reference instances for the threshold optimisers."""

import numpy as np

# Cumulative true rejects per threshold index for the three-cell example;
# every cell ends with the +inf sentinel.
TABLE_TRUE_REJECTS = ([3, 4, 6, 9], [2, 3, 6], [1, 2, 10, 20])

# Greedy (false, true) trace on that example.
TABLE_GREEDY_TRACE = [(0, 6), (2, 15), (3, 25), (5, 29), (6, 30), (7, 32), (8, 35)]


def table_instance():
    """Certainty values, correctness and cells realising ``TABLE_TRUE_REJECTS``."""
    scores, correct, cells = [], [], []
    for j, cumulative in enumerate(TABLE_TRUE_REJECTS):
        pattern = []
        before = 0
        for k, total in enumerate(cumulative):
            pattern += [False] * (total - before)
            before = total
            if k < len(cumulative) - 1:
                pattern.append(True)
        # the last threshold is the sentinel, so the cell must end with an error
        assert not pattern[-1]
        m = len(pattern)
        scores += [(i + 1) / (m + 1) for i in range(m)]
        correct += pattern
        cells += [j] * m
    return np.array(scores), np.array(correct), np.array(cells)


def random_instance(rng: np.random.Generator, n_points: int, n_cells: int, error_rate: float | None = None):
    """Random certainty values in [0, 1), correctness flags and cell indices."""
    if error_rate is None:
        error_rate = rng.uniform(0.1, 0.6)
    scores = rng.random(n_points)
    correct = rng.random(n_points) >= error_rate
    cells = rng.integers(0, n_cells, size=n_points)
    return scores, correct, cells
