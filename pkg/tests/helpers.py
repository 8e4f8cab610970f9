import numpy as np

from fairlattice import Dataset


def make_random_dataset(m, n, seed, with_predictions=False):
    rng = np.random.default_rng(seed)
    attrs = rng.integers(0, 2, size=(n, m), dtype=np.uint8)
    y = rng.integers(0, 2, size=n, dtype=np.uint8)
    pred = rng.integers(0, 2, size=n, dtype=np.uint8) if with_predictions else None
    return Dataset(attrs, y, pred)
