import numpy as np
import pytest

from dpcidx import Dataset
from dpcidx.dataset import GeneratorSpec, generate

# canonical 5-point line used across the golden tests:
# p0=(0,0) p1=(1,0) p2=(2,0) p3=(10,0) p4=(11,0)
T5_POINTS = np.array([[0, 0], [1, 0], [2, 0], [10, 0], [11, 0]], dtype=np.float64)


@pytest.fixture
def t5() -> Dataset:
    return Dataset(T5_POINTS)


@pytest.fixture
def blob_ds():
    def make(n=500, k=3, d=2, seed=0, spread=1.0):
        ds, labels = generate(
            GeneratorSpec(kind="blobs", n=n, d=d, k=k, seed=seed, spread=spread)
        )
        return ds, labels

    return make


def random_dataset(rng, n=None, d=None, kind=None):
    n = n or int(rng.integers(2, 300))
    d = d or int(rng.choice([2, 3]))
    kind = kind or str(rng.choice(["blobs", "uniform"]))
    ds, _ = generate(
        GeneratorSpec(kind=kind, n=n, d=d, k=int(rng.integers(1, 5)),
                      seed=int(rng.integers(2**31)))
    )
    return ds


def random_dc(rng, ds) -> float:
    """Cutoffs from far below the minimum spacing to above the diameter."""
    diag = max(ds.diameter_bound(), 1e-12)
    u = rng.random()
    if u < 0.15:
        return diag * 1e-8
    if u < 0.3:
        return diag * 1.25
    return float(diag * 10 ** rng.uniform(-3.5, 0.0))


def enumerate_pair_counts(labels_c, labels_g):
    """O(n^2) pair enumeration; the independent check for pair_confusion."""
    labels_c = np.asarray(labels_c)
    labels_g = np.asarray(labels_g)
    n = labels_c.shape[0]
    tp = fp = fn = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_c = labels_c[i] == labels_c[j] and labels_c[i] != -1
            same_g = labels_g[i] == labels_g[j] and labels_g[i] != -1
            if same_c and same_g:
                tp += 1
            elif same_c:
                fp += 1
            elif same_g:
                fn += 1
    return tp, fp, fn
