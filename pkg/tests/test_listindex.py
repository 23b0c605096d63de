import numpy as np
import pytest

from dpcidx import Dataset
from dpcidx.dataset import GeneratorSpec, generate
from dpcidx.errors import UsageError
from dpcidx.listindex import (
    build_list_index,
    list_delta,
    list_delta_all,
    list_rho,
    list_rho_all,
)
from dpcidx.oracle import oracle_delta, oracle_rho
from dpcidx.profile import NO_MU

from conftest import random_dataset, random_dc


def test_t5_list_of_p0(t5):
    nl = build_list_index(t5)
    ids, dists = nl.row(0)
    assert ids.tolist() == [1, 2, 3, 4]
    assert dists.tolist() == [1.0, 2.0, 10.0, 11.0]


def test_two_point_dataset_lists():
    nl = build_list_index(Dataset(np.array([[0.0, 0.0], [5.0, 0.0]])))
    assert nl.ids.tolist() == [[1], [0]]
    assert nl.dists.tolist() == [[5.0], [5.0]]


def test_duplicates_sort_first_by_id():
    ds = Dataset(np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [9.0, 0.0]]))
    nl = build_list_index(ds)
    ids, dists = nl.row(2)
    assert ids.tolist() == [0, 1, 3]
    assert dists.tolist() == [0.0, 0.0, 9.0]


def test_list_lengths_and_sortedness():
    rng = np.random.default_rng(5)
    ds = random_dataset(rng, n=64)
    nl = build_list_index(ds)
    assert nl.ids.shape == (64, 63)
    for p in range(ds.n):
        row = nl.dists[p]
        assert np.all(np.diff(row) >= 0)
        assert p not in set(nl.ids[p].tolist())


def test_t5_rho_binary_search(t5):
    nl = build_list_index(t5)
    assert list_rho(nl, 0, 1.5) == 1


def test_rho_empty_prefix(t5):
    nl = build_list_index(t5)
    assert list_rho(nl, 0, 0.5) == 0


def test_rho_full_list(t5):
    nl = build_list_index(t5)
    assert list_rho(nl, 0, 1e9) == 4


def test_rho_strict_at_stored_distance(t5):
    nl = build_list_index(t5)
    # entry at exactly 2.0 is excluded by the strict comparison
    assert list_rho(nl, 0, 2.0) == 1


def test_rho_rejects_nonpositive_dc(t5):
    nl = build_list_index(t5)
    with pytest.raises(UsageError):
        list_rho(nl, 0, 0.0)


def test_t5_delta_scan_passes_lower_order(t5):
    nl = build_list_index(t5)
    rho = oracle_rho(t5, 1.5)
    assert list_delta(nl, 3, rho) == (8.0, 2)


def test_t5_delta_global_peak(t5):
    nl = build_list_index(t5)
    rho = oracle_rho(t5, 1.5)
    assert list_delta(nl, 1, rho) == (10.0, None)


def test_t5_delta_first_entry_hit(t5):
    nl = build_list_index(t5)
    rho = oracle_rho(t5, 1.5)
    assert list_delta(nl, 0, rho) == (1.0, 1)


def test_oracle_equivalence_random():
    rng = np.random.default_rng(21)
    for _ in range(25):
        ds = random_dataset(rng)
        dc = random_dc(rng, ds)
        nl = build_list_index(ds)
        rho = list_rho_all(nl, dc)
        assert np.array_equal(rho, oracle_rho(ds, dc))
        delta, mu = list_delta_all(nl, rho)
        odelta, omu = oracle_delta(ds, rho)
        assert np.array_equal(delta, odelta)
        assert np.array_equal(mu, omu)


def test_duplicate_rho_datasets_terminate():
    # all points pairwise equidistant-ish grid with equal rho: scan must
    # stop via the id tie-break rather than running off the list
    ds = Dataset(np.array([[0.0, 0], [1, 0], [0, 1], [1, 1]]))
    nl = build_list_index(ds)
    rho = oracle_rho(ds, 1.5)
    assert len(set(rho.tolist())) == 1
    delta, mu = list_delta_all(nl, rho)
    assert mu[0] == NO_MU
    assert np.all(mu[1:] >= 0)


def test_mean_scan_length_bounded_on_blobs():
    # expected near-to-far scan work stays tiny on clustered data
    n = 5000
    ds, _ = generate(GeneratorSpec(kind="blobs", n=n, d=2, k=5, seed=3))
    nl = build_list_index(ds)
    dc = 1.0
    rho = list_rho_all(nl, dc)
    delta, mu, scans = list_delta_all(nl, rho, return_scans=True)
    non_peak = mu != NO_MU
    mean_scan = scans[non_peak].mean()
    assert mean_scan < 0.05 * n, f"mean scan {mean_scan} too long"
