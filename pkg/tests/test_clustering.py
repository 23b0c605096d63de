import numpy as np
import pytest

from dpcidx import Dataset
from dpcidx.clustering import (
    UNASSIGNED,
    CenterSelection,
    Clustering,
    assign,
    flag_outliers,
    select_centers,
)
from dpcidx.errors import UsageError
from dpcidx.oracle import oracle_profile
from dpcidx.rnlist import approx_profile, build_rn_list

from conftest import random_dataset, random_dc


@pytest.fixture
def t5_profile(t5):
    return oracle_profile(t5, 1.5)


def test_topk_gamma_golden(t5_profile):
    centers = select_centers(t5_profile, CenterSelection(mode="topk", k=2))
    assert centers.tolist() == [1, 3]  # gamma = [1, 20, 1, 8, 1]


def test_threshold_selection(t5_profile):
    sel = CenterSelection(mode="threshold", rho_min=2, delta_min=5)
    assert select_centers(t5_profile, sel).tolist() == [1]


def test_explicit_echo(t5_profile):
    sel = CenterSelection(mode="explicit", ids=(0,))
    assert select_centers(t5_profile, sel).tolist() == [0]


def test_explicit_rejects_unknown_id(t5_profile):
    with pytest.raises(UsageError):
        select_centers(t5_profile, CenterSelection(mode="explicit", ids=(99,)))


def test_empty_selection_is_error(t5_profile):
    sel = CenterSelection(mode="threshold", rho_min=100, delta_min=100)
    with pytest.raises(UsageError, match="no centers"):
        select_centers(t5_profile, sel)


def test_topk_larger_than_n_is_error(t5_profile):
    with pytest.raises(UsageError):
        select_centers(t5_profile, CenterSelection(mode="topk", k=6))


def test_unresolved_delta_counts_as_infinite(t5):
    rn = build_rn_list(t5, tau=3.0)
    prof = approx_profile(rn, dc=1.5)  # p1 and p3 unresolved
    sel = CenterSelection(mode="threshold", rho_min=0, delta_min=1e12)
    assert select_centers(prof, sel).tolist() == [1, 3]


def test_assign_t5_two_clusters(t5_profile):
    clustering = assign(t5_profile, [1, 3])
    labels = clustering.labels
    assert labels[0] == labels[1] == labels[2]
    assert labels[3] == labels[4]
    assert labels[0] != labels[3]
    assert clustering.unassigned_ids().size == 0


def test_assign_all_centers(t5_profile):
    clustering = assign(t5_profile, [0, 1, 2, 3, 4])
    assert sorted(clustering.labels.tolist()) == [0, 1, 2, 3, 4]


def test_assign_single_center_peak(t5_profile):
    clustering = assign(t5_profile, [1])
    assert np.all(clustering.labels == 0)


def test_assign_unresolved_chain_becomes_unassigned(t5):
    rn = build_rn_list(t5, tau=3.0)
    prof = approx_profile(rn, dc=1.5)  # p3 unresolved, p4 hangs off p3
    clustering = assign(prof, [1])
    assert set(clustering.unassigned_ids().tolist()) == {3, 4}
    assert clustering.labels[0] == clustering.labels[2] == 0


def test_flag_outliers_golden(t5_profile):
    flags = flag_outliers(t5_profile, rho_max=1, delta_min=7)
    assert np.nonzero(flags)[0].tolist() == [3]


def test_flag_outliers_none_above_max_delta(t5_profile):
    assert not flag_outliers(t5_profile, 5, 1e9).any()


def test_flag_outliers_rho_max_n(t5_profile):
    flags = flag_outliers(t5_profile, rho_max=5, delta_min=8.0)
    assert np.nonzero(flags)[0].tolist() == [1, 3]


def test_mu_chains_terminate_and_labels_consistent():
    rng = np.random.default_rng(71)
    for _ in range(10):
        ds = random_dataset(rng, n=int(rng.integers(5, 200)))
        prof = oracle_profile(ds, random_dc(rng, ds))
        k = int(rng.integers(1, 4))
        centers = select_centers(prof, CenterSelection(mode="topk", k=k))
        clustering = assign(prof, centers)
        labels = clustering.labels
        assert np.all(labels >= 0)  # no orphans in exact mode with peak center
        center_set = set(centers.tolist())
        for p in range(ds.n):
            if p in center_set:
                assert labels[p] == np.searchsorted(centers, p)
            else:
                assert labels[p] == labels[prof.mu[p]]


def test_scaling_invariance_of_argmax_level():
    rng = np.random.default_rng(72)
    ds = random_dataset(rng, n=120)
    dc = random_dc(rng, ds)
    prof = oracle_profile(ds, dc)
    c = 3.7
    scaled = Dataset(ds.points * c)
    prof_s = oracle_profile(scaled, dc * c)
    assert np.array_equal(prof.rho, prof_s.rho)
    assert np.array_equal(prof.mu, prof_s.mu)
    np.testing.assert_allclose(prof_s.delta, prof.delta * c, rtol=1e-12)
    for k in (1, 2, 3):
        a = select_centers(prof, CenterSelection(mode="topk", k=k))
        b = select_centers(prof_s, CenterSelection(mode="topk", k=k))
        assert np.array_equal(a, b)
        assert np.array_equal(assign(prof, a).labels, assign(prof_s, b).labels)


def test_clustering_json_round_trip(t5_profile):
    clustering = assign(t5_profile, [1, 3])
    clustering.outliers = flag_outliers(t5_profile, 1, 7)
    d = clustering.to_json_dict()
    assert set(d) == {"dc", "centers", "labels", "outliers", "unassigned"}
    back = Clustering.from_json_dict(d)
    assert np.array_equal(back.labels, clustering.labels)
    assert np.array_equal(back.centers, clustering.centers)
    assert np.array_equal(back.outliers, clustering.outliers)
