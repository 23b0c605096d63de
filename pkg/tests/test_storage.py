import numpy as np
import pytest

from dpcidx.backends import build_backend
from dpcidx.errors import UsageError
from dpcidx.storage import load_index, save_index

from conftest import random_dataset, random_dc


@pytest.mark.parametrize(
    "name,kw",
    [
        ("list", {}),
        ("ch", {"w": 0.8}),
        ("list", {"tau": 2.5}),
        ("ch", {"w": 0.6, "tau": 2.5}),
        ("quadtree", {"capacity": 4}),
        ("rtree", {"fanout": 4}),
    ],
)
def test_round_trip_profiles_bit_identical(tmp_path, name, kw):
    rng = np.random.default_rng(sum(ord(c) for c in name) + len(kw))
    ds = random_dataset(rng, n=120)
    dc = random_dc(rng, ds)
    backend = build_backend(name, ds, **kw)
    path = tmp_path / "index.bin"
    save_index(backend, path, d=ds.dim)
    loaded = load_index(path)
    a = backend.profile(dc)
    b = loaded.profile(dc)
    assert a.equals_exactly(b)
    assert a.content_hash() == b.content_hash()


def test_list_format_layout(tmp_path, t5):
    backend = build_backend("list", t5)
    path = tmp_path / "t5.idx"
    save_index(backend, path, d=2)
    raw = path.read_bytes()
    assert raw[:4] == b"DPCL"
    n = int.from_bytes(raw[8:12], "little")
    assert n == 5
    # first row: count=4 then (id u32, dist f64) pairs starting with (1, 1.0)
    assert int.from_bytes(raw[16:20], "little") == 4
    assert int.from_bytes(raw[20:24], "little") == 1
    assert np.frombuffer(raw[24:32], dtype="<f8")[0] == 1.0


def test_tau_and_w_survive_round_trip(tmp_path, t5):
    backend = build_backend("ch", t5, w=0.7, tau=3.0)
    path = tmp_path / "rn.idx"
    save_index(backend, path, d=2)
    loaded = load_index(path)
    assert loaded.rn.tau == 3.0
    assert loaded.rn.ch.w == 0.7
    assert loaded.rn.sentinel_delta == t5.diameter_bound()


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(UsageError):
        load_index(path)


def test_oracle_backend_not_serializable(tmp_path, t5):
    backend = build_backend("oracle", t5)
    with pytest.raises(UsageError):
        save_index(backend, tmp_path / "x.bin", d=2)
