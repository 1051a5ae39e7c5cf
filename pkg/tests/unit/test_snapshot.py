import struct

import numpy as np
import pytest

from src.app.models.graph_models import TargetSet, Thresholds
from src.app.services.rr_service import build_index
from src.app.utils.exceptions import SnapshotError
from src.database.rr_snapshot import HEADER, load_snapshot, save_snapshot


@pytest.fixture
def fanin3_index(fanin3):
    target = TargetSet.from_nodes(fanin3.n, [1, 2])
    return build_index(fanin3, target, Thresholds.uniform(fanin3.n, 1.0), 30, seed=4)


def test_save_then_load(tmp_path, fanin3_index):
    path = tmp_path / "index.rrix"
    save_snapshot(fanin3_index, path)
    loaded = load_snapshot(path, Thresholds.uniform(4, 0.5))
    assert (loaded.n, loaded.theta, loaded.seed) == (4, 30, 4)
    assert np.array_equal(loaded.members, fanin3_index.members)
    assert np.array_equal(loaded.set_ptr, fanin3_index.set_ptr)
    assert np.array_equal(loaded.owner, fanin3_index.owner)
    assert loaded.req.tolist() == [0, 15, 15, 0]


def test_refuses_used_index(tmp_path, fanin3_index):
    fanin3_index.remove_hit_sets(1)
    with pytest.raises(SnapshotError):
        save_snapshot(fanin3_index, tmp_path / "index.rrix")


def test_wrong_node_count(tmp_path, fanin3_index):
    path = tmp_path / "index.rrix"
    save_snapshot(fanin3_index, path)
    with pytest.raises(SnapshotError, match="n=4"):
        load_snapshot(path, Thresholds.uniform(5, 1.0))


@pytest.mark.parametrize("cut", [2, 4, 40])
def test_truncated(tmp_path, fanin3_index, cut):
    path = tmp_path / "index.rrix"
    save_snapshot(fanin3_index, path)
    path.write_bytes(path.read_bytes()[:-cut])
    with pytest.raises(SnapshotError):
        load_snapshot(path, Thresholds.uniform(4, 1.0))


def test_bad_magic_and_version(tmp_path):
    path = tmp_path / "junk.rrix"
    path.write_bytes(HEADER.pack(b"XXXX", 1, 4, 1, 0, 0))
    with pytest.raises(SnapshotError, match="not an RR index"):
        load_snapshot(path, Thresholds.uniform(4, 1.0))
    path.write_bytes(HEADER.pack(b"RRIX", 9, 4, 1, 0, 0))
    with pytest.raises(SnapshotError, match="version"):
        load_snapshot(path, Thresholds.uniform(4, 1.0))


def test_out_of_range_member(tmp_path):
    path = tmp_path / "bad.rrix"
    body = np.array([0, 1, 7], dtype="<u4").tobytes()
    path.write_bytes(HEADER.pack(b"RRIX", 1, 4, 1, 0, 1) + body)
    with pytest.raises(SnapshotError, match="outside"):
        load_snapshot(path, Thresholds.uniform(4, 1.0))


def test_missing_file(tmp_path):
    with pytest.raises(SnapshotError):
        load_snapshot(tmp_path / "absent.rrix", Thresholds.uniform(4, 1.0))


def test_header_layout():
    assert HEADER.size == struct.calcsize("<4sIQQqQ")


def test_load_checks_the_problem(tmp_path, fanin3_index):
    path = tmp_path / "index.rrix"
    save_snapshot(fanin3_index, path)
    thresholds = Thresholds.uniform(4, 1.0)
    target = TargetSet.from_nodes(4, [1, 2])
    loaded = load_snapshot(path, thresholds, target=target, theta=30, seed=4)
    assert loaded.theta == 30
    with pytest.raises(SnapshotError, match="target set"):
        load_snapshot(path, thresholds, target=TargetSet.from_nodes(4, [1]), theta=30, seed=4)
    with pytest.raises(SnapshotError, match="target set"):
        load_snapshot(path, thresholds, target=TargetSet.all_nodes(4))
    with pytest.raises(SnapshotError, match="theta=30"):
        load_snapshot(path, thresholds, target=target, theta=40)
    with pytest.raises(SnapshotError, match="seed=4"):
        load_snapshot(path, thresholds, target=target, seed=5)
