import logging
import struct

import numpy as np

from src.app.models.graph_models import TargetSet
from src.app.services.rr_service.rr_index import RRIndex
from src.app.utils.exceptions import SnapshotError

logger = logging.getLogger(__name__)

MAGIC = b"RRIX"
VERSION = 1
# magic, version, n, theta, seed, target count
HEADER = struct.Struct("<4sIQQqQ")


def save_snapshot(index, path):
    """
    Writes a fresh RR index to path.

    Layout: header, the target ids as u32, then every set as a u32 length
    followed by its member ids. Only the immutable set storage is written;
    requirements are recomputed from thresholds on load.
    """
    if index.selected.any() or not index.alive.all():
        raise SnapshotError("only an index with no removals can be saved")
    targets = np.flatnonzero(index.target_mask).astype(np.uint32)
    lengths = np.diff(index.set_ptr)
    body = np.empty(index.num_sets + index.members.shape[0], dtype=np.uint32)
    length_pos = index.set_ptr[:-1] + np.arange(index.num_sets)
    is_length = np.zeros(body.shape[0], dtype=bool)
    is_length[length_pos] = True
    body[is_length] = lengths
    body[~is_length] = index.members
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, index.n, index.theta, index.seed, targets.shape[0]))
        f.write(targets.astype("<u4").tobytes())
        f.write(body.astype("<u4").tobytes())
    logger.info(f"Saved RR index snapshot to {path}: {index.num_sets} sets")


def load_snapshot(path, thresholds, target=None, theta=None, seed=None):
    """
    Reads an index written by save_snapshot.

    target, theta and seed describe the problem the index is loaded for;
    each one given must match what the snapshot was built with.

    Raises:
        SnapshotError: bad magic, unknown version, truncated data, a
        threshold vector of the wrong length or a snapshot built for
        another target set, theta or seed.
    """
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise SnapshotError(f"cannot read snapshot {path}: {e}") from e
    if len(raw) < HEADER.size or (len(raw) - HEADER.size) % 4:
        raise SnapshotError("snapshot is truncated")
    magic, version, n, stored_theta, stored_seed, num_targets = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotError("not an RR index snapshot")
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    if len(thresholds) != n:
        raise SnapshotError(f"snapshot has n={n}, thresholds cover {len(thresholds)} nodes")
    payload = np.frombuffer(raw, dtype="<u4", offset=HEADER.size)
    if payload.shape[0] < num_targets:
        raise SnapshotError("snapshot is truncated")
    targets = payload[:num_targets].astype(np.int64)
    body = payload[num_targets:]

    num_sets = int(num_targets) * int(stored_theta)
    lengths = np.empty(num_sets, dtype=np.int64)
    pos = 0
    for s in range(num_sets):
        if pos >= body.shape[0]:
            raise SnapshotError("snapshot is truncated")
        lengths[s] = body[pos]
        pos += 1 + int(body[pos])
    if pos != body.shape[0]:
        raise SnapshotError("snapshot has trailing or missing data")

    set_ptr = np.zeros(num_sets + 1, dtype=np.int64)
    np.cumsum(lengths, out=set_ptr[1:])
    is_length = np.zeros(body.shape[0], dtype=bool)
    is_length[set_ptr[:-1] + np.arange(num_sets)] = True
    members = body[~is_length].astype(np.int32)
    if members.size and int(members.max()) >= n:
        raise SnapshotError("snapshot references a node outside 0..n-1")

    owners = np.repeat(targets, stored_theta)
    index = RRIndex(n, stored_theta, stored_seed, owners, set_ptr, members, thresholds)
    expected = target if target is not None else TargetSet(index.target_mask)
    reasons = index.mismatches(expected, theta=theta, seed=seed)
    if reasons:
        raise SnapshotError(f"snapshot {path} does not fit this problem: " + "; ".join(reasons))
    logger.info(f"Loaded RR index snapshot from {path}: {num_sets} sets, theta={stored_theta}")
    return index
