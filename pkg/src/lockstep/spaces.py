"""Multi-entity interface types: spaces, entity specs, and step batches.

The step contract mirrors the familiar single-agent reset/step interface but
carries per-entity lists everywhere a single value would appear. The episode
``done`` flag stays a single shared boolean.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, SpaceViolation


class _Null:
    """Marker for a null observation or action (entity absent this step)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NULL"


NULL = _Null()


@dataclass(frozen=True)
class SpaceSpec:
    """Either a discrete space of ``n`` choices or a bounded box tensor."""

    kind: str  # "discrete" | "box"
    n: int = 0
    shape: tuple = ()
    low: float = 0.0
    high: float = 0.0

    def __post_init__(self):
        if self.kind == "discrete":
            if self.n < 1:
                raise ValueError("discrete space needs n >= 1")
        elif self.kind == "box":
            if not self.shape or any(d < 1 for d in self.shape):
                raise ValueError("box shape must be nonempty with dims >= 1")
            if not self.low < self.high:
                raise ValueError("box requires low < high")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @property
    def size(self) -> int:
        if self.kind == "discrete":
            return 1
        return int(np.prod(self.shape))


def discrete(n: int) -> SpaceSpec:
    return SpaceSpec(kind="discrete", n=n)


def box(shape, low: float, high: float) -> SpaceSpec:
    return SpaceSpec(kind="box", shape=tuple(int(d) for d in shape), low=float(low), high=float(high))


@dataclass(frozen=True)
class EntitySpec:
    entity_id: int
    obs_space: SpaceSpec
    act_space: SpaceSpec

    def __post_init__(self):
        if self.entity_id < 0:
            raise ValueError("entity_id must be >= 0")


@dataclass(frozen=True)
class StepBatch:
    """One lock-step exchange: per-entity lists plus the shared done flag."""

    observations: tuple
    rewards: tuple
    done: bool
    infos: tuple = ()

    @property
    def n_entities(self) -> int:
        return len(self.observations)


def make_batch(observations, rewards, done, infos=None) -> StepBatch:
    def norm(o):
        if o is NULL or isinstance(o, (int, np.integer)):
            return o
        return np.asarray(o, dtype=np.float64)

    observations = tuple(norm(o) for o in observations)
    e = len(observations)
    if infos is None:
        infos = tuple({} for _ in range(e))
    return StepBatch(
        observations=observations,
        rewards=tuple(float(r) for r in rewards),
        done=bool(done),
        infos=tuple(dict(i) for i in infos),
    )


def space_contains(space: SpaceSpec, value) -> bool:
    """Membership test. Never raises; any mismatch is simply ``False``."""
    if value is NULL:
        return False
    if space.kind == "discrete":
        if isinstance(value, (bool, np.bool_)):
            return False
        if not isinstance(value, (int, np.integer)):
            return False
        return 0 <= int(value) < space.n
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != space.shape:
        return False
    return bool(np.all(arr >= space.low) and np.all(arr <= space.high))


def null_action(space: SpaceSpec):
    """Canonical in-space no-op.

    Discrete: index 0. Box: zero clamped into bounds, falling back to the
    interval midpoint when 0 lies outside [low, high].
    """
    if space.kind == "discrete":
        return 0
    if space.low <= 0.0 <= space.high:
        fill = 0.0
    else:
        fill = (space.low + space.high) / 2.0
    return np.full(space.shape, fill, dtype=np.float64)


def null_observation(space: SpaceSpec):
    """All-zeros placeholder for an entity that has exited the episode."""
    if space.kind == "discrete":
        return 0
    return np.zeros(space.shape, dtype=np.float64)


def resolve_action(space: SpaceSpec, value):
    """Replace the NULL marker with the space's canonical null action."""
    if value is NULL:
        return null_action(space)
    return value


def validate_batch(specs, batch: StepBatch):
    """Check list lengths and observation membership.

    Returns None on success; raises LengthMismatch or SpaceViolation.
    Total: any structural problem maps to one of those two errors.
    """
    e = len(specs)
    if e == 0:
        raise ValueError("specs must be nonempty")
    for name in ("observations", "rewards", "infos"):
        got = len(getattr(batch, name))
        if got != e:
            raise LengthMismatch(e, got)
    for spec, obs in zip(specs, batch.observations):
        if obs is NULL:
            continue
        if not space_contains(spec.obs_space, obs):
            raise SpaceViolation(spec.entity_id, obs)
    return None


def batch_ok(specs, batch: StepBatch) -> bool:
    try:
        validate_batch(specs, batch)
    except (LengthMismatch, SpaceViolation):
        return False
    return True


# --- canonical binary frame ------------------------------------------------
#
# Layout (little endian):
#   u32 entity count E
#   per entity:
#     u8 tag: 0 discrete obs, 1 box obs, 2 null obs
#     tag 0: i64 value
#     tag 1: u8 ndim, ndim x u32 dims, f64 payload
#     f64 reward
#   u8 done
#   per entity: u32 npairs, npairs x (u32 klen, key utf8, u32 vlen, val utf8)

_TAG_DISCRETE = 0
_TAG_BOX = 1
_TAG_NULL = 2


def encode_batch(batch: StepBatch) -> bytes:
    out = bytearray()
    out += struct.pack("<I", batch.n_entities)
    for obs, reward in zip(batch.observations, batch.rewards):
        if obs is NULL:
            out += struct.pack("<B", _TAG_NULL)
        elif isinstance(obs, (int, np.integer)) and not isinstance(obs, (bool, np.bool_)):
            out += struct.pack("<Bq", _TAG_DISCRETE, int(obs))
        else:
            arr = np.asarray(obs, dtype=np.float64)
            out += struct.pack("<BB", _TAG_BOX, arr.ndim)
            out += struct.pack(f"<{arr.ndim}I", *arr.shape)
            out += arr.astype("<f8").tobytes()
        out += struct.pack("<d", reward)
    out += struct.pack("<B", 1 if batch.done else 0)
    for info in batch.infos:
        out += struct.pack("<I", len(info))
        for key, val in info.items():
            kb = key.encode("utf-8")
            vb = str(val).encode("utf-8")
            out += struct.pack("<I", len(kb)) + kb
            out += struct.pack("<I", len(vb)) + vb
    return bytes(out)


def decode_batch(data: bytes) -> StepBatch:
    off = 0

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, data, off)
        off += size
        return vals

    (e,) = take("<I")
    observations = []
    rewards = []
    for _ in range(e):
        (tag,) = take("<B")
        if tag == _TAG_NULL:
            observations.append(NULL)
        elif tag == _TAG_DISCRETE:
            (v,) = take("<q")
            observations.append(int(v))
        elif tag == _TAG_BOX:
            (ndim,) = take("<B")
            dims = take(f"<{ndim}I")
            count = int(np.prod(dims)) if ndim else 1
            arr = np.frombuffer(data, dtype="<f8", count=count, offset=off).reshape(dims)
            off += 8 * count
            observations.append(arr.copy())
        else:
            raise ValueError(f"bad observation tag {tag}")
        (r,) = take("<d")
        rewards.append(r)
    (done_b,) = take("<B")
    infos = []
    for _ in range(e):
        (npairs,) = take("<I")
        info = {}
        for _ in range(npairs):
            (klen,) = take("<I")
            key = data[off : off + klen].decode("utf-8")
            off += klen
            (vlen,) = take("<I")
            info[key] = data[off : off + vlen].decode("utf-8")
            off += vlen
        infos.append(info)
    return StepBatch(
        observations=tuple(observations),
        rewards=tuple(rewards),
        done=bool(done_b),
        infos=tuple(infos),
    )
