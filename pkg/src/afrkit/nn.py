"""Minimal double-precision NN engine for the actor/critic pair.

Architecture: each vector input runs through a 1D conv (width filters, kernel
4 clamped to the input length, stride 1, ReLU) and is flattened; each scalar
input runs through a dense-width ReLU; everything is concatenated into a stack
of dense-ReLU hidden layers; the head is a softmax over actions (actor) or one
linear unit (critic). Plain SGD only; gradients are exact analytic backprop
and are verified against finite differences in the tests.

Forward/backward are batched: observations stack into (B, L) arrays and every
layer is one or two GEMMs, which is what makes desk-scale training tractable.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg.blas import daxpy

from .errors import CorruptFile, InvalidTopology, NonFiniteGradient, ShapeMismatch, VersionMismatch
from .features import NormalizationStats, StateObservation

CHECKPOINT_MAGIC = b"AFR1"
CHECKPOINT_VERSION = 1

DEFAULT_KERNEL = 4
DEFAULT_WIDTH = 128
DEFAULT_HIDDEN_LAYERS = 3

# AFR state layout: (name, length) per vector input, then scalar inputs.
# n_vec length equals the ladder size m.
_AFR_VECTORS = (("tau", 2), ("p", 120), ("q", 12), ("m", 12))
_AFR_SCALARS = ("phi", "delta")
# StateObservation attribute for each input name.
_OBS_ATTR = {"m": "m_vec", "n": "n_vec"}

GradientBlocks = list


@dataclass(frozen=True)
class NetworkTopology:
    kind: str  # "actor" | "critic"
    vector_inputs: tuple[tuple[str, int], ...]
    scalar_inputs: tuple[str, ...]
    width: int
    hidden_layers: int
    n_actions: int
    kernel: int = DEFAULT_KERNEL

    def __post_init__(self) -> None:
        if self.kind not in ("actor", "critic"):
            raise InvalidTopology(f"kind must be actor|critic, got {self.kind!r}")
        if self.hidden_layers < 1:
            raise InvalidTopology("need at least 1 hidden layer")
        if self.width < 1 or self.kernel < 1:
            raise InvalidTopology("width and kernel must be >= 1")
        if self.kind == "actor" and self.n_actions < 2:
            raise InvalidTopology("actor needs at least 2 actions")
        names = [n for n, _ in self.vector_inputs] + list(self.scalar_inputs)
        if len(set(names)) != len(names) or not all(names):
            raise InvalidTopology("input names must be unique and non-empty")
        if any(length < 1 for _, length in self.vector_inputs):
            raise InvalidTopology("vector inputs must have length >= 1")
        if not self.vector_inputs and not self.scalar_inputs:
            raise InvalidTopology("topology needs at least one input")

    @property
    def n_outputs(self) -> int:
        return self.n_actions if self.kind == "actor" else 1

    def conv_kernel(self, length: int) -> int:
        # Kernel 4 cannot slide over shorter inputs (tau has length 2);
        # clamp per input.
        return min(self.kernel, length)

    def concat_width(self) -> int:
        total = 0
        for _, length in self.vector_inputs:
            total += (length - self.conv_kernel(length) + 1) * self.width
        total += len(self.scalar_inputs) * self.width
        return total

    def block_shapes(self) -> list[tuple[str, tuple[int, ...]]]:
        shapes: list[tuple[str, tuple[int, ...]]] = []
        for name, length in self.vector_inputs:
            k = self.conv_kernel(length)
            shapes.append((f"conv_{name}_W", (k, self.width)))
            shapes.append((f"conv_{name}_b", (self.width,)))
        for name in self.scalar_inputs:
            shapes.append((f"dense_{name}_W", (self.width,)))
            shapes.append((f"dense_{name}_b", (self.width,)))
        d_in = self.concat_width()
        for i in range(self.hidden_layers):
            shapes.append((f"hidden{i + 1}_W", (d_in, self.width)))
            shapes.append((f"hidden{i + 1}_b", (self.width,)))
            d_in = self.width
        shapes.append(("head_W", (self.width, self.n_outputs)))
        shapes.append(("head_b", (self.n_outputs,)))
        return shapes

    def parameter_count(self) -> int:
        return sum(int(np.prod(s)) for _, s in self.block_shapes())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vector_inputs": [[n, length] for n, length in self.vector_inputs],
            "scalar_inputs": list(self.scalar_inputs),
            "width": self.width,
            "hidden_layers": self.hidden_layers,
            "n_actions": self.n_actions,
            "kernel": self.kernel,
        }

    @staticmethod
    def from_dict(obj: dict) -> "NetworkTopology":
        return NetworkTopology(
            kind=obj["kind"],
            vector_inputs=tuple((str(n), int(length)) for n, length in obj["vector_inputs"]),
            scalar_inputs=tuple(str(s) for s in obj["scalar_inputs"]),
            width=int(obj["width"]),
            hidden_layers=int(obj["hidden_layers"]),
            n_actions=int(obj["n_actions"]),
            kernel=int(obj["kernel"]),
        )


@dataclass
class NetworkParams:
    topology: NetworkTopology
    blocks: list = field(repr=False)

    @property
    def parameter_count(self) -> int:
        return self.topology.parameter_count()

    def copy(self) -> "NetworkParams":
        return NetworkParams(self.topology, [b.copy() for b in self.blocks])


def afr_topology(kind: str, m_actions: int = 5, hidden_layers: int = DEFAULT_HIDDEN_LAYERS,
                 hidden_units: int = DEFAULT_WIDTH) -> NetworkTopology:
    return NetworkTopology(
        kind=kind,
        vector_inputs=_AFR_VECTORS + (("n", m_actions),),
        scalar_inputs=_AFR_SCALARS,
        width=hidden_units,
        hidden_layers=hidden_layers,
        n_actions=m_actions,
    )


def build_network(
    kind: str,
    m_actions: int = 5,
    hidden_layers: int = DEFAULT_HIDDEN_LAYERS,
    hidden_units: int = DEFAULT_WIDTH,
    seed: int = 0,
    topology: NetworkTopology | None = None,
) -> NetworkParams:
    """He-uniform initialized parameters; bit-identical for a fixed seed.

    `topology` overrides the default AFR input layout (used by the small
    gradient-check networks in the tests).
    """
    topo = topology if topology is not None else afr_topology(
        kind, m_actions, hidden_layers, hidden_units)
    rng = np.random.default_rng(seed)
    blocks = []
    for name, shape in topo.block_shapes():
        if name.endswith("_b"):
            blocks.append(np.zeros(shape))
            continue
        if name.startswith("conv_"):
            fan_in = shape[0]
        elif name.startswith("dense_"):
            fan_in = 1
        else:  # hidden / head weight matrices
            fan_in = shape[0]
        limit = np.sqrt(6.0 / fan_in)
        blocks.append(rng.uniform(-limit, limit, shape))
    return NetworkParams(topo, blocks)


def init_like(params: NetworkParams) -> GradientBlocks:
    return [np.zeros_like(b) for b in params.blocks]


# ---------------------------------------------------------------------------
# Forward / backward

@dataclass(eq=False)
class ForwardTrace:
    """Activations cached by a forward pass, consumed by backward."""

    topology: NetworkTopology
    batch_size: int
    vec_windows: list = field(repr=False, default_factory=list)   # (B, P, k) per vector input
    vec_masks: list = field(repr=False, default_factory=list)     # (B, P, width)
    scalar_values: list = field(repr=False, default_factory=list) # (B,)
    scalar_masks: list = field(repr=False, default_factory=list)  # (B, width)
    hidden_inputs: list = field(repr=False, default_factory=list) # inputs to each hidden layer
    hidden_masks: list = field(repr=False, default_factory=list)
    head_input: np.ndarray = field(repr=False, default=None)      # (B, width)
    logits: np.ndarray = field(repr=False, default=None)          # (B, n_out)
    probs: np.ndarray = field(repr=False, default=None)           # actor only
    logprobs: np.ndarray = field(repr=False, default=None)        # actor only
    values: np.ndarray = field(repr=False, default=None)          # critic only


def stack_observations(observations: list[StateObservation],
                       topology: NetworkTopology) -> dict:
    """Stack AFR observations into the (B, L)/(B,) batch dict the engine eats."""
    batch = {}
    for name, _ in topology.vector_inputs:
        attr = _OBS_ATTR.get(name, name)
        batch[name] = np.stack([getattr(o, attr) for o in observations])
    for name in topology.scalar_inputs:
        batch[name] = np.array([getattr(o, name) for o in observations], dtype=np.float64)
    return batch


def _check_batch(topo: NetworkTopology, batch: dict) -> int:
    b = None
    for name, length in topo.vector_inputs:
        arr = batch.get(name)
        if arr is None or arr.ndim != 2 or arr.shape[1] != length:
            got = None if arr is None else arr.shape
            raise ShapeMismatch(f"input {name!r}: expected (B, {length}), got {got}")
        if b is None:
            b = arr.shape[0]
        elif arr.shape[0] != b:
            raise ShapeMismatch("inconsistent batch sizes across inputs")
    for name in topo.scalar_inputs:
        arr = batch.get(name)
        if arr is None or arr.ndim != 1:
            raise ShapeMismatch(f"scalar input {name!r} must be 1-D")
        if b is None:
            b = arr.shape[0]
        elif arr.shape[0] != b:
            raise ShapeMismatch("inconsistent batch sizes across inputs")
    if b is None or b < 1:
        raise ShapeMismatch("empty batch")
    return b


def _check_params(params: NetworkParams) -> None:
    shapes = params.topology.block_shapes()
    if len(params.blocks) != len(shapes):
        raise ShapeMismatch(
            f"{len(params.blocks)} blocks for {len(shapes)}-block topology")
    for blk, (name, shape) in zip(params.blocks, shapes):
        if blk.shape != shape:
            raise ShapeMismatch(f"block {name}: expected {shape}, got {blk.shape}")


def _forward(params: NetworkParams, batch: dict) -> ForwardTrace:
    topo = params.topology
    _check_params(params)
    bsz = _check_batch(topo, batch)
    trace = ForwardTrace(topology=topo, batch_size=bsz)
    blocks = params.blocks
    idx = 0
    segments = []
    for name, length in topo.vector_inputs:
        x = np.asarray(batch[name], dtype=np.float64)
        k = topo.conv_kernel(length)
        p_out = length - k + 1
        windows = sliding_window_view(x, k, axis=1)          # (B, P, k)
        w, b = blocks[idx], blocks[idx + 1]
        idx += 2
        pre = windows.reshape(-1, k) @ w
        pre += b
        mask = pre > 0
        post = pre * mask
        trace.vec_windows.append(windows)
        trace.vec_masks.append(mask.reshape(bsz, p_out, topo.width))
        segments.append(post.reshape(bsz, p_out * topo.width))
    for name in topo.scalar_inputs:
        v = np.asarray(batch[name], dtype=np.float64)
        w, b = blocks[idx], blocks[idx + 1]
        idx += 2
        pre = np.outer(v, w) + b
        mask = pre > 0
        trace.scalar_values.append(v)
        trace.scalar_masks.append(mask)
        segments.append(pre * mask)
    h = np.concatenate(segments, axis=1) if len(segments) > 1 else segments[0]
    for _ in range(topo.hidden_layers):
        w, b = blocks[idx], blocks[idx + 1]
        idx += 2
        trace.hidden_inputs.append(h)
        pre = h @ w + b
        mask = pre > 0
        trace.hidden_masks.append(mask)
        h = pre * mask
    w, b = blocks[idx], blocks[idx + 1]
    trace.head_input = h
    logits = h @ w + b
    trace.logits = logits
    if topo.kind == "actor":
        shifted = logits - logits.max(axis=1, keepdims=True)
        expd = np.exp(shifted)
        total = expd.sum(axis=1, keepdims=True)
        trace.probs = expd / total
        trace.logprobs = shifted - np.log(total)
    else:
        trace.values = logits[:, 0]
    return trace


def forward_actor_batch(params: NetworkParams, batch: dict) -> tuple[np.ndarray, ForwardTrace]:
    if params.topology.kind != "actor":
        raise ShapeMismatch("params are not an actor network")
    trace = _forward(params, batch)
    return trace.probs, trace


def forward_critic_batch(params: NetworkParams, batch: dict) -> tuple[np.ndarray, ForwardTrace]:
    if params.topology.kind != "critic":
        raise ShapeMismatch("params are not a critic network")
    trace = _forward(params, batch)
    return trace.values, trace


def forward_actor(params: NetworkParams, obs: StateObservation) -> tuple[np.ndarray, ForwardTrace]:
    probs, trace = forward_actor_batch(params, stack_observations([obs], params.topology))
    return probs[0], trace


def forward_critic(params: NetworkParams, obs: StateObservation) -> tuple[float, ForwardTrace]:
    values, trace = forward_critic_batch(params, stack_observations([obs], params.topology))
    return float(values[0]), trace


def _backward_from_dlogits(params: NetworkParams, trace: ForwardTrace,
                           dlogits: np.ndarray) -> GradientBlocks:
    topo = trace.topology
    blocks = params.blocks
    shapes = topo.block_shapes()
    grads: list = [None] * len(shapes)
    idx = len(shapes) - 2
    grads[idx] = trace.head_input.T @ dlogits
    grads[idx + 1] = dlogits.sum(axis=0)
    dh = dlogits @ blocks[idx].T
    for layer in range(topo.hidden_layers - 1, -1, -1):
        w_idx = 2 * (len(topo.vector_inputs) + len(topo.scalar_inputs)) + 2 * layer
        dpre = dh * trace.hidden_masks[layer]
        grads[w_idx] = trace.hidden_inputs[layer].T @ dpre
        grads[w_idx + 1] = dpre.sum(axis=0)
        dh = dpre @ blocks[w_idx].T
    # dh is now the gradient w.r.t. the concatenated feature vector.
    offset = 0
    idx = 0
    for vec_i, (name, length) in enumerate(topo.vector_inputs):
        k = topo.conv_kernel(length)
        p_out = length - k + 1
        seg = dh[:, offset:offset + p_out * topo.width]
        offset += p_out * topo.width
        dpre = seg.reshape(trace.batch_size, p_out, topo.width) * trace.vec_masks[vec_i]
        windows = trace.vec_windows[vec_i]
        grads[idx] = windows.reshape(-1, k).T @ dpre.reshape(-1, topo.width)
        grads[idx + 1] = dpre.sum(axis=(0, 1))
        idx += 2
    for sc_i, name in enumerate(topo.scalar_inputs):
        seg = dh[:, offset:offset + topo.width]
        offset += topo.width
        dpre = seg * trace.scalar_masks[sc_i]
        grads[idx] = trace.scalar_values[sc_i] @ dpre
        grads[idx + 1] = dpre.sum(axis=0)
        idx += 2
    return grads


def entropy(probs: np.ndarray) -> float:
    """-sum p log p with 0 log 0 := 0."""
    p = np.asarray(probs, dtype=np.float64)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def _entropy_rows(probs: np.ndarray, logprobs: np.ndarray) -> np.ndarray:
    return -(probs * np.where(probs > 0, logprobs, 0.0)).sum(axis=1)


def backward_actor(
    params: NetworkParams,
    trace: ForwardTrace,
    action,
    advantage,
    entropy_weight: float,
) -> GradientBlocks:
    """Ascent gradient of sum_t [log pi(a_t|s_t) * A_t + beta * H(pi(s_t))].

    `action`/`advantage` may be scalars (single sample) or length-B arrays;
    actions are 1-based level indices.
    """
    if trace.probs is None:
        raise ShapeMismatch("trace does not come from an actor forward pass")
    bsz, n_act = trace.probs.shape
    actions = np.atleast_1d(np.asarray(action, dtype=np.int64))
    advantages = np.atleast_1d(np.asarray(advantage, dtype=np.float64))
    if actions.shape != (bsz,) or advantages.shape != (bsz,):
        raise ShapeMismatch(f"need {bsz} actions/advantages")
    if actions.min() < 1 or actions.max() > n_act:
        raise ShapeMismatch(f"actions must be in [1, {n_act}]")
    dlogits = -trace.probs * advantages[:, None]
    dlogits[np.arange(bsz), actions - 1] += advantages
    if entropy_weight != 0.0:
        ent = _entropy_rows(trace.probs, trace.logprobs)
        dlogits += entropy_weight * (-trace.probs * (trace.logprobs + ent[:, None]))
    return _backward_from_dlogits(params, trace, dlogits)


def backward_critic(params: NetworkParams, trace: ForwardTrace, td_target) -> GradientBlocks:
    """Descent gradient of sum_t (td_target_t - V(s_t))^2."""
    if trace.values is None:
        raise ShapeMismatch("trace does not come from a critic forward pass")
    bsz = trace.values.shape[0]
    targets = np.atleast_1d(np.asarray(td_target, dtype=np.float64))
    if targets.shape != (bsz,):
        raise ShapeMismatch(f"need {bsz} td targets")
    dlogits = (2.0 * (trace.values - targets))[:, None]
    return _backward_from_dlogits(params, trace, dlogits)


def _grads_finite(grads: GradientBlocks) -> bool:
    # A single-pass sum is NaN or +-inf iff the block has any non-finite entry.
    return all(np.isfinite(g.sum()) for g in grads)


def apply_gradients(params: NetworkParams, grads: GradientBlocks,
                    rate: float, direction: str) -> None:
    """In-place SGD step: ascent adds rate*grads, descent subtracts.

    Raises NonFiniteGradient before touching any block.
    """
    if direction not in ("ascent", "descent"):
        raise ValueError(f"direction must be ascent|descent, got {direction!r}")
    if len(grads) != len(params.blocks):
        raise ShapeMismatch(f"{len(grads)} gradient blocks for {len(params.blocks)} parameters")
    for g, p in zip(grads, params.blocks):
        if g.shape != p.shape:
            raise ShapeMismatch(f"gradient shape {g.shape} vs parameter {p.shape}")
    if not _grads_finite(grads):
        raise NonFiniteGradient("gradient contains NaN or infinity")
    a = rate if direction == "ascent" else -rate
    for g, p in zip(grads, params.blocks):
        # BLAS daxpy updates p in place without a temporary; requires the
        # contiguous float64 blocks build_network produces.
        daxpy(np.ascontiguousarray(g, dtype=np.float64).ravel(), p.ravel(), a=a)


# ---------------------------------------------------------------------------
# Rollout fast path

class RolloutPolicy:
    """Actor forward over a known chunk window, factored so the per-step cost
    is independent of the big first layer.

    Everything in the observation except phi is known before actions are
    chosen, so the first hidden layer's response to the non-phi features is
    precomputed for the whole window in one GEMM, and the phi contribution is
    precomputed for each of the m possible previous levels. Per step only the
    small width x width layers run. Produces the same distribution as
    forward_actor up to float summation order.
    """

    def __init__(self, params: NetworkParams, observations: list[StateObservation]):
        topo = params.topology
        if topo.kind != "actor" or "phi" not in topo.scalar_inputs:
            raise ShapeMismatch("RolloutPolicy needs an actor with a phi input")
        _check_params(params)
        self._topo = topo
        self._blocks = params.blocks
        batch = stack_observations(observations, topo)
        bsz = len(observations)
        segments = []
        idx = 0
        for name, length in topo.vector_inputs:
            x = batch[name]
            k = topo.conv_kernel(length)
            w, b = self._blocks[idx], self._blocks[idx + 1]
            idx += 2
            pre = sliding_window_view(x, k, axis=1).reshape(-1, k) @ w + b
            segments.append(np.maximum(pre, 0.0).reshape(bsz, -1))
        phi_w = phi_b = None
        for name in topo.scalar_inputs:
            w, b = self._blocks[idx], self._blocks[idx + 1]
            idx += 2
            if name == "phi":
                phi_w, phi_b = w, b
                segments.append(np.zeros((bsz, topo.width)))
                continue
            pre = np.outer(batch[name], w) + b
            segments.append(np.maximum(pre, 0.0))
        x_cat = np.concatenate(segments, axis=1)
        self._hidden_idx = idx
        w1, b1 = self._blocks[idx], self._blocks[idx + 1]
        self._base = x_cat @ w1 + b1  # (B, width), phi features zeroed
        # Contribution of phi = level/m for each possible previous level.
        phi_offset = 0
        for name, length in topo.vector_inputs:
            phi_offset += (length - topo.conv_kernel(length) + 1) * topo.width
        for name in topo.scalar_inputs:
            if name == "phi":
                break
            phi_offset += topo.width
        w1_phi = w1[phi_offset:phi_offset + topo.width]
        m = topo.n_actions
        feats = np.maximum(np.outer(np.arange(1, m + 1) / m, phi_w) + phi_b, 0.0)
        self._phi_contrib = feats @ w1_phi  # (m, width)

    def probs(self, t: int, last_level: int) -> np.ndarray:
        topo = self._topo
        h = self._base[t] + self._phi_contrib[last_level - 1]
        np.maximum(h, 0.0, out=h)
        idx = self._hidden_idx + 2
        for _ in range(topo.hidden_layers - 1):
            h = h @ self._blocks[idx] + self._blocks[idx + 1]
            np.maximum(h, 0.0, out=h)
            idx += 2
        logits = h @ self._blocks[idx] + self._blocks[idx + 1]
        logits -= logits.max()
        np.exp(logits, out=logits)
        logits /= logits.sum()
        return logits


# ---------------------------------------------------------------------------
# Checkpoints

@dataclass
class Checkpoint:
    actor: NetworkParams
    critic: NetworkParams
    norm: NormalizationStats
    profile_name: str
    format_version: int = CHECKPOINT_VERSION


def save_checkpoint(checkpoint: Checkpoint, path: str) -> None:
    """Layout: magic "AFR1", u16 version, u32 header length, JSON header
    (topologies, norm stats, profile name), raw little-endian float64 blocks
    (actor then critic, topology order), trailing CRC32 of all prior bytes."""
    _check_params(checkpoint.actor)
    _check_params(checkpoint.critic)
    header = json.dumps({
        "actor": checkpoint.actor.topology.to_dict(),
        "critic": checkpoint.critic.topology.to_dict(),
        "norm": {"max_chunk_size": checkpoint.norm.max_chunk_size},
        "profile_name": checkpoint.profile_name,
    }, separators=(",", ":")).encode("utf-8")
    parts = [CHECKPOINT_MAGIC,
             struct.pack("<H", CHECKPOINT_VERSION),
             struct.pack("<I", len(header)),
             header]
    for net in (checkpoint.actor, checkpoint.critic):
        for block in net.blocks:
            parts.append(np.ascontiguousarray(block, dtype="<f8").tobytes())
    body = b"".join(parts)
    with open(path, "wb") as fh:
        fh.write(body)
        fh.write(struct.pack("<I", zlib.crc32(body)))


def load_checkpoint(path: str) -> Checkpoint:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 14:
        raise CorruptFile("file too short")
    if data[:4] != CHECKPOINT_MAGIC:
        raise CorruptFile(f"bad magic {data[:4]!r}")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != CHECKPOINT_VERSION:
        raise VersionMismatch(f"format version {version}, expected {CHECKPOINT_VERSION}")
    (stored_crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) != stored_crc:
        raise CorruptFile("CRC32 mismatch")
    (header_len,) = struct.unpack_from("<I", data, 6)
    header_end = 10 + header_len
    if header_end > len(data) - 4:
        raise CorruptFile("header overruns file")
    try:
        header = json.loads(data[10:header_end].decode("utf-8"))
        actor_topo = NetworkTopology.from_dict(header["actor"])
        critic_topo = NetworkTopology.from_dict(header["critic"])
        norm = NormalizationStats(float(header["norm"]["max_chunk_size"]))
        profile_name = str(header["profile_name"])
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"bad header: {exc}") from exc
    offset = header_end
    nets = []
    for topo in (actor_topo, critic_topo):
        blocks = []
        for _, shape in topo.block_shapes():
            nbytes = int(np.prod(shape)) * 8
            if offset + nbytes > len(data) - 4:
                raise CorruptFile("parameter payload truncated")
            blocks.append(np.frombuffer(data, dtype="<f8", count=int(np.prod(shape)),
                                        offset=offset).astype(np.float64).reshape(shape))
            offset += nbytes
        nets.append(NetworkParams(topo, blocks))
    if offset != len(data) - 4:
        raise CorruptFile("trailing bytes after parameter payload")
    return Checkpoint(actor=nets[0], critic=nets[1], norm=norm,
                      profile_name=profile_name, format_version=version)
