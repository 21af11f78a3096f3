"""Frame features and RL state assembly.

Two layers live here: pixel-level metrics over grayscale frames (Y-diff as the
cheap motion proxy, a whole-frame SSIM used only to validate that proxy), and
the fixed-shape state observation fed to the networks. Vector shapes are
static (p padded to 120, deciles padded to 12) because network input shapes
cannot vary with frame rate.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    IndexOutOfRange,
    LevelOutOfRange,
    ParseError,
    ValidationError,
)
from .traces import ALLOWED_FPS, VideoTrace

L_P = 120
L_Q = 12
K_ADJ = 2
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2


@dataclass(frozen=True, eq=False)
class GrayFrame:
    """8-bit luminance frame, pixels stored row-major as a (height, width) array."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValidationError("frame dimensions must be >= 1")
        arr = np.asarray(self.pixels)
        if arr.size != self.width * self.height:
            raise ValidationError(
                f"{arr.size} pixels for {self.width}x{self.height} frame")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValidationError("pixels must be integers in [0, 255]")
            if arr.min() < 0 or arr.max() > 255:
                raise ValidationError("pixel values outside [0, 255]")
            arr = arr.astype(np.uint8)
        arr = arr.reshape(self.height, self.width)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)


def _check_same_shape(a: GrayFrame, b: GrayFrame) -> None:
    if a.width != b.width or a.height != b.height:
        raise DimensionMismatch(
            f"{a.width}x{a.height} vs {b.width}x{b.height}")


def y_diff(a: GrayFrame, b: GrayFrame) -> float:
    """Mean absolute luminance difference, normalized to [0, 1]."""
    _check_same_shape(a, b)
    return float(np.abs(a.pixels.astype(np.int16) - b.pixels).mean() / 255.0)


def ssim(a: GrayFrame, b: GrayFrame) -> float:
    """Single-window SSIM over the whole frame, population statistics.

    Validation-only: exists to check that y_diff tracks structural change.
    """
    _check_same_shape(a, b)
    if a.width * a.height < 2:
        raise ValidationError("ssim needs at least 2 pixels")
    x = a.pixels.astype(np.float64)
    y = b.pixels.astype(np.float64)
    mu_x = x.mean()
    mu_y = y.mean()
    var_x = x.var()
    var_y = y.var()
    cov = ((x - mu_x) * (y - mu_y)).mean()
    num = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    den = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float(num / den)


def chunk_features(frames: list[GrayFrame], fps: int) -> list[float]:
    """Consecutive-frame Y-diffs for one chunk, rounded to the trace format's
    6 fractional digits."""
    if fps not in ALLOWED_FPS:
        raise ValidationError(f"fps must be one of {ALLOWED_FPS}")
    if len(frames) < 2:
        raise ValidationError("need at least 2 frames")
    return [round(y_diff(frames[i], frames[i + 1]), 6) for i in range(len(frames) - 1)]


# ---------------------------------------------------------------------------
# PGM (P5) ingestion

def _pgm_tokens(data: bytes, count: int, where: str) -> tuple[list[bytes], int]:
    """Read `count` whitespace/comment-delimited header tokens; returns tokens
    and the offset just past the single whitespace byte after the last one."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ParseError(f"{where}: truncated header")
        tokens.append(data[start:pos])
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ParseError(f"{where}: missing whitespace after header")
    return tokens, pos + 1


def load_pgm(path: str) -> GrayFrame:
    """Binary PGM (P5), 8-bit only."""
    with open(path, "rb") as fh:
        data = fh.read()
    name = os.path.basename(path)
    tokens, offset = _pgm_tokens(data, 4, name)
    if tokens[0] != b"P5":
        raise ParseError(f"{name}: not a P5 PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ParseError(f"{name}: non-numeric header field") from exc
    if maxval != 255:
        raise ParseError(f"{name}: only maxval 255 supported, got {maxval}")
    body = data[offset:]
    if len(body) != width * height:
        raise ParseError(
            f"{name}: expected {width * height} pixel bytes, got {len(body)}")
    return GrayFrame(width, height, np.frombuffer(body, dtype=np.uint8))


def write_pgm(frame: GrayFrame, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii"))
        fh.write(frame.pixels.tobytes())


def load_frames_dir(dirpath: str) -> list[GrayFrame]:
    """All *.pgm files in lexicographic order."""
    names = sorted(n for n in os.listdir(dirpath) if n.lower().endswith(".pgm"))
    if not names:
        raise EmptyDataset(f"no .pgm files in {dirpath}")
    return [load_pgm(os.path.join(dirpath, n)) for n in names]


# ---------------------------------------------------------------------------
# State assembly

@dataclass(frozen=True)
class NormalizationStats:
    """Dataset-wide constants recorded at ingestion and reused at serve time."""

    max_chunk_size: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.max_chunk_size) and self.max_chunk_size > 0):
            raise ValidationError("max_chunk_size must be positive and finite")


def compute_norm_stats(dataset: list[VideoTrace]) -> NormalizationStats:
    if not dataset:
        raise EmptyDataset("need at least one trace")
    biggest = 0
    for trace in dataset:
        for chunk in trace.chunks:
            biggest = max(biggest, max(chunk.sizes_by_level))
    return NormalizationStats(max_chunk_size=float(biggest))


@dataclass(frozen=True, eq=False)
class StateObservation:
    """Fixed-shape network input for one decision point.

    Arrays are read-only views; valid_len_p counts the real (non-pad) entries
    of p and is metadata, not a network input.
    """

    tau: np.ndarray
    p: np.ndarray
    q: np.ndarray
    m_vec: np.ndarray
    n_vec: np.ndarray
    phi: float
    delta: float
    valid_len_p: int


class TraceFeatures:
    """Per-chunk state vectors precomputed once per (trace, norm) pair.

    Heavily reused by the simulator and trainer; all arrays are frozen so
    observations can hand out views without copies.
    """

    def __init__(self, trace: VideoTrace, norm: NormalizationStats):
        n = trace.n_chunks
        m = trace.m
        self.n_chunks = n
        self.m_levels = m
        self.delta = trace.original_fps / 60.0
        self.p = np.zeros((n, L_P))
        self.q = np.zeros((n, L_Q))
        self.m_vec = np.zeros((n, L_Q))
        self.n_vec = np.zeros((n, m))
        self.mean_diff = np.zeros(n)
        self.valid_len = np.zeros(n, dtype=np.int64)
        for k, chunk in enumerate(trace.chunks):
            diffs = np.asarray(chunk.frame_diffs, dtype=np.float64)
            _fill_chunk_vectors(diffs, self.p[k], self.q[k], self.m_vec[k])
            self.valid_len[k] = diffs.size
            self.mean_diff[k] = diffs.mean()
            np.clip(np.asarray(chunk.sizes_by_level, dtype=np.float64)
                    / norm.max_chunk_size, 0.0, 1.0, out=self.n_vec[k])
        # tau[k] = mean diffs of the two neighbors; missing neighbors mirror
        # the chunk's own mean.
        self.tau = np.empty((n, K_ADJ))
        self.tau[:, 0] = np.concatenate(([self.mean_diff[0]], self.mean_diff[:-1]))
        self.tau[:, 1] = np.concatenate((self.mean_diff[1:], [self.mean_diff[-1]]))
        for arr in (self.p, self.q, self.m_vec, self.n_vec, self.tau):
            arr.flags.writeable = False


def _fill_chunk_vectors(diffs: np.ndarray, p_out, q_out, m_out) -> None:
    i = diffs.size
    if i > L_P:
        raise ValidationError(f"chunk has {i} diffs; at most {L_P} supported")
    p_out[:i] = diffs
    d = math.ceil(0.1 * i)
    srt = np.sort(diffs)
    q_out[:d] = srt[i - d:][::-1]
    m_out[:d] = srt[:d]


def precompute_features(trace: VideoTrace, norm: NormalizationStats) -> TraceFeatures:
    return TraceFeatures(trace, norm)


def assemble_state(
    trace: VideoTrace,
    next_chunk_idx: int,
    last_level: int,
    norm: NormalizationStats,
    cache: TraceFeatures | None = None,
) -> StateObservation:
    """Pure function of its arguments; `cache` only skips recomputation."""
    if cache is None:
        cache = precompute_features(trace, norm)
    if not 0 <= next_chunk_idx < cache.n_chunks:
        raise IndexOutOfRange(
            f"chunk {next_chunk_idx} outside [0, {cache.n_chunks})")
    m = cache.m_levels
    if not 1 <= last_level <= m:
        raise LevelOutOfRange(f"last_level {last_level} outside [1, {m}]")
    k = next_chunk_idx
    return StateObservation(
        tau=cache.tau[k],
        p=cache.p[k],
        q=cache.q[k],
        m_vec=cache.m_vec[k],
        n_vec=cache.n_vec[k],
        phi=last_level / m,
        delta=cache.delta,
        valid_len_p=int(cache.valid_len[k]),
    )


def observation_from_parts(
    frame_diffs: list[float],
    sizes_by_level: list[float],
    neighbor_mean_diffs: list[float],
    original_fps: int,
    last_level: int,
    norm: NormalizationStats,
) -> StateObservation:
    """Build an observation from raw request fields (service path)."""
    if original_fps not in ALLOWED_FPS:
        raise ValidationError(f"original_fps must be one of {ALLOWED_FPS}")
    diffs = np.asarray(frame_diffs, dtype=np.float64)
    if diffs.ndim != 1 or not 1 <= diffs.size <= L_P:
        raise ValidationError(f"frame_diffs length must be in [1, {L_P}]")
    if not np.all(np.isfinite(diffs)) or diffs.min() < 0.0 or diffs.max() > 1.0:
        raise ValidationError("frame_diffs entries must be finite in [0, 1]")
    sizes = np.asarray(sizes_by_level, dtype=np.float64)
    m = sizes.size
    if m < 2 or not np.all(np.isfinite(sizes)) or sizes.min() <= 0:
        raise ValidationError("sizes_by_level must be >= 2 positive numbers")
    tau = np.asarray(neighbor_mean_diffs, dtype=np.float64)
    if tau.shape != (K_ADJ,) or not np.all(np.isfinite(tau)) \
            or tau.min() < 0.0 or tau.max() > 1.0:
        raise ValidationError(f"neighbor_mean_diffs must be {K_ADJ} values in [0, 1]")
    if not 1 <= last_level <= m:
        raise LevelOutOfRange(f"last_level {last_level} outside [1, {m}]")
    p = np.zeros(L_P)
    q = np.zeros(L_Q)
    m_vec = np.zeros(L_Q)
    _fill_chunk_vectors(diffs, p, q, m_vec)
    return StateObservation(
        tau=tau,
        p=p,
        q=q,
        m_vec=m_vec,
        n_vec=np.clip(sizes / norm.max_chunk_size, 0.0, 1.0),
        phi=last_level / m,
        delta=original_fps / 60.0,
        valid_len_p=int(diffs.size),
    )


# ---------------------------------------------------------------------------
# Y-diff vs SSIM validation corpus

def _smooth_field(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    field = uniform_filter(rng.uniform(0.0, 255.0, shape), size=7, mode="wrap")
    lo, hi = field.min(), field.max()
    return (field - lo) / (hi - lo) * 245.0 + 5.0


def make_correlation_corpus(
    seed: int,
    n_pairs: int = 240,
    shape: tuple[int, int] = (32, 32),
) -> list[tuple[GrayFrame, GrayFrame]]:
    """Frame pairs with perturbation strength swept over [0, 0.85]: y_diff
    should rise and ssim fall as the second frame blends toward an unrelated
    field."""
    if n_pairs < 2:
        raise ValidationError("need at least 2 pairs")
    rng = np.random.default_rng(seed)
    h, w = shape
    pairs = []
    for j in range(n_pairs):
        strength = 0.85 * j / (n_pairs - 1)
        base = _smooth_field(rng, shape)
        other = _smooth_field(rng, shape)
        mixed = (1.0 - strength) * base + strength * other + rng.normal(0.0, 3.0, shape)
        a = GrayFrame(w, h, np.clip(np.rint(base), 0, 255).astype(np.uint8))
        b = GrayFrame(w, h, np.clip(np.rint(mixed), 0, 255).astype(np.uint8))
        pairs.append((a, b))
    return pairs


def ydiff_ssim_correlation(pairs: list[tuple[GrayFrame, GrayFrame]]) -> float:
    """Pearson correlation between y_diff and ssim over frame pairs."""
    if len(pairs) < 2:
        raise ValidationError("need at least 2 pairs")
    ys = np.array([y_diff(a, b) for a, b in pairs])
    ss = np.array([ssim(a, b) for a, b in pairs])
    return float(np.corrcoef(ys, ss)[0, 1])
