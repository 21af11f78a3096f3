"""Video chunk traces: data model, canonical JSON files, synthetic generator.

A trace is the unit every other module consumes: an ordered list of chunks,
each carrying raw luminance frame differences plus per-level size and quality
columns. Files round-trip bit-exactly (load -> save reproduces the bytes), so
frame_diffs are restricted to at most 6 fractional digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidProfile, ParseError, ValidationError

ALLOWED_FPS = (24, 30, 60)
# State vectors downstream are sized for two seconds at 60 fps.
MAX_FRAMES_PER_CHUNK = 120

# Synthetic generator constants. Quality follows
# q_i = 100 - QUALITY_DROP * iota * (1 - level_i/original_fps)^QUALITY_EXP,
# monotone in both fps and motion; sizes shrink to ~81% of the top level at
# the lowest frame rate and scale with quality.
QUALITY_DROP = 60.0
QUALITY_EXP = 1.2
SIZE_FLOOR = 0.81
SIZE_SLOPE = 0.19
BASE_CHUNK_BYTES = 500_000
DIFF_NOISE_SIGMA = 0.05

# Motion-intensity draw ranges per profile archetype.
STATIC_IOTA = (0.02, 0.15)
DYNAMIC_IOTA = (0.72, 0.95)
HYBRID_LOW_IOTA = (0.05, 0.40)
HYBRID_HIGH_IOTA = (0.55, 0.90)
DEFAULT_SWITCH_PERIOD = 6

PROFILE_KINDS = ("static", "dynamic", "hybrid")


@dataclass(frozen=True)
class MotionProfile:
    """Archetype controlling how per-chunk motion intensity is drawn.

    hybrid alternates low/high blocks of switch_period chunks, starting low.
    """

    kind: str
    switch_period: int = DEFAULT_SWITCH_PERIOD

    def __post_init__(self) -> None:
        if self.kind not in PROFILE_KINDS:
            raise InvalidProfile(f"unknown motion profile kind: {self.kind!r}")
        if self.switch_period < 1:
            raise InvalidProfile("switch_period must be >= 1")


@dataclass(frozen=True)
class FrameRateLadder:
    """The m selectable frame rates for a video: original_fps * i/m, i=1..m."""

    original_fps: int
    m: int

    def __post_init__(self) -> None:
        if self.original_fps not in ALLOWED_FPS:
            raise ValidationError(f"original_fps must be one of {ALLOWED_FPS}")
        if self.m < 2:
            raise ValidationError("ladder needs at least 2 levels")

    @property
    def levels(self) -> list[float]:
        return [self.original_fps * i / self.m for i in range(1, self.m + 1)]

    def fps_for(self, level: int) -> float:
        if not 1 <= level <= self.m:
            raise ValidationError(f"level {level} outside [1, {self.m}]")
        return self.original_fps * level / self.m


@dataclass
class ChunkRecord:
    """One chunk: raw consecutive-frame diffs plus per-level columns."""

    index: int
    frame_diffs: list[float]
    sizes_by_level: list[int]
    quality_by_level: list[float]


@dataclass
class VideoTrace:
    video_id: str
    original_fps: int
    chunk_duration_s: float
    category_tag: str
    chunks: list[ChunkRecord] = field(default_factory=list)

    @property
    def n_chunks(self) -> int:
        return len(self.chunks)

    @property
    def m(self) -> int:
        if not self.chunks:
            raise ValidationError("trace has no chunks")
        return len(self.chunks[0].sizes_by_level)

    @property
    def ladder(self) -> FrameRateLadder:
        return FrameRateLadder(self.original_fps, self.m)

    def validate(self) -> None:
        """Raise ValidationError on the first violated invariant."""
        if not self.video_id:
            raise ValidationError("video_id must be non-empty")
        if self.original_fps not in ALLOWED_FPS:
            raise ValidationError(f"original_fps must be one of {ALLOWED_FPS}")
        if not (isinstance(self.chunk_duration_s, (int, float)) and self.chunk_duration_s > 0):
            raise ValidationError("chunk_duration_s must be positive")
        frames = self.original_fps * self.chunk_duration_s
        if round(frames) > MAX_FRAMES_PER_CHUNK:
            raise ValidationError(
                f"chunk spans {frames:.0f} frames; at most {MAX_FRAMES_PER_CHUNK} supported")
        if not self.chunks:
            raise ValidationError("trace must contain at least one chunk")
        m = len(self.chunks[0].sizes_by_level)
        if m < 2:
            raise ValidationError("need at least 2 frame-rate levels")
        max_diffs = int(round(frames)) - 1
        for pos, chunk in enumerate(self.chunks):
            where = f"chunk {pos}"
            if chunk.index != pos:
                raise ValidationError(f"{where}: index {chunk.index} != position {pos}")
            if not 1 <= len(chunk.frame_diffs) <= max_diffs:
                raise ValidationError(
                    f"{where}: {len(chunk.frame_diffs)} frame_diffs outside [1, {max_diffs}]")
            for d in chunk.frame_diffs:
                if not (isinstance(d, (int, float)) and math.isfinite(d) and 0.0 <= d <= 1.0):
                    raise ValidationError(f"{where}: frame diff {d!r} outside [0, 1]")
                if round(d, 6) != d:
                    raise ValidationError(
                        f"{where}: frame diff {d!r} has more than 6 fractional digits")
            if len(chunk.sizes_by_level) != m or len(chunk.quality_by_level) != m:
                raise ValidationError(f"{where}: per-level columns must all have length {m}")
            prev_size = 0
            for s in chunk.sizes_by_level:
                if not (isinstance(s, int) and s > 0):
                    raise ValidationError(f"{where}: sizes must be positive integers")
                if s < prev_size:
                    raise ValidationError(f"{where}: sizes_by_level must be non-decreasing")
                prev_size = s
            prev_q = 0.0
            for q in chunk.quality_by_level:
                if not (isinstance(q, (int, float)) and math.isfinite(q) and 0.0 <= q <= 100.0):
                    raise ValidationError(f"{where}: quality {q!r} outside [0, 100]")
                if q < prev_q:
                    raise ValidationError(f"{where}: quality_by_level must be non-decreasing")
                prev_q = q


def _trace_to_obj(trace: VideoTrace) -> dict:
    return {
        "video_id": trace.video_id,
        "original_fps": trace.original_fps,
        "chunk_duration_s": trace.chunk_duration_s,
        "category_tag": trace.category_tag,
        "chunks": [
            {
                "index": c.index,
                "frame_diffs": c.frame_diffs,
                "sizes_by_level": c.sizes_by_level,
                "quality_by_level": c.quality_by_level,
            }
            for c in trace.chunks
        ],
    }


def trace_to_json(trace: VideoTrace) -> str:
    """Canonical single-line JSON; validates first."""
    trace.validate()
    return json.dumps(_trace_to_obj(trace), separators=(",", ":")) + "\n"


def save_trace(trace: VideoTrace, path: str) -> None:
    text = trace_to_json(trace)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _require(obj: dict, key: str, kinds, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kinds):
        raise ParseError(f"{where}: field {key!r} has wrong type {type(val).__name__}")
    return val


_TRACE_KEYS = {"video_id", "original_fps", "chunk_duration_s", "category_tag", "chunks"}
_CHUNK_KEYS = {"index", "frame_diffs", "sizes_by_level", "quality_by_level"}


def trace_from_json(text: str) -> VideoTrace:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    extra = set(obj) - _TRACE_KEYS
    if extra:
        raise ParseError(f"unknown trace fields: {sorted(extra)}")
    chunks_raw = _require(obj, "chunks", list, "trace")
    chunks = []
    for i, cobj in enumerate(chunks_raw):
        where = f"chunk {i}"
        if not isinstance(cobj, dict):
            raise ParseError(f"{where}: must be an object")
        extra = set(cobj) - _CHUNK_KEYS
        if extra:
            raise ParseError(f"{where}: unknown fields {sorted(extra)}")
        chunks.append(ChunkRecord(
            index=_require(cobj, "index", int, where),
            frame_diffs=[float(x) for x in _require(cobj, "frame_diffs", list, where)],
            sizes_by_level=list(_require(cobj, "sizes_by_level", list, where)),
            quality_by_level=[float(x) for x in _require(cobj, "quality_by_level", list, where)],
        ))
    fps = _require(obj, "original_fps", int, "trace")
    if isinstance(fps, bool):
        raise ParseError("original_fps must be an integer")
    trace = VideoTrace(
        video_id=_require(obj, "video_id", str, "trace"),
        original_fps=fps,
        chunk_duration_s=float(_require(obj, "chunk_duration_s", (int, float), "trace")),
        category_tag=_require(obj, "category_tag", str, "trace"),
        chunks=chunks,
    )
    trace.validate()
    return trace


def load_trace(path: str) -> VideoTrace:
    with open(path, "r", encoding="utf-8") as fh:
        return trace_from_json(fh.read())


def _draw_intensities(profile: MotionProfile, n_chunks: int, rng: np.random.Generator) -> np.ndarray:
    if profile.kind == "static":
        return rng.uniform(*STATIC_IOTA, size=n_chunks)
    if profile.kind == "dynamic":
        return rng.uniform(*DYNAMIC_IOTA, size=n_chunks)
    iotas = np.empty(n_chunks)
    for k in range(n_chunks):
        low_block = (k // profile.switch_period) % 2 == 0
        lo, hi = HYBRID_LOW_IOTA if low_block else HYBRID_HIGH_IOTA
        iotas[k] = rng.uniform(lo, hi)
    return iotas


def generate_synthetic(
    profile: MotionProfile | str,
    n_chunks: int,
    seed: int,
    original_fps: int = 60,
    chunk_duration_s: float = 2.0,
    m: int = 5,
    video_id: str | None = None,
) -> VideoTrace:
    """Deterministic synthetic trace; pure function of its arguments.

    Per chunk, a motion intensity iota is drawn from the profile's range,
    frame diffs are iota plus Gaussian noise (clamped to [0,1], rounded to
    6 digits so the file format is exact), and the per-level columns follow
    the quality/size formulas in the module docstring.
    """
    if isinstance(profile, str):
        profile = MotionProfile(profile)
    if n_chunks < 1:
        raise ValidationError("n_chunks must be >= 1")
    ladder = FrameRateLadder(original_fps, m)
    rng = np.random.default_rng(seed)
    iotas = _draw_intensities(profile, n_chunks, rng)
    n_diffs = int(round(original_fps * chunk_duration_s)) - 1
    ratios = np.array(ladder.levels) / original_fps
    chunks = []
    for k in range(n_chunks):
        iota = float(iotas[k])
        diffs = np.clip(iota + rng.normal(0.0, DIFF_NOISE_SIGMA, size=n_diffs), 0.0, 1.0)
        quality = 100.0 - QUALITY_DROP * iota * (1.0 - ratios) ** QUALITY_EXP
        base = BASE_CHUNK_BYTES * (1.0 + iota)
        sizes = base * (SIZE_FLOOR + SIZE_SLOPE * ratios) * (quality / 100.0)
        chunks.append(ChunkRecord(
            index=k,
            frame_diffs=[round(float(d), 6) for d in diffs],
            sizes_by_level=[max(1, int(round(s))) for s in sizes],
            quality_by_level=[float(q) for q in quality],
        ))
    trace = VideoTrace(
        video_id=video_id or f"synth-{profile.kind}-{seed}",
        original_fps=original_fps,
        chunk_duration_s=chunk_duration_s,
        category_tag=profile.kind,
        chunks=chunks,
    )
    trace.validate()
    return trace


def generate_dataset(
    n_traces: int,
    seed: int,
    profiles: tuple[str, ...] = PROFILE_KINDS,
    chunks_range: tuple[int, int] = (15, 45),
    original_fps: int = 60,
) -> list[VideoTrace]:
    """Mixed corpus cycling through profiles; trace k gets seed seed*100000+k."""
    if n_traces < 1:
        raise ValidationError("n_traces must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n_traces):
        kind = profiles[k % len(profiles)]
        n_chunks = int(rng.integers(chunks_range[0], chunks_range[1] + 1))
        out.append(generate_synthetic(
            MotionProfile(kind),
            n_chunks,
            seed=seed * 100_000 + k,
            original_fps=original_fps,
            video_id=f"synth-{kind}-{seed}-{k:04d}",
        ))
    return out
