"""Per-chunk QoE reward and the exact per-chunk oracle.

R(chunk, level) = mu1*q + mu2*q_diff + bonus - penalty - mu3*e, where q is
quality/100, q_diff the quality gain over the next lower level (0 at the
lowest), bonus/penalty are step functions of the raw quality score, and e is
the chosen-fps fraction of the original. The reward is additive across chunks
and independent of other chunks' actions, so per-chunk argmax is exactly
optimal; greedy_oracle exploits that.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import InvalidProfile, LengthMismatch, LevelOutOfRange, ParseError
from .traces import ChunkRecord, FrameRateLadder, VideoTrace


@dataclass(frozen=True)
class QoEProfile:
    name: str
    mu1: float
    mu2: float
    mu3: float
    bonus_threshold: float
    bonus_value: float
    penalty_threshold: float
    penalty_value: float

    def __post_init__(self) -> None:
        values = (self.mu1, self.mu2, self.mu3, self.bonus_threshold,
                  self.bonus_value, self.penalty_threshold, self.penalty_value)
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in values):
            raise InvalidProfile("profile constants must be finite numbers")
        if self.mu1 < 0 or self.mu2 < 0 or self.mu3 < 0:
            raise InvalidProfile("mu factors must be >= 0")
        if not (0 <= self.bonus_threshold <= 100 and 0 <= self.penalty_threshold <= 100):
            raise InvalidProfile("thresholds must be in [0, 100]")
        if self.penalty_value < 0:
            raise InvalidProfile("penalty_value must be >= 0")


# Quality-first and battery-first parameterizations.
PRESETS = {
    "qoe_q": QoEProfile("qoe_q", mu1=7.0, mu2=2.5, mu3=14.0,
                        bonus_threshold=98.0, bonus_value=5.0,
                        penalty_threshold=90.0, penalty_value=15.0),
    "qoe_b": QoEProfile("qoe_b", mu1=4.0, mu2=2.0, mu3=17.0,
                        bonus_threshold=98.0, bonus_value=2.0,
                        penalty_threshold=85.0, penalty_value=15.0),
}


def get_profile(name: str) -> QoEProfile:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidProfile(
            f"unknown profile {name!r}; built-ins: {sorted(PRESETS)}") from None


_PROFILE_KEYS = ("name", "mu1", "mu2", "mu3", "bonus_threshold",
                 "bonus_value", "penalty_threshold", "penalty_value")


def load_profile(path: str) -> QoEProfile:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != set(_PROFILE_KEYS):
        raise ParseError(f"profile file must have exactly the fields {_PROFILE_KEYS}")
    if not isinstance(obj["name"], str):
        raise ParseError("profile name must be a string")
    return QoEProfile(**{k: obj[k] if k == "name" else float(obj[k])
                         for k in _PROFILE_KEYS})


def save_profile(profile: QoEProfile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({k: getattr(profile, k) for k in _PROFILE_KEYS}, fh)
        fh.write("\n")


@dataclass(frozen=True)
class RewardBreakdown:
    quality_term: float
    quality_diff_term: float
    bonus: float
    penalty: float
    energy_term: float
    total: float


def chunk_reward(
    chunk: ChunkRecord,
    level: int,
    profile: QoEProfile,
    ladder: FrameRateLadder,
) -> RewardBreakdown:
    """Reward for playing `chunk` at `level` (1-based)."""
    m = ladder.m
    if not 1 <= level <= m:
        raise LevelOutOfRange(f"level {level} outside [1, {m}]")
    quality = chunk.quality_by_level[level - 1]
    q_hat = quality / 100.0
    if level > 1:
        qdiff_hat = (quality - chunk.quality_by_level[level - 2]) / 100.0
    else:
        qdiff_hat = 0.0
    bonus = profile.bonus_value if quality >= profile.bonus_threshold else 0.0
    penalty = profile.penalty_value if quality < profile.penalty_threshold else 0.0
    e_hat = ladder.fps_for(level) / ladder.original_fps
    quality_term = profile.mu1 * q_hat
    quality_diff_term = profile.mu2 * qdiff_hat
    energy_term = profile.mu3 * e_hat
    return RewardBreakdown(
        quality_term=quality_term,
        quality_diff_term=quality_diff_term,
        bonus=bonus,
        penalty=penalty,
        energy_term=energy_term,
        total=quality_term + quality_diff_term + bonus - penalty - energy_term,
    )


def episode_reward(trace: VideoTrace, levels: list[int], profile: QoEProfile) -> float:
    if len(levels) != trace.n_chunks:
        raise LengthMismatch(
            f"{len(levels)} levels for {trace.n_chunks} chunks")
    ladder = trace.ladder
    return sum(chunk_reward(chunk, level, profile, ladder).total
               for chunk, level in zip(trace.chunks, levels))


def greedy_oracle(trace: VideoTrace, profile: QoEProfile) -> list[int]:
    """Per-chunk argmax of the reward; ties break toward the lower level
    (more energy saving). Exactly optimal because the reward is additive."""
    ladder = trace.ladder
    m = ladder.m
    out = []
    for chunk in trace.chunks:
        best_level = 1
        best_total = chunk_reward(chunk, 1, profile, ladder).total
        for level in range(2, m + 1):
            total = chunk_reward(chunk, level, profile, ladder).total
            if total > best_total:
                best_level, best_total = level, total
        out.append(best_level)
    return out
