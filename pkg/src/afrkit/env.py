"""Chunk-level MDP over a video trace.

One step = one chunk: the agent picks a frame-rate level for the chunk under
the cursor, receives the QoE reward, and sees the observation for the next
chunk. Actions never change which chunks arrive, only the phi component of
future observations, so episodes always run exactly N steps.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ActionOutOfRange, EmptyDataset, EpisodeFinished
from .features import (
    NormalizationStats,
    StateObservation,
    TraceFeatures,
    assemble_state,
    compute_norm_stats,
    precompute_features,
)
from .reward import QoEProfile, chunk_reward, get_profile
from .traces import FrameRateLadder, VideoTrace


@dataclass
class EnvState:
    trace: VideoTrace
    profile: QoEProfile
    norm: NormalizationStats
    cursor: int = 0
    last_level: int = 0
    done: bool = False
    features: TraceFeatures = field(repr=False, default=None)
    ladder: FrameRateLadder = field(repr=False, default=None)

    @property
    def n_chunks(self) -> int:
        return self.trace.n_chunks

    @property
    def m(self) -> int:
        return self.features.m_levels

    def observation(self) -> StateObservation | None:
        if self.done:
            return None
        return assemble_state(self.trace, self.cursor, self.last_level,
                              self.norm, cache=self.features)


def reset(
    trace: VideoTrace,
    profile: QoEProfile,
    norm: NormalizationStats,
    cache: TraceFeatures | None = None,
) -> tuple[EnvState, StateObservation]:
    """Fresh episode at chunk 0; last_level starts at m (original FPS)."""
    features = cache if cache is not None else precompute_features(trace, norm)
    env = EnvState(trace=trace, profile=profile, norm=norm,
                   cursor=0, last_level=features.m_levels, done=False,
                   features=features, ladder=trace.ladder)
    return env, env.observation()


def step(env: EnvState, action: int) -> tuple[float, StateObservation | None, bool]:
    """Play the chunk under the cursor at `action`; returns (reward,
    next_obs or None, done)."""
    if env.done:
        raise EpisodeFinished("episode already ended")
    if not isinstance(action, (int, np.integer)) or not 1 <= action <= env.m:
        raise ActionOutOfRange(f"action {action!r} outside [1, {env.m}]")
    rwd = chunk_reward(env.trace.chunks[env.cursor], int(action),
                       env.profile, env.ladder).total
    env.last_level = int(action)
    env.cursor += 1
    env.done = env.cursor == env.n_chunks
    return rwd, env.observation(), env.done


@dataclass(frozen=True)
class BenchmarkResult:
    chunk_steps_per_second: float
    sim_seconds_per_wall_second: float

    @property
    def simulated_hours_per_minute(self) -> float:
        return self.sim_seconds_per_wall_second / 60.0


def throughput_benchmark(
    dataset: list[VideoTrace],
    seconds: float,
    profile: QoEProfile | None = None,
    seed: int = 0,
) -> BenchmarkResult:
    """Random-policy episodes for a wall-clock budget; reports both the raw
    chunk-step rate and the simulated-time speedup."""
    if not dataset:
        raise EmptyDataset("need at least one trace")
    profile = profile or get_profile("qoe_b")
    norm = compute_norm_stats(dataset)
    caches = [precompute_features(t, norm) for t in dataset]
    rng = np.random.default_rng(seed)
    steps = 0
    sim_seconds = 0.0
    deadline = time.perf_counter() + seconds
    idx = 0
    while time.perf_counter() < deadline:
        trace = dataset[idx % len(dataset)]
        cache = caches[idx % len(dataset)]
        idx += 1
        env, _ = reset(trace, profile, norm, cache=cache)
        m = env.m
        actions = rng.integers(1, m + 1, size=env.n_chunks)
        for a in actions:
            step(env, int(a))
        steps += env.n_chunks
        sim_seconds += env.n_chunks * trace.chunk_duration_s
    wall = seconds + (time.perf_counter() - deadline)
    return BenchmarkResult(
        chunk_steps_per_second=steps / wall,
        sim_seconds_per_wall_second=sim_seconds / wall,
    )
