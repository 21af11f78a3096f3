import math

import numpy as np
import pytest

from afrkit import (
    compute_norm_stats,
    episode_reward,
    generate_synthetic,
    precompute_features,
    reset,
    step,
    throughput_benchmark,
)
from afrkit.errors import ActionOutOfRange, EmptyDataset, EpisodeFinished


def test_reset_initial_state(small_dataset, small_norm, qoe_q):
    trace = small_dataset[0]
    env, obs = reset(trace, qoe_q, small_norm)
    assert env.cursor == 0
    assert env.last_level == trace.m
    assert not env.done
    assert obs.phi == 1.0
    assert obs.delta == trace.original_fps / 60.0


def test_reset_is_deterministic(small_dataset, small_norm, qoe_q):
    trace = small_dataset[0]
    _, a = reset(trace, qoe_q, small_norm)
    _, b = reset(trace, qoe_q, small_norm)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.tau, b.tau)
    assert (a.phi, a.delta) == (b.phi, b.delta)


def test_single_chunk_episode(small_norm, qoe_q):
    trace = generate_synthetic("static", 1, seed=2)
    env, obs = reset(trace, qoe_q, small_norm)
    reward, next_obs, done = step(env, 3)
    assert done and next_obs is None
    assert env.done and env.cursor == 1
    assert env.observation() is None


def test_episode_length_and_reward_sum(small_dataset, small_norm, qoe_q):
    trace = small_dataset[1]
    actions = [1 + (k * 2) % trace.m for k in range(trace.n_chunks)]
    env, obs = reset(trace, qoe_q, small_norm)
    total = 0.0
    steps = 0
    done = False
    while not done:
        reward, obs, done = step(env, actions[steps])
        total += reward
        steps += 1
    assert steps == trace.n_chunks
    assert math.isclose(total, episode_reward(trace, actions, qoe_q), abs_tol=1e-9)


def test_step_updates_phi_from_action(small_dataset, small_norm, qoe_q):
    trace = small_dataset[0]
    env, obs = reset(trace, qoe_q, small_norm)
    _, obs2, _ = step(env, 2)
    assert env.last_level == 2
    assert obs2.phi == 2 / trace.m


def test_env_determinism(small_dataset, small_norm, qoe_b):
    trace = small_dataset[2]
    actions = [1 + k % trace.m for k in range(trace.n_chunks)]

    def run():
        env, obs = reset(trace, qoe_b, small_norm)
        rewards, phis = [], [obs.phi]
        for a in actions:
            r, obs, done = step(env, a)
            rewards.append(r)
            if obs is not None:
                phis.append(obs.phi)
        return rewards, phis

    assert run() == run()


def test_step_after_done_raises(small_norm, qoe_q):
    trace = generate_synthetic("static", 1, seed=2)
    env, _ = reset(trace, qoe_q, small_norm)
    step(env, 1)
    with pytest.raises(EpisodeFinished):
        step(env, 1)


def test_bad_actions_rejected(small_dataset, small_norm, qoe_q):
    trace = small_dataset[0]
    env, _ = reset(trace, qoe_q, small_norm)
    for bad in (0, 6, -1, 2.5):
        with pytest.raises(ActionOutOfRange):
            step(env, bad)
    assert env.cursor == 0  # rejected actions must not advance the episode


def test_reset_accepts_precomputed_cache(small_dataset, small_norm, qoe_q):
    trace = small_dataset[0]
    cache = precompute_features(trace, small_norm)
    env, obs = reset(trace, qoe_q, small_norm, cache=cache)
    plain_env, plain_obs = reset(trace, qoe_q, small_norm)
    assert np.array_equal(obs.p, plain_obs.p)
    r1, _, _ = step(env, 2)
    r2, _, _ = step(plain_env, 2)
    assert r1 == r2


def test_throughput_benchmark_reports_positive_rates(small_dataset):
    result = throughput_benchmark(small_dataset, seconds=0.2)
    assert result.chunk_steps_per_second > 0
    assert result.sim_seconds_per_wall_second > 0
    # each chunk is 2 simulated seconds
    assert math.isclose(
        result.sim_seconds_per_wall_second,
        result.chunk_steps_per_second * 2.0, rel_tol=1e-9)
    assert math.isclose(result.simulated_hours_per_minute,
                        result.sim_seconds_per_wall_second / 60.0, rel_tol=1e-9)
    with pytest.raises(EmptyDataset):
        throughput_benchmark([], seconds=0.1)


def test_throughput_scales_with_chunk_count():
    # per-chunk cost must stay flat as traces get longer
    short = [generate_synthetic("hybrid", 10, seed=s) for s in range(3)]
    long = [generate_synthetic("hybrid", 20, seed=s) for s in range(3)]
    r_short = throughput_benchmark(short, seconds=0.3)
    r_long = throughput_benchmark(long, seconds=0.3)
    ratio = r_long.chunk_steps_per_second / r_short.chunk_steps_per_second
    assert 0.5 < ratio < 2.0
