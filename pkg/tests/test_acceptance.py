"""End-to-end acceptance gate.

One test per shipped guarantee, in order: gradient fidelity, oracle
optimality, policy learning quality, motion adaptivity, profile ordering,
entropy regularization, metric anticorrelation, determinism and formats,
ladder transform correctness, simulator throughput.

The policy-learning runs train full-size networks for 20,000 iterations and
dominate the suite's runtime; they are shared across criteria via
module-scoped fixtures.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from afrkit import (
    PRESETS,
    TrainConfig,
    backward_actor,
    backward_critic,
    build_network,
    chunk_reward,
    decide,
    episode_reward,
    evaluate,
    forward_actor_batch,
    forward_critic_batch,
    generate_dataset,
    generate_synthetic,
    greedy_oracle,
    load_checkpoint,
    load_trace,
    make_correlation_corpus,
    run_server_in_thread,
    save_checkpoint,
    save_trace,
    schedule_video,
    serve,
    throughput_benchmark,
    train,
    transform_action,
    ydiff_ssim_correlation,
)
from afrkit.nn import stack_observations

from test_nn import (
    max_block_relative_error,
    numeric_grads,
    randomize_biases,
    relu_kink_margin,
    small_obs,
    small_topology,
)
from test_service import http_call, request_for_chunk

TRAIN_CORPUS_SEED = 501
HELD_OUT_SEED = 502
QOEB_SEED = 3301
QOEQ_SEED = 3302
ENTROPY_SEED = 3303

LN5 = math.log(5.0)


@pytest.fixture(scope="module")
def corpus():
    return (generate_dataset(200, seed=TRAIN_CORPUS_SEED),
            generate_dataset(40, seed=HELD_OUT_SEED))


def _policy_run(corpus, tmp_path_factory, profile_name, seed, **overrides):
    train_set, _ = corpus
    config = TrainConfig(max_iterations=20_000, n_workers=16, seed=seed,
                         **overrides)
    out = tmp_path_factory.mktemp(f"run_{profile_name}_{seed}")
    started = time.perf_counter()
    result = train(train_set, PRESETS[profile_name], config, str(out))
    minutes = (time.perf_counter() - started) / 60.0
    return load_checkpoint(result.checkpoint_path), result, minutes


@pytest.fixture(scope="module")
def qoeb_run(corpus, tmp_path_factory):
    return _policy_run(corpus, tmp_path_factory, "qoe_b", QOEB_SEED)


@pytest.fixture(scope="module")
def qoeq_run(corpus, tmp_path_factory):
    return _policy_run(corpus, tmp_path_factory, "qoe_q", QOEQ_SEED)


def metric_column(metrics_path, column, tail=None):
    with open(metrics_path) as fh:
        header = fh.readline().strip().split(",")
        idx = header.index(column)
        rows = [ln.strip().split(",") for ln in fh if not ln.startswith("#")]
    values = [float(r[idx]) for r in rows]
    return values[-tail:] if tail else values


def test_criterion_01_gradient_fidelity(rng):
    started = time.perf_counter()
    checked = 0
    for kind in ("actor", "critic"):
        for seed in range(12):
            width = int(rng.integers(3, 7))
            layers = int(rng.integers(1, 3))
            n_actions = int(rng.integers(3, 6))
            topo = small_topology(kind, width=width, hidden_layers=layers,
                                  n_actions=n_actions)
            params = build_network(kind, topology=topo, seed=1000 + seed)
            assert sum(b.size for b in params.blocks) <= 500
            observations = [small_obs(rng) for _ in range(3)]
            batch = stack_observations(observations, topo)
            while relu_kink_margin(params, batch) <= 1e-5:
                randomize_biases(params, rng)
            if kind == "actor":
                beta = 0.1
                actions = rng.integers(1, n_actions + 1, size=3)
                advantages = rng.normal(size=3)

                def objective():
                    _, tr = forward_actor_batch(params, batch)
                    logp = tr.logprobs[np.arange(3), actions - 1]
                    ent = -(tr.probs * np.where(tr.probs > 0, tr.logprobs, 0.0)
                            ).sum(axis=1)
                    return float((advantages * logp + beta * ent).sum())

                _, trace = forward_actor_batch(params, batch)
                analytic = backward_actor(params, trace, actions, advantages, beta)
            else:
                targets = rng.normal(size=3)

                def objective():
                    values, _ = forward_critic_batch(params, batch)
                    return float(((values - targets) ** 2).sum())

                _, trace = forward_critic_batch(params, batch)
                analytic = backward_critic(params, trace, targets)
            error = max_block_relative_error(
                analytic, numeric_grads(objective, params))
            assert error <= 1e-4, f"{kind} net {seed}: rel error {error}"
            checked += 1
    elapsed = time.perf_counter() - started
    assert checked >= 20
    assert elapsed < 120.0
    print(f"criterion 1 PASS: {checked} nets <= 1e-4 in {elapsed:.1f}s")


def test_criterion_02_oracle_attains_enumerated_maximum():
    started = time.perf_counter()
    traces = [generate_synthetic(kind, n, seed=seed)
              for kind in ("static", "dynamic", "hybrid")
              for n in range(1, 7)
              for seed in (5, 6)]
    checked = 0
    for trace in traces:
        ladder = trace.ladder
        m = trace.m
        tables = [[chunk_reward(c, lv, p, ladder).total
                   for lv in range(1, m + 1)]
                  for p in (PRESETS["qoe_q"], PRESETS["qoe_b"])
                  for c in trace.chunks]
        for profile, offset in ((PRESETS["qoe_q"], 0),
                                (PRESETS["qoe_b"], trace.n_chunks)):
            table = tables[offset:offset + trace.n_chunks]
            best = max(sum(row[lv - 1] for row, lv in zip(table, combo))
                       for combo in itertools.product(
                           range(1, m + 1), repeat=trace.n_chunks))
            oracle_levels = greedy_oracle(trace, profile)
            oracle_total = sum(row[lv - 1]
                               for row, lv in zip(table, oracle_levels))
            assert oracle_total == best, (trace.video_id, profile.name)
            checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    print(f"criterion 2 PASS: {checked} exhaustive enumerations in {elapsed:.1f}s")


def agreement_and_regret(checkpoint, dataset, profile):
    agree = total = 0
    model_sum = oracle_sum = oracle_abs = 0.0
    for trace in dataset:
        model_levels = schedule_video(checkpoint, trace)
        oracle_levels = greedy_oracle(trace, profile)
        agree += sum(1 for a, b in zip(model_levels, oracle_levels) if a == b)
        total += len(oracle_levels)
        oracle_reward = episode_reward(trace, oracle_levels, profile)
        model_sum += episode_reward(trace, model_levels, profile)
        oracle_sum += oracle_reward
        oracle_abs += abs(oracle_reward)
    return agree / total, (oracle_sum - model_sum) / oracle_abs


def test_criterion_03_policy_learning(corpus, qoeb_run):
    _, held_out = corpus
    checkpoint, _, minutes = qoeb_run
    agreement, regret = agreement_and_regret(
        checkpoint, held_out, PRESETS["qoe_b"])
    assert agreement >= 0.85, f"oracle agreement {agreement:.3f} < 0.85"
    assert regret <= 0.05, f"reward shortfall {regret:.3f} of |oracle| > 0.05"
    assert minutes <= 45.0, f"training took {minutes:.1f} min"
    print(f"criterion 3 PASS: agreement={agreement:.3f} "
          f"regret={regret:.4f} train={minutes:.1f}min")


def test_criterion_04_motion_adaptive_fps(corpus, qoeb_run):
    _, held_out = corpus
    checkpoint, _, _ = qoeb_run
    report = evaluate(checkpoint, held_out, PRESETS["qoe_b"])
    rows = {(r.category, r.policy): r for r in report.rows}
    static = rows[("static", "model")]
    dynamic = rows[("dynamic", "model")]
    assert static.fps_pct + 20.0 <= dynamic.fps_pct, (
        f"static {static.fps_pct:.1f}% vs dynamic {dynamic.fps_pct:.1f}%")
    assert static.quality_pct >= 90.0
    assert dynamic.quality_pct >= 90.0
    print(f"criterion 4 PASS: fps static={static.fps_pct:.1f}% "
          f"dynamic={dynamic.fps_pct:.1f}% "
          f"quality=({static.quality_pct:.1f}%, {dynamic.quality_pct:.1f}%)")


def test_criterion_05_profile_ordering(corpus, qoeb_run, qoeq_run):
    _, held_out = corpus
    ckpt_b, _, _ = qoeb_run
    ckpt_q, _, _ = qoeq_run
    row_b = next(r for r in evaluate(ckpt_b, held_out, PRESETS["qoe_b"]).rows
                 if (r.category, r.policy) == ("overall", "model"))
    row_q = next(r for r in evaluate(ckpt_q, held_out, PRESETS["qoe_q"]).rows
                 if (r.category, r.policy) == ("overall", "model"))
    assert row_b.fps_pct <= row_q.fps_pct, (
        f"fps qoe_b {row_b.fps_pct:.1f}% > qoe_q {row_q.fps_pct:.1f}%")
    assert row_q.quality_pct >= row_b.quality_pct, (
        f"quality qoe_q {row_q.quality_pct:.1f}% < qoe_b {row_b.quality_pct:.1f}%")
    print(f"criterion 5 PASS: fps {row_b.fps_pct:.1f}% <= {row_q.fps_pct:.1f}%, "
          f"quality {row_q.quality_pct:.1f}% >= {row_b.quality_pct:.1f}%")


def test_criterion_06_entropy_regularization(corpus, qoeb_run, tmp_path_factory):
    train_set, _ = corpus
    config = TrainConfig(max_iterations=5_000, n_workers=16,
                         beta_start=5.0, beta_end=5.0, seed=ENTROPY_SEED)
    out = tmp_path_factory.mktemp("run_entropy")
    result = train(train_set, PRESETS["qoe_b"], config, str(out))
    high_beta = float(np.mean(metric_column(result.metrics_path,
                                            "mean_entropy", tail=500)))
    assert high_beta >= 0.9 * LN5, f"entropy {high_beta:.3f} < {0.9 * LN5:.3f}"

    _, qoeb_result, _ = qoeb_run
    decayed = float(np.mean(metric_column(qoeb_result.metrics_path,
                                          "mean_entropy", tail=500)))
    assert decayed < 0.5 * LN5, f"entropy {decayed:.3f} >= {0.5 * LN5:.3f}"
    print(f"criterion 6 PASS: beta=5.0 entropy={high_beta:.3f} "
          f">= {0.9 * LN5:.3f}; decayed-beta entropy={decayed:.3f} "
          f"< {0.5 * LN5:.3f}")


def test_criterion_07_ydiff_ssim_anticorrelation():
    pairs = make_correlation_corpus(seed=29)
    r = ydiff_ssim_correlation(pairs)
    assert r <= -0.7, f"pearson r {r:.4f} > -0.7"
    print(f"criterion 7 PASS: pearson r={r:.4f} over {len(pairs)} pairs")


def test_criterion_08_determinism_and_formats(tmp_path_factory, small_dataset):
    base = tmp_path_factory.mktemp("determinism")
    dataset = generate_dataset(4, seed=88, chunks_range=(6, 10))
    config = TrainConfig(n_workers=1, max_iterations=40, rollout_len=16,
                         checkpoint_interval=0, seed=1234)
    runs = []
    for tag in ("a", "b"):
        result = train(dataset, PRESETS["qoe_b"], config, str(base / tag))
        with open(result.checkpoint_path, "rb") as fh:
            raw = fh.read()
        with open(result.metrics_path) as fh:
            rows = [ln.strip().split(",") for ln in fh][1:]
        no_wall = [[c for i, c in enumerate(r) if i != 1] for r in rows]
        runs.append((raw, no_wall, result.checkpoint_path))
    assert runs[0][0] == runs[1][0], "single-worker run not bit-reproducible"
    assert runs[0][1] == runs[1][1]

    trace = small_dataset[0]
    t1 = base / "t1.json"
    t2 = base / "t2.json"
    save_trace(trace, str(t1))
    save_trace(load_trace(str(t1)), str(t2))
    assert t1.read_bytes() == t2.read_bytes()

    ckpt_path = runs[0][2]
    resaved = base / "resaved.bin"
    save_checkpoint(load_checkpoint(ckpt_path), str(resaved))
    with open(ckpt_path, "rb") as fh:
        assert fh.read() == resaved.read_bytes()

    server = serve(ckpt_path, "127.0.0.1:0")
    thread = run_server_in_thread(server)
    try:
        req = request_for_chunk(trace, 0, trace.m,
                                qoe_profile_name="qoe_b")
        payload = {
            "frame_diffs": req.frame_diffs,
            "sizes_by_level": req.sizes_by_level,
            "neighbor_mean_diffs": req.neighbor_mean_diffs,
            "original_fps": req.original_fps,
            "last_level": req.last_level,
            "qoe_profile_name": req.qoe_profile_name,
        }
        status1, body1 = http_call(server, "POST", "/v1/decide", payload)
        status2, body2 = http_call(server, "POST", "/v1/decide", payload)
        assert status1 == status2 == 200
        assert body1 == body2
        expected = decide(load_checkpoint(ckpt_path), req)
        assert json.loads(body1)["level"] == expected.level
    finally:
        server.shutdown()
        thread.join(timeout=5)
    print("criterion 8 PASS: bit-identical runs, files, and service replies")


def test_criterion_09_transform_exhaustive():
    checked = 0
    for source in range(2, 11):
        for target in range(1, 11):
            mapped = [transform_action(a, target, source)
                      for a in range(1, source + 1)]
            assert all(1 <= v <= target for v in mapped)
            assert all(b >= a for a, b in zip(mapped, mapped[1:]))
            if target == source:
                assert mapped == list(range(1, source + 1))
            checked += len(mapped)
    print(f"criterion 9 PASS: {checked} (|D|, |T|, a) combinations")


def test_criterion_10_simulator_throughput():
    dataset = generate_dataset(8, seed=55)
    result = throughput_benchmark(dataset, seconds=2.0)
    assert result.chunk_steps_per_second >= 10_000, (
        f"{result.chunk_steps_per_second:.0f} chunk-steps/s < 10000")
    print(f"criterion 10 PASS: {result.chunk_steps_per_second:,.0f} "
          f"chunk-steps/s "
          f"({result.simulated_hours_per_minute:,.0f} sim-hours/min)")
