"""`afr` command line: trace tooling, training, evaluation, serving."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import service
from .env import throughput_benchmark
from .errors import ParseError, ValidationError
from .features import (
    chunk_features,
    load_frames_dir,
    make_correlation_corpus,
    ydiff_ssim_correlation,
)
from .nn import load_checkpoint
from .reward import QoEProfile, chunk_reward, episode_reward, get_profile, load_profile
from .traces import (
    BASE_CHUNK_BYTES,
    QUALITY_DROP,
    QUALITY_EXP,
    SIZE_FLOOR,
    SIZE_SLOPE,
    ChunkRecord,
    FrameRateLadder,
    VideoTrace,
    generate_synthetic,
    load_trace,
    save_trace,
)
from .training import TrainConfig, train


def _resolve_profile(text: str) -> QoEProfile:
    if text.endswith(".json") or os.sep in text:
        return load_profile(text)
    return get_profile(text)


def load_dataset(dirpath: str) -> list[VideoTrace]:
    names = sorted(n for n in os.listdir(dirpath) if n.endswith(".json"))
    if not names:
        raise ValidationError(f"no trace .json files in {dirpath}")
    return [load_trace(os.path.join(dirpath, n)) for n in names]


def _cmd_trace_synth(args) -> int:
    trace = generate_synthetic(args.profile, args.chunks, args.seed)
    save_trace(trace, args.out)
    print(f"wrote {args.out} ({trace.n_chunks} chunks, {trace.category_tag})")
    return 0


def _cmd_trace_validate(args) -> int:
    try:
        trace = load_trace(args.path)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {trace.video_id} ({trace.n_chunks} chunks, m={trace.m})")
    return 0


def _cmd_features_extract(args) -> int:
    frames = load_frames_dir(args.frames)
    per_chunk = int(round(args.fps * args.chunk_seconds))
    chunks = []
    pos = 0
    while len(frames) - pos >= 2:
        group = frames[pos:pos + per_chunk]
        pos += len(group)
        diffs = chunk_features(group, args.fps)
        # Size/quality columns are synthetic stand-ins derived from measured
        # motion (no codec integration at this scale).
        iota = min(1.0, max(0.0, sum(diffs) / len(diffs)))
        ratios = [lv / args.fps for lv in FrameRateLadder(args.fps, args.levels).levels]
        quality = [100.0 - QUALITY_DROP * iota * (1.0 - r) ** QUALITY_EXP for r in ratios]
        base = BASE_CHUNK_BYTES * (1.0 + iota)
        sizes = [max(1, int(round(base * (SIZE_FLOOR + SIZE_SLOPE * r) * q / 100.0)))
                 for r, q in zip(ratios, quality)]
        chunks.append(ChunkRecord(index=len(chunks), frame_diffs=diffs,
                                  sizes_by_level=sizes, quality_by_level=quality))
    if not chunks:
        print("need at least 2 frames", file=sys.stderr)
        return 1
    trace = VideoTrace(
        video_id=os.path.basename(os.path.normpath(args.frames)) or "extracted",
        original_fps=args.fps,
        chunk_duration_s=args.chunk_seconds,
        category_tag="extracted",
        chunks=chunks,
    )
    save_trace(trace, args.out)
    print(f"wrote {args.out} ({trace.n_chunks} chunks from {len(frames)} frames)")
    return 0


def _cmd_features_correlate(args) -> int:
    pairs = make_correlation_corpus(args.seed, n_pairs=args.pairs)
    r = ydiff_ssim_correlation(pairs)
    print("seed,n_pairs,pearson_r")
    print(f"{args.seed},{args.pairs},{r:.4f}")
    return 0


def _cmd_reward_eval(args) -> int:
    trace = load_trace(args.trace)
    profile = _resolve_profile(args.profile)
    levels = [int(x) for x in args.levels.split(",")]
    ladder = trace.ladder
    per_chunk = [chunk_reward(c, lv, profile, ladder).total
                 for c, lv in zip(trace.chunks, levels)]
    total = episode_reward(trace, levels, profile)
    print(json.dumps({
        "video_id": trace.video_id,
        "profile": profile.name,
        "levels": levels,
        "per_chunk": per_chunk,
        "total": total,
    }))
    return 0


def _cmd_sim_bench(args) -> int:
    dataset = load_dataset(args.dataset)
    result = throughput_benchmark(dataset, args.seconds)
    print(json.dumps({
        "chunks_per_sec": result.chunk_steps_per_second,
        "simulated_hours_per_minute": result.simulated_hours_per_minute,
    }))
    return 0


def _cmd_train(args) -> int:
    dataset = load_dataset(args.dataset)
    profile = _resolve_profile(args.profile)
    config = TrainConfig(n_workers=args.workers, max_iterations=args.iters,
                         seed=args.seed)

    def progress(iteration: int, store) -> None:
        if iteration % args.log_every == 0 or iteration == args.iters:
            print(f"iteration {iteration}/{args.iters}", file=sys.stderr)

    result = train(dataset, profile, config, args.out, progress_callback=progress)
    print(json.dumps({
        "checkpoint": result.checkpoint_path,
        "metrics": result.metrics_path,
        "iterations": result.iterations,
    }))
    return 0


def _cmd_serve(args) -> int:
    server = service.serve(args.checkpoint, args.bind)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} "
          f"(profile {server.checkpoint.profile_name})", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _cmd_eval(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    dataset = load_dataset(args.dataset)
    profile = _resolve_profile(args.profile)
    report = service.evaluate(checkpoint, dataset, profile)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    print(report.format_table())
    return 0


def _cmd_baseline(args) -> int:
    trace = load_trace(args.trace)
    if args.kind == "naive":
        fraction = float(args.arg) if args.arg else 0.6
        levels = service.naive_baseline(trace, fraction)
    else:
        if args.arg:
            thresholds = [float(x) for x in args.arg.split(",")]
        else:
            thresholds = service.default_evso_thresholds([trace])
        levels = service.evso_baseline(trace, thresholds)
    print(json.dumps({"video_id": trace.video_id, "kind": args.kind, "levels": levels}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afr", description="Per-chunk adaptive frame rate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="synthetic traces and validation")
    trace_sub = p_trace.add_subparsers(dest="subcommand", required=True)
    p = trace_sub.add_parser("synth", help="generate a synthetic trace")
    p.add_argument("--profile", required=True, choices=("static", "dynamic", "hybrid"))
    p.add_argument("--chunks", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_trace_synth)
    p = trace_sub.add_parser("validate", help="validate a trace file")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_trace_validate)

    p_feat = sub.add_parser("features", help="frame features and validation")
    feat_sub = p_feat.add_subparsers(dest="subcommand", required=True)
    p = feat_sub.add_parser("extract", help="PGM frame directory -> trace.json")
    p.add_argument("--frames", required=True)
    p.add_argument("--fps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--chunk-seconds", type=float, default=2.0)
    p.add_argument("--levels", type=int, default=5)
    p.set_defaults(fn=_cmd_features_extract)
    p = feat_sub.add_parser("correlate", help="Y-diff vs SSIM Pearson r")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pairs", type=int, default=240)
    p.set_defaults(fn=_cmd_features_correlate)

    p_reward = sub.add_parser("reward", help="QoE reward evaluation")
    reward_sub = p_reward.add_subparsers(dest="subcommand", required=True)
    p = reward_sub.add_parser("eval", help="episode reward for a fixed schedule")
    p.add_argument("--trace", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--levels", required=True, help="comma-separated, one per chunk")
    p.set_defaults(fn=_cmd_reward_eval)

    p_sim = sub.add_parser("sim", help="simulator tools")
    sim_sub = p_sim.add_subparsers(dest="subcommand", required=True)
    p = sim_sub.add_parser("bench", help="random-policy throughput")
    p.add_argument("--dataset", required=True)
    p.add_argument("--seconds", type=float, default=60.0)
    p.set_defaults(fn=_cmd_sim_bench)

    p = sub.add_parser("train", help="A3C training")
    p.add_argument("--dataset", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--workers", type=int, default=16)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--log-every", type=int, default=500)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("serve", help="HTTP decision service")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--bind", default="127.0.0.1:8080")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("eval", help="policy-vs-baseline report")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("baseline", help="baseline schedules for a trace")
    p.add_argument("--kind", required=True, choices=("evso", "naive"))
    p.add_argument("--arg", default=None,
                   help="naive: fps fraction (default 0.6); evso: comma-separated thresholds")
    p.add_argument("--trace", required=True)
    p.set_defaults(fn=_cmd_baseline)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
