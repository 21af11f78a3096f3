"""Serving and evaluation of trained policies.

decide() answers one chunk, schedule_video() walks a whole trace feeding each
argmax decision back as phi, and evaluate() compares the model against the
greedy oracle and the threshold/constant baselines, category by category.
Serve-time decisions are always argmax: sampling is a training-time concern.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .errors import (
    BadRequest,
    BadThresholds,
    BindError,
    CheckpointMissing,
    EmptyDataset,
    InvalidRange,
    LevelOutOfRange,
    ParseError,
    ValidationError,
)
from .features import assemble_state, observation_from_parts, precompute_features
from .nn import Checkpoint, forward_actor, load_checkpoint
from .reward import PRESETS, QoEProfile, episode_reward, greedy_oracle
from .traces import VideoTrace, load_trace, trace_from_json


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def transform_action(a: int, target_count: int, source_count: int = 5) -> int:
    """Map a level from a |D|-sized ladder onto a |T|-sized one:
    a' = clamp(round_half_up(|T|/|D| * a), 1, |T|)."""
    if target_count < 1:
        raise InvalidRange(f"target_count must be >= 1, got {target_count}")
    if source_count < 1:
        raise InvalidRange(f"source_count must be >= 1, got {source_count}")
    if not 1 <= a <= source_count:
        raise InvalidRange(f"action {a} outside [1, {source_count}]")
    return max(1, min(target_count, _round_half_up(target_count / source_count * a)))


def naive_baseline(trace: VideoTrace, fraction: float) -> list[int]:
    """Constant level approximating fraction of the original FPS."""
    if not 0.0 < fraction <= 1.0:
        raise InvalidRange(f"fraction must be in (0, 1], got {fraction}")
    m = trace.m
    level = max(1, min(m, _round_half_up(fraction * m)))
    return [level] * trace.n_chunks


def default_evso_thresholds(dataset: list[VideoTrace], m: int | None = None) -> list[float]:
    """20/40/.../80th percentiles of per-chunk summed diffs: m-1 cut points."""
    if not dataset:
        raise EmptyDataset("need at least one trace")
    m = m if m is not None else dataset[0].m
    sums = [sum(c.frame_diffs) for t in dataset for c in t.chunks]
    qs = np.linspace(0, 100, m + 1)[1:-1]
    return [float(v) for v in np.percentile(sums, qs)]


def evso_baseline(trace: VideoTrace, thresholds: list[float]) -> list[int]:
    """Per chunk, level = 1 + number of thresholds below the summed Y-diff;
    a single-motion-statistic policy."""
    if len(thresholds) != trace.m - 1:
        raise BadThresholds(f"need {trace.m - 1} thresholds, got {len(thresholds)}")
    cuts = list(thresholds)
    if any(not math.isfinite(c) for c in cuts) or any(b < a for a, b in zip(cuts, cuts[1:])):
        raise BadThresholds("thresholds must be finite and ascending")
    return [1 + sum(1 for c in cuts if c < sum(chunk.frame_diffs))
            for chunk in trace.chunks]


@dataclass(frozen=True)
class DecisionRequest:
    frame_diffs: list[float]
    sizes_by_level: list[float]
    neighbor_mean_diffs: list[float]
    original_fps: int
    last_level: int
    qoe_profile_name: str
    target_levels: int | None = None


@dataclass(frozen=True)
class DecisionResponse:
    level: int
    fps_value: float
    distribution: list[float]
    profile_name: str


def decide(checkpoint: Checkpoint, request: DecisionRequest) -> DecisionResponse:
    """Argmax of pi(.|s), mapped through transform_action when the client's
    ladder size differs from the model's.

    The request's qoe_profile_name is observability metadata (battery-state
    reporting); a single-checkpoint service answers with its loaded policy and
    echoes the profile it was trained for.
    """
    m = checkpoint.actor.topology.n_actions
    name = request.qoe_profile_name
    if name not in PRESETS and name != checkpoint.profile_name:
        raise BadRequest(f"unknown qoe_profile_name {name!r}")
    target = request.target_levels if request.target_levels is not None else m
    if not isinstance(target, int) or isinstance(target, bool):
        raise BadRequest("target_levels must be an integer")
    if len(request.sizes_by_level) != m:
        raise BadRequest(f"sizes_by_level must have {m} entries for this checkpoint")
    try:
        obs = observation_from_parts(
            request.frame_diffs, request.sizes_by_level, request.neighbor_mean_diffs,
            request.original_fps, request.last_level, checkpoint.norm)
        probs, _ = forward_actor(checkpoint.actor, obs)
        level = transform_action(int(np.argmax(probs)) + 1, target, m)
    except (ValidationError, LevelOutOfRange, InvalidRange) as exc:
        raise BadRequest(str(exc)) from exc
    fps_value = request.original_fps * level / target
    return DecisionResponse(level=level, fps_value=fps_value,
                            distribution=[float(p) for p in probs],
                            profile_name=checkpoint.profile_name)


def schedule_video(checkpoint: Checkpoint, trace: VideoTrace,
                   profile: QoEProfile | None = None) -> list[int]:
    """Greedy argmax walk: each decision feeds the next observation's phi.

    The profile argument is accepted for interface symmetry with evaluate();
    decisions depend only on the actor network.
    """
    del profile
    cache = precompute_features(trace, checkpoint.norm)
    m = cache.m_levels
    if m != checkpoint.actor.topology.n_actions:
        raise BadRequest(f"trace has {m} levels; model expects "
                         f"{checkpoint.actor.topology.n_actions}")
    last = m
    levels = []
    for k in range(trace.n_chunks):
        obs = assemble_state(trace, k, last, checkpoint.norm, cache=cache)
        probs, _ = forward_actor(checkpoint.actor, obs)
        last = int(np.argmax(probs)) + 1
        levels.append(last)
    return levels


@dataclass(frozen=True)
class ReportRow:
    category: str
    policy: str
    fps_pct: float
    quality_pct: float
    mean_reward: float


@dataclass
class EvaluationReport:
    rows: list[ReportRow]
    trace_rows: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["category,policy,fps_pct,quality_pct,mean_reward"]
        lines += [f"{r.category},{r.policy},{r.fps_pct!r},{r.quality_pct!r},{r.mean_reward!r}"
                  for r in self.rows]
        return "\n".join(lines) + "\n"

    def format_table(self) -> str:
        header = f"{'category':<10} {'policy':<10} {'fps%':>8} {'quality%':>9} {'reward':>10}"
        lines = [header, "-" * len(header)]
        lines += [f"{r.category:<10} {r.policy:<10} {r.fps_pct:>8.2f} "
                  f"{r.quality_pct:>9.2f} {r.mean_reward:>10.3f}" for r in self.rows]
        return "\n".join(lines)


def _trace_metrics(trace: VideoTrace, levels: list[int], profile: QoEProfile) -> tuple[float, float, float]:
    m = trace.m
    fps_pct = 100.0 * sum(lv / m for lv in levels) / len(levels)
    quality = sum(c.quality_by_level[lv - 1] for c, lv in zip(trace.chunks, levels)) / len(levels)
    return fps_pct, quality, episode_reward(trace, levels, profile)


def evaluate(
    checkpoint: Checkpoint,
    dataset: list[VideoTrace],
    profile: QoEProfile,
    evso_thresholds: list[float] | None = None,
) -> EvaluationReport:
    """Per-category (plus overall) FPS%/quality%/mean-reward for the model,
    the greedy oracle, the EVSO-style threshold baseline, and naive-60/40.

    EVSO thresholds default to quantiles over this dataset; pass thresholds
    calibrated on a training set for a fairer comparison.
    """
    if not dataset:
        raise EmptyDataset("need at least one trace")
    thresholds = evso_thresholds if evso_thresholds is not None \
        else default_evso_thresholds(dataset)
    policies = {
        "model": lambda t: schedule_video(checkpoint, t),
        "oracle": lambda t: greedy_oracle(t, profile),
        "evso": lambda t: evso_baseline(t, thresholds),
        "naive-60": lambda t: naive_baseline(t, 0.6),
        "naive-40": lambda t: naive_baseline(t, 0.4),
    }
    trace_rows = []
    for trace in dataset:
        for policy_name, fn in policies.items():
            fps_pct, quality, reward = _trace_metrics(trace, fn(trace), profile)
            trace_rows.append({
                "video_id": trace.video_id, "category": trace.category_tag,
                "policy": policy_name, "fps_pct": fps_pct,
                "quality_pct": quality, "mean_reward": reward,
            })
    categories = sorted({t.category_tag for t in dataset})
    rows = []
    for category in categories + ["overall"]:
        for policy_name in policies:
            sel = [r for r in trace_rows if r["policy"] == policy_name
                   and (category == "overall" or r["category"] == category)]
            rows.append(ReportRow(
                category=category,
                policy=policy_name,
                fps_pct=float(np.mean([r["fps_pct"] for r in sel])),
                quality_pct=float(np.mean([r["quality_pct"] for r in sel])),
                mean_reward=float(np.mean([r["mean_reward"] for r in sel])),
            ))
    return EvaluationReport(rows=rows, trace_rows=trace_rows)


# ---------------------------------------------------------------------------
# HTTP service

_REQUIRED_DECIDE_FIELDS = (
    "frame_diffs", "sizes_by_level", "neighbor_mean_diffs",
    "original_fps", "last_level", "qoe_profile_name",
)


def _decision_request_from_json(obj: dict) -> DecisionRequest:
    if not isinstance(obj, dict):
        raise BadRequest("request body must be a JSON object")
    missing = [k for k in _REQUIRED_DECIDE_FIELDS if k not in obj]
    if missing:
        raise BadRequest(f"missing fields: {missing}")
    try:
        return DecisionRequest(
            frame_diffs=[float(x) for x in obj["frame_diffs"]],
            sizes_by_level=[float(x) for x in obj["sizes_by_level"]],
            neighbor_mean_diffs=[float(x) for x in obj["neighbor_mean_diffs"]],
            original_fps=int(obj["original_fps"]),
            last_level=int(obj["last_level"]),
            qoe_profile_name=str(obj["qoe_profile_name"]),
            target_levels=int(obj["target_levels"]) if "target_levels" in obj else None,
        )
    except (TypeError, ValueError) as exc:
        raise BadRequest(f"malformed request fields: {exc}") from exc


class _AfrRequestHandler(BaseHTTPRequestHandler):
    server_version = "afr/0.1"
    protocol_version = "HTTP/1.1"

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        try:
            return json.loads(raw.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise BadRequest(f"invalid JSON body: {exc}") from exc

    def do_GET(self) -> None:
        if self.path != "/v1/health":
            self._send_json(404, {"error": f"unknown path {self.path}"})
            return
        ckpt: Checkpoint = self.server.checkpoint
        self._send_json(200, {
            "status": "ok",
            "checkpoint_version": ckpt.format_version,
            "profile": ckpt.profile_name,
        })

    def do_POST(self) -> None:
        try:
            if self.path == "/v1/decide":
                request = _decision_request_from_json(self._read_json())
                resp = decide(self.server.checkpoint, request)
                self._send_json(200, {
                    "level": resp.level,
                    "fps_value": resp.fps_value,
                    "distribution": resp.distribution,
                    "profile": resp.profile_name,
                })
            elif self.path == "/v1/schedule":
                self._handle_schedule(self._read_json())
            else:
                self._send_json(404, {"error": f"unknown path {self.path}"})
        except BadRequest as exc:
            self._send_json(400, {"error": str(exc)})
        except CheckpointMissing as exc:
            self._send_json(404, {"error": str(exc)})
        except Exception as exc:  # noqa: BLE001 - contract: internal errors are 500s
            self._send_json(500, {"error": f"internal error: {exc}"})

    def _handle_schedule(self, obj: dict) -> None:
        if not isinstance(obj, dict):
            raise BadRequest("request body must be a JSON object")
        if ("trace" in obj) == ("trace_path" in obj):
            raise BadRequest("provide exactly one of trace, trace_path")
        try:
            if "trace" in obj:
                trace = trace_from_json(json.dumps(obj["trace"]))
            else:
                trace = load_trace(str(obj["trace_path"]))
        except FileNotFoundError as exc:
            raise BadRequest(f"trace_path not found: {exc}") from exc
        except (ParseError, ValidationError) as exc:
            raise BadRequest(f"invalid trace: {exc}") from exc
        levels = schedule_video(self.server.checkpoint, trace)
        ladder = trace.ladder
        self._send_json(200, {
            "video_id": trace.video_id,
            "levels": levels,
            "fps_values": [ladder.fps_for(lv) for lv in levels],
        })

    def log_message(self, fmt: str, *args) -> None:
        # Quiet by default; the CLI decides what to print.
        pass


class AfrServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], checkpoint: Checkpoint):
        self.checkpoint = checkpoint
        try:
            super().__init__(address, _AfrRequestHandler)
        except OSError as exc:
            raise BindError(f"cannot bind {address[0]}:{address[1]}: {exc}") from exc


def serve(checkpoint: Checkpoint | str, bind_address: str = "127.0.0.1:8080") -> AfrServer:
    """Create the HTTP server (caller runs serve_forever, or uses it as a
    handle in tests). checkpoint may be a loaded bundle or a file path."""
    if isinstance(checkpoint, str):
        try:
            checkpoint = load_checkpoint(checkpoint)
        except FileNotFoundError as exc:
            raise CheckpointMissing(str(exc)) from exc
    host, _, port_text = bind_address.rpartition(":")
    if not host or not port_text.isdigit():
        raise BindError(f"bind address must be host:port, got {bind_address!r}")
    return AfrServer((host, int(port_text)), checkpoint)


def run_server_in_thread(server: AfrServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
