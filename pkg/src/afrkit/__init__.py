"""Per-chunk adaptive frame rate toolkit.

Pipeline: video traces (synthetic or extracted from frames) -> chunk feature
states -> QoE reward -> chunk-level decision episodes -> asynchronous
advantage actor-critic training -> frame-rate decision service with
rule-based baselines.
"""

from .env import BenchmarkResult, EnvState, reset, step, throughput_benchmark
from .errors import (
    ActionOutOfRange,
    BadRequest,
    BadThresholds,
    BindError,
    CheckpointMissing,
    CorruptFile,
    DimensionMismatch,
    EmptyDataset,
    EpisodeFinished,
    IndexOutOfRange,
    InvalidProfile,
    InvalidRange,
    InvalidTopology,
    LengthMismatch,
    LevelOutOfRange,
    NonFiniteGradient,
    ParseError,
    ShapeMismatch,
    ValidationError,
    VersionMismatch,
)
from .features import (
    GrayFrame,
    NormalizationStats,
    StateObservation,
    TraceFeatures,
    assemble_state,
    chunk_features,
    compute_norm_stats,
    load_frames_dir,
    load_pgm,
    make_correlation_corpus,
    observation_from_parts,
    precompute_features,
    ssim,
    write_pgm,
    y_diff,
    ydiff_ssim_correlation,
)
from .nn import (
    Checkpoint,
    NetworkParams,
    NetworkTopology,
    RolloutPolicy,
    apply_gradients,
    backward_actor,
    backward_critic,
    build_network,
    entropy,
    forward_actor,
    forward_actor_batch,
    forward_critic,
    forward_critic_batch,
    init_like,
    load_checkpoint,
    save_checkpoint,
)
from .reward import (
    PRESETS,
    QoEProfile,
    RewardBreakdown,
    chunk_reward,
    episode_reward,
    get_profile,
    greedy_oracle,
    load_profile,
    save_profile,
)
from .service import (
    DecisionRequest,
    DecisionResponse,
    EvaluationReport,
    ReportRow,
    decide,
    default_evso_thresholds,
    evaluate,
    evso_baseline,
    naive_baseline,
    run_server_in_thread,
    schedule_video,
    serve,
    transform_action,
)
from .traces import (
    ChunkRecord,
    FrameRateLadder,
    MotionProfile,
    VideoTrace,
    generate_dataset,
    generate_synthetic,
    load_trace,
    save_trace,
    trace_from_json,
    trace_to_json,
)
from .training import (
    CentralStore,
    ExperienceSample,
    TrainConfig,
    TrainResult,
    UpdateStats,
    compute_update,
    n_step_advantages,
    sample_action,
    train,
    worker_rollout,
)

__version__ = "0.1.0"

__all__ = [
    "ActionOutOfRange",
    "BadRequest",
    "BadThresholds",
    "BenchmarkResult",
    "BindError",
    "CentralStore",
    "Checkpoint",
    "CheckpointMissing",
    "ChunkRecord",
    "CorruptFile",
    "DecisionRequest",
    "DecisionResponse",
    "DimensionMismatch",
    "EmptyDataset",
    "EnvState",
    "EpisodeFinished",
    "EvaluationReport",
    "ExperienceSample",
    "FrameRateLadder",
    "GrayFrame",
    "IndexOutOfRange",
    "InvalidProfile",
    "InvalidRange",
    "InvalidTopology",
    "LengthMismatch",
    "LevelOutOfRange",
    "MotionProfile",
    "NetworkParams",
    "NetworkTopology",
    "NonFiniteGradient",
    "NormalizationStats",
    "ParseError",
    "PRESETS",
    "QoEProfile",
    "ReportRow",
    "RewardBreakdown",
    "RolloutPolicy",
    "ShapeMismatch",
    "StateObservation",
    "TraceFeatures",
    "TrainConfig",
    "TrainResult",
    "UpdateStats",
    "ValidationError",
    "VersionMismatch",
    "VideoTrace",
    "apply_gradients",
    "assemble_state",
    "backward_actor",
    "backward_critic",
    "build_network",
    "chunk_features",
    "chunk_reward",
    "compute_norm_stats",
    "compute_update",
    "decide",
    "default_evso_thresholds",
    "entropy",
    "episode_reward",
    "evaluate",
    "evso_baseline",
    "forward_actor",
    "forward_actor_batch",
    "forward_critic",
    "forward_critic_batch",
    "generate_dataset",
    "generate_synthetic",
    "get_profile",
    "greedy_oracle",
    "init_like",
    "load_checkpoint",
    "load_frames_dir",
    "load_pgm",
    "load_profile",
    "load_trace",
    "make_correlation_corpus",
    "n_step_advantages",
    "naive_baseline",
    "observation_from_parts",
    "precompute_features",
    "reset",
    "run_server_in_thread",
    "sample_action",
    "save_checkpoint",
    "save_profile",
    "save_trace",
    "schedule_video",
    "serve",
    "ssim",
    "step",
    "throughput_benchmark",
    "trace_from_json",
    "trace_to_json",
    "train",
    "transform_action",
    "worker_rollout",
    "write_pgm",
    "y_diff",
    "ydiff_ssim_correlation",
]
