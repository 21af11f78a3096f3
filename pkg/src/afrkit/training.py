"""A3C training: n-step advantages, entropy-regularized policy gradients,
TD value regression, parallel workers around a central parameter store.

Workers loop: pull a consistent parameter snapshot, roll out up to
rollout_len steps on their private environment (sampling from the policy),
turn the rollout into summed actor/critic gradients, and push those to the
store, which applies them under per-network locks and counts one global
iteration per applied update. With n_workers=1 everything runs on the calling
thread and snapshots borrow the store's arrays, which makes runs
bit-reproducible from the seed.

Rewards are multiplied by reward_scale inside the update (logged rewards stay
raw). This keeps advantage magnitudes commensurate with the entropy term so
the default beta schedule anneals from exploration to a sharp policy. The
actor learning rate ramps in over alpha_warmup_iters so the critic's early
miscalibration cannot permanently distort the policy (see TrainConfig).
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass

import numpy as np

from .env import EnvState, reset, step
from .errors import EmptyDataset, LengthMismatch, NonFiniteGradient, ValidationError
from .features import StateObservation, assemble_state, compute_norm_stats, precompute_features
from .nn import (
    Checkpoint,
    NetworkParams,
    RolloutPolicy,
    apply_gradients,
    backward_actor,
    backward_critic,
    build_network,
    forward_actor_batch,
    forward_critic_batch,
    save_checkpoint,
    stack_observations,
)
from .reward import QoEProfile
from .traces import VideoTrace


@dataclass(frozen=True)
class ExperienceSample:
    obs: StateObservation
    action: int
    reward: float
    is_terminal: bool


@dataclass(frozen=True)
class TrainConfig:
    # The conv front end concatenates to a ~18k-dim vector and gradients are
    # summed over the rollout, so per-update steps scale with
    # alpha * sum_t ||x_t||^2; rates above ~1e-5 diverge (no gradient
    # clipping by design).
    #
    # The actor rate ramps up over alpha_warmup_iters. A freshly initialized
    # critic predicts ~0 while early returns are strongly negative, so for
    # the first few hundred iterations every sampled action carries a large
    # negative advantage; at full rate that transient buries whichever
    # actions the initial policy favors, and the policy cannot dig them back
    # out later (their probability, and hence their gradient, has collapsed).
    # Ramping alpha while the critic settles keeps the initial preferences
    # intact until advantages are centered.
    gamma: float = 0.5
    alpha: float = 8e-6
    alpha_prime: float = 8e-6
    alpha_warmup_iters: int = 1_000
    beta_start: float = 1.0
    beta_end: float = 0.02
    beta_decay_iters: int = 19_000
    reward_scale: float = 0.2
    n_workers: int = 16
    rollout_len: int = 8
    max_iterations: int = 85_000
    hidden_layers: int = 3
    hidden_units: int = 128
    checkpoint_interval: int = 5_000
    seed: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma <= 1.0:
            raise ValidationError("gamma must be in (0, 1]")
        if self.alpha <= 0 or self.alpha_prime <= 0 or self.reward_scale <= 0:
            raise ValidationError("learning rates and reward_scale must be > 0")
        if self.alpha_warmup_iters < 0:
            raise ValidationError("alpha_warmup_iters must be >= 0")
        if self.beta_start < 0 or self.beta_end < 0 or self.beta_decay_iters < 1:
            raise ValidationError("beta schedule must be non-negative with decay_iters >= 1")
        if self.n_workers < 1 or self.rollout_len < 1 or self.max_iterations < 1:
            raise ValidationError("n_workers, rollout_len, max_iterations must be >= 1")

    def beta_at(self, iteration: int) -> float:
        if iteration >= self.beta_decay_iters:
            return self.beta_end
        frac = iteration / self.beta_decay_iters
        return self.beta_start + (self.beta_end - self.beta_start) * frac

    def alpha_at(self, iteration: int) -> float:
        if iteration >= self.alpha_warmup_iters:
            return self.alpha
        return self.alpha * iteration / self.alpha_warmup_iters


@dataclass(frozen=True)
class UpdateStats:
    mean_reward: float
    mean_advantage: float
    mean_entropy: float
    value_loss: float


def _nstep_returns(rewards: np.ndarray, bootstrap_value: float, gamma: float) -> np.ndarray:
    out = np.empty_like(rewards)
    acc = bootstrap_value
    for t in range(rewards.size - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        out[t] = acc
    return out


def n_step_advantages(
    samples: list[ExperienceSample],
    bootstrap_value: float,
    values: list[float],
    gamma: float,
) -> np.ndarray:
    """A_t = sum_{i<k_t} gamma^i r_{t+i} + gamma^{k_t} bootstrap - V(s_t),
    with k_t the samples remaining to rollout end."""
    if len(values) != len(samples):
        raise LengthMismatch(f"{len(values)} values for {len(samples)} samples")
    if not samples:
        raise EmptyDataset("need at least one sample")
    rewards = np.array([s.reward for s in samples], dtype=np.float64)
    return _nstep_returns(rewards, bootstrap_value, gamma) - np.asarray(values, dtype=np.float64)


def sample_action(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Draw a 1-based action by inverse CDF; deterministic given rng state."""
    cum = np.cumsum(probs)
    a = int(np.searchsorted(cum, rng.random(), side="right")) + 1
    return min(a, probs.shape[0])


def worker_rollout(
    env: EnvState,
    actor_params: NetworkParams,
    rollout_len: int,
    rng: np.random.Generator,
    greedy: bool = False,
) -> list[ExperienceSample]:
    """Advance the env up to rollout_len steps sampling from pi(.|s); truncates
    at episode end. greedy=True takes argmax instead (test hook)."""
    if env.done:
        raise EmptyDataset("environment episode already finished")
    window = min(rollout_len, env.n_chunks - env.cursor)
    # The upcoming chunks are known in advance (actions only influence phi),
    # so the policy can precompute everything phi-independent for the window.
    window_obs = [assemble_state(env.trace, env.cursor + j, 1, env.norm, cache=env.features)
                  for j in range(window)]
    policy = RolloutPolicy(actor_params, window_obs)
    samples = []
    for t in range(window):
        probs = policy.probs(t, env.last_level)
        if greedy:
            action = int(np.argmax(probs)) + 1
        else:
            action = sample_action(probs, rng)
        obs_t = env.observation()
        reward, _, done = step(env, action)
        samples.append(ExperienceSample(obs_t, action, reward, done))
    return samples


def compute_update(
    samples: list[ExperienceSample],
    params_actor: NetworkParams,
    params_critic: NetworkParams,
    config: TrainConfig,
    *,
    beta: float | None = None,
    bootstrap_obs: StateObservation | None = None,
) -> tuple[list, list, UpdateStats]:
    """Summed gradients over one rollout.

    bootstrap_obs is the observation after the last sample (None when the
    rollout ended the episode); its value bootstraps both the advantages and
    the critic's n-step TD targets. beta defaults to the schedule's start.
    """
    if not samples:
        raise EmptyDataset("need at least one sample")
    if beta is None:
        beta = config.beta_start
    batch = stack_observations([s.obs for s in samples], params_actor.topology)
    probs, actor_trace = forward_actor_batch(params_actor, batch)
    values, critic_trace = forward_critic_batch(params_critic, batch)
    if samples[-1].is_terminal or bootstrap_obs is None:
        bootstrap = 0.0
    else:
        boot_batch = stack_observations([bootstrap_obs], params_critic.topology)
        bootstrap = float(forward_critic_batch(params_critic, boot_batch)[0][0])
    raw_rewards = np.array([s.reward for s in samples], dtype=np.float64)
    returns = _nstep_returns(raw_rewards * config.reward_scale, bootstrap, config.gamma)
    advantages = returns - values
    actions = np.array([s.action for s in samples], dtype=np.int64)
    grads_actor = backward_actor(params_actor, actor_trace, actions, advantages, beta)
    grads_critic = backward_critic(params_critic, critic_trace, returns)
    ent = float(-(probs * actor_trace.logprobs).sum(axis=1).mean())
    stats = UpdateStats(
        mean_reward=float(raw_rewards.mean()),
        mean_advantage=float(advantages.mean()),
        mean_entropy=ent,
        value_loss=float(((returns - values) ** 2).mean()),
    )
    for blocks in (grads_actor, grads_critic):
        if not all(np.isfinite(g.sum()) for g in blocks):
            raise NonFiniteGradient("update produced non-finite gradients")
    return grads_actor, grads_critic, stats


METRICS_COLUMNS = ("iteration", "wall_ms", "mean_reward", "mean_entropy", "value_loss", "beta")


class CentralStore:
    """Authoritative parameter owner. Workers read consistent snapshots and
    push gradients; application is serialized per network, so concurrent
    workers can never produce torn parameter reads."""

    def __init__(self, actor: NetworkParams, critic: NetworkParams,
                 config: TrainConfig, metrics_path: str, checkpoint_dir: str,
                 profile_name: str, norm, progress_callback=None):
        self.actor = actor
        self.critic = critic
        self.config = config
        self.norm = norm
        self.profile_name = profile_name
        self._checkpoint_dir = checkpoint_dir
        self._actor_lock = threading.Lock()
        self._critic_lock = threading.Lock()
        self._meta_lock = threading.Lock()
        self._iteration = 0
        self._failure: BaseException | None = None
        self._share_snapshots = config.n_workers == 1
        self._start = time.perf_counter()
        self._metrics = open(metrics_path, "w", encoding="utf-8", newline="")
        self._metrics.write(",".join(METRICS_COLUMNS) + "\n")
        self._progress_callback = progress_callback

    @property
    def iteration(self) -> int:
        with self._meta_lock:
            return self._iteration

    @property
    def failed(self) -> bool:
        return self._failure is not None

    @property
    def failure(self) -> BaseException | None:
        return self._failure

    def snapshot(self) -> tuple[NetworkParams, NetworkParams, int]:
        if self._share_snapshots:
            # Single worker: no concurrent mutation; borrow the live params.
            return self.actor, self.critic, self._iteration
        with self._actor_lock:
            actor = self.actor.copy()
        with self._critic_lock:
            critic = self.critic.copy()
        with self._meta_lock:
            it = self._iteration
        return actor, critic, it

    def export_params(self) -> tuple[NetworkParams, NetworkParams]:
        with self._actor_lock:
            actor = self.actor.copy()
        with self._critic_lock:
            critic = self.critic.copy()
        return actor, critic

    def apply(self, grads_actor, grads_critic, stats: UpdateStats, beta: float) -> int | None:
        """Apply one worker update; returns the global iteration it became,
        or None if training already hit max_iterations (update discarded)."""
        with self._meta_lock:
            if self._iteration >= self.config.max_iterations or self.failed:
                return None
            self._iteration += 1
            it = self._iteration
        with self._actor_lock:
            apply_gradients(self.actor, grads_actor, self.config.alpha_at(it), "ascent")
        with self._critic_lock:
            apply_gradients(self.critic, grads_critic, self.config.alpha_prime, "descent")
        wall_ms = (time.perf_counter() - self._start) * 1e3
        with self._meta_lock:
            self._metrics.write(f"{it},{wall_ms!r},{stats.mean_reward!r},"
                                f"{stats.mean_entropy!r},{stats.value_loss!r},{beta!r}\n")
        interval = self.config.checkpoint_interval
        if interval > 0 and it % interval == 0 and it < self.config.max_iterations:
            self.save(os.path.join(self._checkpoint_dir, f"checkpoint_{it:06d}.bin"))
        if self._progress_callback is not None:
            self._progress_callback(it, self)
        return it

    def fail(self, exc: BaseException, iteration_hint: int) -> None:
        with self._meta_lock:
            if self._failure is None:
                self._failure = exc
                self._metrics.write(f"# aborted at iteration {iteration_hint}: {exc}\n")

    def save(self, path: str) -> Checkpoint:
        actor, critic = self.export_params()
        ckpt = Checkpoint(actor=actor, critic=critic, norm=self.norm,
                          profile_name=self.profile_name)
        save_checkpoint(ckpt, path)
        return ckpt

    def close(self) -> None:
        self._metrics.close()


@dataclass(frozen=True)
class TrainResult:
    checkpoint: Checkpoint
    checkpoint_path: str
    metrics_path: str
    iterations: int


def _worker_loop(store: CentralStore, dataset, caches, profile, norm,
                 config: TrainConfig, worker_index: int) -> None:
    rng = np.random.default_rng(config.seed * 1_000_003 + worker_index)
    env = None
    while True:
        actor, critic, it = store.snapshot()
        if it >= config.max_iterations or store.failed:
            return
        if env is None or env.done:
            t_idx = int(rng.integers(len(dataset)))
            env, _ = reset(dataset[t_idx], profile, norm, cache=caches[t_idx])
        samples = worker_rollout(env, actor, config.rollout_len, rng)
        bootstrap_obs = env.observation()
        beta = config.beta_at(it)
        try:
            ga, gc, stats = compute_update(samples, actor, critic, config,
                                           beta=beta, bootstrap_obs=bootstrap_obs)
            store.apply(ga, gc, stats, beta)
        except NonFiniteGradient as exc:
            store.fail(exc, it + 1)
            return


def train(
    dataset: list[VideoTrace],
    profile: QoEProfile,
    config: TrainConfig,
    checkpoint_dir: str,
    progress_callback=None,
) -> TrainResult:
    """Run A3C to max_iterations; writes metrics.csv, periodic checkpoints
    every checkpoint_interval iterations, and checkpoint_final.bin.

    progress_callback(iteration, store), when given, runs after each applied
    update on whichever worker applied it (no locks held).
    """
    if not dataset:
        raise EmptyDataset("training dataset is empty")
    m = dataset[0].m
    if any(t.m != m for t in dataset):
        raise ValidationError("all traces must share the same ladder size m")
    os.makedirs(checkpoint_dir, exist_ok=True)
    norm = compute_norm_stats(dataset)
    caches = [precompute_features(t, norm) for t in dataset]
    actor = build_network("actor", m_actions=m, hidden_layers=config.hidden_layers,
                          hidden_units=config.hidden_units, seed=config.seed)
    critic = build_network("critic", m_actions=m, hidden_layers=config.hidden_layers,
                           hidden_units=config.hidden_units, seed=config.seed + 1)
    metrics_path = os.path.join(checkpoint_dir, "metrics.csv")
    store = CentralStore(actor, critic, config, metrics_path, checkpoint_dir,
                         profile.name, norm, progress_callback)
    try:
        if config.n_workers == 1:
            _worker_loop(store, dataset, caches, profile, norm, config, 0)
        else:
            threads = [
                threading.Thread(
                    target=_worker_loop,
                    args=(store, dataset, caches, profile, norm, config, w),
                    name=f"afr-worker-{w}",
                    daemon=True,
                )
                for w in range(config.n_workers)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        if store.failure is not None:
            raise store.failure
        final_path = os.path.join(checkpoint_dir, "checkpoint_final.bin")
        ckpt = store.save(final_path)
        iterations = store.iteration
    finally:
        store.close()
    return TrainResult(checkpoint=ckpt, checkpoint_path=final_path,
                       metrics_path=metrics_path, iterations=iterations)
