"""Train a small frame-rate policy end to end and compare it to baselines.

Uses a reduced network and a short run so the whole script finishes in well
under a minute; the same train() call scales to the full-size configuration.
"""

import tempfile

from afrkit import (
    PRESETS,
    TrainConfig,
    evaluate,
    generate_dataset,
    load_checkpoint,
    train,
)


def main():
    train_set = generate_dataset(12, seed=101)
    held_out = generate_dataset(4, seed=102)
    profile = PRESETS["qoe_b"]

    # A 24-unit network concatenates to a ~2.8k-dim feature vector (vs ~18k
    # at full size), so it tolerates learning rates the default config
    # cannot.
    config = TrainConfig(
        n_workers=4,
        max_iterations=1500,
        alpha=5e-5,
        alpha_prime=5e-5,
        alpha_warmup_iters=150,
        rollout_len=8,
        hidden_units=24,
        hidden_layers=2,
        beta_decay_iters=1000,
        checkpoint_interval=0,
        seed=5,
    )
    print(f"training {config.max_iterations} iterations "
          f"with {config.n_workers} workers on {len(train_set)} videos...")
    result = train(train_set, profile, config, tempfile.mkdtemp(prefix="afr_demo_"))
    print(f"done in {result.iterations} iterations; "
          f"checkpoint at {result.checkpoint_path}")

    with open(result.metrics_path) as fh:
        lines = fh.read().strip().split("\n")
    first, last = lines[1].split(","), lines[-1].split(",")
    print(f"entropy: {float(first[3]):.3f} -> {float(last[3]):.3f}  "
          f"(beta {float(first[5]):.2f} -> {float(last[5]):.2f})")

    checkpoint = load_checkpoint(result.checkpoint_path)
    report = evaluate(checkpoint, held_out, profile)
    print("\nheld-out comparison:")
    print(report.format_table())


if __name__ == "__main__":
    main()
