"""Drive the chunk-level simulator directly and race simple policies.

Steps the environment by hand with three fixed strategies, prints the reward
each earns on the same video, and finishes with a throughput measurement to
show how many chunk-decisions per second the simulator sustains.
"""

from afrkit import (
    PRESETS,
    compute_norm_stats,
    generate_dataset,
    generate_synthetic,
    greedy_oracle,
    reset,
    step,
    throughput_benchmark,
)


def run_policy(trace, profile, norm, pick):
    env, obs = reset(trace, profile, norm)
    total = 0.0
    k = 0
    while not env.done:
        reward, obs, done = step(env, pick(k, obs))
        total += reward
        k += 1
    return total


def main():
    trace = generate_synthetic("hybrid", n_chunks=16, seed=9)
    norm = compute_norm_stats([trace])
    profile = PRESETS["qoe_b"]
    m = trace.m

    always_top = run_policy(trace, profile, norm, lambda k, obs: m)
    always_low = run_policy(trace, profile, norm, lambda k, obs: 1)
    alternate = run_policy(trace, profile, norm, lambda k, obs: 1 + (k % m))
    oracle_levels = greedy_oracle(trace, profile)
    oracle = run_policy(trace, profile, norm, lambda k, obs: oracle_levels[k])

    print(f"episode reward on one {trace.n_chunks}-chunk video (qoe_b):")
    print(f"  always top level : {always_top:9.3f}")
    print(f"  always level 1   : {always_low:9.3f}")
    print(f"  cycling levels   : {alternate:9.3f}")
    print(f"  greedy oracle    : {oracle:9.3f}")

    dataset = generate_dataset(8, seed=55)
    stats = throughput_benchmark(dataset, seconds=1.0, profile=PRESETS["qoe_b"])
    print(f"\nsimulator throughput: {stats.chunk_steps_per_second:,.0f} chunk-steps/s")
    print(f"  simulated video hours per wall-clock minute: "
          f"{stats.simulated_hours_per_minute:,.1f}")


if __name__ == "__main__":
    main()
