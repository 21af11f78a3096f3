"""Per-chunk QoE rewards and the greedy per-chunk oracle.

Scores every frame-rate level of one chunk under both built-in profiles,
prints the term-by-term breakdown for one decision, and compares the oracle
schedules the two profiles produce for the same video.
"""

import dataclasses

from afrkit import PRESETS, chunk_reward, generate_synthetic, greedy_oracle


def main():
    trace = generate_synthetic("hybrid", n_chunks=10, seed=42)
    ladder = trace.ladder
    qoe_q = PRESETS["qoe_q"]
    qoe_b = PRESETS["qoe_b"]

    chunk = trace.chunks[3]
    print("chunk 3: reward by level under each profile")
    print(f"{'level':>5} {'qoe_q':>10} {'qoe_b':>10}")
    for level in range(1, trace.m + 1):
        rq = chunk_reward(chunk, level, qoe_q, ladder).total
        rb = chunk_reward(chunk, level, qoe_b, ladder).total
        print(f"{level:>5} {rq:>10.3f} {rb:>10.3f}")

    parts = chunk_reward(chunk, 3, qoe_q, ladder)
    print("\nterm breakdown for level 3 under qoe_q:")
    for field in dataclasses.fields(parts):
        print(f"  {field.name:>17}: {getattr(parts, field.name):+.4f}")

    print("\ngreedy oracle schedules (level per chunk):")
    print(f"  qoe_q: {greedy_oracle(trace, qoe_q)}")
    print(f"  qoe_b: {greedy_oracle(trace, qoe_b)}")
    print("qoe_b weighs energy harder, so it should sit at or below qoe_q.")


if __name__ == "__main__":
    main()
