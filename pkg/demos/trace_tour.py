"""Tour of the synthetic trace generator.

Builds one trace per motion profile, prints the frame-rate ladder and a few
per-chunk statistics, then shows that JSON serialization round-trips exactly.
"""

import numpy as np

from afrkit import generate_synthetic, trace_from_json, trace_to_json


def describe(trace):
    ladder = trace.ladder
    print(f"\n{trace.video_id}  (category={trace.category_tag})")
    print(f"  fps ladder: {[ladder.fps_for(i) for i in range(1, trace.m + 1)]}")
    sums = [sum(c.frame_diffs) for c in trace.chunks]
    top_quality = [c.quality_by_level[-1] for c in trace.chunks]
    low_quality = [c.quality_by_level[0] for c in trace.chunks]
    print(f"  chunks: {trace.n_chunks}, summed diffs "
          f"min/mean/max = {min(sums):.2f}/{np.mean(sums):.2f}/{max(sums):.2f}")
    print(f"  quality at top level : mean {np.mean(top_quality):.2f}")
    print(f"  quality at level 1   : mean {np.mean(low_quality):.2f}")


def main():
    for kind in ("static", "dynamic", "hybrid"):
        trace = generate_synthetic(kind, n_chunks=12, seed=7)
        describe(trace)

    trace = generate_synthetic("hybrid", n_chunks=12, seed=7)
    text = trace_to_json(trace)
    again = trace_from_json(text)
    print(f"\nJSON round-trip exact: {trace_to_json(again) == text}")
    print(f"serialized size: {len(text)} bytes")


if __name__ == "__main__":
    main()
