"""Stand up the HTTP decision service and query it like a client would.

Trains a throwaway policy, serves it on an ephemeral local port, then walks
through the three endpoints: health, a single per-chunk decision, and a
whole-video schedule.
"""

import http.client
import json
import tempfile

import numpy as np

from afrkit import (
    PRESETS,
    TrainConfig,
    generate_dataset,
    generate_synthetic,
    run_server_in_thread,
    serve,
    trace_to_json,
    train,
)


def call(address, method, path, payload=None):
    conn = http.client.HTTPConnection(*address, timeout=10)
    try:
        body = None if payload is None else json.dumps(payload).encode()
        conn.request(method, path, body=body,
                     headers={"Content-Type": "application/json"} if body else {})
        resp = conn.getresponse()
        return resp.status, json.loads(resp.read())
    finally:
        conn.close()


def main():
    dataset = generate_dataset(6, seed=201)
    config = TrainConfig(n_workers=2, max_iterations=200, hidden_units=16,
                         hidden_layers=1, alpha=5e-5, alpha_prime=5e-5,
                         checkpoint_interval=0, seed=3)
    result = train(dataset, PRESETS["qoe_q"], config,
                   tempfile.mkdtemp(prefix="afr_demo_"))

    server = serve(result.checkpoint_path, "127.0.0.1:0")
    run_server_in_thread(server)
    address = server.server_address
    print(f"serving on {address[0]}:{address[1]}")

    status, health = call(address, "GET", "/v1/health")
    print(f"\nGET /v1/health -> {status}\n  {health}")

    trace = generate_synthetic("hybrid", n_chunks=6, seed=77)
    chunk = trace.chunks[0]
    mean0 = float(np.mean(chunk.frame_diffs))
    mean1 = float(np.mean(trace.chunks[1].frame_diffs))
    request = {
        "frame_diffs": list(chunk.frame_diffs),
        "sizes_by_level": list(chunk.sizes_by_level),
        "neighbor_mean_diffs": [mean0, mean1],
        "original_fps": trace.original_fps,
        "last_level": trace.m,
        "qoe_profile_name": "qoe_q",
    }
    status, decision = call(address, "POST", "/v1/decide", request)
    print(f"\nPOST /v1/decide -> {status}")
    print(f"  level={decision['level']}  fps={decision['fps_value']:.1f}")
    print(f"  distribution={[round(p, 3) for p in decision['distribution']]}")

    status, schedule = call(address, "POST", "/v1/schedule",
                            {"trace": json.loads(trace_to_json(trace))})
    print(f"\nPOST /v1/schedule -> {status}")
    print(f"  levels     = {schedule['levels']}")
    print(f"  fps values = {schedule['fps_values']}")

    bad = dict(request, last_level=99)
    status, err = call(address, "POST", "/v1/decide", bad)
    print(f"\nPOST /v1/decide with last_level=99 -> {status}\n  {err}")

    server.shutdown()
    print("\nserver stopped")


if __name__ == "__main__":
    main()
