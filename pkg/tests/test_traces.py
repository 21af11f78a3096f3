import dataclasses
import json

import numpy as np
import pytest

from afrkit import (
    ChunkRecord,
    FrameRateLadder,
    MotionProfile,
    ParseError,
    ValidationError,
    VideoTrace,
    generate_dataset,
    generate_synthetic,
    load_trace,
    save_trace,
    trace_from_json,
    trace_to_json,
)
from afrkit.errors import InvalidProfile

# 100 - 60*0.7*(0.8**1.2), the quality floor bound for motion intensity 0.7
DYNAMIC_LOW_QUALITY_BOUND = 67.86655600705475


def make_chunk(index=0, diffs=(0.1, 0.2), sizes=(100, 200, 300, 400, 500),
               quality=(80.0, 85.0, 90.0, 95.0, 100.0)):
    return ChunkRecord(index=index, frame_diffs=list(diffs),
                       sizes_by_level=list(sizes), quality_by_level=list(quality))


def make_trace(chunks=None, fps=60, duration=2.0):
    if chunks is None:
        chunks = [make_chunk(i) for i in range(3)]
    return VideoTrace(video_id="t", original_fps=fps, chunk_duration_s=duration,
                      category_tag="static", chunks=chunks)


def test_ladder_levels_60fps_m5():
    assert FrameRateLadder(60, 5).levels == [12.0, 24.0, 36.0, 48.0, 60.0]


def test_ladder_strictly_increasing_top_equals_original():
    for fps in (24, 30, 60):
        for m in (2, 3, 5, 8):
            levels = FrameRateLadder(fps, m).levels
            assert all(b > a for a, b in zip(levels, levels[1:]))
            assert levels[-1] == fps


def test_ladder_fps_for_is_one_based():
    ladder = FrameRateLadder(60, 5)
    assert ladder.fps_for(1) == 12.0
    assert ladder.fps_for(5) == 60.0
    with pytest.raises(ValidationError):
        ladder.fps_for(0)
    with pytest.raises(ValidationError):
        ladder.fps_for(6)


def test_ladder_rejects_m_below_2():
    with pytest.raises(ValidationError):
        FrameRateLadder(60, 1)


def test_minimal_valid_trace_119_diffs():
    diffs = [round(float(d), 6) for d in np.linspace(0.0, 1.0, 119)]
    trace = make_trace(chunks=[make_chunk(0, diffs=diffs)])
    trace.validate()
    assert trace.n_chunks == 1 and trace.m == 5


def test_too_many_diffs_rejected():
    diffs = [0.1] * 120  # 2 s at 60 FPS holds 120 frames, so at most 119 diffs
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, diffs=diffs)]).validate()


def test_decreasing_quality_rejected_names_field():
    bad = make_trace(chunks=[make_chunk(0, quality=(90.0, 85.0, 95.0, 96.0, 97.0))])
    with pytest.raises(ValidationError, match="quality"):
        bad.validate()


def test_error_names_chunk_index():
    bad = make_chunk(2, sizes=(500, 400, 300, 200, 100))
    trace = make_trace(chunks=[make_chunk(0), make_chunk(1), bad])
    with pytest.raises(ValidationError, match="chunk 2"):
        trace.validate()


def test_misnumbered_chunk_rejected():
    with pytest.raises(ValidationError, match="index"):
        make_trace(chunks=[make_chunk(0), make_chunk(5)]).validate()


def test_diff_out_of_range_rejected():
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, diffs=(0.1, 1.5))]).validate()
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, diffs=(-0.1,))]).validate()


def test_diff_precision_capped_at_6_digits():
    make_trace(chunks=[make_chunk(0, diffs=(0.123456,))]).validate()
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, diffs=(0.1234567,))]).validate()


def test_nonpositive_or_decreasing_sizes_rejected():
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, sizes=(0, 1, 2, 3, 4))]).validate()
    with pytest.raises(ValidationError):
        make_trace(chunks=[make_chunk(0, sizes=(100, 90, 300, 400, 500))]).validate()


def test_level_count_mismatch_rejected():
    bad = make_chunk(0, sizes=(1, 2, 3), quality=(80.0, 90.0, 95.0, 96.0, 97.0))
    with pytest.raises(ValidationError):
        make_trace(chunks=[bad]).validate()


def test_unsupported_fps_rejected():
    with pytest.raises(ValidationError):
        make_trace(fps=25).validate()


def test_empty_chunk_list_rejected():
    with pytest.raises(ValidationError):
        make_trace(chunks=[]).validate()


def test_generator_determinism():
    a = generate_synthetic("hybrid", 20, seed=9)
    b = generate_synthetic("hybrid", 20, seed=9)
    assert a == b
    assert trace_to_json(a) == trace_to_json(b)
    c = generate_synthetic("hybrid", 20, seed=10)
    assert c != a


def test_generator_profiles():
    for kind in ("static", "dynamic", "hybrid"):
        trace = generate_synthetic(kind, 8, seed=3)
        assert trace.category_tag == kind
        assert trace.n_chunks == 8
        trace.validate()
    with pytest.raises(InvalidProfile):
        generate_synthetic("wobbly", 8, seed=3)
    prof = MotionProfile(kind="hybrid", switch_period=4)
    trace = generate_synthetic(prof, 8, seed=3)
    assert trace.category_tag == "hybrid"


def test_static_trace_top_quality_high():
    trace = generate_synthetic("static", 10, seed=1)
    for chunk in trace.chunks:
        assert chunk.quality_by_level[-1] >= 99.0


def test_dynamic_trace_lowest_quality_bounded():
    trace = generate_synthetic("dynamic", 10, seed=1)
    for chunk in trace.chunks:
        assert chunk.quality_by_level[0] <= DYNAMIC_LOW_QUALITY_BOUND
        assert chunk.quality_by_level[0] > 40.0


def test_generated_quality_nondecreasing_and_sizes_increasing():
    for kind in ("static", "dynamic", "hybrid"):
        for seed in range(4):
            trace = generate_synthetic(kind, 12, seed=seed)
            for chunk in trace.chunks:
                q = chunk.quality_by_level
                s = chunk.sizes_by_level
                assert all(b >= a for a, b in zip(q, q[1:]))
                assert all(b >= a for a, b in zip(s, s[1:]))
                assert all(0.0 <= d <= 1.0 for d in chunk.frame_diffs)


def test_hybrid_alternates_motion_blocks():
    trace = generate_synthetic("hybrid", 24, seed=5)
    means = [float(np.mean(c.frame_diffs)) for c in trace.chunks]
    low = means[0:6] + means[12:18]
    high = means[6:12] + means[18:24]
    assert np.mean(high) - np.mean(low) > 0.2


def test_json_round_trip_identity():
    for seed in range(6):
        trace = generate_synthetic("hybrid", 7, seed=seed)
        text = trace_to_json(trace)
        again = trace_from_json(text)
        assert again == trace
        assert trace_to_json(again) == text


def test_file_round_trip_bit_exact(tmp_path):
    trace = generate_synthetic("dynamic", 9, seed=2)
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    save_trace(trace, str(p1))
    loaded = load_trace(str(p1))
    assert loaded == trace
    save_trace(loaded, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_save_rejects_invalid_trace_before_write(tmp_path):
    bad = dataclasses.replace(make_trace(), chunks=[])
    path = tmp_path / "never.json"
    with pytest.raises(ValidationError):
        save_trace(bad, str(path))
    assert not path.exists()


def test_load_malformed_json_is_parse_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_trace(str(path))


def test_unknown_field_rejected():
    trace = generate_synthetic("static", 3, seed=0)
    obj = json.loads(trace_to_json(trace))
    obj["extra"] = 1
    with pytest.raises(ParseError, match="extra"):
        trace_from_json(json.dumps(obj))


def test_wrong_field_types_rejected():
    trace = generate_synthetic("static", 3, seed=0)
    obj = json.loads(trace_to_json(trace))
    obj["original_fps"] = "sixty"
    with pytest.raises(ParseError):
        trace_from_json(json.dumps(obj))


def test_generate_dataset_cycles_profiles_and_is_deterministic():
    ds1 = generate_dataset(7, seed=11, chunks_range=(5, 9))
    ds2 = generate_dataset(7, seed=11, chunks_range=(5, 9))
    assert [trace_to_json(t) for t in ds1] == [trace_to_json(t) for t in ds2]
    tags = [t.category_tag for t in ds1]
    assert tags[:6] == ["static", "dynamic", "hybrid"] * 2
    assert all(5 <= t.n_chunks <= 9 for t in ds1)
    ids = [t.video_id for t in ds1]
    assert len(set(ids)) == len(ids)


def test_load_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load_trace(str(tmp_path / "absent.json"))
