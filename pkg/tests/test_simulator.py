import json

import pytest

from bdspell.composer import ComposerState
from bdspell.confirmer import ConfirmConfig, ConfirmState
from bdspell.corpus import generate_corpus
from bdspell.errors import WireError
from bdspell.planner import plan
from bdspell.simulator import (
    DEFAULT_NOISY,
    GAP_FRAMES,
    SensorProfile,
    Trace,
    bench,
    replay_all,
    simulate,
)
from bdspell.wire import write_trace

NOISELESS = SensorProfile(conf_std=0.0, seed=3)


def confirm_trace(trace: Trace, delta: float = 50.0):
    state = ConfirmState(config=ConfirmConfig(delta=delta))
    out = []
    for frame in trace.frames:
        sym = state.ingest_frame(frame)
        if sym is not None:
            out.append(sym)
    return out


class TestSimulate:
    def test_empty_plan_gives_empty_trace(self, rules):
        p = plan("", rules)
        trace = simulate(p, NOISELESS, rules)
        assert trace.frames == []

    def test_frame_count_and_timing(self, rules):
        p = plan("কম", rules)  # two labels, no triggers
        trace = simulate(p, NOISELESS, rules)
        assert len(trace.frames) == 2 * NOISELESS.hold_frames + GAP_FRAMES
        dt = 1.0 / NOISELESS.fps
        for a, b in zip(trace.frames, trace.frames[1:]):
            assert b.t - a.t == pytest.approx(dt)

    def test_noiseless_confirms_at_frame_61(self, rules):
        # conf 0.84: 59*0.84 = 49.56, 60*0.84 = 50.4 > 50
        profile = SensorProfile(conf_mean=0.84, conf_std=0.0, seed=1)
        trace = simulate(plan("ক", rules), profile, rules)
        assert len(trace.frames) == 70
        syms = confirm_trace(trace, delta=50.0)
        assert len(syms) == 1
        assert syms[0].label == "ka"
        assert syms[0].frames_to_confirm == 60
        assert syms[0].t == pytest.approx(59 / 45.0)

    def test_determinism_same_seed(self, rules):
        p = plan("আম", rules)
        profile = DEFAULT_NOISY
        a = simulate(p, profile, rules)
        b = simulate(p, profile, rules)
        assert a.frames == b.frames

    def test_different_seed_differs(self, rules):
        p = plan("আম", rules)
        a = simulate(p, DEFAULT_NOISY, rules)
        b = simulate(p, SensorProfile(false_rate=0.25, miss_rate=0.05, seed=8), rules)
        assert a.frames != b.frames

    def test_noiseless_end_to_end_round_trip(self, rules):
        word = "কিন্তু"  # কিন্তু
        p = plan(word, rules)
        trace = simulate(p, NOISELESS, rules)
        composer = ComposerState(rules=rules)
        for sym in confirm_trace(trace):
            composer.apply_label(sym.label)
        assert composer.render() == word

    def test_invalid_profile_rejected(self):
        with pytest.raises(ValueError):
            SensorProfile(fps=0).validate()
        with pytest.raises(ValueError):
            SensorProfile(miss_rate=1.0).validate()
        with pytest.raises(ValueError):
            SensorProfile(hold_frames=0).validate()


class TestReplay:
    def test_write_then_replay_is_frame_identical(self, tmp_path, rules):
        p = plan("আম", rules)
        trace = simulate(p, DEFAULT_NOISY, rules)
        path = tmp_path / "trace.jsonl"
        write_trace(path, trace.frames, header=trace.header())
        frames = replay_all(path)
        assert frames == trace.frames

    def test_three_line_file(self, tmp_path):
        path = tmp_path / "t.jsonl"
        lines = [
            json.dumps({"type": "frame", "t": i * 0.1, "detections": []})
            for i in range(3)
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert [f.t for f in replay_all(path)] == pytest.approx([0.0, 0.1, 0.2])

    def test_bad_line_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            json.dumps({"type": "frame", "t": 0.0, "detections": []})
            + "\n{broken\n",
            encoding="utf-8",
        )
        with pytest.raises(WireError, match="line 2"):
            replay_all(path)

    def test_header_line_skipped(self, tmp_path):
        path = tmp_path / "h.jsonl"
        path.write_text(
            json.dumps({"profile": {"fps": 45}})
            + "\n"
            + json.dumps({"type": "frame", "t": 0.0, "detections": []})
            + "\n",
            encoding="utf-8",
        )
        assert len(replay_all(path)) == 1


@pytest.fixture(scope="module")
def small_corpus(rules):
    return generate_corpus(rules, size=30)


class TestBench:
    def test_noiseless_is_perfect_for_both_strategies(self, rules, small_corpus):
        report = bench(
            small_corpus, [5.0, 50.0], None, NOISELESS, rules, min_characters=100
        )
        for cell in report.cells:
            assert cell.accuracy == 1.0
            assert cell.unconfirmed == 0

    def test_delta50_noiseless_mean_frames_61(self, rules, small_corpus):
        profile = SensorProfile(conf_mean=0.8333, conf_std=0.0, seed=5)
        report = bench(small_corpus, [50.0], ["cumulative_confidence"], profile, rules)
        cell = report.cells[0]
        assert cell.mean_frames == 61.0
        assert cell.mean_latency_s == pytest.approx(61.0 / 45.0)

    def test_mean_frames_scale_linearly_with_delta(self, rules, small_corpus):
        profile = SensorProfile(conf_mean=0.8333, conf_std=0.0, seed=5)
        deltas = [5.0, 10.0, 20.0, 30.0, 50.0]
        report = bench(small_corpus, deltas, ["cumulative_confidence"], profile, rules)
        frames = [report.cell(d, "cumulative_confidence").mean_frames for d in deltas]
        # least-squares R^2 against delta
        n = len(deltas)
        mx = sum(deltas) / n
        my = sum(frames) / n
        sxy = sum((x - mx) * (y - my) for x, y in zip(deltas, frames))
        sxx = sum((x - mx) ** 2 for x in deltas)
        syy = sum((y - my) ** 2 for y in frames)
        r2 = sxy * sxy / (sxx * syy)
        assert r2 > 0.999

    def test_reproducible_given_seed(self, rules, small_corpus):
        a = bench(small_corpus, [5.0], None, DEFAULT_NOISY, rules, min_characters=200)
        b = bench(small_corpus, [5.0], None, DEFAULT_NOISY, rules, min_characters=200)
        assert a.to_dict() == b.to_dict()

    def test_table_formatting(self, rules, small_corpus):
        report = bench(small_corpus, [5.0], None, NOISELESS, rules)
        table = report.format_table()
        assert "delta" in table and "accuracy" in table
        assert "cumulative_confidence" in table
        assert "detection_count" in table
