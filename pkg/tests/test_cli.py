import json

import pytest

from bdspell.cli import run


def lines_of(path):
    return path.read_text(encoding="utf-8").strip().splitlines()


class TestPlan:
    def test_plan_kta(self, capsys):
        assert run(["plan", "ক্ত"]) == 0
        assert capsys.readouterr().out.strip() == "ka tta two"

    def test_plan_json(self, capsys):
        assert run(["plan", "আম", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["labels"] == ["aa", "one", "ma"]
        assert doc["target"] == "আম"

    def test_plan_uncoverable_is_input_error(self, capsys):
        assert run(["plan", "hello"]) == 1
        assert "input error" in capsys.readouterr().err


class TestSimulateCompose:
    def test_pipe_round_trip_via_file(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        assert run([
            "simulate", "--text", "আম", "--noise", "off",
            "--seed", "3", "--out", str(trace),
        ]) == 0
        assert run([
            "compose", "--input", str(trace), "--delta", "50",
        ]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out[-1] == "আম"

    def test_compose_stdin(self, tmp_path, capsys, monkeypatch):
        import io

        trace = tmp_path / "t.jsonl"
        run(["simulate", "--text", "ক", "--noise", "off", "--seed", "1",
             "--out", str(trace)])
        capsys.readouterr()
        monkeypatch.setattr(
            "sys.stdin", io.StringIO(trace.read_text(encoding="utf-8"))
        )
        assert run(["compose"]) == 0
        assert capsys.readouterr().out.strip() == "ক"

    def test_compose_empty_input(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        assert run(["compose"]) == 0
        assert capsys.readouterr().out == "\n"

    def test_compose_json_payload(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        run(["simulate", "--text", "ক", "--noise", "off", "--seed", "1",
             "--out", str(trace)])
        capsys.readouterr()
        assert run(["compose", "--input", str(trace), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["text"] == "ক"
        assert doc["confirmed"][0]["label"] == "ka"
        assert doc["events"][0]["kind"] == "appended"

    def test_simulate_header_carries_provenance(self, tmp_path):
        trace = tmp_path / "t.jsonl"
        run(["simulate", "--text", "ক", "--noise", "off", "--seed", "9",
             "--out", str(trace)])
        header = json.loads(lines_of(trace)[0])
        assert header["profile"]["seed"] == 9
        assert header["plan"]["labels"] == ["ka"]

    def test_simulate_prints_seed_when_omitted(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        assert run(["simulate", "--text", "ক", "--out", str(trace)]) == 0
        assert "seed:" in capsys.readouterr().err

    def test_compose_bad_trace_is_input_error(self, tmp_path, capsys):
        trace = tmp_path / "bad.jsonl"
        trace.write_text("{broken\n", encoding="utf-8")
        assert run(["compose", "--input", str(trace)]) == 1
        assert "line 1" in capsys.readouterr().err

    def test_compose_invalid_delta_is_invariant_violation(self, capsys):
        assert run(["compose", "--delta", "0"]) == 2
        assert "invariant violation" in capsys.readouterr().err

    def test_missing_input_file(self, capsys):
        assert run(["compose", "--input", "/nonexistent/t.jsonl"]) == 1


class TestReplay:
    def test_replay_emits_wire_messages(self, tmp_path, capsys):
        trace = tmp_path / "t.jsonl"
        run(["simulate", "--text", "ক", "--noise", "off", "--seed", "1",
             "--out", str(trace)])
        capsys.readouterr()
        assert run(["replay", "--input", str(trace), "--delta", "50"]) == 0
        captured = capsys.readouterr()
        msgs = [json.loads(l) for l in captured.out.strip().splitlines()]
        assert any(m["type"] == "confirmed" for m in msgs)
        assert "final text: ক" in captured.err


class TestBench:
    def test_small_grid(self, capsys):
        assert run([
            "bench", "--deltas", "5,10", "--strategy", "confidence",
            "--chars", "40", "--noise", "off", "--seed", "5",
        ]) == 0
        table = capsys.readouterr().out
        assert "cumulative_confidence" in table
        assert "100.00%" in table

    def test_json_report(self, capsys):
        assert run([
            "bench", "--deltas", "5", "--strategy", "both",
            "--chars", "30", "--noise", "off", "--seed", "5", "--json",
        ]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["cells"]) == 2
        assert doc["cells"][0]["accuracy"] == 1.0


class TestEval:
    def test_eval_files(self, tmp_path, capsys):
        gt = tmp_path / "gt.json"
        pred = tmp_path / "pred.json"
        gt.write_text(json.dumps(
            [{"image_id": "i", "label": "ka", "box": [0, 0, 10, 10]}]
        ), encoding="utf-8")
        pred.write_text(json.dumps(
            [{"image_id": "i", "label": "ka", "box": [0, 0, 10, 10], "score": 0.9}]
        ), encoding="utf-8")
        assert run(["eval", "--gt", str(gt), "--pred", str(pred), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["map50"] == pytest.approx(1.0)

    def test_eval_empty_gt_is_invariant_violation(self, tmp_path, capsys):
        gt = tmp_path / "gt.json"
        pred = tmp_path / "pred.json"
        gt.write_text("[]", encoding="utf-8")
        pred.write_text("[]", encoding="utf-8")
        assert run(["eval", "--gt", str(gt), "--pred", str(pred)]) == 2

    def test_eval_bad_json_is_input_error(self, tmp_path):
        gt = tmp_path / "gt.json"
        pred = tmp_path / "pred.json"
        gt.write_text("{oops", encoding="utf-8")
        pred.write_text("[]", encoding="utf-8")
        assert run(["eval", "--gt", str(gt), "--pred", str(pred)]) == 1


class TestFlagsAndEnv:
    def test_unknown_flag_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["plan", "x", "--bogus"])
        assert exc.value.code == 1

    def test_env_ruleset_respected(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("BDSPELL_RULESET", str(tmp_path / "missing.json"))
        assert run(["plan", "ক"]) == 1
        assert "cannot read" in capsys.readouterr().err

    def test_explicit_ruleset_flag(self, capsys):
        from bdspell.alphabet import default_ruleset_path

        assert run(["--ruleset", str(default_ruleset_path()), "plan", "ক"]) == 0
        assert capsys.readouterr().out.strip() == "ka"

    def test_deterministic_given_seed(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(["simulate", "--text", "আম", "--seed", "11", "--out", str(a)])
        run(["simulate", "--text", "আম", "--seed", "11", "--out", str(b)])
        assert a.read_text(encoding="utf-8") == b.read_text(encoding="utf-8")
