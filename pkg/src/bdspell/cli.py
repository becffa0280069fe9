"""Command-line entry point.

Subcommands cover every pipeline stage: plan, simulate, compose,
replay, bench, eval, serve. Stages chain over stdin/stdout JSONL, e.g.

    bdspell simulate --text "আম" --noise off | bdspell compose --delta 50

Exit codes: 0 success, 1 input error (unreadable file, schema or flag
problem, uncoverable text), 2 invariant violation (invalid rule table,
out-of-range frame or config values).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import replace

from .alphabet import RuleSet, default_ruleset_path, load_ruleset
from .composer import ComposerState
from .confirmer import (
    STRATEGY_CONFIDENCE,
    STRATEGY_COUNT,
    ConfirmConfig,
    ConfirmState,
)
from .corpus import generate_corpus
from .errors import (
    FrameError,
    PlanError,
    RulesetError,
    RulesetParseError,
    UnknownLabelError,
    WireError,
)
from .metrics import Box, GroundTruth, Prediction, evaluate
from .planner import plan as plan_text
from .service import SessionManager
from .simulator import DEFAULT_NOISY, SensorProfile, bench, simulate
from .wire import frame_to_dict, iter_trace_lines

_STRATEGY_ALIASES = {
    "confidence": STRATEGY_CONFIDENCE,
    "count": STRATEGY_COUNT,
    STRATEGY_CONFIDENCE: STRATEGY_CONFIDENCE,
    STRATEGY_COUNT: STRATEGY_COUNT,
}


class _Parser(argparse.ArgumentParser):
    """Argparse that exits 1 on usage errors (2 is reserved)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="bdspell", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--ruleset",
        default=os.environ.get("BDSPELL_RULESET"),
        help="ruleset JSON path (default: shipped ruleset, env BDSPELL_RULESET)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", parents=[], help="text -> sign label sequence")
    p.add_argument("text")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("compose", help="JSONL frames -> composed text")
    p.add_argument("--input", help="trace file (default: stdin)")
    p.add_argument("--delta", type=float, default=50.0)
    p.add_argument("--strategy", default="confidence", choices=sorted(_STRATEGY_ALIASES))
    p.add_argument("--decay", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="text -> JSONL detection trace")
    p.add_argument("--text", required=True)
    p.add_argument("--noise", choices=["on", "off"], default="on")
    p.add_argument("--fps", type=float)
    p.add_argument("--hold", type=int)
    p.add_argument("--conf-mean", type=float)
    p.add_argument("--conf-std", type=float)
    p.add_argument("--false-rate", type=float)
    p.add_argument("--miss-rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = sub.add_parser("replay", help="stream a trace into a live session")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=float, default=50.0)
    p.add_argument("--strategy", default="confidence", choices=sorted(_STRATEGY_ALIASES))
    p.add_argument("--pace", action="store_true", help="honor recorded timestamps")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="threshold-grid accuracy benchmark")
    p.add_argument("--deltas", default="5,10,20,30,50")
    p.add_argument(
        "--strategy", default="both", choices=["both", *sorted(_STRATEGY_ALIASES)]
    )
    p.add_argument("--chars", type=int, default=1000)
    p.add_argument("--noise", choices=["on", "off"], default="on")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("eval", help="detection metrics report")
    p.add_argument("--gt", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _load_rules(args) -> RuleSet:
    path = args.ruleset or default_ruleset_path()
    return load_ruleset(path)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = random.SystemRandom().randrange(2**31)
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _profile_from(args) -> SensorProfile:
    profile = DEFAULT_NOISY if args.noise == "on" else DEFAULT_NOISY.noiseless()
    overrides = {}
    for attr, name in (
        ("fps", "fps"),
        ("hold", "hold_frames"),
        ("conf_mean", "conf_mean"),
        ("conf_std", "conf_std"),
        ("false_rate", "false_rate"),
        ("miss_rate", "miss_rate"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[name] = value
    overrides["seed"] = _resolve_seed(getattr(args, "seed", None))
    profile = replace(profile, **overrides)
    profile.validate()
    return profile


# -- subcommand bodies -------------------------------------------------


def _cmd_plan(args) -> int:
    rules = _load_rules(args)
    p = plan_text(args.text, rules)
    if args.json:
        _emit(json.dumps(p.to_dict(), ensure_ascii=False, indent=2), args.out)
    else:
        _emit(" ".join(p.labels), args.out)
    return 0


def _cmd_compose(args) -> int:
    rules = _load_rules(args)
    config = ConfirmConfig(
        strategy=_STRATEGY_ALIASES[args.strategy], delta=args.delta, decay=args.decay
    )
    config.validate()
    confirm = ConfirmState(config=config)
    composer = ComposerState(rules=rules)
    confirmed = []
    events = []
    if args.input:
        fh = open(args.input, "r", encoding="utf-8")
    else:
        fh = sys.stdin
    try:
        for frame in iter_trace_lines(fh):
            sym = confirm.ingest_frame(frame)
            if sym is None:
                continue
            confirmed.append(sym)
            for ev in composer.apply_label(sym.label):
                events.append(ev)
                if not args.json:
                    print(
                        f"[{sym.t:8.3f}s] {sym.label:>6} -> {ev.kind:<12} {ev.detail}",
                        file=sys.stderr,
                    )
    finally:
        if args.input:
            fh.close()
    text = composer.render()
    if args.json:
        _emit(
            json.dumps(
                {
                    "text": text,
                    "confirmed": [
                        {"label": s.label, "score": s.score, "frames": s.frames_to_confirm, "t": s.t}
                        for s in confirmed
                    ],
                    "events": [
                        {"kind": e.kind, "detail": e.detail, "buffer_text": e.buffer_text, "mode": e.mode}
                        for e in events
                    ],
                },
                ensure_ascii=False,
                indent=2,
            ),
            args.out,
        )
    else:
        _emit(text, args.out)
    return 0


def _cmd_simulate(args) -> int:
    rules = _load_rules(args)
    profile = _profile_from(args)
    p = plan_text(args.text, rules)
    trace = simulate(p, profile, rules)
    lines = [json.dumps(trace.header(), ensure_ascii=False)]
    lines.extend(json.dumps(frame_to_dict(f), ensure_ascii=False) for f in trace.frames)
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_replay(args) -> int:
    from .simulator import replay as replay_frames

    rules = _load_rules(args)
    manager = SessionManager(rules)
    config = ConfirmConfig(strategy=_STRATEGY_ALIASES[args.strategy], delta=args.delta)
    config.validate()
    session = manager.open_session(config)
    out_lines = []
    for frame in replay_frames(args.input, pace=args.pace):
        for msg in session.feed(frame):
            out_lines.append(json.dumps(msg, ensure_ascii=False))
    _emit("\n".join(out_lines) if out_lines else "", args.out)
    print(f"final text: {session.buffer_text()}", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    rules = _load_rules(args)
    profile = _profile_from(args)
    deltas = [float(v) for v in args.deltas.split(",") if v.strip()]
    if not deltas:
        raise ValueError("no deltas given")
    if args.strategy == "both":
        strategies = None
    else:
        strategies = [_STRATEGY_ALIASES[args.strategy]]
    plans = generate_corpus(rules, size=120, seed=profile.seed)
    report = bench(plans, deltas, strategies, profile, rules, min_characters=args.chars)
    if args.json:
        _emit(json.dumps(report.to_dict(), ensure_ascii=False, indent=2), args.out)
    else:
        _emit(report.format_table(), args.out)
    return 0


def _cmd_eval(args) -> int:
    with open(args.gt, "r", encoding="utf-8") as fh:
        gt_doc = json.load(fh)
    with open(args.pred, "r", encoding="utf-8") as fh:
        pred_doc = json.load(fh)
    try:
        gts = [
            GroundTruth(str(g["image_id"]), str(g["label"]), Box.from_list(g["box"]))
            for g in gt_doc
        ]
        preds = [
            Prediction(
                str(p["image_id"]), str(p["label"]), Box.from_list(p["box"]), float(p["score"])
            )
            for p in pred_doc
        ]
    except (KeyError, TypeError) as exc:
        raise WireError(f"malformed eval input: {exc}")
    report = evaluate(gts, preds)
    if args.json:
        _emit(json.dumps(report.to_dict(), ensure_ascii=False, indent=2), args.out)
    else:
        _emit(report.format_summary(), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .app import create_app

    rules = _load_rules(args)
    uvicorn.run(create_app(rules), host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "plan": _cmd_plan,
    "compose": _cmd_compose,
    "simulate": _cmd_simulate,
    "replay": _cmd_replay,
    "bench": _cmd_bench,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
}


def run(argv: list[str] | None = None) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (RulesetParseError, WireError, PlanError, UnknownLabelError) as exc:
        print(f"bdspell: input error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"bdspell: input error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"bdspell: input error: invalid JSON: {exc}", file=sys.stderr)
        return 1
    except (RulesetError, FrameError, ValueError) as exc:
        print(f"bdspell: invariant violation: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
