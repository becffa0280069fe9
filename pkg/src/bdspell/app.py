"""HTTP/WebSocket surface.

Endpoints:
  WS   /v1/session   bidirectional session channel (wire schema)
  GET  /v1/alphabet  active ruleset document
  POST /v1/plan      {"text": ...} -> spelling plan
  POST /v1/eval      {"ground_truth": [...], "predictions": [...]} -> report
  GET  /v1/config    default session config
  PUT  /v1/config    update default session config
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware

from .alphabet import RuleSet, load_default_ruleset, ruleset_to_doc
from .confirmer import STRATEGIES, ConfirmConfig
from .errors import BdspellError, PlanError
from .metrics import Box, GroundTruth, Prediction, evaluate
from .planner import plan as plan_text
from .service import SessionManager


def create_app(rules: RuleSet | None = None) -> FastAPI:
    rules = rules or load_default_ruleset()
    app = FastAPI(title="bdspell", version="0.1.0")
    # the browser console is served from its own origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    manager = SessionManager(rules)
    default_config = {"strategy": "cumulative_confidence", "delta": 50.0, "decay": 1.0}

    app.state.manager = manager
    app.state.rules = rules

    @app.get("/v1/alphabet")
    def get_alphabet() -> dict:
        return ruleset_to_doc(rules)

    @app.post("/v1/plan")
    def post_plan(body: dict) -> dict:
        text = body.get("text")
        if not isinstance(text, str) or not text:
            raise HTTPException(status_code=422, detail="body must carry a non-empty 'text'")
        try:
            return plan_text(text, rules).to_dict()
        except PlanError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/v1/eval")
    def post_eval(body: dict) -> dict:
        try:
            gts = [
                GroundTruth(str(g["image_id"]), str(g["label"]), Box.from_list(g["box"]))
                for g in body.get("ground_truth", [])
            ]
            preds = [
                Prediction(
                    str(p["image_id"]), str(p["label"]),
                    Box.from_list(p["box"]), float(p["score"]),
                )
                for p in body.get("predictions", [])
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"malformed eval payload: {exc}")
        try:
            return evaluate(gts, preds).to_dict()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/config")
    def get_config() -> dict:
        return dict(default_config)

    @app.put("/v1/config")
    def put_config(body: dict) -> dict:
        merged = {**default_config, **body}
        try:
            cfg = ConfirmConfig(
                strategy=merged["strategy"],
                delta=float(merged["delta"]),
                decay=float(merged["decay"]),
            )
            cfg.validate()
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        default_config.update(
            {"strategy": cfg.strategy, "delta": cfg.delta, "decay": cfg.decay}
        )
        return dict(default_config)

    @app.websocket("/v1/session")
    async def session_channel(
        ws: WebSocket,
        delta: float = Query(default=None),
        strategy: str = Query(default=None),
    ):
        await ws.accept()
        cfg = ConfirmConfig(
            strategy=strategy or default_config["strategy"],
            delta=delta if delta is not None else default_config["delta"],
            decay=default_config["decay"],
        )
        try:
            cfg.validate()
        except ValueError as exc:
            await ws.send_json({"type": "error", "reason": str(exc)})
            await ws.close()
            return
        session = manager.open_session(cfg)
        await ws.send_json(
            {
                "type": "session_open",
                "session_id": session.id,
                "delta": cfg.delta,
                "strategy": cfg.strategy,
            }
        )
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    doc = json.loads(raw)
                except json.JSONDecodeError:
                    await ws.send_json({"type": "error", "reason": "invalid JSON"})
                    continue
                try:
                    out = session.handle_message(doc)
                except BdspellError as exc:
                    out = [{"type": "error", "reason": str(exc)}]
                for msg in out:
                    await ws.send_json(msg)
        except WebSocketDisconnect:
            pass
        finally:
            manager.close(session.id)

    return app


app = create_app()
