"""Streaming Bengali fingerspelling composition engine.

Turns per-frame sign-detection events into Bengali text: noisy
detections are debounced by a running-confidence threshold, confirmed
signs drive a trigger-based composition machine, and a simulator plus
metrics toolkit stand in for the camera-side stack.
"""

from ._kernel import HAVE_FAST, KERNEL_NAME
from .alphabet import (
    CompoundRule,
    HiddenRule,
    RuleSet,
    SignClass,
    VowelPair,
    load_default_ruleset,
    load_ruleset,
)
from .composer import ComposeEvent, ComposerState, Grapheme
from .confirmer import (
    ConfirmConfig,
    ConfirmedSymbol,
    ConfirmState,
    Detection,
    DetectionFrame,
)
from .metrics import Box, EvalReport, GroundTruth, Prediction, evaluate, iou
from .planner import SpellingPlan, plan
from .simulator import SensorProfile, Trace, bench, replay, simulate

__version__ = "0.1.0"

__all__ = [
    "Box",
    "ComposeEvent",
    "ComposerState",
    "CompoundRule",
    "ConfirmConfig",
    "ConfirmState",
    "ConfirmedSymbol",
    "Detection",
    "DetectionFrame",
    "EvalReport",
    "Grapheme",
    "GroundTruth",
    "HAVE_FAST",
    "HiddenRule",
    "KERNEL_NAME",
    "Prediction",
    "RuleSet",
    "SensorProfile",
    "SignClass",
    "SpellingPlan",
    "Trace",
    "VowelPair",
    "bench",
    "evaluate",
    "iou",
    "load_default_ruleset",
    "load_ruleset",
    "plan",
    "replay",
    "simulate",
]
