"""Inverse transducer: Bengali text to sign-label sequence.

Given target text, emit the labels (signs plus triggers) a composer
needs to reproduce it exactly. Every plan is verified by forward
execution before it is returned, so a successful plan is a proof that
the round trip closes.

Scanning is greedy longest-match over all rule tables; at equal match
length the more specific production wins (three-part conjunct over
two-part, conjunct over hidden character, hidden over vowel promotion,
vowel promotion over a literal class that happens to render the same
text). Digits are wrapped in a numeral-mode excursion: T5, the digit
signs, then the exit sign.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .alphabet import (
    ROLE_NUMERAL,
    RuleSet,
    TRIGGER_COMPOUND2,
    TRIGGER_COMPOUND3,
    TRIGGER_HIDDEN,
    TRIGGER_MODE,
    TRIGGER_SPACE,
    TRIGGER_VOWEL,
)
from .composer import ComposerState, MODE_TEXTUAL
from .errors import PlanError

COVER_LITERAL = "literal"
COVER_VOWEL = "vowel_transform"
COVER_HIDDEN = "hidden"
COVER_COMPOUND2 = "compound2"
COVER_COMPOUND3 = "compound3"
COVER_DIGIT = "digit_mode"
COVER_SPACE = "space"


@dataclass(frozen=True)
class SpellingPlan:
    """Label sequence reproducing ``target``, with per-character provenance.

    ``coverage[i]`` names the production that covers ``target[i]``.
    """

    target: str
    labels: tuple[str, ...]
    coverage: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "labels": list(self.labels),
            "coverage": list(self.coverage),
        }


# Match-kind priority at equal codepoint length (lower wins).
_PRIORITY = {
    COVER_COMPOUND3: 0,
    COVER_COMPOUND2: 1,
    COVER_HIDDEN: 2,
    COVER_VOWEL: 3,
    COVER_LITERAL: 4,
}


def _build_index(rules: RuleSet) -> dict[str, tuple[str, list[str]]]:
    """codepoints -> (coverage kind, labels to emit), best production only."""
    index: dict[str, tuple[str, list[str]]] = {}

    def offer(text: str, kind: str, labels: list[str]):
        held = index.get(text)
        if held is None or _PRIORITY[kind] < _PRIORITY[held[0]]:
            index[text] = (kind, labels)

    t1 = rules.trigger_class(TRIGGER_VOWEL).label
    t2 = rules.trigger_class(TRIGGER_COMPOUND2).label
    t3 = rules.trigger_class(TRIGGER_COMPOUND3).label
    t4 = rules.trigger_class(TRIGGER_HIDDEN).label

    for cls in rules.classes:
        if cls.role == ROLE_NUMERAL:
            continue  # digits are planned as runs, not single literals
        offer(cls.codepoints, COVER_LITERAL, [cls.label])
    for pair in rules.vowels:
        offer(pair.independent_codepoints, COVER_VOWEL, [pair.dependent_label, t1])
    for rule in rules.hidden:
        offer(rule.result_codepoints, COVER_HIDDEN, list(rule.pattern) + [t4])
    for rule in rules.compounds2:
        offer(rule.result_codepoints, COVER_COMPOUND2, list(rule.parts) + [t2])
    for rule in rules.compounds3:
        offer(rule.result_codepoints, COVER_COMPOUND3, list(rule.parts) + [t3])
    return index


def plan(text: str, rules: RuleSet) -> SpellingPlan:
    """Plan the sign sequence for ``text`` (NFC-normalized first).

    Raises PlanError naming the first character no rule path covers.
    """
    target = unicodedata.normalize("NFC", text)
    index = _build_index(rules)
    longest = max((len(k) for k in index), default=1)
    digit_label = {
        c.codepoints: c.label for c in rules.classes if c.role == ROLE_NUMERAL
    }
    t0 = rules.trigger_class(TRIGGER_SPACE).label
    t5 = rules.trigger_class(TRIGGER_MODE).label
    exit_label = rules.numeral_mode_exit_label

    labels: list[str] = []
    coverage: list[str] = []
    pos = 0
    while pos < len(target):
        ch = target[pos]
        if ch == " ":
            labels.append(t0)
            coverage.append(COVER_SPACE)
            pos += 1
            continue
        if ch in digit_label:
            run = pos
            while run < len(target) and target[run] in digit_label:
                run += 1
            labels.append(t5)
            labels.extend(digit_label[c] for c in target[pos:run])
            labels.append(exit_label)
            coverage.extend([COVER_DIGIT] * (run - pos))
            pos = run
            continue
        matched = False
        for take in range(min(longest, len(target) - pos), 0, -1):
            entry = index.get(target[pos : pos + take])
            if entry is not None:
                kind, emit = entry
                labels.extend(emit)
                coverage.extend([kind] * take)
                pos += take
                matched = True
                break
        if not matched:
            raise PlanError(
                f"no rule path produces {ch!r} (U+{ord(ch):04X}) at offset {pos}",
                char=ch,
                offset=pos,
            )

    result = SpellingPlan(target=target, labels=tuple(labels), coverage=tuple(coverage))
    _verify(result, rules)
    return result


def _verify(p: SpellingPlan, rules: RuleSet):
    """Forward-execute the plan and require an exact render."""
    state = ComposerState(rules=rules)
    for label in p.labels:
        events = state.apply_label(label)
        for ev in events:
            if ev.kind == "warning":
                raise PlanError(
                    f"plan verification hit a warning for {p.target!r}: {ev.detail}"
                )
    rendered = state.render()
    if rendered != p.target:
        raise PlanError(
            f"plan verification failed: rendered {rendered!r} != target {p.target!r}"
        )
    if state.mode != MODE_TEXTUAL:
        raise PlanError(f"plan for {p.target!r} left composer in {state.mode} mode")
