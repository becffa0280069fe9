"""Trigger-driven text composition.

Confirmed signs mutate a grapheme buffer. In textual mode the eight
numeral signs act as triggers: T0 space, T1 dependent-to-independent
vowel promotion, T2/T3 two- and three-part conjunct formation, T4
hidden-character substitution, T5 switch to numeral mode, T6 backspace,
T7 reserved no-op. In numeral mode every sign appends literally and
only the designated exit sign (the 'aa' vowel by default) returns to
textual mode. Failed transformations never destroy buffer content; they
emit a warning event and leave the buffer untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import (
    ROLE_DEPENDENT_VOWEL,
    ROLE_NUMERAL,
    RuleSet,
    TRIGGER_BACKSPACE,
    TRIGGER_COMPOUND2,
    TRIGGER_COMPOUND3,
    TRIGGER_HIDDEN,
    TRIGGER_MODE,
    TRIGGER_SPACE,
    TRIGGER_VOWEL,
)
from .confirmer import ConfirmedSymbol

MODE_TEXTUAL = "textual"
MODE_NUMERAL = "numeral"

KIND_CONSONANT = "consonant"
KIND_DEP_VOWEL = "dep_vowel"
KIND_INDEP_VOWEL = "indep_vowel"
KIND_HIDDEN = "hidden"
KIND_COMPOUND = "compound"
KIND_DIGIT = "digit"
KIND_SPACE = "space"

EVENT_APPENDED = "appended"
EVENT_TRANSFORMED = "transformed"
EVENT_DELETED = "deleted"
EVENT_SPACE = "space"
EVENT_MODE_CHANGED = "mode_changed"
EVENT_WARNING = "warning"

_ROLE_TO_KIND = {
    "consonant": KIND_CONSONANT,
    ROLE_DEPENDENT_VOWEL: KIND_DEP_VOWEL,
    ROLE_NUMERAL: KIND_DIGIT,
}


@dataclass(frozen=True)
class Grapheme:
    """One buffer cell: what it renders as and which signs produced it."""

    kind: str
    source_labels: tuple[str, ...]
    codepoints: str


@dataclass(frozen=True)
class ComposeEvent:
    """Observable outcome of one apply(): what happened, why, and the
    full rendered buffer afterwards."""

    kind: str
    detail: str
    buffer_text: str
    mode: str


@dataclass
class ComposerState:
    """Mode plus grapheme buffer; single writer per session."""

    rules: RuleSet
    mode: str = MODE_TEXTUAL
    buffer: list[Grapheme] = field(default_factory=list)

    # -- core operations ----------------------------------------------

    def render(self) -> str:
        """Concatenated codepoints of the buffer, in order."""
        return "".join(g.codepoints for g in self.buffer)

    def reset(self) -> "ComposerState":
        """Empty buffer, textual mode. Idempotent."""
        self.buffer.clear()
        self.mode = MODE_TEXTUAL
        return self

    def apply(self, sym: ConfirmedSymbol) -> list[ComposeEvent]:
        """Apply one confirmed sign; always emits at least one event."""
        return self.apply_label(sym.label)

    def apply_label(self, label: str) -> list[ComposeEvent]:
        cls = self.rules.class_of(label)

        if self.mode == MODE_NUMERAL:
            if label == self.rules.numeral_mode_exit_label:
                self.mode = MODE_TEXTUAL
                return [self._event(EVENT_MODE_CHANGED, "numeral mode exited")]
            # Inside numeral mode nothing triggers; everything is literal.
            return [self._append_literal(cls)]

        if cls.trigger is not None:
            return self._dispatch_trigger(cls)
        return [self._append_literal(cls)]

    # -- internals ----------------------------------------------------

    def _event(self, kind: str, detail: str) -> ComposeEvent:
        return ComposeEvent(kind, detail, self.render(), self.mode)

    def _append_literal(self, cls) -> ComposeEvent:
        kind = _ROLE_TO_KIND[cls.role]
        self.buffer.append(Grapheme(kind, (cls.label,), cls.codepoints))
        return self._event(EVENT_APPENDED, f"appended {cls.label!r}")

    def _dispatch_trigger(self, cls) -> list[ComposeEvent]:
        trigger = cls.trigger
        if trigger == TRIGGER_SPACE:
            self.buffer.append(Grapheme(KIND_SPACE, (cls.label,), " "))
            return [self._event(EVENT_SPACE, "space")]
        if trigger == TRIGGER_VOWEL:
            return [self._promote_vowel()]
        if trigger == TRIGGER_COMPOUND2:
            return [self._fuse_compound(2)]
        if trigger == TRIGGER_COMPOUND3:
            return [self._fuse_compound(3)]
        if trigger == TRIGGER_HIDDEN:
            return [self._substitute_hidden()]
        if trigger == TRIGGER_MODE:
            self.mode = MODE_NUMERAL
            return [self._event(EVENT_MODE_CHANGED, "numeral mode entered")]
        if trigger == TRIGGER_BACKSPACE:
            if not self.buffer:
                return [self._event(EVENT_WARNING, "backspace on empty buffer")]
            gone = self.buffer.pop()
            return [self._event(EVENT_DELETED, f"deleted {gone.codepoints!r}")]
        return [self._event(EVENT_WARNING, f"trigger {trigger} is reserved (no-op)")]

    def _promote_vowel(self) -> ComposeEvent:
        if not self.buffer:
            return self._event(EVENT_WARNING, "vowel promotion on empty buffer")
        last = self.buffer[-1]
        if last.kind != KIND_DEP_VOWEL:
            return self._event(
                EVENT_WARNING, "vowel promotion needs a trailing dependent vowel"
            )
        pair = self.rules.vowel_by_dependent.get(last.source_labels[0])
        if pair is None:
            return self._event(
                EVENT_WARNING,
                f"no independent form for {last.source_labels[0]!r}",
            )
        self.buffer[-1] = Grapheme(
            KIND_INDEP_VOWEL, last.source_labels, pair.independent_codepoints
        )
        return self._event(
            EVENT_TRANSFORMED,
            f"{pair.dependent_codepoints!r} promoted to {pair.independent_codepoints!r}",
        )

    def _fuse_compound(self, arity: int) -> ComposeEvent:
        if len(self.buffer) < arity:
            return self._event(
                EVENT_WARNING, f"compound needs {arity} buffer graphemes"
            )
        tail = self.buffer[-arity:]
        parts: tuple[str, ...] = ()
        for g in tail:
            parts += g.source_labels
        if len(parts) != arity:
            return self._event(
                EVENT_WARNING, f"trailing graphemes do not form {arity} plain parts"
            )
        rule = self.rules.compound_by_parts.get(parts)
        if rule is None:
            return self._event(
                EVENT_WARNING, f"no {arity}-part compound for {'+'.join(parts)}"
            )
        del self.buffer[-arity:]
        self.buffer.append(Grapheme(KIND_COMPOUND, rule.parts, rule.result_codepoints))
        return self._event(
            EVENT_TRANSFORMED,
            f"{'+'.join(parts)} fused into {rule.result_codepoints!r}",
        )

    def _substitute_hidden(self) -> ComposeEvent:
        # Longest pattern first: two trailing graphemes, then a single
        # grapheme whose recorded sources span two labels, then one label.
        candidates: list[int] = []
        if len(self.buffer) >= 2:
            candidates.append(2)
        if self.buffer:
            candidates.append(1)
        attempts: list[tuple[int, tuple[str, ...]]] = []
        for take in candidates:
            labels: tuple[str, ...] = ()
            for g in self.buffer[-take:]:
                labels += g.source_labels
            attempts.append((take, labels))
        attempts.sort(key=lambda a: -len(a[1]))
        for take, labels in attempts:
            if not 1 <= len(labels) <= 2:
                continue
            rule = self.rules.hidden_by_pattern.get(labels)
            if rule is not None:
                del self.buffer[-take:]
                self.buffer.append(
                    Grapheme(KIND_HIDDEN, rule.pattern, rule.result_codepoints)
                )
                return self._event(
                    EVENT_TRANSFORMED,
                    f"{'+'.join(labels)} hidden-substituted to {rule.result_codepoints!r}",
                )
        return self._event(EVENT_WARNING, "no hidden rule matches the buffer suffix")


def new_state(rules: RuleSet) -> ComposerState:
    return ComposerState(rules=rules)
