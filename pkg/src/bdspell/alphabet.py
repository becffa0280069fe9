"""Sign alphabet and transformation rule tables.

Everything the composer and planner need to know about the writing
system lives in one JSON document: the 36 detectable sign classes, the
dependent/independent vowel pairs, the hidden-character patterns, and
the two- and three-consonant compound dictionaries. The tables are
validated on load and immutable afterwards, so a single RuleSet can be
shared by any number of concurrent sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import RulesetError, RulesetParseError, UnknownLabelError

RULESET_VERSION = 1

ROLE_CONSONANT = "consonant"
ROLE_DEPENDENT_VOWEL = "dependent_vowel"
ROLE_NUMERAL = "numeral"
ROLES = (ROLE_CONSONANT, ROLE_DEPENDENT_VOWEL, ROLE_NUMERAL)

#: Trigger ids recognised in textual mode. T0..T6 must each be bound to
#: exactly one numeral class; T7 is reserved and may stay unbound.
TRIGGER_IDS = tuple(f"T{i}" for i in range(8))
REQUIRED_TRIGGERS = TRIGGER_IDS[:7]

TRIGGER_SPACE = "T0"
TRIGGER_VOWEL = "T1"
TRIGGER_COMPOUND2 = "T2"
TRIGGER_COMPOUND3 = "T3"
TRIGGER_HIDDEN = "T4"
TRIGGER_MODE = "T5"
TRIGGER_BACKSPACE = "T6"
TRIGGER_RESERVED = "T7"


@dataclass(frozen=True)
class SignClass:
    """One recognizable hand sign.

    ``label`` is the wire identifier (short ASCII romanization),
    ``codepoints`` the Bengali text appended when the sign is taken
    literally, and ``trigger`` the optional textual-mode trigger id
    (numeral classes only).
    """

    label: str
    role: str
    codepoints: str
    trigger: str | None = None


@dataclass(frozen=True)
class VowelPair:
    """Dependent vowel sign and the independent letter it turns into."""

    dependent_label: str
    dependent_codepoints: str
    independent_codepoints: str


@dataclass(frozen=True)
class HiddenRule:
    """Buffer-suffix pattern (1-2 labels) producing a hidden character."""

    pattern: tuple[str, ...]
    result_label: str
    result_codepoints: str


@dataclass(frozen=True)
class CompoundRule:
    """Two or three consonant labels fused into one conjunct."""

    parts: tuple[str, ...]
    result_label: str
    result_codepoints: str


@dataclass(frozen=True)
class RuleSet:
    """Validated, immutable bundle of all rule tables plus fast lookups."""

    classes: tuple[SignClass, ...]
    vowels: tuple[VowelPair, ...]
    hidden: tuple[HiddenRule, ...]
    compounds2: tuple[CompoundRule, ...]
    compounds3: tuple[CompoundRule, ...]
    numeral_mode_exit_label: str

    # Derived lookup tables, filled in by __post_init__.
    by_label: dict[str, SignClass] = field(default_factory=dict, repr=False)
    by_trigger: dict[str, SignClass] = field(default_factory=dict, repr=False)
    vowel_by_dependent: dict[str, VowelPair] = field(default_factory=dict, repr=False)
    compound_by_parts: dict[tuple[str, ...], CompoundRule] = field(default_factory=dict, repr=False)
    hidden_by_pattern: dict[tuple[str, ...], HiddenRule] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "by_label", {c.label: c for c in self.classes})
        object.__setattr__(
            self, "by_trigger", {c.trigger: c for c in self.classes if c.trigger}
        )
        object.__setattr__(
            self, "vowel_by_dependent", {v.dependent_label: v for v in self.vowels}
        )
        object.__setattr__(
            self,
            "compound_by_parts",
            {r.parts: r for r in self.compounds2 + self.compounds3},
        )
        object.__setattr__(
            self, "hidden_by_pattern", {r.pattern: r for r in self.hidden}
        )

    # -- lookups ------------------------------------------------------

    def class_of(self, label: str) -> SignClass:
        """Return the sign class for ``label`` or raise UnknownLabelError."""
        try:
            return self.by_label[label]
        except KeyError:
            raise UnknownLabelError(f"unknown sign label {label!r}") from None

    def lookup_compound(self, parts: list[str] | tuple[str, ...]) -> CompoundRule | None:
        """Exact-tuple compound lookup; arity must be 2 or 3."""
        if len(parts) not in (2, 3):
            raise ValueError(f"compound lookup needs 2 or 3 parts, got {len(parts)}")
        return self.compound_by_parts.get(tuple(parts))

    def match_hidden_suffix(self, labels: tuple[str, ...]) -> HiddenRule | None:
        """Longest hidden-rule match against a label-sequence suffix."""
        for take in (2, 1):
            if len(labels) >= take:
                rule = self.hidden_by_pattern.get(labels[-take:])
                if rule is not None:
                    return rule
        return None

    def trigger_class(self, trigger_id: str) -> SignClass | None:
        return self.by_trigger.get(trigger_id)

    def labels(self) -> list[str]:
        return [c.label for c in self.classes]


# -- loading and validation ------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise RulesetError(message)


def parse_ruleset(doc: dict) -> RuleSet:
    """Build a RuleSet from a parsed JSON document, checking every invariant.

    Raises RulesetError with the offending rule index and reason.
    """
    if not isinstance(doc, dict):
        raise RulesetParseError("ruleset document must be a JSON object")
    if doc.get("ruleset_version") != RULESET_VERSION:
        raise RulesetParseError(
            f"unsupported ruleset_version {doc.get('ruleset_version')!r}, "
            f"expected {RULESET_VERSION}"
        )
    for key in ("classes", "vowels", "hidden", "compounds2", "compounds3"):
        if not isinstance(doc.get(key), list):
            raise RulesetParseError(f"missing or non-list key {key!r}")

    classes = []
    seen_labels: set[str] = set()
    seen_triggers: set[str] = set()
    for i, raw in enumerate(doc["classes"]):
        label = raw.get("label")
        role = raw.get("role")
        codepoints = raw.get("codepoints")
        trigger = raw.get("trigger")
        _require(isinstance(label, str) and label != "", f"classes[{i}]: empty label")
        _require(label.isascii(), f"classes[{i}] {label!r}: label must be ASCII")
        _require(label not in seen_labels, f"classes[{i}]: duplicate label {label!r}")
        seen_labels.add(label)
        _require(role in ROLES, f"classes[{i}] {label!r}: bad role {role!r}")
        _require(
            isinstance(codepoints, str) and codepoints != "",
            f"classes[{i}] {label!r}: empty codepoints",
        )
        if trigger is not None:
            _require(
                trigger in TRIGGER_IDS,
                f"classes[{i}] {label!r}: unknown trigger {trigger!r}",
            )
            _require(
                role == ROLE_NUMERAL,
                f"classes[{i}] {label!r}: trigger on non-numeral class",
            )
            _require(
                trigger not in seen_triggers,
                f"classes[{i}] {label!r}: trigger {trigger} bound twice",
            )
            seen_triggers.add(trigger)
        classes.append(SignClass(label, role, codepoints, trigger))

    for tid in REQUIRED_TRIGGERS:
        _require(tid in seen_triggers, f"trigger {tid} is not bound to any class")

    vowels = []
    seen_dep: set[str] = set()
    seen_indep: set[str] = set()
    for i, raw in enumerate(doc["vowels"]):
        dep = raw.get("dependent_label")
        dep_cp = raw.get("dependent_codepoints")
        ind_cp = raw.get("independent_codepoints")
        _require(dep in seen_labels, f"vowels[{i}]: dangling label {dep!r}")
        _require(dep not in seen_dep, f"vowels[{i}]: duplicate dependent {dep!r}")
        seen_dep.add(dep)
        _require(bool(dep_cp) and bool(ind_cp), f"vowels[{i}] {dep!r}: empty codepoints")
        _require(dep_cp != ind_cp, f"vowels[{i}] {dep!r}: dependent == independent")
        _require(
            ind_cp not in seen_indep,
            f"vowels[{i}] {dep!r}: independent {ind_cp!r} mapped twice (not injective)",
        )
        seen_indep.add(ind_cp)
        vowels.append(VowelPair(dep, dep_cp, ind_cp))

    hidden = []
    seen_patterns: set[tuple[str, ...]] = set()
    for i, raw in enumerate(doc["hidden"]):
        pattern = tuple(raw.get("pattern", ()))
        _require(
            1 <= len(pattern) <= 2, f"hidden[{i}]: pattern length must be 1 or 2"
        )
        for lbl in pattern:
            _require(lbl in seen_labels, f"hidden[{i}]: dangling label {lbl!r}")
        _require(pattern not in seen_patterns, f"hidden[{i}]: duplicate pattern {pattern}")
        seen_patterns.add(pattern)
        _require(bool(raw.get("result_codepoints")), f"hidden[{i}]: empty result")
        hidden.append(HiddenRule(pattern, raw.get("result_label", ""), raw["result_codepoints"]))

    # Longest-match must be unambiguous: a 1-label pattern may not be the
    # suffix of any 2-label pattern.
    for i, r in enumerate(hidden):
        for other in hidden:
            if r is not other and len(r.pattern) < len(other.pattern):
                _require(
                    other.pattern[-len(r.pattern):] != r.pattern,
                    f"hidden[{i}]: pattern {r.pattern} is a proper suffix of {other.pattern}",
                )

    def parse_compounds(key: str, arity: int) -> list[CompoundRule]:
        rules = []
        seen_parts: set[tuple[str, ...]] = set()
        for i, raw in enumerate(doc[key]):
            parts = tuple(raw.get("parts", ()))
            _require(
                len(parts) == arity, f"{key}[{i}]: expected {arity} parts, got {len(parts)}"
            )
            for lbl in parts:
                _require(lbl in seen_labels, f"{key}[{i}]: dangling label {lbl!r}")
            _require(parts not in seen_parts, f"{key}[{i}]: duplicate parts {parts}")
            seen_parts.add(parts)
            result = raw.get("result_codepoints", "")
            _require(bool(result), f"{key}[{i}]: empty result")
            _require(
                "্" in result,
                f"{key}[{i}]: conjunct result {result!r} has no virama joiner",
            )
            rules.append(CompoundRule(parts, raw.get("result_label", ""), result))
        return rules

    compounds2 = parse_compounds("compounds2", 2)
    compounds3 = parse_compounds("compounds3", 3)

    exit_label = doc.get("numeral_mode_exit_label")
    _require(
        exit_label in seen_labels,
        f"numeral_mode_exit_label {exit_label!r} is not a class",
    )
    exit_cls = next(c for c in classes if c.label == exit_label)
    _require(
        exit_cls.role == ROLE_DEPENDENT_VOWEL,
        f"numeral_mode_exit_label {exit_label!r} must have role dependent_vowel",
    )

    return RuleSet(
        classes=tuple(classes),
        vowels=tuple(vowels),
        hidden=tuple(hidden),
        compounds2=tuple(compounds2),
        compounds3=tuple(compounds3),
        numeral_mode_exit_label=exit_label,
    )


def load_ruleset(path: str | Path) -> RuleSet:
    """Load and validate a ruleset JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RulesetParseError(f"cannot read ruleset {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise RulesetParseError(f"ruleset {path} is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RulesetParseError(f"ruleset {path} is not valid JSON: {exc}") from exc
    return parse_ruleset(doc)


def ruleset_to_doc(rules: RuleSet) -> dict:
    """Back-convert a RuleSet to its JSON document form."""
    classes = []
    for c in rules.classes:
        entry: dict = {"label": c.label, "role": c.role, "codepoints": c.codepoints}
        if c.trigger is not None:
            entry["trigger"] = c.trigger
        classes.append(entry)
    return {
        "ruleset_version": RULESET_VERSION,
        "classes": classes,
        "vowels": [
            {
                "dependent_label": v.dependent_label,
                "dependent_codepoints": v.dependent_codepoints,
                "independent_codepoints": v.independent_codepoints,
            }
            for v in rules.vowels
        ],
        "hidden": [
            {
                "pattern": list(r.pattern),
                "result_label": r.result_label,
                "result_codepoints": r.result_codepoints,
            }
            for r in rules.hidden
        ],
        "compounds2": [
            {
                "parts": list(r.parts),
                "result_label": r.result_label,
                "result_codepoints": r.result_codepoints,
            }
            for r in rules.compounds2
        ],
        "compounds3": [
            {
                "parts": list(r.parts),
                "result_label": r.result_label,
                "result_codepoints": r.result_codepoints,
            }
            for r in rules.compounds3
        ],
        "numeral_mode_exit_label": rules.numeral_mode_exit_label,
    }


def dumps_ruleset(rules: RuleSet) -> str:
    """Canonical serialization: sorted keys, no ASCII escaping, 2-space indent.

    Loading then re-serializing a canonical file is byte-identical.
    """
    return json.dumps(ruleset_to_doc(rules), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def default_ruleset_path() -> Path:
    """Path of the ruleset shipped with the package."""
    return Path(str(resources.files("bdspell").joinpath("data/ruleset_v1.json")))


def load_default_ruleset() -> RuleSet:
    return load_ruleset(default_ruleset_path())
