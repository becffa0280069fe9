import json

import pytest

from bdspell.alphabet import (
    RULESET_VERSION,
    default_ruleset_path,
    dumps_ruleset,
    load_ruleset,
    parse_ruleset,
    ruleset_to_doc,
)
from bdspell.errors import RulesetError, RulesetParseError, UnknownLabelError


def doc_copy(rules) -> dict:
    return json.loads(json.dumps(ruleset_to_doc(rules)))


class TestDefaultRuleset:
    def test_has_36_classes(self, rules):
        assert len(rules.classes) == 36

    def test_labels_unique(self, rules):
        labels = rules.labels()
        assert len(labels) == len(set(labels))

    def test_triggers_t0_through_t6_bound_once(self, rules):
        for tid in ("T0", "T1", "T2", "T3", "T4", "T5", "T6"):
            assert rules.trigger_class(tid) is not None

    def test_numeral_classes_carry_digit_codepoints(self, rules):
        for cls in rules.classes:
            if cls.role == "numeral":
                assert all("০" <= ch <= "৯" for ch in cls.codepoints)

    def test_exit_label_is_dependent_vowel(self, rules):
        cls = rules.class_of(rules.numeral_mode_exit_label)
        assert cls.role == "dependent_vowel"
        assert cls.label == "aa"


class TestClassOf:
    def test_ka_is_consonant(self, rules):
        cls = rules.class_of("ka")
        assert cls.role == "consonant"
        assert cls.codepoints == "ক"

    def test_aa_is_dependent_vowel(self, rules):
        cls = rules.class_of("aa")
        assert cls.role == "dependent_vowel"
        assert cls.codepoints == "া"
        pair = rules.vowel_by_dependent["aa"]
        assert pair.independent_codepoints == "আ"

    def test_unknown_label(self, rules):
        with pytest.raises(UnknownLabelError):
            rules.class_of("zz")


class TestLookupCompound:
    def test_ka_tta_gives_kta(self, rules):
        rule = rules.lookup_compound(["ka", "tta"])
        assert rule is not None
        assert rule.result_label == "kta"
        assert rule.result_codepoints == "ক্ত"

    def test_absent_pair_gives_none(self, rules):
        assert rules.lookup_compound(["ka", "ka"]) is None

    def test_wrong_arity_raises(self, rules):
        with pytest.raises(ValueError):
            rules.lookup_compound(["ka"])


class TestValidation:
    def test_duplicate_label_rejected(self, rules):
        doc = doc_copy(rules)
        doc["classes"].append({"label": "ka", "role": "consonant", "codepoints": "x"})
        with pytest.raises(RulesetError, match="duplicate label 'ka'"):
            parse_ruleset(doc)

    def test_dangling_compound_reference_rejected(self, rules):
        doc = doc_copy(rules)
        doc["compounds2"].append(
            {"parts": ["ka", "zz"], "result_label": "bad", "result_codepoints": "ক্"}
        )
        with pytest.raises(RulesetError, match="dangling label 'zz'"):
            parse_ruleset(doc)

    def test_missing_trigger_rejected(self, rules):
        doc = doc_copy(rules)
        for cls in doc["classes"]:
            if cls.get("trigger") == "T3":
                del cls["trigger"]
        with pytest.raises(RulesetError, match="T3"):
            parse_ruleset(doc)

    def test_trigger_on_consonant_rejected(self, rules):
        doc = doc_copy(rules)
        doc["classes"].append(
            {"label": "xx", "role": "consonant", "codepoints": "y", "trigger": "T7"}
        )
        with pytest.raises(RulesetError, match="non-numeral"):
            parse_ruleset(doc)

    def test_non_injective_vowel_map_rejected(self, rules):
        doc = doc_copy(rules)
        doc["vowels"].append(
            {
                "dependent_label": "i",
                "dependent_codepoints": "ি",
                "independent_codepoints": "আ",
            }
        )
        # "i" already mapped; drop the original to isolate the injectivity check
        doc["vowels"] = [
            v for v in doc["vowels"]
            if not (v["dependent_label"] == "i" and v["independent_codepoints"] != "আ")
        ]
        with pytest.raises(RulesetError, match="not injective|duplicate"):
            parse_ruleset(doc)

    def test_hidden_suffix_ambiguity_rejected(self, rules):
        doc = doc_copy(rules)
        # ("ta",) already exists; a two-label pattern ending in "ta" would
        # make longest-match ambiguous
        doc["hidden"].append(
            {"pattern": ["ka", "ta"], "result_label": "bad", "result_codepoints": "x"}
        )
        with pytest.raises(RulesetError, match="proper suffix"):
            parse_ruleset(doc)

    def test_compound_without_virama_rejected(self, rules):
        doc = doc_copy(rules)
        doc["compounds2"].append(
            {"parts": ["ka", "ga"], "result_label": "bad", "result_codepoints": "ক"}
        )
        with pytest.raises(RulesetError, match="virama"):
            parse_ruleset(doc)

    def test_bad_version_rejected(self, rules):
        doc = doc_copy(rules)
        doc["ruleset_version"] = 999
        with pytest.raises(RulesetParseError, match="ruleset_version"):
            parse_ruleset(doc)

    def test_bad_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(RulesetParseError, match="not valid JSON"):
            load_ruleset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(RulesetParseError, match="cannot read"):
            load_ruleset(tmp_path / "nope.json")


class TestRoundTrip:
    def test_shipped_file_is_canonical(self, rules):
        shipped = default_ruleset_path().read_text(encoding="utf-8")
        assert dumps_ruleset(rules) == shipped

    def test_load_dump_load_stable(self, tmp_path, rules):
        out = tmp_path / "rt.json"
        out.write_text(dumps_ruleset(rules), encoding="utf-8")
        again = load_ruleset(out)
        assert dumps_ruleset(again) == dumps_ruleset(rules)

    def test_version_constant(self, rules):
        assert ruleset_to_doc(rules)["ruleset_version"] == RULESET_VERSION


class TestStructuralInvariants:
    def test_vowel_pairs_distinct_and_injective(self, rules):
        independents = [v.independent_codepoints for v in rules.vowels]
        assert len(independents) == len(set(independents))
        for v in rules.vowels:
            assert v.dependent_codepoints != v.independent_codepoints

    def test_hidden_longest_match_unambiguous(self, rules):
        patterns = [r.pattern for r in rules.hidden]
        assert len(patterns) == len(set(patterns))
        for a in patterns:
            for b in patterns:
                if a != b and len(a) < len(b):
                    assert b[-len(a):] != a

    def test_all_rule_labels_exist(self, rules):
        known = set(rules.labels())
        for v in rules.vowels:
            assert v.dependent_label in known
        for h in rules.hidden:
            assert set(h.pattern) <= known
        for c in rules.compounds2 + rules.compounds3:
            assert set(c.parts) <= known
        assert rules.numeral_mode_exit_label in known
