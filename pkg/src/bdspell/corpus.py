"""Test corpus of plannable Bengali words.

A small curated list of real words plus a seeded generator that
composes synthetic words until every production kind (literal,
vowel_transform, hidden, compound2, compound3, digit_mode, space) is
covered. Everything returned is guaranteed plannable against the
ruleset it was generated for.
"""

from __future__ import annotations

import random

from .alphabet import ROLE_CONSONANT, ROLE_DEPENDENT_VOWEL, ROLE_NUMERAL, RuleSet
from .planner import SpellingPlan, plan

# Real words spellable with the default alphabet. Comments give the
# production kinds each one exercises beyond plain literals.
CURATED_WORDS = [
    "আম",        # vowel_transform (mango)
    "আমি",       # vowel_transform (I)
    "মা",         # (mother)
    "বাবা",       # (father)
    "ভাত",       # (rice)
    "পানি",       # (water)
    "কাজ",       # (work)
    "বই",         # vowel_transform (book)
    "নদী",        # (river)
    "তারা",       # (star)
    "খাতা",       # (notebook)
    "গান",        # (song)
    "রাত",        # (night)
    "হাত",        # (hand)
    "লাল",        # (red)
    "সাত",        # (seven)
    "জল",         # (water)
    "এখন",       # vowel_transform (now)
    "বাংলা",      # hidden anusvara (Bengali)
    "কিন্তু",      # compound2 nta (but)
    "মন্ত্র",       # compound3 ntra (mantra)
    "কেন্দ্র",      # compound3 ndra (center)
    "রাস্তা",      # compound2 sta (road)
    "স্কুল",       # compound2 ska (school)
    "প্রজা",       # compound2 pra (subject)
    "অ্যাপ",      # hidden ae (app)
    "জগৎ",       # hidden khanda_ta (world)
    "মিঞা",       # hidden nya (mister)
    "হাঁ",         # hidden chandrabindu (yes)
    "স্ত্রী",        # compound3 stra (wife)
    "উনুন",       # vowel_transform (stove)
    "ওরা",        # vowel_transform (they)
    "ঈগল",       # vowel_transform (eagle)
    "তুমি",       # (you)
    "আমরা",      # vowel_transform (we)
    "কম্পন",      # compound2 mpa (vibration)
    "জব্দ",       # compound2 bda (confiscated)
    "কল্পনা",      # compound2 lpa (imagination)
    "অম্বর",      # compound2 mba (sky)
    "ত্রাস",       # compound2 tra (terror)
    "ক্রম",       # compound2 kra (order)
    "ভক্ত",       # compound2 kta (devotee)
    "১২৩",       # digit_mode
    "৪৫",         # digit_mode
    "আম ভাত",    # space
    "মা বাবা",     # space
]


def generate_corpus(rules: RuleSet, size: int = 120, seed: int = 20240501) -> list[SpellingPlan]:
    """Deterministic corpus of at least ``size`` plannable words.

    Synthetic words are built from CV syllables with conjuncts, hidden
    characters, independent vowels, digit runs, and two-word phrases
    mixed in. Identical-label runs longer than two are avoided so a
    noiseless stream never confirms the same sign twice in a row from
    leftover accumulation.
    """
    rng = random.Random(seed)
    plans: list[SpellingPlan] = []
    seen: set[str] = set()

    def admit(text: str) -> bool:
        if text in seen:
            return False
        p = plan(text, rules)
        if _max_label_run(p.labels) > 2:
            return False
        plans.append(p)
        seen.add(text)
        return True

    for word in CURATED_WORDS:
        admit(word)

    consonants = [c.codepoints for c in rules.classes if c.role == ROLE_CONSONANT]
    dep_vowels = [c.codepoints for c in rules.classes if c.role == ROLE_DEPENDENT_VOWEL]
    independents = [v.independent_codepoints for v in rules.vowels]
    hidden = [h.result_codepoints for h in rules.hidden]
    conjuncts2 = [c.result_codepoints for c in rules.compounds2]
    conjuncts3 = [c.result_codepoints for c in rules.compounds3]
    digits = [c.codepoints for c in rules.classes if c.role == ROLE_NUMERAL]

    def syllable() -> str:
        roll = rng.random()
        if roll < 0.50:
            base = rng.choice(consonants)
        elif roll < 0.65:
            base = rng.choice(conjuncts2)
        elif roll < 0.72:
            base = rng.choice(conjuncts3)
        elif roll < 0.82:
            base = rng.choice(hidden)
        else:
            return rng.choice(independents)
        if rng.random() < 0.55:
            base += rng.choice(dep_vowels)
        return base

    def word() -> str:
        roll = rng.random()
        if roll < 0.08:
            return "".join(rng.choice(digits) for _ in range(rng.randint(1, 4)))
        n = rng.randint(1, 4)
        text = "".join(syllable() for _ in range(n))
        if roll < 0.16:
            text += "".join(rng.choice(digits) for _ in range(rng.randint(1, 2)))
        return text

    attempts = 0
    while len(plans) < size and attempts < size * 50:
        attempts += 1
        text = word()
        if rng.random() < 0.12:
            text = text + " " + word()
        try:
            admit(text)
        except Exception:
            continue

    if len(plans) < size:
        raise RuntimeError(f"corpus generation stalled at {len(plans)}/{size}")
    return plans


def coverage_kinds(plans: list[SpellingPlan]) -> set[str]:
    kinds: set[str] = set()
    for p in plans:
        kinds.update(p.coverage)
    return kinds


def _max_label_run(labels: tuple[str, ...]) -> int:
    longest = 0
    run = 0
    prev = None
    for lbl in labels:
        run = run + 1 if lbl == prev else 1
        prev = lbl
        longest = max(longest, run)
    return longest
