"""Porter stemmer (original 1980 algorithm).

No stemming package is available in this environment, so the algorithm
is carried in-repo.  This is a direct implementation of the five-step
suffix-stripping procedure as published, validated in the test suite
against word/stem pairs from the reference vocabulary.  Within each
step only the longest matching suffix is considered; if its condition
fails, the step ends without trying shorter suffixes.

Only lower-case ASCII alphabetic input is meaningful; callers gate on
that (mixed tokens such as "c++" must be passed through unstemmed).
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel→consonant transitions, the m of [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    """True when the word ends consonant-vowel-consonant, final not w/x/y."""
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _rule_set(word: str, rules) -> str:
    """Apply the longest-suffix-match rule of a step; one shot per step."""
    for suffix, replacement, condition in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if condition is None or condition(stem):
                return stem + replacement
            return word
    return word


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    fired = False
    if word.endswith("ed"):
        stem = word[:-2]
        if _contains_vowel(stem):
            word, fired = stem, True
    elif word.endswith("ing"):
        stem = word[:-3]
        if _contains_vowel(stem):
            word, fired = stem, True
    if not fired:
        return word
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if _ends_double_consonant(word) and word[-1] not in "lsz":
        return word[:-1]
    if _measure(word) == 1 and _ends_cvc(word):
        return word + "e"
    return word


def _step1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_M_POSITIVE = lambda stem: _measure(stem) > 0  # noqa: E731
_M_GT_ONE = lambda stem: _measure(stem) > 1  # noqa: E731

_STEP2_RULES = [
    ("ational", "ate", _M_POSITIVE),
    ("ization", "ize", _M_POSITIVE),
    ("iveness", "ive", _M_POSITIVE),
    ("fulness", "ful", _M_POSITIVE),
    ("ousness", "ous", _M_POSITIVE),
    ("tional", "tion", _M_POSITIVE),
    ("biliti", "ble", _M_POSITIVE),
    ("ation", "ate", _M_POSITIVE),
    ("alism", "al", _M_POSITIVE),
    ("aliti", "al", _M_POSITIVE),
    ("iviti", "ive", _M_POSITIVE),
    ("ousli", "ous", _M_POSITIVE),
    ("entli", "ent", _M_POSITIVE),
    ("enci", "ence", _M_POSITIVE),
    ("anci", "ance", _M_POSITIVE),
    ("izer", "ize", _M_POSITIVE),
    ("abli", "able", _M_POSITIVE),
    ("alli", "al", _M_POSITIVE),
    ("ator", "ate", _M_POSITIVE),
    ("eli", "e", _M_POSITIVE),
]

_STEP3_RULES = [
    ("icate", "ic", _M_POSITIVE),
    ("ative", "", _M_POSITIVE),
    ("alize", "al", _M_POSITIVE),
    ("iciti", "ic", _M_POSITIVE),
    ("ical", "ic", _M_POSITIVE),
    ("ful", "", _M_POSITIVE),
    ("ness", "", _M_POSITIVE),
]

_STEP4_RULES = [
    ("ement", "", _M_GT_ONE),
    ("ance", "", _M_GT_ONE),
    ("ence", "", _M_GT_ONE),
    ("able", "", _M_GT_ONE),
    ("ible", "", _M_GT_ONE),
    ("ment", "", _M_GT_ONE),
    ("ion", "", lambda stem: _M_GT_ONE(stem) and stem.endswith(("s", "t"))),
    ("ant", "", _M_GT_ONE),
    ("ent", "", _M_GT_ONE),
    ("ism", "", _M_GT_ONE),
    ("ate", "", _M_GT_ONE),
    ("iti", "", _M_GT_ONE),
    ("ous", "", _M_GT_ONE),
    ("ive", "", _M_GT_ONE),
    ("ize", "", _M_GT_ONE),
    ("al", "", _M_GT_ONE),
    ("er", "", _M_GT_ONE),
    ("ic", "", _M_GT_ONE),
    ("ou", "", _M_GT_ONE),
]


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word: str) -> str:
    if (
        _measure(word) > 1
        and _ends_double_consonant(word)
        and word.endswith("l")
    ):
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Stem one lower-case alphabetic word; words of length <= 2 pass through."""
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _rule_set(word, _STEP2_RULES)
    word = _rule_set(word, _STEP3_RULES)
    word = _rule_set(word, _STEP4_RULES)
    word = _step5a(word)
    word = _step5b(word)
    return word
