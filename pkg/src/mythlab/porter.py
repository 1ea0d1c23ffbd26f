"""Porter suffix-stripping stemmer.

Steps 1a through 5b of Porter (1980), each applied once, in order. Within a
step only the rule with the longest matching suffix is considered; if its
condition fails the step leaves the word alone.

One amendment: step 1c turns a final ``y`` into ``i`` only when the ``y``
follows a consonant (``happy -> happi`` but ``play -> play``).
"""

_VOWELS = frozenset("aeiou")


def _is_consonant(word, i):
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def measure(stem):
    """Number of vowel-consonant sequences, the ``m`` in ``[C](VC)^m[V]``."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _contains_vowel(stem):
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word):
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word):
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _m_gt(n):
    return lambda stem: measure(stem) > n


def _apply(word, rules):
    """Apply the longest-suffix rule of a step.

    ``rules`` is a list of ``(suffix, replacement, condition)`` sorted by
    descending suffix length. Returns ``(new_word, fired)``.
    """
    for suffix, replacement, condition in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if condition is None or condition(stem):
                return stem + replacement, True
            return word, False
    return word, False


def _sorted(rules):
    return sorted(rules, key=lambda r: -len(r[0]))


_STEP1A = _sorted([
    ("sses", "ss", None),
    ("ies", "i", None),
    ("ss", "ss", None),
    ("s", "", None),
])

_STEP2 = _sorted([
    (suffix, repl, _m_gt(0))
    for suffix, repl in [
        ("ational", "ate"), ("tional", "tion"), ("enci", "ence"),
        ("anci", "ance"), ("izer", "ize"), ("abli", "able"),
        ("alli", "al"), ("entli", "ent"), ("eli", "e"), ("ousli", "ous"),
        ("ization", "ize"), ("ation", "ate"), ("ator", "ate"),
        ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
        ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"),
        ("biliti", "ble"),
    ]
])

_STEP3 = _sorted([
    (suffix, repl, _m_gt(0))
    for suffix, repl in [
        ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
        ("ical", "ic"), ("ful", ""), ("ness", ""),
    ]
])


def _ion_condition(stem):
    return measure(stem) > 1 and stem[-1:] in ("s", "t")


_STEP4 = _sorted(
    [
        (suffix, "", _m_gt(1))
        for suffix in [
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
            "ement", "ment", "ent", "ou", "ism", "ate", "iti", "ous",
            "ive", "ize",
        ]
    ]
    + [("ion", "", _ion_condition)]
)


def _step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if measure(stem) > 0 else word
    for suffix in ("ing", "ed"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if not _contains_vowel(stem):
                return word
            return _step1b_cleanup(stem)
    return word


def _step1b_cleanup(word):
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if _ends_double_consonant(word) and word[-1] not in "lsz":
        return word[:-1]
    if measure(word) == 1 and _ends_cvc(word):
        return word + "e"
    return word


def _step1c(word):
    if word.endswith("y") and len(word) >= 2:
        stem = word[:-1]
        if _contains_vowel(stem) and _is_consonant(stem, len(stem) - 1):
            return stem + "i"
    return word


def _step5(word):
    if word.endswith("e"):
        stem = word[:-1]
        m = measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem
    if measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]
    return word


def stem(token):
    """Reduce a lowercase alphabetic token to its Porter stem."""
    if len(token) <= 2:
        return token
    word, _ = _apply(token, _STEP1A)
    word = _step1b(word)
    word = _step1c(word)
    word, _ = _apply(word, _STEP2)
    word, _ = _apply(word, _STEP3)
    word, _ = _apply(word, _STEP4)
    return _step5(word)
