"""Independent brute-force reference implementations used by the tests.

Deliberately written with different machinery than the package (Counter
dicts and plain math, no shared helpers) so agreement is meaningful.
"""

from __future__ import annotations

import math
from collections import Counter

VOWELS = "aeiou"


def grams(s: str, n: int) -> Counter:
    return Counter(s[i : i + n] for i in range(len(s) - n + 1))


def cos_counts(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(count * b[g] for g, count in a.items())
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return dot / (na * nb)


def devowel(s: str) -> str:
    return " ".join("".join(ch for ch in s if ch not in VOWELS).split())


def three_scores(a: str, b: str) -> tuple[float, float, float]:
    """(bigram, trigram, consonant-bigram) cosines of two ISR strings."""
    return (
        cos_counts(grams(a, 2), grams(b, 2)),
        cos_counts(grams(a, 3), grams(b, 3)),
        cos_counts(grams(devowel(a), 2), grams(devowel(b), 2)),
    )


def combined(a: str, b: str, *, arabic: bool = False) -> float:
    big, tri, con = three_scores(a, b)
    return con if arabic else (big + tri + con) / 3.0


def g2(a: int, n1: int, b: int, n2: int) -> float:
    """G-squared log-likelihood of the 2x2 table [[a, n1-a], [b, n2-b]]."""
    total = n1 + n2
    col1 = a + b
    col2 = total - col1
    value = 0.0
    for observed, row_total, col_total in (
        (a, n1, col1),
        (n1 - a, n1, col2),
        (b, n2, col1),
        (n2 - b, n2, col2),
    ):
        expected = row_total * col_total / total
        if observed > 0:
            value += observed * math.log(observed / expected)
    return 2.0 * value


def keyness_value(a: int, n1: int, b: int, n2: int) -> float:
    """G-squared, floored to 0 when the doc rate does not exceed the reference rate."""
    if n1 <= 0 or a <= 0:
        return 0.0
    if a / n1 <= (b / n2 if n2 > 0 else 0.0):
        return 0.0
    return g2(a, n1, b, n2)
