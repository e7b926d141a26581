"""Letter n-gram cosine similarity over ISR name strings.

Three measures per name pair: bigram cosine, trigram cosine and the cosine
of bigrams over vowel-stripped strings.  Standard mode averages the three;
Arabic mode (either side written in Arabic script) uses the vowel-stripped
measure alone, since Arabic omits short vowels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .errors import UsageError
from .rules import IsrName

VOWELS = frozenset("aeiou")


@dataclass(frozen=True)
class NGramProfile:
    n: int
    counts: Mapping[str, int]


@dataclass(frozen=True)
class SimilarityScore:
    bigram: float
    trigram: float
    consonant_bigram: float
    combined: float
    mode: str  # standard | arabic

    def as_dict(self) -> dict[str, float | str]:
        return {
            "bigram": self.bigram,
            "trigram": self.trigram,
            "consonant_bigram": self.consonant_bigram,
            "combined": self.combined,
            "mode": self.mode,
        }


def ngram_profile(s: str, n: int) -> NGramProfile:
    """Sliding-window n-gram counts over the raw string, no boundary padding."""
    if n not in (2, 3):
        raise UsageError(f"n must be 2 or 3, got {n}")
    counts: dict[str, int] = {}
    for i in range(len(s) - n + 1):
        gram = s[i : i + n]
        counts[gram] = counts.get(gram, 0) + 1
    return NGramProfile(n=n, counts=counts)


def cosine(p: NGramProfile, q: NGramProfile) -> float:
    """Cosine of two n-gram count vectors; 0.0 when either is empty."""
    if p.n != q.n:
        raise UsageError(f"profile order mismatch: {p.n} vs {q.n}")
    if not p.counts or not q.counts:
        return 0.0
    grams = sorted(set(p.counts) | set(q.counts))
    index = {g: i for i, g in enumerate(grams)}
    ids_p, w_p = _as_arrays(p.counts, index)
    ids_q, w_q = _as_arrays(q.counts, index)
    return kernels.cosine(ids_p, w_p, ids_q, w_q)


def _as_arrays(counts: Mapping[str, int], index: Mapping[str, int]) -> tuple[np.ndarray, np.ndarray]:
    grams = sorted(counts, key=index.__getitem__)
    ids = np.fromiter((index[g] for g in grams), dtype=np.int64, count=len(grams))
    w = np.fromiter((counts[g] for g in grams), dtype=np.float64, count=len(grams))
    return ids, w


def strip_vowels(s: str) -> str:
    """Remove a,e,i,o,u (y stays); collapse any doubled spaces that result."""
    t = "".join(ch for ch in s if ch not in VOWELS)
    return " ".join(t.split())


def name_similarity(a: IsrName, b: IsrName) -> SimilarityScore:
    """Score two ISR names; all three components are computed in both modes."""
    mode = "arabic" if "arabic" in (a.source_script, b.source_script) else "standard"
    big = cosine(ngram_profile(a.text, 2), ngram_profile(b.text, 2))
    tri = cosine(ngram_profile(a.text, 3), ngram_profile(b.text, 3))
    con = cosine(
        ngram_profile(strip_vowels(a.text), 2),
        ngram_profile(strip_vowels(b.text), 2),
    )
    combined = con if mode == "arabic" else (big + tri + con) / 3.0
    return SimilarityScore(big, tri, con, combined, mode)


class ProfileBank:
    """Packed profiles of many ISR names for one-against-all scoring.

    Rows are append-only; each row stores the bigram, trigram and
    vowel-stripped-bigram encodings plus an arabic-script flag.
    """

    def __init__(self) -> None:
        self._rows: list[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = []
        self._arabic: list[bool] = []
        self._packed: tuple[np.ndarray, ...] | None = None

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, isr_text: str, *, arabic: bool) -> int:
        ids2, w2 = kernels.encode(isr_text, 2)
        ids3, w3 = kernels.encode(isr_text, 3)
        idsc, wc = kernels.encode(strip_vowels(isr_text), 2)
        self._rows.append((ids2, w2, ids3, w3, idsc, wc))
        self._arabic.append(arabic)
        self._packed = None
        return len(self._rows) - 1

    def _pack(self) -> tuple[np.ndarray, ...]:
        if self._packed is None:
            parts: list[np.ndarray] = []
            for k in range(6):
                arrays = [row[k] for row in self._rows]
                parts.append(
                    np.concatenate(arrays)
                    if arrays
                    else np.empty(0, dtype=np.int64 if k % 2 == 0 else np.float64)
                )
            offsets: list[np.ndarray] = []
            for k in (0, 2, 4):
                lens = np.fromiter(
                    (len(row[k]) for row in self._rows), dtype=np.int64, count=len(self._rows)
                )
                offsets.append(np.concatenate(([0], np.cumsum(lens))).astype(np.int64))
            self._packed = (*parts, *offsets, np.asarray(self._arabic, dtype=bool))
        return self._packed

    def score(self, isr_text: str, *, arabic: bool) -> dict[str, np.ndarray]:
        """Score one name against every stored row.

        Returns arrays bigram/trigram/consonant_bigram/combined plus the
        per-row arabic-mode mask.
        """
        if not self._rows:
            empty = np.empty(0, dtype=np.float64)
            return {
                "bigram": empty,
                "trigram": empty,
                "consonant_bigram": empty,
                "combined": empty,
                "arabic_mode": np.empty(0, dtype=bool),
            }
        ids2, w2, ids3, w3, idsc, wc, off2, off3, offc, row_arabic = self._pack()
        q2, qw2 = kernels.encode(isr_text, 2)
        q3, qw3 = kernels.encode(isr_text, 3)
        qc, qwc = kernels.encode(strip_vowels(isr_text), 2)
        big = kernels.cosine_many(q2, qw2, ids2, w2, off2)
        tri = kernels.cosine_many(q3, qw3, ids3, w3, off3)
        con = kernels.cosine_many(qc, qwc, idsc, wc, offc)
        mask = np.logical_or(row_arabic, arabic)
        combined = np.where(mask, con, (big + tri + con) / 3.0)
        return {
            "bigram": big,
            "trigram": tri,
            "consonant_bigram": con,
            "combined": combined,
            "arabic_mode": mask,
        }
