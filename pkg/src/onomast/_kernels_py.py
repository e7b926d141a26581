"""Pure-Python n-gram cosine kernels.

Fallback used when the compiled extension is unavailable (or when
ONOMAST_PURE_PYTHON=1 forces it).  Must produce results identical to
onomast._kernels_c: same encoding, same summation order, same formula.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def encode(text: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pack a string's n-grams into sorted int64 codes with float64 counts.

    Each character contributes 7 bits; valid for ASCII-only ISR text.
    """
    m = len(text) - n + 1
    if m <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64)
    counts: dict[int, int] = {}
    for i in range(m):
        code = 0
        for j in range(n):
            code = (code << 7) | (ord(text[i + j]) & 0x7F)
        counts[code] = counts.get(code, 0) + 1
    ids = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
    w = np.fromiter((counts[int(c)] for c in ids), dtype=np.float64, count=len(ids))
    return ids, w


def cosine(ids_a: np.ndarray, w_a: np.ndarray, ids_b: np.ndarray, w_b: np.ndarray) -> float:
    """Cosine of two sparse count vectors given as sorted (ids, weights)."""
    la, lb = len(ids_a), len(ids_b)
    if la == 0 or lb == 0:
        return 0.0
    if la == lb and np.array_equal(ids_a, ids_b) and np.array_equal(w_a, w_b):
        return 1.0
    na = 0.0
    for i in range(la):
        na += w_a[i] * w_a[i]
    nb = 0.0
    for j in range(lb):
        nb += w_b[j] * w_b[j]
    dot = 0.0
    i = j = 0
    while i < la and j < lb:
        ca, cb = ids_a[i], ids_b[j]
        if ca < cb:
            i += 1
        elif cb < ca:
            j += 1
        else:
            dot += w_a[i] * w_b[j]
            i += 1
            j += 1
    val = dot / (math.sqrt(na) * math.sqrt(nb))
    return min(1.0, max(0.0, val))


def cosine_many(
    ids_q: np.ndarray,
    w_q: np.ndarray,
    bank_ids: np.ndarray,
    bank_w: np.ndarray,
    offsets: np.ndarray,
) -> np.ndarray:
    """Cosine of one query vector against every row of a packed bank.

    The bank concatenates per-row sorted id/weight arrays; offsets has
    length rows+1 and delimits each row's slice.
    """
    rows = len(offsets) - 1
    out = np.empty(rows, dtype=np.float64)
    for r in range(rows):
        lo, hi = int(offsets[r]), int(offsets[r + 1])
        out[r] = cosine(ids_q, w_q, bank_ids[lo:hi], bank_w[lo:hi])
    return out
