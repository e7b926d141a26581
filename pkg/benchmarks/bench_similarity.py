"""Compare the compiled and pure-Python similarity kernels on one workload.

Generates a seeded synthetic name bank, encodes every name with both
backends, verifies the outputs are bit-identical, then times encoding and
bank scoring for each backend.

Run:  python3 benchmarks/bench_similarity.py [--names N] [--queries Q]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from onomast import _kernels_py
from onomast.rules import to_isr

try:
    from onomast import _kernels_c
except ImportError:
    _kernels_c = None

SYLLABLES = [
    "ra", "fik", "ha", "ri", "mo", "ham", "med", "vla", "di", "mir",
    "pu", "tin", "kon", "do", "lee", "za", "ge", "org", "bush", "an",
    "gel", "mer", "kel", "sar", "ko", "zy", "blair", "shi", "rak", "nan",
]


def synth_names(count: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    names = []
    for _ in range(count):
        first = "".join(rng.choices(SYLLABLES, k=rng.randint(2, 3)))
        last = "".join(rng.choices(SYLLABLES, k=rng.randint(2, 4)))
        names.append(to_isr(f"{first} {last}").text)
    return names


def pack(encoded: list[tuple[np.ndarray, np.ndarray]]):
    offsets = np.zeros(len(encoded) + 1, dtype=np.int64)
    for k, (ids, _w) in enumerate(encoded):
        offsets[k + 1] = offsets[k] + len(ids)
    ids = np.concatenate([e[0] for e in encoded]) if encoded else np.empty(0, dtype=np.int64)
    weights = np.concatenate([e[1] for e in encoded]) if encoded else np.empty(0, dtype=np.float64)
    return ids, weights, offsets


def bench_backend(impl, bank: list[str], queries: list[str], n: int) -> tuple[float, float, np.ndarray]:
    started = time.perf_counter()
    encoded = [impl.encode(text, n) for text in bank]
    encode_s = time.perf_counter() - started

    bank_ids, bank_w, offsets = pack(encoded)
    scores = np.empty((len(queries), len(bank)))
    started = time.perf_counter()
    for q, text in enumerate(queries):
        ids_q, w_q = impl.encode(text, n)
        scores[q] = impl.cosine_many(ids_q, w_q, bank_ids, bank_w, offsets)
    score_s = time.perf_counter() - started
    return encode_s, score_s, scores


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--names", type=int, default=2000, help="bank size")
    parser.add_argument("--queries", type=int, default=200, help="query count")
    parser.add_argument("--ngram", type=int, default=2, choices=(2, 3))
    args = parser.parse_args()

    bank = synth_names(args.names, seed=11)
    queries = synth_names(args.queries, seed=23)
    print(f"bank={len(bank)} queries={len(queries)} n={args.ngram}")

    py_encode, py_score, py_out = bench_backend(_kernels_py, bank, queries, args.ngram)
    print(f"pure-python  encode {py_encode * 1e3:8.1f} ms   "
          f"score {py_score * 1e3:8.1f} ms")

    if _kernels_c is None:
        print("compiled backend not built; nothing to compare")
        return

    c_encode, c_score, c_out = bench_backend(_kernels_c, bank, queries, args.ngram)
    print(f"compiled     encode {c_encode * 1e3:8.1f} ms   "
          f"score {c_score * 1e3:8.1f} ms")
    if not np.array_equal(py_out, c_out):
        raise SystemExit("backend outputs differ: kernels are not equivalent")
    print(f"outputs bit-identical across {py_out.size} scores")
    print(f"speedup      encode {py_encode / c_encode:6.1f}x   "
          f"score {py_score / c_score:6.1f}x")


if __name__ == "__main__":
    main()
