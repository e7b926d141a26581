"""Per-day document clustering on log-likelihood keyword vectors.

Documents become sparse term->keyness vectors (Dunning's G2 against a
reference frequency list, country tags as namespaced pseudo-terms), then a
hierarchical agglomerative dendrogram is built by repeatedly merging the
most cosine-similar pair.  Topics are the maximal subtrees whose merge
similarity stayed at or above the cut (default 50%).
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError, UsageError

log = logging.getLogger(__name__)

_DATA_DIR = Path(__file__).parent / "data" / "ref"

COUNTRY_PREFIX = "cc:"

_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


def tokenize_counts(text: str, stopwords: frozenset[str] = frozenset()) -> Counter:
    """Lowercased word counts with stopwords removed."""
    counts: Counter = Counter()
    for m in _WORD_RE.finditer(text):
        word = m.group().casefold()
        if word not in stopwords:
            counts[word] += 1
    return counts


class ReferenceFreqs:
    """Term frequency reference list; total = sum of listed counts."""

    def __init__(self, counts: dict[str, int]):
        self.counts = dict(counts)
        self.total = sum(self.counts.values())
        if self.total <= 0:
            raise ConfigurationError("reference frequency list is empty")

    def get(self, term: str) -> int:
        return self.counts.get(term, 0)

    @classmethod
    def load(cls, path: str | Path) -> "ReferenceFreqs":
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"missing reference frequency file {path}")
        counts: dict[str, int] = {}
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            term, _, count = line.partition("\t")
            counts[term.strip()] = counts.get(term.strip(), 0) + int(count)
        return cls(counts)

    @classmethod
    def bundled(cls, language: str) -> "ReferenceFreqs":
        return cls.load(_DATA_DIR / f"{language}_freq.tsv")

    @classmethod
    def bundled_countries(cls) -> "ReferenceFreqs":
        return cls.load(_DATA_DIR / "countries.tsv")


def _g2(a: int, n1: int, b: int, n2: int) -> float:
    """G2 log-likelihood over the 2x2 table (a of n1) vs (b of n2)."""
    cells = (a, b, n1 - a, n2 - b)
    rows = (a + b, (n1 - a) + (n2 - b))
    cols = (n1, n2)
    grand = n1 + n2
    total = 0.0
    for idx, observed in enumerate(cells):
        if observed == 0:
            continue
        expected = rows[idx // 2] * cols[idx % 2] / grand
        total += observed * math.log(observed / expected)
    return 2.0 * total


def keyness_value(a: int, n1: int, b: int, n2: int) -> float:
    """G2 keyness with the zero floor for non-overrepresented terms."""
    if n1 <= 0:
        return 0.0
    if a / n1 <= (b / n2 if n2 > 0 else 0.0):
        return 0.0
    return _g2(a, n1, b, n2)


def keyness(doc_term_counts: dict[str, int] | Counter, reference: ReferenceFreqs) -> dict[str, float]:
    """Per-term G2 keyness, sorted descending (zero for non-key terms)."""
    n1 = sum(doc_term_counts.values())
    out = {
        term: keyness_value(count, n1, reference.get(term), reference.total)
        for term, count in doc_term_counts.items()
    }
    return dict(sorted(out.items(), key=lambda kv: (-kv[1], kv[0])))


@dataclass
class DocumentVector:
    doc_id: str
    weights: dict[str, float] = field(default_factory=dict)

    def nonzero(self) -> bool:
        return any(v > 0 for v in self.weights.values())


def document_vector(
    doc_id: str,
    term_counts: dict[str, int] | Counter,
    reference: ReferenceFreqs,
) -> DocumentVector:
    weights = {t: k for t, k in keyness(term_counts, reference).items() if k > 0}
    return DocumentVector(doc_id=doc_id, weights=weights)


def enrich_countries(
    vec: DocumentVector,
    country_tags: list[tuple[str, int]],
    country_reference: ReferenceFreqs | None = None,
) -> DocumentVector:
    """Add ISO-code pseudo-terms weighted by the same G2 keyness."""
    if not country_tags:
        return vec
    if country_reference is None:
        country_reference = ReferenceFreqs.bundled_countries()
    n1 = sum(n for _, n in country_tags)
    weights = dict(vec.weights)
    for code, count in country_tags:
        if code not in country_reference.counts:
            log.warning("unknown country code %r on doc %s, skipped", code, vec.doc_id)
            continue
        k = keyness_value(count, n1, country_reference.get(code), country_reference.total)
        if k > 0:
            weights[COUNTRY_PREFIX + code] = k
    return DocumentVector(doc_id=vec.doc_id, weights=weights)


def _cos(a: dict[str, float], b: dict[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = math.fsum(v * b[t] for t, v in sorted(a.items()) if t in b)
    na = math.fsum(v * v for v in a.values())
    nb = math.fsum(v * v for v in b.values())
    if na <= 0.0 or nb <= 0.0:
        return 0.0
    return min(1.0, max(0.0, dot / (math.sqrt(na) * math.sqrt(nb))))


@dataclass
class ClusterNode:
    id: str
    children: tuple["ClusterNode", ...]
    weight: int
    vector: dict[str, float]
    cohesiveness: float
    members: tuple[str, ...]

    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["ClusterNode"]:
        if self.is_leaf():
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]


def build_dendrogram(vectors: list[DocumentVector]) -> ClusterNode:
    """Agglomerative binary merge of the globally most similar pair."""
    if not vectors:
        raise UsageError("cannot cluster an empty document list")
    active: list[ClusterNode] = [
        ClusterNode(
            id=f"leaf:{v.doc_id}",
            children=(),
            weight=1,
            vector=dict(v.weights),
            cohesiveness=1.0,
            members=(v.doc_id,),
        )
        for v in vectors
    ]
    counter = 0
    while len(active) > 1:
        best: tuple[float, tuple[str, str], int, int] | None = None
        for i in range(len(active)):
            for j in range(i + 1, len(active)):
                sim = _cos(active[i].vector, active[j].vector)
                pair = tuple(sorted((active[i].members[0], active[j].members[0])))
                key = (-sim, pair)
                if best is None or key < (-best[0], best[1]):
                    best = (sim, pair, i, j)
        assert best is not None
        sim, _, i, j = best
        left, right = active[i], active[j]
        wa, wb = left.weight, right.weight
        merged: dict[str, float] = {}
        for term in set(left.vector) | set(right.vector):
            merged[term] = (wa * left.vector.get(term, 0.0) + wb * right.vector.get(term, 0.0)) / (
                wa + wb
            )
        counter += 1
        node = ClusterNode(
            id=f"node:{counter}",
            children=(left, right),
            weight=wa + wb,
            vector=merged,
            cohesiveness=sim,
            members=tuple(sorted(left.members + right.members)),
        )
        active = [n for k, n in enumerate(active) if k not in (i, j)]
        active.append(node)
    return active[0]


@dataclass
class Topic:
    node: ClusterNode
    title_doc: str
    keywords: list[str]

    @property
    def members(self) -> tuple[str, ...]:
        return self.node.members

    @property
    def cohesiveness(self) -> float:
        return self.node.cohesiveness


def _title_doc(node: ClusterNode) -> str:
    best: tuple[float, str] | None = None
    for leaf in node.leaves():
        sim = _cos(leaf.vector, node.vector)
        key = (-sim, leaf.members[0])
        if best is None or key < best:
            best = key
    assert best is not None
    return best[1]


def _keywords(node: ClusterNode, top_k: int) -> list[str]:
    ranked = sorted(node.vector.items(), key=lambda kv: (-kv[1], kv[0]))
    return [term for term, w in ranked[:top_k] if w > 0]


def detect_topics(root: ClusterNode, min_sim: float = 0.5, *, top_k: int = 10) -> list[Topic]:
    """Maximal subtrees with cohesiveness >= min_sim; singletons excluded."""
    topics: list[Topic] = []

    def walk(node: ClusterNode):
        if node.weight >= 2 and node.cohesiveness >= min_sim:
            topics.append(Topic(node=node, title_doc=_title_doc(node), keywords=_keywords(node, top_k)))
            return
        for child in node.children:
            walk(child)

    walk(root)
    topics.sort(key=lambda t: (-t.node.weight, t.members))
    return topics
