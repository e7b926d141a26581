"""Person-name recognition in documents.

Two independent paths, unioned per document:

* known-name lookup: a token trie over every stored variant with occurrence
  count >= 2, expanded with declension alternatives for declining languages;
* guessing: maximal runs of uppercase-initial tokens adjacent to trigger
  phrases (titles, country adjectives, professions) or starting with a known
  first-name component.  Uncased scripts fall back to trigger adjacency only.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ResourceError, RuleParseError
from .morpho import DeclensionTable
from .rules import script_for_language

log = logging.getLogger(__name__)

_DATA_DIR = Path(__file__).parent / "data"

TRIGGER_KINDS = ("title", "country_adjective", "profession", "regex")
TRIGGER_SIDES = ("left", "right")

# guessed candidates keep at most this many name tokens
MAX_GUESS_TOKENS = 4


@dataclass(frozen=True)
class TriggerPattern:
    language: str
    kind: str
    side: str
    surface: str
    max_gap_tokens: int = 2

    def __post_init__(self):
        if self.kind not in TRIGGER_KINDS:
            raise RuleParseError(f"unknown trigger kind {self.kind!r}")
        if self.side not in TRIGGER_SIDES:
            raise RuleParseError(f"unknown trigger side {self.side!r}")
        if not self.surface:
            raise RuleParseError("empty trigger surface")
        if self.kind == "regex":
            try:
                re.compile(self.surface)
            except re.error as exc:
                raise RuleParseError(f"bad trigger regex {self.surface!r}: {exc}") from exc


@dataclass
class Document:
    id: str
    language: str
    date: str
    title: str
    body: str
    source: str = ""
    country_tags: list[tuple[str, int]] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "Document":
        return cls(
            id=str(data["id"]),
            language=data["language"],
            date=data.get("date", ""),
            title=data.get("title", ""),
            body=data.get("body", ""),
            source=data.get("source", ""),
            country_tags=[(str(c), int(n)) for c, n in data.get("countries", [])],
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "language": self.language,
            "date": self.date,
            "title": self.title,
            "body": self.body,
            "source": self.source,
            "countries": [[c, n] for c, n in self.country_tags],
        }


@dataclass
class NameCandidate:
    surface: str
    tokens: tuple[int, int]
    doc_id: str
    language: str
    method: str  # lookup | component | trigger_guess
    cluster_id: str | None = None
    triggers: list[str] = field(default_factory=list)
    person_id: int | None = None
    matched_text: str = ""


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    sent_start: bool
    joined_left: bool  # only spaces between this token and the previous one

    @property
    def upper_initial(self) -> bool:
        return self.text[:1].isupper()


_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*", re.UNICODE)
_SENT_END = ".!?\n"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    prev_end = 0
    sent_start = True
    for m in _TOKEN_RE.finditer(text):
        gap = text[prev_end : m.start()]
        if tokens:
            sent_start = any(ch in _SENT_END for ch in gap)
        joined = gap.strip() == "" and "\n" not in gap
        tokens.append(Token(m.group(), m.start(), m.end(), sent_start, joined and bool(tokens)))
        prev_end = m.end()
        sent_start = False
    return tokens


def doc_tokens(doc: Document) -> list[Token]:
    """Title tokens followed by body tokens, with body offsets shifted."""
    title_toks = tokenize(doc.title)
    body_toks = tokenize(doc.body)
    shift = len(doc.title) + 1
    shifted = [
        Token(t.text, t.start + shift, t.end + shift, t.sent_start, t.joined_left)
        for t in body_toks
    ]
    if shifted:
        first = shifted[0]
        shifted[0] = Token(first.text, first.start, first.end, True, False)
    return title_toks + shifted


def load_triggers(source: str | Path) -> list[TriggerPattern]:
    if isinstance(source, Path):
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as exc:
            raise ResourceError(f"cannot read trigger file {source}: {exc}") from exc
    else:
        text = source
    triggers: list[TriggerPattern] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise RuleParseError(
                f"expected language<TAB>kind<TAB>side<TAB>surface<TAB>max_gap in {raw!r}", line_no
            )
        language, kind, side, surface, gap = (p.strip() for p in parts)
        try:
            max_gap = int(gap)
        except ValueError:
            raise RuleParseError(f"max_gap must be an integer, got {gap!r}", line_no) from None
        try:
            triggers.append(TriggerPattern(language, kind, side, surface, max_gap))
        except RuleParseError as exc:
            raise RuleParseError(str(exc), line_no) from None
    return triggers


def _load_lines(path: Path) -> frozenset[str]:
    if not path.exists():
        return frozenset()
    out = set()
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.add(line.casefold())
    return frozenset(out)


def bundled_triggers(language: str) -> list[TriggerPattern]:
    path = _DATA_DIR / "triggers" / f"{language}.tsv"
    if not path.exists():
        return []
    return load_triggers(path)


def bundled_stopwords(language: str) -> frozenset[str]:
    return _load_lines(_DATA_DIR / "stopwords" / f"{language}.txt")


def bundled_components(language: str) -> frozenset[str]:
    return _load_lines(_DATA_DIR / "names" / f"{language}.txt")


@dataclass
class LanguageResources:
    language: str
    triggers: list[TriggerPattern]
    stopwords: frozenset[str]
    components: frozenset[str]
    declensions: DeclensionTable | None = None

    @classmethod
    def bundled(cls, language: str) -> "LanguageResources":
        table = DeclensionTable.bundled()
        return cls(
            language=language,
            triggers=bundled_triggers(language),
            stopwords=bundled_stopwords(language),
            components=bundled_components(language),
            declensions=table if language in table.languages() else None,
        )

    @property
    def uncased(self) -> bool:
        return script_for_language(self.language) == "arabic"


class _TrieNode:
    __slots__ = ("edges", "terminals")

    def __init__(self):
        self.edges: dict[str, _TrieNode] = {}
        self.terminals: list[tuple[int | None, str]] = []


class KnownNameMatcher:
    """Immutable token-trie matcher over known name variants."""

    def __init__(self, language: str):
        self.language = language
        self._root = _TrieNode()
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def _insert_forms(self, node: _TrieNode, forms_seq: list[list[str]], terminal: tuple[int | None, str]):
        if not forms_seq:
            if terminal not in node.terminals:
                node.terminals.append(terminal)
            return
        head, rest = forms_seq[0], forms_seq[1:]
        shared: _TrieNode | None = None
        children: list[_TrieNode] = []
        seen_ids: set[int] = set()
        for form in head:
            child = node.edges.get(form)
            if child is None:
                if shared is None:
                    shared = _TrieNode()
                child = shared
                node.edges[form] = child
            if id(child) not in seen_ids:
                seen_ids.add(id(child))
                children.append(child)
        for child in children:
            self._insert_forms(child, rest, terminal)

    def add(self, surface: str, person_id: int | None = None, declensions: DeclensionTable | None = None):
        tokens = surface.split()
        if not tokens:
            return
        if declensions is not None and self.language in declensions.languages():
            forms_seq = [declensions.declension_variants(tok, self.language) for tok in tokens]
            extra = declensions.exceptions.get((self.language, surface), ())
        else:
            forms_seq = [[tok] for tok in tokens]
            extra = ()
        self._insert_forms(self._root, forms_seq, (person_id, surface))
        for alt in extra:
            alt_tokens = alt.split()
            if alt_tokens:
                self._insert_forms(self._root, [[t] for t in alt_tokens], (person_id, surface))
        self._size += 1

    def scan(self, tokens: list[Token]) -> list[tuple[int | None, str, tuple[int, int]]]:
        """Leftmost-longest non-overlapping matches as (person_id, base, span)."""
        out: list[tuple[int | None, str, tuple[int, int]]] = []
        i = 0
        n = len(tokens)
        while i < n:
            node = self._root
            best: tuple[int, list[tuple[int | None, str]]] | None = None
            j = i
            while j < n:
                if j > i and not tokens[j].joined_left:
                    break
                node = node.edges.get(tokens[j].text)  # type: ignore[assignment]
                if node is None:
                    break
                j += 1
                if node.terminals:
                    best = (j, node.terminals)
            if best is None:
                i += 1
                continue
            end, terminals = best
            for person_id, base in terminals:
                out.append((person_id, base, (i, end)))
            i = end
        return out


def compile_known_names(store, language: str, *, min_count: int = 2, declensions: DeclensionTable | None = None) -> KnownNameMatcher:
    """Build the lookup matcher from every variant of persons seen >= min_count times."""
    matcher = KnownNameMatcher(language)
    if declensions is None:
        table = DeclensionTable.bundled()
        declensions = table if language in table.languages() else None
    entries = store.known_name_entries(min_count) if hasattr(store, "known_name_entries") else store
    for entry in entries:
        person_id, surface = entry[0], entry[1]
        matcher.add(surface, person_id, declensions)
    return matcher


def scan_known(doc: Document, matcher: KnownNameMatcher) -> list[NameCandidate]:
    tokens = doc_tokens(doc)
    seen: set[tuple[int | None, str]] = set()
    out: list[NameCandidate] = []
    for person_id, base, span in matcher.scan(tokens):
        key = (person_id, base)
        if key in seen:
            continue
        seen.add(key)
        out.append(
            NameCandidate(
                surface=base,
                tokens=span,
                doc_id=doc.id,
                language=doc.language,
                method="lookup",
                person_id=person_id,
                matched_text=" ".join(t.text for t in tokens[span[0] : span[1]]),
            )
        )
    return out


def _trigger_spans(
    tokens: list[Token],
    text_by_range: list[tuple[int, int, str]],
    triggers: list[TriggerPattern],
) -> list[tuple[int, int, TriggerPattern]]:
    """All trigger occurrences as token spans (start, end, pattern)."""
    spans: list[tuple[int, int, TriggerPattern]] = []
    folded = [t.text.casefold() for t in tokens]
    for trig in triggers:
        if trig.kind == "regex":
            rx = re.compile(trig.surface)
            for lo, hi, text in text_by_range:
                for m in rx.finditer(text):
                    a, b = m.start() + lo, m.end() + lo
                    covered = [k for k, t in enumerate(tokens) if t.start < b and t.end > a]
                    if covered:
                        spans.append((covered[0], covered[-1] + 1, trig))
            continue
        words = [w.casefold() for w in trig.surface.split()]
        width = len(words)
        for k in range(len(tokens) - width + 1):
            if folded[k : k + width] == words:
                spans.append((k, k + width, trig))
    spans.sort(key=lambda s: (s[0], s[1]))
    return spans


def _uppercase_runs(
    tokens: list[Token],
    stopwords: frozenset[str],
    covered: set[int],
) -> list[tuple[int, int]]:
    """Maximal runs of >= 2 uppercase-initial, non-stopword, uncovered tokens."""
    runs: list[tuple[int, int]] = []
    start: int | None = None
    for k, tok in enumerate(tokens):
        ok = (
            tok.upper_initial
            and k not in covered
            and tok.text.casefold() not in stopwords
            and (start is None or (tok.joined_left and not tok.sent_start))
        )
        if ok:
            if start is None:
                start = k
        else:
            if start is not None and k - start >= 2:
                runs.append((start, k))
            start = k if (
                tok.upper_initial and k not in covered and tok.text.casefold() not in stopwords
            ) else None
    if start is not None and len(tokens) - start >= 2:
        runs.append((start, len(tokens)))
    return runs


def _blocked(tokens: list[Token], between: range, boundary: int, tolerate_boundary: bool) -> bool:
    """Sentence break between trigger and run, or at the run boundary.
    Short title abbreviations ("Dr.", "Mr.") end with a period that the
    tokenizer reads as a sentence break; those tolerate a boundary break
    when directly adjacent to the name."""
    if any(tokens[k].sent_start for k in between):
        return True
    if tolerate_boundary:
        return False
    return tokens[boundary].sent_start


def _attach_triggers(
    run: tuple[int, int],
    spans: list[tuple[int, int, TriggerPattern]],
    tokens: list[Token],
) -> list[str]:
    rs, re_ = run
    hits: list[str] = []
    for ts, te, trig in spans:
        abbrev = trig.kind == "title" and len(trig.surface) <= 3
        if trig.side == "left":
            gap = rs - te
            tolerate = gap == 0 and abbrev
            if 0 <= gap <= trig.max_gap_tokens and not _blocked(tokens, range(te, rs), rs, tolerate):
                hits.append(trig.surface)
        else:
            gap = ts - re_
            if 0 <= gap <= trig.max_gap_tokens and not _blocked(tokens, range(re_, ts), ts, False):
                hits.append(trig.surface)
    out: list[str] = []
    for h in hits:
        if h not in out:
            out.append(h)
    return out


def _uncased_candidates(
    tokens: list[Token],
    spans: list[tuple[int, int, TriggerPattern]],
    stopwords: frozenset[str],
    covered: set[int],
) -> list[tuple[tuple[int, int], list[str]]]:
    """Trigger-adjacent token stretches for scripts without case."""
    out: list[tuple[tuple[int, int], list[str]]] = []
    for ts, te, trig in spans:
        if trig.side == "left":
            k = te
            end = k
            while (
                end < len(tokens)
                and end - k < MAX_GUESS_TOKENS
                and end not in covered
                and tokens[end].text.casefold() not in stopwords
                and (end == k or (tokens[end].joined_left and not tokens[end].sent_start))
            ):
                end += 1
            if end - k >= 2:
                out.append(((k, end), [trig.surface]))
        else:
            begin = ts
            while (
                begin - 1 >= 0
                and ts - (begin - 1) <= MAX_GUESS_TOKENS
                and (begin - 1) not in covered
                and tokens[begin - 1].text.casefold() not in stopwords
                and (begin == ts or (tokens[begin].joined_left and not tokens[begin].sent_start))
            ):
                begin -= 1
            if ts - begin >= 2:
                out.append(((begin, ts), [trig.surface]))
    return out


def guess_new(
    doc: Document,
    triggers: list[TriggerPattern],
    known_components: frozenset[str] = frozenset(),
    *,
    stopwords: frozenset[str] = frozenset(),
) -> list[NameCandidate]:
    tokens = doc_tokens(doc)
    shift = len(doc.title) + 1
    ranges = [(0, len(doc.title), doc.title), (shift, shift + len(doc.body), doc.body)]
    spans = _trigger_spans(tokens, ranges, triggers)
    covered = {k for ts, te, _ in spans for k in range(ts, te)}
    uncased = script_for_language(doc.language) == "arabic"
    raw: list[tuple[tuple[int, int], list[str], str]] = []
    if uncased:
        for span, trigs in _uncased_candidates(tokens, spans, stopwords, covered):
            raw.append((span, trigs, "trigger_guess"))
    else:
        for run in _uppercase_runs(tokens, stopwords, covered):
            trigs = _attach_triggers(run, spans, tokens)
            first = tokens[run[0]].text.casefold()
            is_component = first in known_components
            if not trigs and not is_component:
                continue
            rs, re_ = run
            if re_ - rs > MAX_GUESS_TOKENS:
                re_ = rs + MAX_GUESS_TOKENS
            method = "component" if is_component else "trigger_guess"
            raw.append(((rs, re_), trigs, method))
    out: list[NameCandidate] = []
    by_surface: dict[str, NameCandidate] = {}
    for span, trigs, method in raw:
        surface = " ".join(t.text for t in tokens[span[0] : span[1]])
        existing = by_surface.get(surface)
        if existing is not None:
            for t in trigs:
                if t not in existing.triggers:
                    existing.triggers.append(t)
            continue
        cand = NameCandidate(
            surface=surface,
            tokens=span,
            doc_id=doc.id,
            language=doc.language,
            method=method,
            triggers=list(trigs),
            matched_text=surface,
        )
        by_surface[surface] = cand
        out.append(cand)
    return out


def recognize_document(
    doc: Document,
    matcher: KnownNameMatcher | None,
    resources: LanguageResources,
) -> list[NameCandidate]:
    """Union of lookup and guessing, lookup taking precedence on overlap."""
    known = scan_known(doc, matcher) if matcher is not None else []
    guessed = guess_new(
        doc, resources.triggers, resources.components, stopwords=resources.stopwords
    )
    taken: list[tuple[int, int]] = [c.tokens for c in known]
    known_surfaces = {c.surface for c in known}
    out = list(known)
    for cand in guessed:
        lo, hi = cand.tokens
        if any(lo < t_hi and hi > t_lo for t_lo, t_hi in taken):
            continue
        if cand.surface in known_surfaces:
            continue
        out.append(cand)
    return out


@dataclass
class ClusterName:
    surface: str
    language: str
    doc_ids: tuple[str, ...]
    methods: tuple[str, ...]
    trigger_counts: dict[str, int]

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)


def aggregate_cluster_names(cands: list[NameCandidate], cluster) -> list[ClusterName]:
    """Union candidates over a cluster's documents, keeping trigger-phrase counts."""
    members = set(getattr(cluster, "members", cluster))
    members = {str(m) for m in members}
    grouped: dict[str, dict] = {}
    for cand in cands:
        if cand.doc_id not in members:
            continue
        slot = grouped.setdefault(
            cand.surface,
            {"language": cand.language, "docs": set(), "methods": set(), "triggers": {}},
        )
        slot["docs"].add(cand.doc_id)
        slot["methods"].add(cand.method)
        for t in cand.triggers:
            slot["triggers"][t] = slot["triggers"].get(t, 0) + 1
    out = [
        ClusterName(
            surface=surface,
            language=slot["language"],
            doc_ids=tuple(sorted(slot["docs"])),
            methods=tuple(sorted(slot["methods"])),
            trigger_counts=dict(sorted(slot["triggers"].items())),
        )
        for surface, slot in grouped.items()
    ]
    out.sort(key=lambda cn: (-cn.doc_count, cn.surface))
    return out
