"""Persistent person-name database.

SQLite single-file store holding persons, surface variants (with their
internal standard representation), merge candidates with a review queue,
trigger phrases, co-occurrence counts, staged documents, and an append-only
audit log.  All access serializes through one lock: single writer, and
readers always see a committed snapshot.

Merge disposition of an incoming surface against its best-scoring stored
person:

* same cluster and combined >= in_cluster (0.70): merged automatically;
* combined > auto (0.95): merged automatically;
* review_low (0.80) <= combined <= auto: queued for human review;
* otherwise: new person.

Cross-script pairs never auto-merge below the 0.95 line; in-cluster
cross-script hits at 0.70+ queue instead.  Exact ties between two target
persons also queue rather than picking one arbitrarily.
"""

from __future__ import annotations

import json
import logging
import sqlite3
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import ConflictError, ResourceError, UsageError
from .rules import script_for_language, to_isr
from .similarity import ProfileBank, SimilarityScore, name_similarity

log = logging.getLogger(__name__)

IN_CLUSTER_MERGE = 0.70
REVIEW_LOW = 0.80
AUTO_MERGE = 0.95


def merge_policy(
    score: SimilarityScore,
    same_cluster: bool,
    *,
    cross_script: bool = False,
    in_cluster: float = IN_CLUSTER_MERGE,
    review_low: float = REVIEW_LOW,
    auto: float = AUTO_MERGE,
) -> str:
    c = score.combined
    if same_cluster and c >= in_cluster and not cross_script:
        return "auto_merged"
    if c > auto:
        return "auto_merged"
    if review_low <= c <= auto:
        return "queued"
    if cross_script and same_cluster and c >= in_cluster:
        return "queued"
    return "rejected_low"


@dataclass
class IngestResult:
    person_id: int | None
    disposition: str
    candidate_id: int | None = None
    score: SimilarityScore | None = None


_SCHEMA = """
CREATE TABLE IF NOT EXISTS persons (
    person_id INTEGER PRIMARY KEY AUTOINCREMENT,
    canonical TEXT NOT NULL DEFAULT '',
    created_at TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS variants (
    variant_id INTEGER PRIMARY KEY AUTOINCREMENT,
    person_id INTEGER NOT NULL REFERENCES persons(person_id),
    surface TEXT NOT NULL,
    language TEXT NOT NULL DEFAULT '',
    script TEXT NOT NULL DEFAULT 'latin',
    isr TEXT NOT NULL,
    count INTEGER NOT NULL DEFAULT 0,
    first_seen TEXT NOT NULL DEFAULT '',
    last_seen TEXT NOT NULL DEFAULT '',
    UNIQUE (surface, script)
);
CREATE INDEX IF NOT EXISTS idx_variants_person ON variants(person_id);
CREATE INDEX IF NOT EXISTS idx_variants_isr ON variants(isr);
CREATE TABLE IF NOT EXISTS person_clusters (
    person_id INTEGER NOT NULL,
    cluster_id TEXT NOT NULL,
    UNIQUE (person_id, cluster_id)
);
CREATE TABLE IF NOT EXISTS merge_candidates (
    candidate_id INTEGER PRIMARY KEY AUTOINCREMENT,
    surface TEXT NOT NULL,
    language TEXT NOT NULL DEFAULT '',
    script TEXT NOT NULL DEFAULT 'latin',
    isr TEXT NOT NULL,
    target_person_id INTEGER,
    source_person_id INTEGER,
    created_person_id INTEGER,
    bigram REAL NOT NULL DEFAULT 0,
    trigram REAL NOT NULL DEFAULT 0,
    consonant_bigram REAL NOT NULL DEFAULT 0,
    combined REAL NOT NULL DEFAULT 0,
    mode TEXT NOT NULL DEFAULT 'standard',
    same_cluster INTEGER NOT NULL DEFAULT 0,
    disposition TEXT NOT NULL,
    decided_by TEXT NOT NULL DEFAULT 'policy',
    reviewer TEXT NOT NULL DEFAULT '',
    created_at TEXT NOT NULL DEFAULT '',
    decided_at TEXT NOT NULL DEFAULT '',
    pending_count INTEGER NOT NULL DEFAULT 1,
    cluster_id TEXT,
    context TEXT NOT NULL DEFAULT '{}'
);
CREATE TABLE IF NOT EXISTS trigger_phrases (
    person_id INTEGER NOT NULL,
    phrase TEXT NOT NULL,
    count INTEGER NOT NULL DEFAULT 0,
    UNIQUE (person_id, phrase)
);
CREATE TABLE IF NOT EXISTS cooccurrences (
    a INTEGER NOT NULL,
    b INTEGER NOT NULL,
    count INTEGER NOT NULL DEFAULT 0,
    UNIQUE (a, b)
);
CREATE TABLE IF NOT EXISTS staged_docs (
    id TEXT PRIMARY KEY,
    language TEXT NOT NULL,
    date TEXT NOT NULL,
    title TEXT NOT NULL DEFAULT '',
    body TEXT NOT NULL DEFAULT '',
    source TEXT NOT NULL DEFAULT '',
    countries TEXT NOT NULL DEFAULT '[]'
);
CREATE TABLE IF NOT EXISTS audit (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    at TEXT NOT NULL DEFAULT '',
    action TEXT NOT NULL,
    payload TEXT NOT NULL DEFAULT '{}'
);
"""


class NameStore:
    """Person database over a single SQLite file ("":memory:"" for tests)."""

    def __init__(
        self,
        path: str | Path = ":memory:",
        *,
        in_cluster: float = IN_CLUSTER_MERGE,
        review_low: float = REVIEW_LOW,
        auto: float = AUTO_MERGE,
    ):
        self.path = str(path)
        self.thresholds = {"in_cluster": in_cluster, "review_low": review_low, "auto": auto}
        try:
            self._conn = sqlite3.connect(self.path, check_same_thread=False)
        except sqlite3.Error as exc:
            raise ResourceError(f"cannot open name store {self.path}: {exc}") from exc
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._lock = threading.RLock()
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)
        self._bank: ProfileBank | None = None
        self._bank_rows: list[tuple[int, str]] = []  # (person_id, script) per bank row

    def close(self):
        with self._lock:
            self._conn.close()

    def __enter__(self) -> "NameStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # ------------------------------------------------------------- helpers

    def _audit(self, action: str, payload: dict, at: str = ""):
        self._conn.execute(
            "INSERT INTO audit (at, action, payload) VALUES (?, ?, ?)",
            (at, action, json.dumps(payload, ensure_ascii=False, sort_keys=True)),
        )

    def _invalidate_bank(self):
        self._bank = None
        self._bank_rows = []

    def _ensure_bank(self) -> ProfileBank:
        if self._bank is None:
            bank = ProfileBank()
            rows: list[tuple[int, str]] = []
            cur = self._conn.execute(
                "SELECT person_id, script, isr FROM variants ORDER BY variant_id"
            )
            for row in cur:
                bank.add(row["isr"], arabic=(row["script"] == "arabic"))
                rows.append((row["person_id"], row["script"]))
            self._bank = bank
            self._bank_rows = rows
        return self._bank

    def _refresh_canonical(self, person_id: int):
        row = self._conn.execute(
            "SELECT surface FROM variants WHERE person_id = ?"
            " ORDER BY count DESC, first_seen ASC, variant_id ASC LIMIT 1",
            (person_id,),
        ).fetchone()
        canonical = row["surface"] if row else ""
        self._conn.execute(
            "UPDATE persons SET canonical = ? WHERE person_id = ?", (canonical, person_id)
        )

    def _new_person(self, at: str) -> int:
        cur = self._conn.execute(
            "INSERT INTO persons (canonical, created_at) VALUES ('', ?)", (at,)
        )
        return int(cur.lastrowid)

    def _add_variant(
        self,
        person_id: int,
        surface: str,
        language: str,
        script: str,
        isr: str,
        count: int,
        at: str,
    ):
        self._conn.execute(
            "INSERT INTO variants (person_id, surface, language, script, isr, count,"
            " first_seen, last_seen) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
            (person_id, surface, language, script, isr, count, at, at),
        )
        self._refresh_canonical(person_id)
        self._invalidate_bank()

    def _bump_triggers(self, person_id: int, phrases: dict[str, int] | list[str]):
        counts = (
            {p: 1 for p in phrases} if isinstance(phrases, (list, tuple)) else dict(phrases)
        )
        for phrase, n in counts.items():
            self._conn.execute(
                "INSERT INTO trigger_phrases (person_id, phrase, count) VALUES (?, ?, ?)"
                " ON CONFLICT(person_id, phrase) DO UPDATE SET count = count + ?",
                (person_id, phrase, n, n),
            )

    def _register_cluster(self, person_id: int, cluster_id: str | None):
        if cluster_id:
            self._conn.execute(
                "INSERT OR IGNORE INTO person_clusters (person_id, cluster_id) VALUES (?, ?)",
                (person_id, cluster_id),
            )

    def _in_cluster(self, person_id: int, cluster_id: str | None) -> bool:
        if not cluster_id:
            return False
        row = self._conn.execute(
            "SELECT 1 FROM person_clusters WHERE person_id = ? AND cluster_id = ?",
            (person_id, cluster_id),
        ).fetchone()
        return row is not None

    def _person_scripts(self, person_id: int) -> set[str]:
        cur = self._conn.execute(
            "SELECT DISTINCT script FROM variants WHERE person_id = ?", (person_id,)
        )
        return {row["script"] for row in cur}

    # ------------------------------------------------------------- ingestion

    def ingest_name(self, cand, *, date: str = "") -> IngestResult:
        """Route one recognized surface through exact lookup and merge policy."""
        surface = cand.surface
        language = cand.language
        script = script_for_language(language)
        cluster_id = getattr(cand, "cluster_id", None)
        triggers = list(getattr(cand, "triggers", []) or [])
        doc_id = getattr(cand, "doc_id", "")
        isr = to_isr(surface, script).text
        with self._lock, self._conn:
            # 1. exact surface
            row = self._conn.execute(
                "SELECT variant_id, person_id FROM variants WHERE surface = ? AND script = ?",
                (surface, script),
            ).fetchone()
            if row is not None:
                pid = int(row["person_id"])
                self._conn.execute(
                    "UPDATE variants SET count = count + 1, last_seen = ?,"
                    " first_seen = CASE WHEN first_seen = '' THEN ? ELSE first_seen END"
                    " WHERE variant_id = ?",
                    (date, date, row["variant_id"]),
                )
                self._refresh_canonical(pid)
                self._register_cluster(pid, cluster_id)
                self._bump_triggers(pid, triggers)
                self._audit("occurrence", {"person_id": pid, "surface": surface, "doc": doc_id}, date)
                return IngestResult(pid, "exact")
            # 2. same surface already pending in the queue
            pending = self._conn.execute(
                "SELECT candidate_id, context FROM merge_candidates"
                " WHERE surface = ? AND script = ? AND disposition = 'queued'",
                (surface, script),
            ).fetchone()
            if pending is not None:
                context = json.loads(pending["context"])
                context.setdefault("doc_ids", []).append(doc_id)
                for phrase in triggers:
                    context.setdefault("triggers", {})
                    context["triggers"][phrase] = context["triggers"].get(phrase, 0) + 1
                self._conn.execute(
                    "UPDATE merge_candidates SET pending_count = pending_count + 1, context = ?"
                    " WHERE candidate_id = ?",
                    (json.dumps(context, ensure_ascii=False, sort_keys=True), pending["candidate_id"]),
                )
                return IngestResult(None, "queued", candidate_id=int(pending["candidate_id"]))
            # 3. exact ISR
            row = self._conn.execute(
                "SELECT person_id FROM variants WHERE isr = ? ORDER BY person_id LIMIT 1",
                (isr,),
            ).fetchone()
            if row is not None:
                pid = int(row["person_id"])
                self._add_variant(pid, surface, language, script, isr, 1, date)
                self._register_cluster(pid, cluster_id)
                self._bump_triggers(pid, triggers)
                self._audit(
                    "variant_exact_isr", {"person_id": pid, "surface": surface, "isr": isr}, date
                )
                return IngestResult(pid, "exact_isr")
            # 4. score against every stored ISR
            bank = self._ensure_bank()
            if len(bank) == 0:
                pid = self._new_person(date)
                self._add_variant(pid, surface, language, script, isr, 1, date)
                self._register_cluster(pid, cluster_id)
                self._bump_triggers(pid, triggers)
                self._audit("person_created", {"person_id": pid, "surface": surface}, date)
                return IngestResult(pid, "new_person")
            scores = bank.score(isr, arabic=(script == "arabic"))
            best_by_person: dict[int, tuple[float, int]] = {}
            for idx, (pid, _row_script) in enumerate(self._bank_rows):
                combined = float(scores["combined"][idx])
                prev = best_by_person.get(pid)
                if prev is None or combined > prev[0]:
                    best_by_person[pid] = (combined, idx)
            top = max(v[0] for v in best_by_person.values())
            top_persons = sorted(p for p, v in best_by_person.items() if v[0] == top)
            target = top_persons[0]
            idx = best_by_person[target][1]
            score = SimilarityScore(
                bigram=float(scores["bigram"][idx]),
                trigram=float(scores["trigram"][idx]),
                consonant_bigram=float(scores["consonant_bigram"][idx]),
                combined=float(scores["combined"][idx]),
                mode="arabic" if bool(scores["arabic_mode"][idx]) else "standard",
            )
            same_cluster = self._in_cluster(target, cluster_id)
            cross_script = script not in self._person_scripts(target)
            disposition = merge_policy(
                score,
                same_cluster,
                cross_script=cross_script,
                in_cluster=self.thresholds["in_cluster"],
                review_low=self.thresholds["review_low"],
                auto=self.thresholds["auto"],
            )
            if len(top_persons) > 1 and disposition == "auto_merged":
                disposition = "queued"  # ambiguous best target never auto-merges
            context = {"doc_ids": [doc_id], "triggers": {p: 1 for p in triggers}}
            if disposition == "auto_merged":
                self._add_variant(target, surface, language, script, isr, 1, date)
                self._register_cluster(target, cluster_id)
                self._bump_triggers(target, triggers)
                cand_id = self._record_candidate(
                    surface, language, script, isr, target, score, same_cluster,
                    "auto_merged", date, cluster_id, context, decided_at=date,
                )
                self._audit(
                    "auto_merge",
                    {"person_id": target, "surface": surface, "combined": score.combined},
                    date,
                )
                return IngestResult(target, "auto_merged", candidate_id=cand_id, score=score)
            if disposition == "queued":
                cand_id = self._record_candidate(
                    surface, language, script, isr, target, score, same_cluster,
                    "queued", date, cluster_id, context,
                )
                self._audit(
                    "queued",
                    {"candidate_id": cand_id, "surface": surface, "target": target},
                    date,
                )
                return IngestResult(None, "queued", candidate_id=cand_id, score=score)
            pid = self._new_person(date)
            self._add_variant(pid, surface, language, script, isr, 1, date)
            self._register_cluster(pid, cluster_id)
            self._bump_triggers(pid, triggers)
            cand_id = self._record_candidate(
                surface, language, script, isr, target, score, same_cluster,
                "rejected_low", date, cluster_id, context,
                created_person_id=pid, decided_at=date,
            )
            self._audit(
                "person_created",
                {"person_id": pid, "surface": surface, "best_combined": score.combined},
                date,
            )
            return IngestResult(pid, "rejected_low", candidate_id=cand_id, score=score)

    def _record_candidate(
        self,
        surface: str,
        language: str,
        script: str,
        isr: str,
        target: int | None,
        score: SimilarityScore,
        same_cluster: bool,
        disposition: str,
        date: str,
        cluster_id: str | None,
        context: dict,
        *,
        source_person_id: int | None = None,
        created_person_id: int | None = None,
        decided_at: str = "",
    ) -> int:
        cur = self._conn.execute(
            "INSERT INTO merge_candidates (surface, language, script, isr, target_person_id,"
            " source_person_id, created_person_id, bigram, trigram, consonant_bigram, combined,"
            " mode, same_cluster, disposition, decided_by, created_at, decided_at, pending_count,"
            " cluster_id, context)"
            " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, 'policy', ?, ?, ?, ?, ?)",
            (
                surface, language, script, isr, target,
                source_person_id, created_person_id,
                score.bigram, score.trigram, score.consonant_bigram, score.combined,
                score.mode, int(same_cluster), disposition, date, decided_at,
                1, cluster_id, json.dumps(context, ensure_ascii=False, sort_keys=True),
            ),
        )
        return int(cur.lastrowid)

    # ------------------------------------------------------------- review

    def candidate(self, candidate_id: int) -> dict | None:
        row = self._conn.execute(
            "SELECT * FROM merge_candidates WHERE candidate_id = ?", (candidate_id,)
        ).fetchone()
        return dict(row) if row is not None else None

    def queued_candidates(self, limit: int = 50, offset: int = 0) -> list[dict]:
        cur = self._conn.execute(
            "SELECT * FROM merge_candidates WHERE disposition = 'queued'"
            " ORDER BY combined DESC, candidate_id ASC LIMIT ? OFFSET ?",
            (limit, offset),
        )
        return [dict(row) for row in cur]

    def queued_count(self) -> int:
        row = self._conn.execute(
            "SELECT COUNT(*) AS n FROM merge_candidates WHERE disposition = 'queued'"
        ).fetchone()
        return int(row["n"])

    def apply_review(self, candidate_id: int, confirm: bool, *, reviewer: str = "", date: str = "") -> dict:
        """Settle a queued candidate; confirm merges, deny creates a person."""
        with self._lock, self._conn:
            row = self._conn.execute(
                "SELECT * FROM merge_candidates WHERE candidate_id = ?", (candidate_id,)
            ).fetchone()
            if row is None:
                raise UsageError(f"no merge candidate {candidate_id}")
            if row["disposition"] != "queued":
                raise ConflictError(
                    f"candidate {candidate_id} already decided: {row['disposition']}"
                )
            context = json.loads(row["context"])
            triggers = context.get("triggers", {})
            target = row["target_person_id"]
            source = row["source_person_id"]
            if confirm:
                if source is not None:
                    kept = self._merge_persons(int(target), int(source), date)
                    result_person = kept
                else:
                    owner = self._conn.execute(
                        "SELECT person_id FROM variants WHERE surface = ? AND script = ?",
                        (row["surface"], row["script"]),
                    ).fetchone()
                    if owner is not None and int(owner["person_id"]) != int(target):
                        result_person = self._merge_persons(
                            int(target), int(owner["person_id"]), date
                        )
                    elif owner is not None:
                        result_person = int(target)
                        self._conn.execute(
                            "UPDATE variants SET count = count + ? WHERE surface = ? AND script = ?",
                            (int(row["pending_count"]), row["surface"], row["script"]),
                        )
                        self._refresh_canonical(result_person)
                    else:
                        self._add_variant(
                            int(target), row["surface"], row["language"], row["script"],
                            row["isr"], int(row["pending_count"]), date or row["created_at"],
                        )
                        result_person = int(target)
                    self._register_cluster(result_person, row["cluster_id"])
                self._bump_triggers(result_person, triggers)
                disposition = "confirmed"
            else:
                if source is not None:
                    result_person = int(source)  # stays its own person
                else:
                    result_person = self._new_person(date or row["created_at"])
                    self._add_variant(
                        result_person, row["surface"], row["language"], row["script"],
                        row["isr"], int(row["pending_count"]), date or row["created_at"],
                    )
                    self._register_cluster(result_person, row["cluster_id"])
                    self._bump_triggers(result_person, triggers)
                disposition = "denied"
            self._conn.execute(
                "UPDATE merge_candidates SET disposition = ?, decided_by = 'human',"
                " reviewer = ?, decided_at = ? WHERE candidate_id = ?",
                (disposition, reviewer, date, candidate_id),
            )
            self._audit(
                "review",
                {
                    "candidate_id": candidate_id,
                    "confirm": bool(confirm),
                    "person_id": result_person,
                    "reviewer": reviewer,
                },
                date,
            )
            return {
                "candidate_id": candidate_id,
                "disposition": disposition,
                "person_id": result_person,
            }

    def _merge_persons(self, a: int, b: int, date: str) -> int:
        """Merge person b into a (or a into b); the lower id survives."""
        keep, absorb = (a, b) if a <= b else (b, a)
        if keep == absorb:
            return keep
        self._conn.execute(
            "UPDATE variants SET person_id = ? WHERE person_id = ?", (keep, absorb)
        )
        cur = self._conn.execute(
            "SELECT phrase, count FROM trigger_phrases WHERE person_id = ?", (absorb,)
        )
        for row in cur.fetchall():
            self._bump_triggers(keep, {row["phrase"]: row["count"]})
        self._conn.execute("DELETE FROM trigger_phrases WHERE person_id = ?", (absorb,))
        cur = self._conn.execute(
            "SELECT a, b, count FROM cooccurrences WHERE a = ? OR b = ?", (absorb, absorb)
        )
        for row in cur.fetchall():
            other = row["b"] if row["a"] == absorb else row["a"]
            self._conn.execute(
                "DELETE FROM cooccurrences WHERE a = ? AND b = ?", (row["a"], row["b"])
            )
            if other != keep:
                self._bump_cooccurrence(keep, other, int(row["count"]))
        self._conn.execute(
            "INSERT OR IGNORE INTO person_clusters (person_id, cluster_id)"
            " SELECT ?, cluster_id FROM person_clusters WHERE person_id = ?",
            (keep, absorb),
        )
        self._conn.execute("DELETE FROM person_clusters WHERE person_id = ?", (absorb,))
        self._conn.execute(
            "UPDATE merge_candidates SET target_person_id = ?"
            " WHERE target_person_id = ? AND disposition = 'queued'",
            (keep, absorb),
        )
        self._conn.execute(
            "UPDATE merge_candidates SET source_person_id = ?"
            " WHERE source_person_id = ? AND disposition = 'queued'",
            (keep, absorb),
        )
        self._conn.execute("DELETE FROM persons WHERE person_id = ?", (absorb,))
        self._refresh_canonical(keep)
        self._invalidate_bank()
        self._audit("merge_persons", {"kept": keep, "absorbed": absorb}, date)
        return keep

    # ------------------------------------------------------------- split / requeue

    def split_person(self, person_id: int, variant_surfaces: list[str], *, date: str = "") -> int:
        """Move a proper subset of variants to a fresh person."""
        with self._lock, self._conn:
            rows = self._conn.execute(
                "SELECT variant_id, surface, count FROM variants WHERE person_id = ?",
                (person_id,),
            ).fetchall()
            if not rows:
                raise UsageError(f"no person {person_id}")
            all_surfaces = {row["surface"] for row in rows}
            subset = set(variant_surfaces)
            if not subset:
                raise UsageError("split requires a non-empty variant subset")
            if not subset <= all_surfaces:
                raise UsageError(f"unknown variants in split: {sorted(subset - all_surfaces)}")
            if subset == all_surfaces:
                raise UsageError("split subset must be proper (some variants must stay)")
            total = sum(int(row["count"]) for row in rows) or 1
            moved_total = sum(int(row["count"]) for row in rows if row["surface"] in subset)
            fraction = moved_total / total
            new_pid = self._new_person(date)
            for row in rows:
                if row["surface"] in subset:
                    self._conn.execute(
                        "UPDATE variants SET person_id = ? WHERE variant_id = ?",
                        (new_pid, row["variant_id"]),
                    )
            # proportional partition of non-variant-scoped statistics
            cur = self._conn.execute(
                "SELECT phrase, count FROM trigger_phrases WHERE person_id = ?", (person_id,)
            )
            for row in cur.fetchall():
                moved = int(row["count"] * fraction + 0.5)
                if moved > 0:
                    self._bump_triggers(new_pid, {row["phrase"]: moved})
                    self._conn.execute(
                        "UPDATE trigger_phrases SET count = count - ? WHERE person_id = ? AND phrase = ?",
                        (moved, person_id, row["phrase"]),
                    )
            self._conn.execute("DELETE FROM trigger_phrases WHERE count <= 0")
            cur = self._conn.execute(
                "SELECT a, b, count FROM cooccurrences WHERE a = ? OR b = ?",
                (person_id, person_id),
            )
            for row in cur.fetchall():
                moved = int(row["count"] * fraction + 0.5)
                if moved > 0:
                    other = row["b"] if row["a"] == person_id else row["a"]
                    self._bump_cooccurrence(new_pid, other, moved)
                    self._conn.execute(
                        "UPDATE cooccurrences SET count = count - ? WHERE a = ? AND b = ?",
                        (moved, row["a"], row["b"]),
                    )
            self._conn.execute("DELETE FROM cooccurrences WHERE count <= 0")
            self._conn.execute(
                "INSERT OR IGNORE INTO person_clusters (person_id, cluster_id)"
                " SELECT ?, cluster_id FROM person_clusters WHERE person_id = ?",
                (new_pid, person_id),
            )
            self._refresh_canonical(person_id)
            self._refresh_canonical(new_pid)
            self._invalidate_bank()
            self._audit(
                "split",
                {"person_id": person_id, "new_person_id": new_pid, "moved": sorted(subset)},
                date,
            )
            return new_pid

    def requeue(self, person_id: int, target_person_id: int, *, date: str = "") -> int:
        """Queue a person-to-person merge proposal for review."""
        with self._lock, self._conn:
            source = self.export_person(person_id)
            target = self.export_person(target_person_id)
            if source is None or target is None:
                raise UsageError("requeue needs two existing persons")
            if person_id == target_person_id:
                raise UsageError("cannot requeue a person against itself")
            src = source["variants"][0]
            tgt = target["variants"][0]
            src_isr = to_isr(src["surface"], src["script"])
            score = name_similarity(src_isr, to_isr(tgt["surface"], tgt["script"]))
            shared = self._conn.execute(
                "SELECT 1 FROM person_clusters p1 JOIN person_clusters p2"
                " ON p1.cluster_id = p2.cluster_id"
                " WHERE p1.person_id = ? AND p2.person_id = ? LIMIT 1",
                (person_id, target_person_id),
            ).fetchone()
            cand_id = self._record_candidate(
                src["surface"], src["language"], src["script"], src_isr.text,
                target_person_id, score, shared is not None, "queued", date, None,
                {"doc_ids": [], "triggers": {}},
                source_person_id=person_id,
            )
            self._audit(
                "requeue",
                {"candidate_id": cand_id, "source": person_id, "target": target_person_id},
                date,
            )
            return cand_id

    # ------------------------------------------------------------- bulk import / export

    def import_variants(self, path: str | Path) -> int:
        """Add surfaces from a canonical<TAB>language<TAB>surface file."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ResourceError(f"cannot read variant file {path}: {exc}") from exc
        imported = 0
        with self._lock, self._conn:
            for line_no, raw in enumerate(text.splitlines(), start=1):
                line = raw.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    log.warning("variant import line %d malformed, skipped: %r", line_no, raw)
                    continue
                canonical, language, surface = (p.strip() for p in parts)
                person = self._conn.execute(
                    "SELECT person_id FROM persons WHERE canonical = ?", (canonical,)
                ).fetchone()
                if person is None:
                    log.warning(
                        "variant import line %d: no person with canonical %r", line_no, canonical
                    )
                    continue
                script = script_for_language(language)
                dup = self._conn.execute(
                    "SELECT 1 FROM variants WHERE surface = ? AND script = ?", (surface, script)
                ).fetchone()
                if dup is not None:
                    continue
                isr = to_isr(surface, script).text
                self._add_variant(int(person["person_id"]), surface, language, script, isr, 0, "")
                imported += 1
            if imported:
                self._audit("import_variants", {"file": str(path), "count": imported})
        return imported

    def export_person(self, person_id: int) -> dict | None:
        row = self._conn.execute(
            "SELECT person_id, canonical FROM persons WHERE person_id = ?", (person_id,)
        ).fetchone()
        if row is None:
            return None
        variants = [
            dict(v)
            for v in self._conn.execute(
                "SELECT surface, language, script, isr, count, first_seen, last_seen"
                " FROM variants WHERE person_id = ?"
                " ORDER BY count DESC, first_seen ASC, variant_id ASC",
                (person_id,),
            )
        ]
        phrases = {
            r["phrase"]: r["count"]
            for r in self._conn.execute(
                "SELECT phrase, count FROM trigger_phrases WHERE person_id = ?"
                " ORDER BY count DESC, phrase ASC",
                (person_id,),
            )
        }
        cooc = {}
        for r in self._conn.execute(
            "SELECT a, b, count FROM cooccurrences WHERE a = ? OR b = ? ORDER BY count DESC",
            (person_id, person_id),
        ):
            other = r["b"] if r["a"] == person_id else r["a"]
            cooc[str(other)] = r["count"]
        return {
            "id": int(row["person_id"]),
            "canonical": row["canonical"],
            "variants": variants,
            "trigger_phrases": phrases,
            "cooccurrences": cooc,
        }

    def export_all(self) -> list[dict]:
        ids = [
            int(r["person_id"])
            for r in self._conn.execute("SELECT person_id FROM persons ORDER BY person_id")
        ]
        out = []
        for pid in ids:
            person = self.export_person(pid)
            if person is not None:
                out.append(person)
        return out

    # ------------------------------------------------------------- reads

    def person_count(self) -> int:
        return int(self._conn.execute("SELECT COUNT(*) AS n FROM persons").fetchone()["n"])

    def total_occurrences(self) -> int:
        row = self._conn.execute("SELECT COALESCE(SUM(count), 0) AS n FROM variants").fetchone()
        return int(row["n"])

    def known_name_entries(self, min_count: int = 2) -> list[tuple[int, str]]:
        """(person_id, surface) for every variant of persons totalling >= min_count."""
        cur = self._conn.execute(
            "SELECT v.person_id, v.surface FROM variants v JOIN ("
            "  SELECT person_id FROM variants GROUP BY person_id HAVING SUM(count) >= ?"
            ") p ON p.person_id = v.person_id ORDER BY v.person_id, v.variant_id",
            (min_count,),
        )
        return [(int(r["person_id"]), r["surface"]) for r in cur]

    def rank_persons(self, isr_text: str, *, arabic: bool = False) -> list[tuple[int, float]]:
        """Best combined score per person, descending (ties by person id)."""
        with self._lock:
            bank = self._ensure_bank()
            if len(bank) == 0:
                return []
            scores = bank.score(isr_text, arabic=arabic)
            best: dict[int, float] = {}
            for idx, (pid, _script) in enumerate(self._bank_rows):
                combined = float(scores["combined"][idx])
                if pid not in best or combined > best[pid]:
                    best[pid] = combined
            return sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))

    def person_id_by_canonical(self, canonical: str) -> int | None:
        row = self._conn.execute(
            "SELECT person_id FROM persons WHERE canonical = ? ORDER BY person_id LIMIT 1",
            (canonical,),
        ).fetchone()
        return int(row["person_id"]) if row is not None else None

    def top_trigger_phrases(self, person_id: int, k: int = 10) -> list[tuple[str, int]]:
        cur = self._conn.execute(
            "SELECT phrase, count FROM trigger_phrases WHERE person_id = ?"
            " ORDER BY count DESC, phrase ASC LIMIT ?",
            (person_id, k),
        )
        return [(r["phrase"], int(r["count"])) for r in cur]

    def _bump_cooccurrence(self, a: int, b: int, n: int):
        if a == b:
            return
        lo, hi = (a, b) if a < b else (b, a)
        self._conn.execute(
            "INSERT INTO cooccurrences (a, b, count) VALUES (?, ?, ?)"
            " ON CONFLICT(a, b) DO UPDATE SET count = count + ?",
            (lo, hi, n, n),
        )

    def add_cooccurrence(self, a: int, b: int, n: int = 1):
        with self._lock, self._conn:
            self._bump_cooccurrence(a, b, n)

    def cooccurrence(self, person_id: int) -> list[tuple[int, int]]:
        cur = self._conn.execute(
            "SELECT a, b, count FROM cooccurrences WHERE a = ? OR b = ?"
            " ORDER BY count DESC, a ASC, b ASC",
            (person_id, person_id),
        )
        out = []
        for r in cur:
            other = r["b"] if r["a"] == person_id else r["a"]
            out.append((int(other), int(r["count"])))
        return out

    # ------------------------------------------------------------- staged documents

    def stage_documents(self, docs) -> int:
        staged = 0
        with self._lock, self._conn:
            for doc in docs:
                self._conn.execute(
                    "INSERT OR REPLACE INTO staged_docs (id, language, date, title, body,"
                    " source, countries) VALUES (?, ?, ?, ?, ?, ?, ?)",
                    (
                        doc.id, doc.language, doc.date, doc.title, doc.body, doc.source,
                        json.dumps([[c, n] for c, n in doc.country_tags]),
                    ),
                )
                staged += 1
        return staged

    def staged_documents(self, date: str | None = None, language: str | None = None):
        from .recognize import Document

        sql = "SELECT * FROM staged_docs"
        clauses, args = [], []
        if date is not None:
            clauses.append("date = ?")
            args.append(date)
        if language is not None:
            clauses.append("language = ?")
            args.append(language)
        if clauses:
            sql += " WHERE " + " AND ".join(clauses)
        sql += " ORDER BY id"
        out = []
        for r in self._conn.execute(sql, args):
            out.append(
                Document(
                    id=r["id"],
                    language=r["language"],
                    date=r["date"],
                    title=r["title"],
                    body=r["body"],
                    source=r["source"],
                    country_tags=[(c, int(n)) for c, n in json.loads(r["countries"])],
                )
            )
        return out

    def staged_languages(self, date: str | None = None) -> list[str]:
        sql = "SELECT DISTINCT language FROM staged_docs"
        args: list[str] = []
        if date is not None:
            sql += " WHERE date = ?"
            args.append(date)
        sql += " ORDER BY language"
        return [r["language"] for r in self._conn.execute(sql, args)]

    def audit_entries(self) -> list[dict]:
        return [dict(r) for r in self._conn.execute("SELECT * FROM audit ORDER BY seq")]
