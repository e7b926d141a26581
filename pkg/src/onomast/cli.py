"""Command line front end.

``onomast ingest`` stages document JSONL into the store, ``run-day`` runs the
per-language pipeline (keyness vectors, dendrogram, topics, recognition, name
ingestion), ``eval-ner`` and ``eval-translit`` score against gold files, and
``serve`` hosts the review API.  Exit codes: 0 ok, 1 usage, 2 missing
resource, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .cluster import (
    ReferenceFreqs,
    build_dendrogram,
    detect_topics,
    document_vector,
    enrich_countries,
    tokenize_counts,
)
from .config import RunConfig, Thresholds, load_config
from .errors import ConfigurationError, OnomastError, ResourceError, UsageError
from .recognize import (
    Document,
    LanguageResources,
    aggregate_cluster_names,
    compile_known_names,
    load_triggers,
    recognize_document,
)
from .rules import script_for_language, to_isr
from .store import NameStore

log = logging.getLogger(__name__)


def _dump(report: dict) -> str:
    return json.dumps(report, ensure_ascii=True, sort_keys=True, indent=2) + "\n"


def _emit(report: dict, out_path: str | None):
    text = _dump(report)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _open_store(cfg: RunConfig) -> NameStore:
    return NameStore(
        cfg.store,
        in_cluster=cfg.thresholds.in_cluster_merge,
        review_low=cfg.thresholds.review_low,
        auto=cfg.thresholds.auto_merge,
    )


# ------------------------------------------------------------------ ingest


def cmd_ingest(docs_path: str | Path, store: NameStore) -> dict:
    """Validate and stage a document JSONL file."""
    path = Path(docs_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read documents {path}: {exc}") from exc
    docs: list[Document] = []
    rejected: list[dict] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            for field in ("id", "language", "date"):
                if not record.get(field):
                    raise ValueError(f"missing field {field!r}")
            docs.append(Document.from_dict(record))
        except (ValueError, TypeError, KeyError) as exc:
            rejected.append({"line": line_no, "error": str(exc)})
    staged = store.stage_documents(docs)
    return {"staged": staged, "rejected": rejected}


# ------------------------------------------------------------------ run-day


def _language_resources(cfg: RunConfig, language: str) -> LanguageResources:
    resources = LanguageResources.bundled(language)
    if cfg.triggers_dir is not None:
        triggers = load_triggers(Path(cfg.triggers_dir) / f"{language}.tsv")
        resources = replace(resources, triggers=triggers)
    return resources


def _reference_freqs(cfg: RunConfig, language: str) -> ReferenceFreqs:
    try:
        if cfg.ref_dir is not None:
            return ReferenceFreqs.load(Path(cfg.ref_dir) / f"{language}_freq.tsv")
        return ReferenceFreqs.bundled(language)
    except ConfigurationError as exc:
        raise ResourceError(str(exc)) from exc


def _run_language(
    cfg: RunConfig,
    store: NameStore,
    language: str,
    docs: list[Document],
    resources: LanguageResources,
    reference: ReferenceFreqs,
    countries: ReferenceFreqs,
) -> dict:
    vectors = []
    for doc in docs:
        counts = tokenize_counts(doc.title + "\n" + doc.body, resources.stopwords)
        vec = document_vector(doc.id, counts, reference)
        vectors.append(enrich_countries(vec, doc.country_tags, countries))
    topics = []
    cluster_of: dict[str, str] = {}
    if vectors:
        root = build_dendrogram(vectors)
        detected = detect_topics(root, min_sim=cfg.thresholds.topic_min_sim)
        for index, topic in enumerate(detected):
            topic_id = f"{cfg.date}:{language}:{index}"
            for doc_id in topic.members:
                cluster_of[doc_id] = topic_id
            topics.append((topic_id, topic))

    matcher = compile_known_names(store, language, declensions=resources.declensions)
    doc_candidates: dict[str, list] = {}
    for doc in docs:
        cands = recognize_document(doc, matcher, resources)
        for cand in cands:
            cand.cluster_id = cluster_of.get(doc.id)
        doc_candidates[doc.id] = cands

    tallies = {"recognized": 0, "exact": 0, "exact_isr": 0, "new_person": 0,
               "auto_merged": 0, "queued": 0, "rejected_low": 0}
    for doc in docs:
        persons_here: set[int] = set()
        for cand in doc_candidates[doc.id]:
            result = store.ingest_name(cand, date=doc.date)
            tallies["recognized"] += 1
            tallies[result.disposition] += 1
            if result.person_id is not None:
                persons_here.add(result.person_id)
        ordered = sorted(persons_here)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                store.add_cooccurrence(a, b)

    all_cands = [c for doc in docs for c in doc_candidates[doc.id]]
    topic_reports = []
    for topic_id, topic in topics:
        names = aggregate_cluster_names(all_cands, topic.members)
        topic_reports.append(
            {
                "topic_id": topic_id,
                "title_doc": topic.title_doc,
                "keywords": topic.keywords,
                "member_doc_ids": sorted(topic.members),
                "cohesiveness": round(topic.cohesiveness, 6),
                "names": [
                    {"surface": n.surface, "doc_count": n.doc_count, "methods": sorted(set(n.methods))}
                    for n in names
                ],
            }
        )
    return {"documents": len(docs), "topics": topic_reports, "names": tallies}


def cmd_run_day(cfg: RunConfig, store: NameStore) -> dict:
    """Cluster, recognize and ingest one day of staged documents."""
    languages = list(cfg.languages) or store.staged_languages(cfg.date or None)
    # load every resource up front so nothing is half-processed on failure
    loaded = []
    countries = _reference_freqs_countries()
    for language in languages:
        resources = _language_resources(cfg, language)
        reference = _reference_freqs(cfg, language)
        docs = store.staged_documents(cfg.date or None, language)
        loaded.append((language, docs, resources, reference))
    report = {"date": cfg.date, "languages": {}}
    for language, docs, resources, reference in loaded:
        report["languages"][language] = _run_language(
            cfg, store, language, docs, resources, reference, countries
        )
    report["queued_total"] = store.queued_count()
    report["persons_total"] = store.person_count()
    return report


def _reference_freqs_countries() -> ReferenceFreqs:
    try:
        return ReferenceFreqs.bundled_countries()
    except ConfigurationError as exc:
        raise ResourceError(str(exc)) from exc


# ------------------------------------------------------------------ evaluation


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _load_gold_ner(path: Path) -> list[dict]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read gold corpus {path}: {exc}") from exc
    gold = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
            gold.append({"id": record["id"], "persons": list(record["persons"])})
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"gold line {line_no} malformed: {exc}") from exc
    if not gold:
        raise UsageError(f"gold corpus {path} has no records")
    return gold


def cmd_eval_ner(cfg: RunConfig, store: NameStore, gold_path: str | Path) -> dict:
    """Per-document presence scoring of recognized names against a gold list."""
    gold = _load_gold_ner(Path(gold_path))
    staged = {doc.id: doc for doc in store.staged_documents()}
    matchers: dict[str, object] = {}
    resources: dict[str, LanguageResources] = {}
    per_language: dict[str, dict] = {}
    for record in gold:
        doc = staged.get(record["id"])
        if doc is None:
            raise UsageError(f"gold document {record['id']!r} is not staged")
        language = doc.language
        if language not in matchers:
            resources[language] = _language_resources(cfg, language)
            matchers[language] = compile_known_names(
                store, language, declensions=resources[language].declensions
            )
        cands = recognize_document(doc, matchers[language], resources[language])
        predicted = {c.surface.casefold() for c in cands}
        wanted = {name.casefold() for name in record["persons"]}
        stats = per_language.setdefault(language, {"docs": 0, "tp": 0, "fp": 0, "fn": 0})
        stats["docs"] += 1
        stats["tp"] += len(predicted & wanted)
        stats["fp"] += len(predicted - wanted)
        stats["fn"] += len(wanted - predicted)
    table = {}
    macro = {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    for language, stats in sorted(per_language.items()):
        precision = 100.0 * stats["tp"] / (stats["tp"] + stats["fp"]) if stats["tp"] + stats["fp"] else 0.0
        recall = 100.0 * stats["tp"] / (stats["tp"] + stats["fn"]) if stats["tp"] + stats["fn"] else 0.0
        f1 = f_measure(precision, recall)
        table[language] = {
            **stats,
            "precision": round(precision, 1),
            "recall": round(recall, 1),
            "f1": round(f1, 1),
        }
        macro["precision"] += precision
        macro["recall"] += recall
        macro["f1"] += f1
    n = len(table)
    macro = {k: round(v / n, 1) for k, v in macro.items()}
    return {"languages": table, "macro": macro}


def cmd_eval_translit(cfg: RunConfig, store: NameStore, gold_path: str | Path) -> dict:
    """Rank-1 retrieval of transliterated names against the stored persons."""
    path = Path(gold_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read gold names {path}: {exc}") from exc
    minimum = cfg.thresholds.retrieval_min
    total = 0
    correct = 0
    failures = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise UsageError(
                f"gold line {line_no}: expected surface<TAB>language<TAB>canonical"
            )
        surface, language, canonical = (p.strip() for p in parts)
        total += 1
        script = script_for_language(language)
        isr = to_isr(surface, script)
        ranked = store.rank_persons(isr.text, arabic=(script == "arabic"))
        expected = store.person_id_by_canonical(canonical)
        if not ranked or ranked[0][1] < minimum:
            failures.append(
                {"surface": surface, "expected": canonical, "got": None,
                 "score": round(ranked[0][1], 4) if ranked else None,
                 "reason": "no-candidate"}
            )
            continue
        got_id, got_score = ranked[0]
        if expected is not None and got_id == expected:
            correct += 1
        else:
            got = store.export_person(got_id)
            failures.append(
                {"surface": surface, "expected": canonical,
                 "got": got["canonical"] if got else None,
                 "score": round(got_score, 4), "reason": "wrong-person"}
            )
    accuracy = correct / total if total else 0.0
    return {
        "total": total,
        "correct": correct,
        "accuracy": round(accuracy, 4),
        "min_score": minimum,
        "failures": failures,
    }


# ------------------------------------------------------------------ serve


def cmd_serve(cfg: RunConfig, store: NameStore) -> int:
    from .api import create_app

    try:
        import uvicorn
    except ImportError as exc:
        raise ResourceError(f"uvicorn is required for serve: {exc}") from exc
    static = Path("frontend") / "dist"
    app = create_app(store, static_dir=static if static.is_dir() else None)
    try:
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    except OSError as exc:
        raise ResourceError(f"cannot bind {cfg.host}:{cfg.port}: {exc}") from exc
    return 0


# ------------------------------------------------------------------ argument plumbing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="onomast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--store", help="store path (overrides config)")

    p = sub.add_parser("ingest", help="stage a document JSONL file")
    common(p)
    p.add_argument("docs", help="documents JSONL path")

    p = sub.add_parser("run-day", help="cluster, recognize and ingest one day")
    common(p)
    p.add_argument("--date", help="day to process (overrides config)")
    p.add_argument("--languages", help="comma separated language tags")
    p.add_argument("--report", help="write the JSON report to this path")

    p = sub.add_parser("eval-ner", help="score recognition against a gold corpus")
    common(p)
    p.add_argument("gold", help="gold JSONL path")

    p = sub.add_parser("eval-translit", help="score transliteration retrieval")
    common(p)
    p.add_argument("gold", help="gold TSV: surface, language, canonical")

    p = sub.add_parser("serve", help="serve the review API")
    common(p)
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    updates = {}
    if getattr(args, "store", None):
        updates["store"] = args.store
    if getattr(args, "date", None):
        updates["date"] = args.date
    if getattr(args, "languages", None):
        updates["languages"] = tuple(
            part.strip() for part in args.languages.split(",") if part.strip()
        )
    if getattr(args, "report", None):
        updates["report"] = args.report
    if getattr(args, "host", None):
        updates["host"] = args.host
    if getattr(args, "port", None):
        updates["port"] = args.port
    if updates:
        cfg = replace(cfg, **updates).validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _build_parser().parse_args(argv)
        cfg = _config_from_args(args)
        if args.command == "serve":
            with _open_store(cfg) as store:
                return cmd_serve(cfg, store)
        with _open_store(cfg) as store:
            if args.command == "ingest":
                report = cmd_ingest(args.docs, store)
            elif args.command == "run-day":
                report = cmd_run_day(cfg, store)
            elif args.command == "eval-ner":
                report = cmd_eval_ner(cfg, store, args.gold)
            else:
                report = cmd_eval_translit(cfg, store, args.gold)
            _emit(report, cfg.report)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 2
    except OnomastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort mapping
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
