"""Known-name lookup and trigger-based guessing of new names."""

from __future__ import annotations

import pytest

from onomast.errors import RuleParseError
from onomast.morpho import DeclensionTable
from onomast.recognize import (
    Document,
    KnownNameMatcher,
    LanguageResources,
    aggregate_cluster_names,
    bundled_components,
    bundled_stopwords,
    bundled_triggers,
    compile_known_names,
    doc_tokens,
    guess_new,
    load_triggers,
    recognize_document,
    scan_known,
    tokenize,
)


class StubStore:
    def __init__(self, entries):
        self._entries = entries  # (person_id, surface, count)

    def known_name_entries(self, min_count):
        return [(pid, surface) for pid, surface, count in self._entries if count >= min_count]


def make_doc(body, language="en", title="", doc_id="d1"):
    return Document(id=doc_id, language=language, date="2005-05-30", title=title, body=body)


# ---------------------------------------------------------------- tokenizer


def test_tokenize_spans_and_flags():
    toks = tokenize("Hello there. Jean-Pierre spoke, briefly.")
    texts = [t.text for t in toks]
    assert texts == ["Hello", "there", "Jean-Pierre", "spoke", "briefly"]
    assert toks[0].sent_start and not toks[0].joined_left
    assert toks[1].joined_left and not toks[1].sent_start
    assert toks[2].sent_start and not toks[2].joined_left
    assert not toks[4].joined_left  # comma between spoke and briefly


def test_tokenize_keeps_apostrophes_and_digits():
    toks = tokenize("O'Neill met the 25 year-old")
    assert [t.text for t in toks] == ["O'Neill", "met", "the", "25", "year-old"]


def test_doc_tokens_marks_body_start():
    doc = make_doc("Body starts here", title="A Title")
    toks = doc_tokens(doc)
    assert [t.text for t in toks] == ["A", "Title", "Body", "starts", "here"]
    assert toks[2].sent_start and not toks[2].joined_left


# ---------------------------------------------------------------- trigger parsing


def test_load_triggers_parses_fields():
    trigs = load_triggers("en\ttitle\tleft\tPrime Minister\t2\n")
    assert len(trigs) == 1
    assert trigs[0].surface == "Prime Minister"
    assert trigs[0].max_gap_tokens == 2


@pytest.mark.parametrize(
    "line",
    [
        "en\tbogus\tleft\tMr\t2",
        "en\ttitle\tmiddle\tMr\t2",
        "en\ttitle\tleft\tMr\tlots",
        "en\ttitle\tleft\tMr",
        "en\tregex\tleft\t[unclosed\t2",
    ],
)
def test_load_triggers_rejects_bad_lines(line):
    with pytest.raises(RuleParseError):
        load_triggers(line + "\n")


@pytest.mark.parametrize("language", ["en", "fr", "de", "es", "nl", "sl", "et", "ru", "ar"])
def test_bundled_trigger_files_load(language):
    assert len(bundled_triggers(language)) > 0


def test_bundled_stopwords_and_components():
    assert "the" in bundled_stopwords("en")
    assert "john" in bundled_components("en")


# ---------------------------------------------------------------- known-name lookup


def test_frequency_gate_excludes_rare_names():
    store = StubStore([(1, "Rafik Hariri", 5), (2, "Xyz Qrs", 1)])
    matcher = compile_known_names(store, "en")
    doc = make_doc("Rafik Hariri met Xyz Qrs today")
    names = [c.surface for c in scan_known(doc, matcher)]
    assert names == ["Rafik Hariri"]


def test_empty_store_matches_nothing():
    matcher = compile_known_names(StubStore([]), "en")
    assert scan_known(make_doc("Rafik Hariri spoke"), matcher) == []


def test_lookup_in_running_text():
    matcher = compile_known_names(StubStore([(1, "Rafik Hariri", 5)]), "en")
    doc = make_doc("The death of former Prime Minister Rafik Hariri, blamed on Syria.")
    cands = scan_known(doc, matcher)
    assert len(cands) == 1
    cand = cands[0]
    assert cand.surface == "Rafik Hariri"
    assert cand.method == "lookup"
    assert cand.person_id == 1


def test_slovene_lookup_matches_inflected_forms():
    matcher = compile_known_names(StubStore([(1, "Rafik Hariri", 5)]), "sl")
    doc = make_doc("umor premiera Rafika Haririja", language="sl")
    cands = scan_known(doc, matcher)
    assert [c.surface for c in cands] == ["Rafik Hariri"]
    assert cands[0].matched_text == "Rafika Haririja"


def test_slovene_lookup_accepts_tonyju_blairju():
    matcher = compile_known_names(StubStore([(7, "Tony Blair", 9)]), "sl")
    doc = make_doc("pismo Tonyju Blairju v London", language="sl")
    assert [c.surface for c in scan_known(doc, matcher)] == ["Tony Blair"]


def test_estonian_lookup_accepts_stem_mutation():
    matcher = compile_known_names(StubStore([(3, "New York", 4)]), "et")
    doc = make_doc("lendas New Yorgile eile", language="et")
    assert [c.surface for c in scan_known(doc, matcher)] == ["New York"]


def test_leftmost_longest_and_per_person_dedup():
    store = StubStore([(1, "Rafik Hariri", 5), (2, "Hariri", 3)])
    matcher = compile_known_names(store, "en")
    doc = make_doc("Rafik Hariri spoke. Later Rafik Hariri left. Hariri again.")
    cands = scan_known(doc, matcher)
    # longest match wins at first position, each person reported once
    assert [(c.person_id, c.surface) for c in cands] == [(1, "Rafik Hariri"), (2, "Hariri")]


def test_lookup_does_not_cross_punctuation():
    matcher = compile_known_names(StubStore([(1, "Tony Blair", 5)]), "en")
    doc = make_doc("He said Tony. Blair answered later.")
    assert scan_known(doc, matcher) == []


def test_matcher_size_counts_added_surfaces():
    matcher = KnownNameMatcher("en")
    matcher.add("Tony Blair", 1)
    matcher.add("Rafik Hariri", 2)
    assert len(matcher) == 2


# ---------------------------------------------------------------- guessing


@pytest.fixture(scope="module")
def en_res() -> LanguageResources:
    return LanguageResources.bundled("en")


def test_trigger_and_component_guess(en_res):
    doc = make_doc("She met the American doctor John Smith at noon.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert len(cands) == 1
    cand = cands[0]
    assert cand.surface == "John Smith"
    assert set(cand.triggers) >= {"American", "doctor"}
    assert cand.method == "component"  # John is a known first name


def test_trigger_guess_without_component(en_res):
    doc = make_doc("The Lebanese journalist Zeina Khodr reported live.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [c.surface for c in cands] == ["Zeina Khodr"]
    assert cands[0].method == "trigger_guess"
    assert "journalist" in cands[0].triggers


def test_right_side_trigger(en_res):
    doc = make_doc("Phe is being helped by Wanthanee Rungruangspakul, a law lecturer.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [c.surface for c in cands] == ["Wanthanee Rungruangspakul"]
    assert "law lecturer" in cands[0].triggers


def test_regex_trigger(en_res):
    doc = make_doc("the 25 year-old Maria Sharapova was first")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [c.surface for c in cands] == ["Maria Sharapova"]


def test_german_adjective_false_positive_mode():
    res = LanguageResources.bundled("de")
    doc = make_doc(
        "Die österreichische Eishockey Nationalmannschaft gewann gestern.", language="de"
    )
    cands = guess_new(doc, res.triggers, res.components, stopwords=res.stopwords)
    assert [c.surface for c in cands] == ["Eishockey Nationalmannschaft"]


def test_component_path_without_trigger(en_res):
    doc = make_doc("Witnesses saw Kofi Annan and Getnet Abebe leaving.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    # Kofi is a known component; Getnet is not and has no trigger
    assert [c.surface for c in cands] == ["Kofi Annan"]
    assert cands[0].method == "component"


def test_bare_capitalized_run_is_not_guessed(en_res):
    doc = make_doc("Yesterday Random Capitals appeared twice in print.")
    assert guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords) == []


def test_single_token_never_guessed(en_res):
    doc = make_doc("President Bush spoke briefly.")
    assert guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords) == []


def test_stopword_breaks_run(en_res):
    doc = make_doc("He visited President The Hague yesterday.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert cands == []


def test_abbreviated_title_attaches_across_its_period(en_res):
    doc = make_doc("We asked Dr. Anthony Fauci about it.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [c.surface for c in cands] == ["Anthony Fauci"]
    assert "Dr" in cands[0].triggers


def test_trigger_does_not_reach_into_next_sentence(en_res):
    doc = make_doc("They phoned the president. Later Smith Jones arrived.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert cands == []


def test_guess_cap_limits_run_length(en_res):
    doc = make_doc("President Alpha Beta Gamma Delta Epsilon spoke.")
    cands = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [c.surface for c in cands] == ["Alpha Beta Gamma Delta"]


def test_arabic_trigger_adjacency():
    res = LanguageResources.bundled("ar")
    doc = make_doc("قال الرئيس رفيق الحريري أمس في بيروت", language="ar")
    cands = guess_new(doc, res.triggers, res.components, stopwords=res.stopwords)
    surfaces = [c.surface for c in cands]
    assert "رفيق الحريري" in surfaces
    hit = next(c for c in cands if c.surface == "رفيق الحريري")
    assert hit.method == "trigger_guess"
    assert "الرئيس" in hit.triggers


def test_guess_candidates_have_at_least_two_tokens(en_res):
    doc = make_doc(
        "President Chirac arrived. The doctor Lisa Ray and singer Bono Vox met Mr Pitt."
    )
    for cand in guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords):
        assert len(cand.surface.split()) >= 2
        assert not all(t.casefold() in en_res.stopwords for t in cand.surface.split())


def test_guess_deterministic(en_res):
    doc = make_doc("The American doctor John Smith met the Lebanese journalist Zeina Khodr.")
    first = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    second = guess_new(doc, en_res.triggers, en_res.components, stopwords=en_res.stopwords)
    assert [(c.surface, c.triggers, c.method) for c in first] == [
        (c.surface, c.triggers, c.method) for c in second
    ]


# ---------------------------------------------------------------- combined pass


def test_lookup_takes_precedence_over_guess(en_res):
    matcher = compile_known_names(StubStore([(1, "John Smith", 5)]), "en")
    doc = make_doc("The American doctor John Smith spoke.")
    cands = recognize_document(doc, matcher, en_res)
    assert [(c.surface, c.method) for c in cands] == [("John Smith", "lookup")]


def test_paths_are_independent_and_unioned(en_res):
    matcher = compile_known_names(StubStore([(1, "Rafik Hariri", 5)]), "en")
    doc = make_doc("Rafik Hariri praised the American doctor John Smith.")
    cands = recognize_document(doc, matcher, en_res)
    assert {(c.surface, c.method) for c in cands} == {
        ("Rafik Hariri", "lookup"),
        ("John Smith", "component"),
    }
    # guessing output is invariant to the matcher
    no_matcher = recognize_document(doc, None, en_res)
    assert {c.surface for c in no_matcher if c.method != "lookup"} >= {"John Smith"}


# ---------------------------------------------------------------- aggregation


def _cand(surface, doc_id, method="trigger_guess", triggers=()):
    from onomast.recognize import NameCandidate

    return NameCandidate(
        surface=surface,
        tokens=(0, 2),
        doc_id=doc_id,
        language="en",
        method=method,
        triggers=list(triggers),
    )


def test_aggregate_unions_across_cluster_docs():
    cands = [
        _cand("Rafik Hariri", "2", triggers=("Prime Minister",)),
        _cand("Other Person", "9"),
    ]
    out = aggregate_cluster_names(cands, ["1", "2", "3"])
    assert [cn.surface for cn in out] == ["Rafik Hariri"]
    assert out[0].doc_ids == ("2",)
    assert out[0].trigger_counts == {"Prime Minister": 1}


def test_aggregate_empty_cluster():
    assert aggregate_cluster_names([_cand("A B", "1")], []) == []


def test_aggregate_keeps_distinct_spellings():
    cands = [
        _cand("Rafik Hariri", "1", triggers=("Prime Minister",)),
        _cand("Rafiq Hariri", "2", triggers=("Prime Minister",)),
        _cand("Rafik Hariri", "3"),
    ]
    out = aggregate_cluster_names(cands, ["1", "2", "3"])
    assert [cn.surface for cn in out] == ["Rafik Hariri", "Rafiq Hariri"]
    assert out[0].doc_ids == ("1", "3")
    assert out[0].trigger_counts == {"Prime Minister": 1}
    assert out[1].doc_ids == ("2",)
