"""Acceptance suite: one test per release criterion.

Each criterion is checked at its stated tolerance against an oracle that is
independent of the implementation path it verifies (brute-force recounts,
sort-based percentiles, exact rational date arithmetic, hand-traced scans).
The terminal summary prints one PASS/FAIL line per criterion.
"""

import datetime as dt
import json
import random
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from patlink import embedding, families, mesh, pairing, references, review
from patlink.corpus import MeshThesaurus, MeshThesaurusEntry, PatentDocument
from patlink.pairing import CandidatePair
from patlink.references import MockMetadataClient, ResolutionCache, resolve_family_references

from conftest import load_pairs_file


# -- criterion 1: synthetic end-to-end recovery ------------------------------

def test_criterion_01_end_to_end_recovery(demo_corpus):
    """100 families, 250 publications, 40 planted pairs, 60 homonym
    distractors: run-all with default config recovers >= 36/40 planted and
    emits <= 10 false pairs, in under 60 s."""
    truth = demo_corpus["truth"]
    planted = {(p["family_id"], p["pub_id"]) for p in truth["planted"]}
    assert len(planted) == 40
    final = {(p["family_id"], p["pub_id"])
             for p in load_pairs_file(Path(demo_corpus["config"].stage_dir)
                                      / "pairs_final.jsonl")}
    recovered = planted & final
    false_pairs = final - planted
    assert len(recovered) >= 36, f"only {len(recovered)}/40 planted pairs recovered"
    assert len(false_pairs) <= 10, f"{len(false_pairs)} false pairs emitted"
    assert demo_corpus["elapsed"] < 60.0, f"run-all took {demo_corpus['elapsed']:.1f}s"


def test_criterion_01_corpus_shape(demo_corpus):
    """The generated corpus matches the stated composition."""
    truth = demo_corpus["truth"]
    stage_dir = Path(demo_corpus["config"].stage_dir)
    fams = load_pairs_file(stage_dir / "families.jsonl")
    pubs = load_pairs_file(stage_dir / "publications.jsonl")
    assert len(fams) == 100
    assert len(pubs) == 250
    by_kind = {}
    for p in truth["planted"]:
        by_kind.setdefault(p["kind"], []).append(p)
    assert len(by_kind["names"]) == 15
    assert all(p["n_shared"] >= 3 for p in by_kind["names"])
    assert len(by_kind["references"]) == 10
    assert all(p["n_refs"] >= 1 for p in by_kind["references"])
    assert len(by_kind["similarity"]) == 15
    assert all(p["n_shared"] >= 2 for p in by_kind["similarity"])
    assert len(truth["distractor_pairs"]) + len(truth["hard_distractors"]) == 60


# -- criterion 2: ambiguity reduction (1:N fan-out) ---------------------------

def test_criterion_02_ambiguity_reduction(homonym_corpus):
    """A planted homonym linking 1 patent to 50 publications by name alone
    collapses from N=50 raw to N<=3 final, while the 4-common-name pair
    survives all filters. Exact."""
    stage_dir = Path(homonym_corpus["config"].stage_dir)
    raw = load_pairs_file(stage_dir / "pairs_raw.jsonl")
    final = load_pairs_file(stage_dir / "pairs_final.jsonl")
    raw_fan = sum(1 for p in raw if p["family_id"] == "EP900001")
    final_fan = sum(1 for p in final if p["family_id"] == "EP900001")
    assert raw_fan == 50
    assert final_fan <= 3
    anchor = [p for p in final if p["family_id"] == "EP900002" and p["pub_id"] == "ANCHOR1"]
    assert len(anchor) == 1, "4-common-name pair must survive every filter"
    assert anchor[0]["n_common_names"] >= 4


# -- criterion 3: threshold oracle equivalence --------------------------------

def test_criterion_03_threshold_oracle_equivalence():
    """compute_threshold_names on 1,000 random pairs equals an independent
    sort-based percentile + median computation to within 1e-12."""
    rng = np.random.default_rng(1234)
    pairs = []
    for i in range(1000):
        k = int(rng.integers(2, 7))
        pairs.append(CandidatePair("EPx", f"p{i}", ["n, i"] * k, k, 0, 1.0,
                                   cosine=float(rng.uniform(0, 1))))
    got = embedding.compute_threshold_names(pairs, whisker_pct=5.0, min_group_size=20)

    groups: dict[int, list[float]] = {}
    for p in pairs:
        groups.setdefault(p.n_common_names, []).append(p.cosine)
    whiskers = [float(np.percentile(np.sort(v), 5.0, method="linear"))
                for k, v in sorted(groups.items()) if len(v) >= 20]
    expected = float(np.median(whiskers))
    assert abs(got - expected) < 1e-12


# -- criterion 4: cosine suite -------------------------------------------------

def test_criterion_04_cosine_suite():
    """Symmetry, [0,1] range, identity, orthogonality, scale invariance,
    over 10,000 random vector pairs."""
    rng = np.random.default_rng(42)
    for _ in range(10_000):
        dim = int(rng.integers(2, 17))
        a = _doc_vec(rng.standard_normal(dim))
        b = _doc_vec(rng.standard_normal(dim))
        ab = embedding.cosine_similarity(a, b)
        ba = embedding.cosine_similarity(b, a)
        assert abs(ab - ba) < 1e-12
        assert 0.0 <= ab <= 1.0
        lam = float(rng.uniform(0.1, 10.0))
        scaled = embedding.cosine_similarity(_doc_vec(lam * a.vector), b)
        assert abs(scaled - ab) < 1e-9
    v = _doc_vec(np.array([0.3, -0.7, 0.2]))
    assert embedding.cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-12)
    e1 = _doc_vec(np.array([1.0, 0.0]))
    e2 = _doc_vec(np.array([0.0, 1.0]))
    assert embedding.cosine_similarity(e1, e2) == 0.0


def _doc_vec(values: np.ndarray) -> embedding.DocumentVector:
    return embedding.DocumentVector("v", values, 1)


# -- criterion 5: family partition property ------------------------------------

def test_criterion_05_family_partition():
    """1,000 random publication numbers over 200 bases: grouping is a
    partition and family filing dates equal brute-force minima. Exact."""
    rng = random.Random(2024)
    combos = [(f"EP{base:06d}", kind, seq)
              for base in range(200) for kind in "AB" for seq in range(1, 10)]
    chosen = rng.sample(combos, 1000)
    docs = []
    for base, kind, seq in chosen:
        filing = dt.date(2000, 1, 1) + dt.timedelta(days=rng.randrange(0, 2000))
        docs.append(PatentDocument(
            publication_number=f"{base}{kind}{seq}", filing_date=filing,
            inventors=[{"name": "Klaus Lippert", "country": None}], applicants=[],
            ipc_codes=[], description_texts={}, reference_strings=[]))
    fams = families.group_into_families(docs)

    # partition: every document in exactly one family, none lost
    member_lists = [set(f.member_numbers) for f in fams]
    everything = set()
    for members in member_lists:
        assert not (everything & members), "a document appears in two families"
        everything |= members
    assert everything == {d.publication_number for d in docs}
    assert sum(len(m) for m in member_lists) == 1000

    # brute-force minima
    expected_min: dict[str, dt.date] = {}
    for d in docs:
        base = d.publication_number[:-2]
        if base not in expected_min or d.filing_date < expected_min[base]:
            expected_min[base] = d.filing_date
    for fam in fams:
        assert fam.filing_date == expected_min[fam.family_id]


# -- criterion 6: date-window oracle --------------------------------------------

def test_criterion_06_date_window_oracle():
    """date_filter agrees with an exact rational day-difference check on
    10,000 random date pairs; the 0.5/1.5-year bounds are inclusive (they
    fall between integer day counts, so the nearest feasible day counts on
    both sides of each bound are included). Exact."""
    rng = random.Random(77)
    pairs = []
    day_counts = [rng.randrange(-100, 1500) for _ in range(10_000)]
    day_counts += [182, 183, 547, 548]    # straddle 182.625 and 547.875 days
    for i, days in enumerate(day_counts):
        filing = dt.date(2000, 1, 1) + dt.timedelta(days=rng.randrange(0, 1500))
        pub_date = filing + dt.timedelta(days=days)
        delta = (pub_date - filing).days / 365.25
        pairs.append(CandidatePair("EPx", f"p{i}", ["n, i"], 1, 0, delta))
    kept = pairing.date_filter(pairs)

    kept_ids = {id(p) for p in kept}
    year_days = Fraction(36525, 100)
    for p, days in zip(pairs, day_counts):
        expect = Fraction(1, 2) <= Fraction(days) / year_days <= Fraction(3, 2)
        assert (id(p) in kept_ids) == expect, f"disagreement at {days} days"
    # the feasibility boundary is exactly where the oracle says it is
    assert Fraction(183) / year_days > Fraction(1, 2) > Fraction(182) / year_days
    assert Fraction(547) / year_days < Fraction(3, 2) < Fraction(548) / year_days


# -- criterion 7: IPC filter on the synthetic corpus ----------------------------

def test_criterion_07_ipc_filter(demo_corpus):
    """Medical families are tagged A61K/C07K, distractors H04L/G06F: the
    allowed set must be exactly {A61K, C07K} and the filtered pair count
    must drop by the recounted amount."""
    stage_dir = Path(demo_corpus["config"].stage_dir)
    allowed = set((stage_dir / "allowed_classes.txt").read_text().split())
    assert allowed == {"A61K", "C07K"}

    fams = {f["family_id"]: f for f in load_pairs_file(stage_dir / "families.jsonl")}
    raw = load_pairs_file(stage_dir / "pairs_refs.jsonl")
    kept = load_pairs_file(stage_dir / "pairs_ipc.jsonl")
    # independent recount: a pair survives iff its family holds an allowed code
    expected_kept = [
        p for p in raw
        if {code[:4].strip() for code in fams[p["family_id"]]["ipc_codes"]} & allowed
    ]
    assert len(kept) == len(expected_kept)
    assert len(raw) - len(kept) == len(raw) - len(expected_kept)
    assert {(p["family_id"], p["pub_id"]) for p in kept} == \
        {(p["family_id"], p["pub_id"]) for p in expected_kept}


# -- criterion 8: masking extraction --------------------------------------------

def test_criterion_08_masking_extraction():
    """A 20-sentence fixture with nested thesaurus terms (a 4-gram
    containing a 1-gram) extracts exactly the hand-traced headings, and no
    token position is consumed twice (instrumented)."""
    thesaurus = MeshThesaurus([
        MeshThesaurusEntry("D1", "en", "Alpha Beta Gamma Delta", True),
        MeshThesaurusEntry("D2", "en", "Beta", True),
        MeshThesaurusEntry("D3", "en", "Gamma Delta", True),
        MeshThesaurusEntry("D4", "en", "WHO", True),
        MeshThesaurusEntry("D5", "en", "Epsilon", True),
    ])
    index = mesh.build_term_index(thesaurus, "en")
    sentences = [
        "the alpha beta gamma delta pathway remains active",   # D1 fires, nests D2/D3
        "a beta agonist was measured",                         # first free beta: D2
        "the gamma delta receptor binds",                      # first free 2-gram: D3
        "WHO issued guidance",                                 # acronym: D4
        "lowercase who stays quiet",                           # must not match D4
        "the epsilon subunit dissolves",                       # D5
        "alpha beta gamma delta appears again",                # repeat: masked, no emission
        "another beta mention here",
        "gamma delta pairs recur",
        "WHO appears twice",
        "epsilon levels stay constant",
        "plain filler sentence one",
        "plain filler sentence two",
        "alpha alone is not a term",
        "delta alone is not a term",
        "gamma without delta stays free",
        "beta beta beta repeats",
        "the alpha beta gamma delta cascade",
        "who whispered quietly",
        "final filler sentence ends it",
    ]
    assert len(sentences) == 20
    text = ". ".join(sentences)

    # token offsets of each sentence, for the hand-traced expectations
    offsets = []
    position = 0
    for s in sentences:
        offsets.append(position)
        position += len(s.split())

    matches, consumed = mesh.scan_terms(text, index)

    # hand trace: 4-grams first (D1 in sentence 0 at word 1), then 2-grams
    # (D3 first free in sentence 2 at word 1), then 1-grams left to right
    # (D2 in sentence 1 word 1, D4 in sentence 3 word 0, D5 in sentence 5
    # word 1); every later occurrence is masked but emits nothing.
    expected = [
        ("D1", offsets[0] + 1, 4),
        ("D3", offsets[2] + 1, 2),
        ("D2", offsets[1] + 1, 1),
        ("D4", offsets[3] + 0, 1),
        ("D5", offsets[5] + 1, 1),
    ]
    assert [(m.descriptor_id, m.start, m.n_tokens) for m in matches] == expected

    headings = mesh.extract_terms(text, index).headings
    assert headings == ["Alpha Beta Gamma Delta", "Beta", "Epsilon",
                        "Gamma Delta", "WHO"]

    # instrumented: no token position consumed twice
    assert len(consumed) == len(set(consumed))
    # the lowercase "who" sentences never burn a position on D4
    who_positions = {offsets[4] + 1, offsets[18] + 0}
    assert not (who_positions & set(consumed))


# -- criterion 9: resolver determinism -------------------------------------------

def test_criterion_09_resolver_determinism(demo_corpus, tmp_path):
    """With the mock metadata service and an empty cache, two runs produce
    identical DOI assignments; with a warm cache, zero service calls."""
    corpus_dir = demo_corpus["dir"]
    fams = load_pairs_file(Path(demo_corpus["config"].stage_dir) / "families.jsonl")
    ref_strings = {f["family_id"]: f["reference_strings"] for f in fams}

    def run(cache_path):
        client = MockMetadataClient(corpus_dir / "works.jsonl")
        cache = ResolutionCache(cache_path)
        resolved = {fid: resolve_family_references(refs, client, cache)
                    for fid, refs in sorted(ref_strings.items())}
        return resolved, client.calls

    first, calls_first = run(tmp_path / "cache_a.jsonl")
    second, calls_second = run(tmp_path / "cache_b.jsonl")
    assert first == second
    assert calls_first == calls_second > 0

    warm, calls_warm = run(tmp_path / "cache_a.jsonl")   # reuse the first cache
    assert warm == first
    assert calls_warm == 0


# -- criterion 10: evaluation-report monotonicity ---------------------------------

def test_criterion_10_report_monotonicity(demo_corpus, tmp_path):
    """Auto-submitting ground-truth verdicts for every final pair must show
    invalid fraction falling with the number of common names: fraction at
    k=1 above k=2, and zero at k>=4."""
    truth = demo_corpus["truth"]
    planted = {(p["family_id"], p["pub_id"]) for p in truth["planted"]}
    stage_dir = Path(demo_corpus["config"].stage_dir)
    final_raw = load_pairs_file(stage_dir / "pairs_final.jsonl")
    final = [CandidatePair.from_json_dict(p) for p in final_raw]

    store = review.VerdictStore(tmp_path / "verdicts.jsonl")
    for pair in final:
        classification = ("valid_pair" if (pair.family_id, pair.pub_id) in planted
                          else "no_valid_pair")
        store.submit(review.Verdict(review.pair_id_of(pair.family_id, pair.pub_id),
                                    classification, "oracle"))
    rows = review.evaluation_report(store.latest(), final)
    by_k = {row["n_common_names"]: row for row in rows}

    assert 1 in by_k and 2 in by_k, "strata at k=1 and k=2 must exist"
    assert by_k[1]["invalid_fraction"] > by_k[2]["invalid_fraction"]
    high = [row for k, row in by_k.items() if k >= 4]
    assert high, "no reviewed pairs at k>=4"
    for row in high:
        assert row["invalid_fraction"] == 0.0
    for row in rows:
        total = (row["valid_fraction"] + row["invalid_fraction"]
                 + row["not_determinable_fraction"])
        assert total == pytest.approx(1.0, abs=1e-9)
