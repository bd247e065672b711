"""File-to-file pipeline stages.

Every stage reads its predecessor's artifacts from the stage directory and
writes its own, so any stage can be re-run in isolation and a re-run with
unchanged inputs is byte-identical (all JSON is dumped with sorted keys,
all collections in deterministic order, and the only non-deterministic
step, live DOI resolution, is isolated behind the append-only cache).
"""

from __future__ import annotations

import csv
import json
import logging
import shutil
from pathlib import Path

from . import corpus, embedding, ipc, mesh, ranking, references
from .config import RunConfig
from .errors import EmptyDistributionError, NoDescriptionTextError, ThresholdUnavailableError
from .families import PatentFamily, group_into_families
from .pairing import CandidatePair, block_join, date_filter

log = logging.getLogger(__name__)


def _require(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(str(path))
    return path


def _write_jsonl(objs, path: Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            payload = obj.to_json_dict() if hasattr(obj, "to_json_dict") else obj
            fh.write(json.dumps(payload, ensure_ascii=False, sort_keys=True) + "\n")
            n += 1
    return n


def _read_jsonl(path: Path, from_dict):
    out = []
    with open(_require(path), encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(from_dict(json.loads(line)))
    return out


def _load_families(cfg: RunConfig) -> list[PatentFamily]:
    return _read_jsonl(cfg.stage_path("families.jsonl"), PatentFamily.from_json_dict)


def _load_publications(cfg: RunConfig):
    return _read_jsonl(cfg.stage_path("publications.jsonl"),
                       corpus.PublicationRecord.from_json_dict)


def _load_pairs(cfg: RunConfig, name: str) -> list[CandidatePair]:
    return _read_jsonl(cfg.stage_path(name), CandidatePair.from_json_dict)


def make_provider(cfg: RunConfig) -> embedding.EmbeddingProvider:
    if cfg.embedding_provider == "file":
        return embedding.TokenVectorFileProvider(_require(Path(cfg.token_vectors_path)))
    return embedding.HashedRandomProvider(dimension=cfg.embedding_dim, seed=cfg.seed)


def make_resolver_client(cfg: RunConfig) -> references.MetadataClient:
    if cfg.resolver_mode == "live":
        return references.LiveMetadataClient(cfg.resolver_base_url,
                                             delay_s=cfg.resolver_delay_s)
    return references.MockMetadataClient(_require(Path(cfg.resolver_fixture_path)))


# -- stages -----------------------------------------------------------------

def stage_ingest(cfg: RunConfig) -> dict:
    """Validate the raw corpora and write canonical copies into the stage dir."""
    stage = Path(cfg.stage_dir)
    stage.mkdir(parents=True, exist_ok=True)
    patents = corpus.load_patents(_require(Path(cfg.patents_path)))
    publications = corpus.load_publications(_require(Path(cfg.publications_path)))
    thesaurus = corpus.load_mesh_thesaurus(_require(Path(cfg.mesh_path)))
    for issue in patents.issues + publications.issues:
        log.warning("ingest: line %d: %s", issue.line_no, issue.message)
    corpus.dump_jsonl(patents.records, stage / "patents.jsonl")
    corpus.dump_jsonl(publications.records, stage / "publications.jsonl")
    shutil.copyfile(cfg.mesh_path, stage / "mesh.tsv")
    summary = {
        "patents": len(patents.records),
        "patent_issues": len(patents.issues),
        "publications": len(publications.records),
        "publication_issues": len(publications.issues),
        "thesaurus_entries": len(thesaurus),
    }
    with open(stage / "ingest_report.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    return summary


def stage_families(cfg: RunConfig) -> dict:
    docs = _read_jsonl(cfg.stage_path("patents.jsonl"), corpus.PatentDocument.from_json_dict)
    fams = group_into_families(docs)
    n = _write_jsonl(fams, cfg.stage_path("families.jsonl"))
    return {"documents": len(docs), "families": n}


def stage_pairs(cfg: RunConfig) -> dict:
    fams = _load_families(cfg)
    pubs = _load_publications(cfg)
    raw = block_join(fams, pubs)
    kept = date_filter(raw, cfg.min_delta_years, cfg.max_delta_years)
    n = _write_jsonl(kept, cfg.stage_path("pairs_raw.jsonl"))
    return {"joined": len(raw), "after_date_filter": n}


def stage_mesh_extract(cfg: RunConfig) -> dict:
    fams = _load_families(cfg)
    thesaurus = corpus.load_mesh_thesaurus(cfg.stage_path("mesh.tsv"))
    indexes = {lang: mesh.build_term_index(thesaurus, lang)
               for lang in mesh.LANGUAGE_PRIORITY}
    extracted = []
    skipped = 0
    for fam in fams:
        try:
            extracted.append(mesh.extract_family_terms(fam, indexes))
        except NoDescriptionTextError:
            skipped += 1
    n = _write_jsonl(extracted, cfg.stage_path("patent_terms.jsonl"))
    if skipped:
        log.info("mesh-extract: %d families had no description text", skipped)
    return {"extracted": n, "no_text": skipped}


def stage_embed(cfg: RunConfig) -> dict:
    pairs = _load_pairs(cfg, "pairs_raw.jsonl")
    pubs = {p.pub_id: p for p in _load_publications(cfg)}
    terms = {t.doc_id: t for t in _read_jsonl(cfg.stage_path("patent_terms.jsonl"),
                                              mesh.ExtractedTerms.from_json_dict)}
    provider = make_provider(cfg)
    fam_vectors: dict[str, embedding.DocumentVector] = {}
    pub_vectors: dict[str, embedding.DocumentVector] = {}
    with_cosine = 0
    for pair in pairs:
        if pair.family_id not in fam_vectors:
            headings = terms[pair.family_id].headings if pair.family_id in terms else []
            fam_vectors[pair.family_id] = embedding.embed_document(
                headings, provider, pair.family_id)
        if pair.pub_id not in pub_vectors:
            pub_vectors[pair.pub_id] = embedding.embed_document(
                pubs[pair.pub_id].mesh_headings, provider, pair.pub_id)
        pair.cosine = embedding.cosine_similarity(
            fam_vectors[pair.family_id], pub_vectors[pair.pub_id])
        if pair.cosine is not None:
            with_cosine += 1
    n = _write_jsonl(pairs, cfg.stage_path("pairs_cosine.jsonl"))
    return {"pairs": n, "with_cosine": with_cosine}


def stage_refs(cfg: RunConfig) -> dict:
    pairs = _load_pairs(cfg, "pairs_cosine.jsonl")
    fams = _load_families(cfg)
    pubs = {p.pub_id: p for p in _load_publications(cfg)}
    client = make_resolver_client(cfg)
    cache = references.ResolutionCache(cfg.cache_path)
    family_dois: dict[str, list[str]] = {}
    for fam in fams:
        family_dois[fam.family_id] = references.resolve_family_references(
            fam.reference_strings, client, cache)
    for pair in pairs:
        pair.n_common_refs = references.count_common_references(
            family_dois[pair.family_id], pubs[pair.pub_id].reference_dois)
    _write_jsonl(
        ({"family_id": fid, "dois": dois} for fid, dois in sorted(family_dois.items())),
        cfg.stage_path("family_dois.jsonl"))
    n = _write_jsonl(pairs, cfg.stage_path("pairs_refs.jsonl"))
    resolved = sum(1 for dois in family_dois.values() if dois)
    return {"pairs": n, "families_with_dois": resolved, "service_calls": client.calls}


def stage_ipc_filter(cfg: RunConfig) -> dict:
    pairs = _load_pairs(cfg, "pairs_refs.jsonl")
    fams = _load_families(cfg)
    by_id = {f.family_id: f for f in fams}
    for fam in fams:
        fam.academic = ipc.detect_academic(fam)
    for pair in pairs:
        pair.academic = by_id[pair.family_id].academic

    sure = ipc.select_sure_pairs(pairs, cfg.sure_min_names, cfg.sure_min_refs,
                                 cfg.sure_min_cosine)
    academic_pairs = [p for p in pairs if p.academic]
    subsets = [("baseline", fams), ("raw_pairs", ipc.families_of_pairs(pairs, by_id)),
               ("academic_pairs", ipc.families_of_pairs(academic_pairs, by_id)),
               ("sure_pairs", ipc.families_of_pairs(sure, by_id))]
    distributions = []
    for label, members in subsets:
        try:
            distributions.append(ipc.subset_distribution(members, label))
        except EmptyDistributionError:
            log.warning("ipc-filter: subset %r is empty, skipping its distribution", label)
    with open(cfg.stage_path("qq_data.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subset", "ipc", "share", "normal_quantile"])
        for row in ipc.qq_plot_data(distributions):
            writer.writerow([row[0], row[1], f"{row[2]:.9f}", f"{row[3]:.9f}"])

    by_label = {d.label: d for d in distributions}
    if "sure_pairs" in by_label:
        allowed = ipc.allowed_classes(by_label["sure_pairs"], by_label["baseline"],
                                      cfg.ipc_share_threshold,
                                      cfg.ipc_require_positive_deviation)
    else:
        log.warning("ipc-filter: no sure pairs, class filter passes everything through")
        allowed = set()
    with open(cfg.stage_path("allowed_classes.txt"), "w", encoding="utf-8") as fh:
        for code in sorted(allowed):
            fh.write(code + "\n")
    kept = ipc.filter_pairs_by_ipc(pairs, allowed, by_id)
    n = _write_jsonl(kept, cfg.stage_path("pairs_ipc.jsonl"))
    return {"pairs_in": len(pairs), "pairs_out": n, "allowed_classes": sorted(allowed),
            "sure_pairs": len(sure)}


def _threshold_with_fallback(compute, pairs, cfg: RunConfig, label: str) -> float:
    try:
        return compute(pairs, whisker_pct=cfg.whisker_pct,
                       min_group_size=cfg.min_group_size, mode=cfg.threshold_mode)
    except ThresholdUnavailableError as exc:
        log.warning("rank: %s threshold unavailable (%s), falling back to %.2f",
                    label, exc, cfg.fallback_threshold)
        return cfg.fallback_threshold


def _write_group_stats(pairs: list[CandidatePair], cfg: RunConfig) -> None:
    """Box statistics of the cosine distribution per common-name and per
    common-reference group: the data behind the threshold derivation."""
    groupings = {
        "common_names": lambda p: p.n_common_names,
        "common_refs": lambda p: p.n_common_refs,
    }
    with open(cfg.stage_path("group_stats.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["grouping", "key", "count", "whisker_low", "q25", "median",
                         "q75", "whisker_high"])
        for name, key_fn in groupings.items():
            groups: dict[int, list[float]] = {}
            for p in pairs:
                key = key_fn(p)
                if p.cosine is not None and key is not None:
                    groups.setdefault(key, []).append(p.cosine)
            for key in sorted(groups):
                values = groups[key]
                row = [name, key, len(values)]
                for pct in (cfg.whisker_pct, 25.0, 50.0, 75.0, cfg.upper_whisker_pct):
                    row.append(f"{embedding.group_percentile(values, pct):.6f}")
                writer.writerow(row)


def stage_rank(cfg: RunConfig) -> dict:
    raw_pairs = _load_pairs(cfg, "pairs_refs.jsonl")
    pairs = _load_pairs(cfg, "pairs_ipc.jsonl")
    t_names = _threshold_with_fallback(embedding.compute_threshold_names,
                                       raw_pairs, cfg, "common-name")
    t_refs = _threshold_with_fallback(embedding.compute_threshold_refs,
                                      raw_pairs, cfg, "common-reference")
    thresholds = embedding.ThresholdSet.combine(t_names, t_refs)
    with open(cfg.stage_path("thresholds.json"), "w", encoding="utf-8") as fh:
        json.dump(thresholds.to_json_dict(), fh, indent=2, sort_keys=True)

    _write_group_stats(raw_pairs, cfg)

    final = ranking.apply_validity_rules(
        pairs, thresholds, boost=cfg.academic_boost, min_names=cfg.min_valid_names,
        min_refs=cfg.min_valid_refs, best_k=cfg.best_k, best_k_scope=cfg.best_k_scope)
    n = _write_jsonl(final, cfg.stage_path("pairs_final.jsonl"))

    with open(cfg.stage_path("histograms.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stage", "side", "N", "count"])
        for stage_name, stage_pairs in (("raw", raw_pairs), ("ipc", pairs), ("final", final)):
            per_family, per_pub = ranking.relationship_histogram(stage_pairs)
            for n_value, count in sorted(per_family.items()):
                writer.writerow([stage_name, "publications_per_patent", n_value, count])
            for n_value, count in sorted(per_pub.items()):
                writer.writerow([stage_name, "patents_per_publication", n_value, count])
    return {"final_pairs": n, "thresholds": thresholds.to_json_dict()}


def stage_report(cfg: RunConfig) -> dict:
    from .review import VerdictStore, evaluation_report

    pairs = _load_pairs(cfg, "pairs_final.jsonl")
    store = VerdictStore(cfg.verdict_journal_path)
    rows = evaluation_report(store.latest(), pairs)
    with open(cfg.stage_path("report.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_common_names", "reviewed", "valid_fraction",
                         "invalid_fraction", "not_determinable_fraction"])
        for row in rows:
            writer.writerow([row["n_common_names"], row["reviewed"],
                             f"{row['valid_fraction']:.6f}",
                             f"{row['invalid_fraction']:.6f}",
                             f"{row['not_determinable_fraction']:.6f}"])
    with open(cfg.stage_path("report.json"), "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2, sort_keys=True)
    return {"strata": len(rows), "verdicts": len(store.latest())}


STAGES = {
    "ingest": stage_ingest,
    "families": stage_families,
    "pairs": stage_pairs,
    "mesh-extract": stage_mesh_extract,
    "embed": stage_embed,
    "refs": stage_refs,
    "ipc-filter": stage_ipc_filter,
    "rank": stage_rank,
    "report": stage_report,
}

RUN_ALL_ORDER = ["ingest", "families", "pairs", "mesh-extract", "embed", "refs",
                 "ipc-filter", "rank"]


def run_all(cfg: RunConfig) -> dict:
    summary = {}
    for name in RUN_ALL_ORDER:
        log.info("stage %s ...", name)
        summary[name] = STAGES[name](cfg)
        log.info("stage %s: %s", name, summary[name])
    return summary
