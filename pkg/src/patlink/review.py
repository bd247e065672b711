"""Review service: stratified samples of final pairs for human validation,
a three-way verdict store, and the per-stratum evaluation report.

Verdicts land in an append-only JSONL journal with last-write-wins
semantics per (pair, reviewer), so the history stays auditable without any
database. The JSON API serves the frontend bundle from the same process.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import RunConfig
from .corpus import PublicationRecord
from .families import PatentFamily
from .pairing import CandidatePair
from .references import normalize_doi

CLASSIFICATIONS = ("valid_pair", "no_valid_pair", "not_determinable")


def pair_id_of(family_id: str, pub_id: str) -> str:
    """Stable pair identifier: hash of the two document ids."""
    return hashlib.sha1(f"{family_id}|{pub_id}".encode("utf-8")).hexdigest()[:16]


@dataclass
class Verdict:
    pair_id: str
    classification: str
    reviewer_id: str
    timestamp: str = ""

    def to_json_dict(self) -> dict:
        return {"pair_id": self.pair_id, "classification": self.classification,
                "reviewer_id": self.reviewer_id, "timestamp": self.timestamp}


class VerdictStore:
    """Append-only journal; materializes to the latest verdict per
    (pair_id, reviewer_id)."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._latest: dict[tuple[str, str], Verdict] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        obj = json.loads(line)
                        v = Verdict(obj["pair_id"], obj["classification"],
                                    obj["reviewer_id"], obj.get("timestamp", ""))
                        self._latest[(v.pair_id, v.reviewer_id)] = v

    def submit(self, verdict: Verdict) -> Verdict:
        if verdict.classification not in CLASSIFICATIONS:
            raise ValueError(f"unknown classification {verdict.classification!r}")
        if not verdict.timestamp:
            verdict.timestamp = dt.datetime.now(dt.timezone.utc).isoformat()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(verdict.to_json_dict(), ensure_ascii=False) + "\n")
        self._latest[(verdict.pair_id, verdict.reviewer_id)] = verdict
        return verdict

    def latest(self) -> list[Verdict]:
        return [self._latest[k] for k in sorted(self._latest)]


@dataclass
class ReviewItem:
    pair_id: str
    family_id: str
    pub_id: str
    publication: dict
    patent: dict
    features: dict
    common_names: list[str] = field(default_factory=list)
    common_dois: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "pair_id": self.pair_id, "family_id": self.family_id, "pub_id": self.pub_id,
            "publication": self.publication, "patent": self.patent,
            "features": self.features, "common_names": self.common_names,
            "common_dois": self.common_dois,
        }


def build_review_item(pair: CandidatePair, family: PatentFamily,
                      publication: PublicationRecord,
                      family_dois: list[str]) -> ReviewItem:
    first_line = ""
    for lang in ("en", "de", "fr"):
        texts = family.description_texts.get(lang)
        if texts:
            first_line = texts[0].split(".")[0].strip()
            break
    pub_dois = {normalize_doi(d) for d in publication.reference_dois}
    common_dois = sorted({normalize_doi(d) for d in family_dois} & pub_dois)
    return ReviewItem(
        pair_id=pair_id_of(pair.family_id, pair.pub_id),
        family_id=pair.family_id,
        pub_id=pair.pub_id,
        publication={
            "title": publication.title,
            "authors": [f"{a.get('fore', '')} {a['last']}".strip()
                        for a in publication.authors],
            "date": publication.publication_date.isoformat(),
            "doi": publication.doi,
            "mesh_headings": publication.mesh_headings,
        },
        patent={
            "family_id": family.family_id,
            "title": first_line,
            "inventors": family.raw_inventor_names,
            "applicants": family.applicants,
            "ipc_codes": family.ipc_codes,
            "filing_date": family.filing_date.isoformat(),
        },
        features={
            "n_common_names": pair.n_common_names,
            "n_common_refs": pair.n_common_refs,
            "cosine": pair.cosine,
            "academic": pair.academic,
        },
        common_names=pair.common_names,
        common_dois=common_dois,
    )


def stratified_sample(pairs: list[CandidatePair], per_stratum: int,
                      seed: int) -> list[CandidatePair]:
    """Up to per_stratum pairs per common-name count, sampled uniformly
    without replacement; deterministic for a given seed."""
    strata: dict[int, list[CandidatePair]] = {}
    for p in pairs:
        strata.setdefault(p.n_common_names, []).append(p)
    rng = random.Random(seed)
    sampled: list[CandidatePair] = []
    for k in sorted(strata):
        members = sorted(strata[k], key=lambda p: (p.family_id, p.pub_id))
        take = min(per_stratum, len(members))
        sampled.extend(rng.sample(members, take))
    return sampled


def evaluation_report(verdicts: list[Verdict], pairs: list[CandidatePair]) -> list[dict]:
    """Per common-name stratum: fractions of the three classifications
    among reviewed pairs. Strata without verdicts are omitted."""
    names_by_pair_id = {pair_id_of(p.family_id, p.pub_id): p.n_common_names for p in pairs}
    counts: dict[int, dict[str, int]] = {}
    for v in verdicts:
        k = names_by_pair_id.get(v.pair_id)
        if k is None:
            continue
        bucket = counts.setdefault(k, {c: 0 for c in CLASSIFICATIONS})
        bucket[v.classification] += 1
    rows = []
    for k in sorted(counts):
        bucket = counts[k]
        total = sum(bucket.values())
        rows.append({
            "n_common_names": k,
            "reviewed": total,
            "valid_fraction": bucket["valid_pair"] / total,
            "invalid_fraction": bucket["no_valid_pair"] / total,
            "not_determinable_fraction": bucket["not_determinable"] / total,
        })
    return rows


def report_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n_common_names", "reviewed", "valid_fraction",
                     "invalid_fraction", "not_determinable_fraction"])
    for row in rows:
        writer.writerow([row["n_common_names"], row["reviewed"],
                         f"{row['valid_fraction']:.6f}",
                         f"{row['invalid_fraction']:.6f}",
                         f"{row['not_determinable_fraction']:.6f}"])
    return buf.getvalue()


class VerdictBody(BaseModel):
    classification: str
    reviewer_id: str


def create_app(cfg: RunConfig) -> FastAPI:
    """Assemble the review service over the final-pairs stage artifacts."""
    from .pipeline import _load_families, _load_pairs, _load_publications

    pairs = _load_pairs(cfg, "pairs_final.jsonl")
    families = {f.family_id: f for f in _load_families(cfg)}
    publications = {p.pub_id: p for p in _load_publications(cfg)}
    dois_path = cfg.stage_path("family_dois.jsonl")
    family_dois: dict[str, list[str]] = {}
    if dois_path.exists():
        with open(dois_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    obj = json.loads(line)
                    family_dois[obj["family_id"]] = obj["dois"]

    items = {
        pair_id_of(p.family_id, p.pub_id): build_review_item(
            p, families[p.family_id], publications[p.pub_id],
            family_dois.get(p.family_id, []))
        for p in pairs
    }
    store = VerdictStore(cfg.verdict_journal_path)
    app = FastAPI(title="patlink review service")

    @app.get("/api/sample")
    def get_sample(per_stratum: int = Query(..., gt=0), seed: int = Query(0)):
        sampled = stratified_sample(pairs, per_stratum, seed)
        return [items[pair_id_of(p.family_id, p.pub_id)].to_json_dict() for p in sampled]

    @app.get("/api/pair/{pair_id}")
    def get_pair(pair_id: str):
        if pair_id not in items:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id}")
        return items[pair_id].to_json_dict()

    @app.post("/api/pair/{pair_id}/verdict")
    def post_verdict(pair_id: str, body: VerdictBody):
        if pair_id not in items:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id}")
        if body.classification not in CLASSIFICATIONS:
            raise HTTPException(
                status_code=400,
                detail=f"classification must be one of {', '.join(CLASSIFICATIONS)}")
        verdict = store.submit(Verdict(pair_id=pair_id, classification=body.classification,
                                       reviewer_id=body.reviewer_id))
        return verdict.to_json_dict()

    @app.get("/api/report")
    def get_report(request: Request):
        rows = evaluation_report(store.latest(), pairs)
        if "text/csv" in request.headers.get("accept", ""):
            return PlainTextResponse(report_csv(rows), media_type="text/csv")
        return JSONResponse(rows)

    static_dir = cfg.frontend_dist
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="frontend")
    return app
