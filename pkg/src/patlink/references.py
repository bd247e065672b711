"""Free-text patent citations to DOIs, and common-reference counting.

Patents cite literature in no standard style, so parsing is heuristic and
resolution goes through an external bibliographic-metadata service: the top
three service results are re-ranked by exact field matches and the winner
is accepted only when its normalized title matches exactly. Resolution is
the pipeline's one slow, non-deterministic step, so every raw citation
string is cached in an append-only journal; CI uses the deterministic local
mock client.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError

log = logging.getLogger(__name__)

_YEAR_RE = re.compile(r"(?<!\d)(19\d{2}|20[0-2]\d|2030)(?!\d)")
_QUOTED_RE = re.compile(r"[\"\u201c\u201d']([^\"\u201c\u201d']{10,})[\"\u201c\u201d']")
_INITIALS_RE = re.compile(r"^(?:[A-Z]\.?){1,3}$")


def normalize_doi(doi: str) -> str:
    doi = doi.strip().lower()
    for prefix in ("https://doi.org/", "http://doi.org/", "doi.org/", "doi:"):
        if doi.startswith(prefix):
            doi = doi[len(prefix):]
    return doi


def normalize_title(title: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace; the 'exact match'
    criterion for titles compares these normal forms."""
    cleaned = re.sub(r"[^\w\s]", " ", title.lower())
    return re.sub(r"\s+", " ", cleaned).strip()


@dataclass
class ParsedCitation:
    raw: str
    title_guess: str | None = None
    author_lastnames: list[str] = field(default_factory=list)
    journal_guess: str | None = None
    year_guess: int | None = None


def _looks_like_author_chunk(chunk: str) -> bool:
    tokens = chunk.strip().split()
    if not 1 <= len(tokens) <= 4:
        return False
    has_name = any(t[0].isupper() and t.strip(".,").isalpha() and len(t.strip(".,")) >= 2
                   for t in tokens)
    has_initial = any(_INITIALS_RE.match(t.strip(",")) for t in tokens)
    return has_name and (has_initial or len(tokens) <= 2)


def _chunk_lastname(chunk: str) -> str | None:
    candidates = [t.strip(".,") for t in chunk.split()
                  if t.strip(".,").isalpha() and not _INITIALS_RE.match(t.strip(","))]
    longest = max(candidates, key=len, default=None)
    return longest.lower() if longest and len(longest) >= 2 else None


def _is_title_like(segment: str) -> bool:
    words = [w for w in segment.split() if w.isalpha() and len(w) >= 3]
    return len(words) >= 2


def parse_citation(raw: str) -> ParsedCitation:
    """Heuristic decomposition of one free-text citation string.

    Any field may come out absent; an all-absent parse is legitimate (the
    string may be a patent number) and simply will not resolve.
    """
    if not raw.strip():
        raise ValidationError("empty citation string")
    parsed = ParsedCitation(raw=raw)

    years = _YEAR_RE.findall(raw)
    if years:
        parsed.year_guess = int(years[-1])

    segments = [s.strip() for s in re.split(r"\.\s+|\.$|;\s+", raw.strip()) if s.strip()]

    if segments and "," in segments[0]:
        chunks = [c for c in segments[0].split(",") if c.strip()]
        if chunks and all(_looks_like_author_chunk(c) for c in chunks):
            lastnames = [n for n in (_chunk_lastname(c) for c in chunks) if n]
            if lastnames:
                parsed.author_lastnames = lastnames
                segments = segments[1:]
    elif segments and _looks_like_author_chunk(segments[0]):
        name = _chunk_lastname(segments[0])
        if name:
            parsed.author_lastnames = [name]
            segments = segments[1:]

    quoted = _QUOTED_RE.search(raw)
    body = [s for s in segments if not re.fullmatch(r"[\d\s:\-,()]+", s)]
    if quoted:
        parsed.title_guess = quoted.group(1).strip()
    else:
        title_candidates = [s for s in body if _is_title_like(s)]
        if title_candidates:
            parsed.title_guess = max(title_candidates, key=len)

    if parsed.title_guess and parsed.title_guess in body:
        idx = body.index(parsed.title_guess)
        trailing = [s for s in body[idx + 1:] if s != parsed.title_guess]
        if trailing:
            journal = re.sub(r"\b\d+\s*\(?\d*\)?\s*:?\s*[\d\-]*$", "", trailing[0]).strip(" ,")
            if journal:
                parsed.journal_guess = journal
    return parsed


@dataclass
class DoiCandidate:
    doi: str
    title: str
    authors: list[str]
    year: int | None
    service_rank: int
    rerank_score: float = 0.0


class MetadataClient:
    """Search interface of the external bibliographic-metadata service."""

    calls: int = 0

    def search(self, title: str | None, authors: list[str], journal: str | None,
               year: int | None, rows: int = 3) -> list[DoiCandidate]:
        raise NotImplementedError


class MockMetadataClient(MetadataClient):
    """Deterministic local stand-in for the metadata service.

    Reads a JSONL fixture of bibliographic records and ranks them by simple
    token overlap with the query, so tests never need the network.
    """

    def __init__(self, fixture_path: str | Path):
        self.calls = 0
        self.records: list[dict] = []
        with open(fixture_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self.records.append(json.loads(line))

    def search(self, title, authors, journal, year, rows: int = 3) -> list[DoiCandidate]:
        self.calls += 1
        query_tokens = set(normalize_title(title or "").split())
        author_set = {a.lower() for a in authors}
        scored = []
        for rec in self.records:
            rec_tokens = set(normalize_title(rec.get("title", "")).split())
            overlap = len(query_tokens & rec_tokens) / max(len(query_tokens | rec_tokens), 1)
            score = 2.0 * overlap
            rec_authors = {str(a).lower() for a in rec.get("authors", [])}
            if author_set and rec_authors & author_set:
                score += 0.5
            if year is not None and rec.get("year") == year:
                score += 0.25
            if journal and normalize_title(journal) == normalize_title(rec.get("container", "")):
                score += 0.25
            if score > 0:
                scored.append((score, rec))
        scored.sort(key=lambda pair: (-pair[0], pair[1]["doi"]))
        return [
            DoiCandidate(
                doi=rec["doi"], title=rec.get("title", ""),
                authors=[str(a) for a in rec.get("authors", [])],
                year=rec.get("year"), service_rank=rank,
            )
            for rank, (_, rec) in enumerate(scored[:rows], start=1)
        ]


class LiveMetadataClient(MetadataClient):
    """HTTP client for a works-search endpoint, with politeness delay and
    bounded retries. Query parameters follow the common works API shape."""

    def __init__(self, base_url: str, delay_s: float = 1.0, max_retries: int = 3,
                 timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.delay_s = max(delay_s, 1.0)   # never hammer the public service
        self.max_retries = max_retries
        self.timeout = timeout
        self.calls = 0
        self._last_call = 0.0

    def _wait_politely(self) -> None:
        elapsed = time.monotonic() - self._last_call
        if elapsed < self.delay_s:
            time.sleep(self.delay_s - elapsed)
        self._last_call = time.monotonic()

    def search(self, title, authors, journal, year, rows: int = 3) -> list[DoiCandidate]:
        import requests

        params: dict[str, str] = {"rows": str(rows)}
        if title:
            params["query.title"] = title
        if authors:
            params["query.author"] = " ".join(authors)
        if journal:
            params["query.container-title"] = journal
        if year is not None:
            params["filter"] = f"from-pub-date:{year},until-pub-date:{year}"

        for attempt in range(1, self.max_retries + 1):
            self._wait_politely()
            self.calls += 1
            try:
                resp = requests.get(self.base_url, params=params, timeout=self.timeout)
                resp.raise_for_status()
                payload = resp.json()
                break
            except (requests.RequestException, ValueError) as exc:
                log.warning("metadata service attempt %d/%d failed: %s",
                            attempt, self.max_retries, exc)
                if attempt == self.max_retries:
                    return []
        candidates = []
        try:
            items = payload.get("message", {}).get("items", [])
            for rank, item in enumerate(items[:rows], start=1):
                issued = item.get("issued", {}).get("date-parts", [[None]])
                candidates.append(
                    DoiCandidate(
                        doi=item.get("DOI", ""),
                        title=(item.get("title") or [""])[0],
                        authors=[a.get("family", "") for a in item.get("author", [])],
                        year=issued[0][0] if issued and issued[0] else None,
                        service_rank=rank,
                    )
                )
        except (AttributeError, TypeError, IndexError) as exc:
            log.warning("malformed metadata response: %s", exc)
            return []
        return [c for c in candidates if c.doi]


def resolve_doi(citation: ParsedCitation, client: MetadataClient,
                title_weight: float = 3.0, author_weight: float = 1.0,
                year_weight: float = 1.0) -> str | None:
    """Resolve one parsed citation to a DOI, or None.

    The top three service results are re-ranked by 3x normalized-title
    exact match + 1x author-overlap (at least half the parsed last names)
    + 1x exact year; the best is accepted only when its title component
    holds, everything else is rejected.
    """
    if not citation.title_guess and not (citation.author_lastnames and citation.year_guess):
        return None
    results = client.search(citation.title_guess, citation.author_lastnames,
                            citation.journal_guess, citation.year_guess, rows=3)
    if not results:
        return None
    wanted_title = normalize_title(citation.title_guess or "")
    wanted_authors = set(citation.author_lastnames)
    best: DoiCandidate | None = None
    for cand in results:
        title_match = bool(wanted_title) and normalize_title(cand.title) == wanted_title
        cand_authors = {a.lower() for a in cand.authors}
        author_match = bool(wanted_authors) and \
            len(wanted_authors & cand_authors) * 2 >= len(wanted_authors)
        year_match = citation.year_guess is not None and cand.year == citation.year_guess
        cand.rerank_score = (title_weight * title_match + author_weight * author_match
                             + year_weight * year_match)
        if best is None or (cand.rerank_score, -cand.service_rank) > \
                (best.rerank_score, -best.service_rank):
            best = cand
    if best is not None and best.rerank_score >= title_weight and \
            normalize_title(best.title) == wanted_title:
        return best.doi
    return None


class ResolutionCache:
    """Append-only JSONL journal of citation-string -> DOI resolutions.

    Negative results (no DOI found) are cached too, so a warm cache makes
    zero service calls. Last write wins on replay.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, str | None] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        obj = json.loads(line)
                        self._entries[obj["raw"]] = obj.get("doi")

    def __contains__(self, raw: str) -> bool:
        return raw in self._entries

    def get(self, raw: str) -> str | None:
        return self._entries.get(raw)

    def put(self, raw: str, doi: str | None) -> None:
        self._entries[raw] = doi
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({
                "raw": raw, "doi": doi,
                "resolved_at": dt.datetime.now(dt.timezone.utc).isoformat(),
            }, ensure_ascii=False))
            fh.write("\n")


def resolve_family_references(reference_strings: list[str], client: MetadataClient,
                              cache: ResolutionCache | None = None) -> list[str]:
    """Resolve every citation string of one family; returns sorted unique
    normalized DOIs. The cache short-circuits both hits and known misses."""
    dois: set[str] = set()
    for raw in reference_strings:
        if cache is not None and raw in cache:
            doi = cache.get(raw)
        else:
            try:
                citation = parse_citation(raw)
            except ValidationError:
                continue
            doi = resolve_doi(citation, client)
            if cache is not None:
                cache.put(raw, doi)
        if doi:
            dois.add(normalize_doi(doi))
    return sorted(dois)


def count_common_references(family_dois: list[str], publication_dois: list[str]) -> int:
    """Number of DOIs cited by both documents, after DOI normalization."""
    fam = {normalize_doi(d) for d in family_dois}
    pub = {normalize_doi(d) for d in publication_dois}
    return len(fam & pub)
