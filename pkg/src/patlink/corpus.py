"""Loading, validation and persistence of the canonical corpora.

Patents and publications travel as JSONL (one record per line), the
trilingual thesaurus as TSV. Loaders collect per-line problems instead of
aborting, so a single bad line never loses a corpus; duplicates are
rejected, not merged.
"""

from __future__ import annotations

import datetime as dt
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IntegrityError, ValidationError

PUBLICATION_NUMBER_RE = re.compile(r"^EP\d+[AB]\d$")
ALLOWED_LANGUAGES = ("en", "de", "fr")

_MONTH_NAMES = {
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
    "jul": 7, "aug": 8, "sep": 9, "oct": 10, "nov": 11, "dec": 12,
}


def parse_date(value: str) -> dt.date:
    """Parse an ISO calendar date, completing partial dates.

    Year-month dates are completed to day 15, year-only dates to July 1
    (midpoint convention, keeps the date-window filter unbiased).
    """
    value = value.strip()
    m = re.fullmatch(r"(\d{4})-(\d{2})-(\d{2})", value)
    if m:
        return dt.date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    m = re.fullmatch(r"(\d{4})-(\d{2})", value)
    if m:
        return dt.date(int(m.group(1)), int(m.group(2)), 15)
    m = re.fullmatch(r"(\d{4})", value)
    if m:
        return dt.date(int(m.group(1)), 7, 1)
    raise ValidationError(f"unparseable date: {value!r}")


@dataclass
class PatentDocument:
    publication_number: str
    filing_date: dt.date
    inventors: list[dict]          # {"name": str, "country": str|None}
    applicants: list[str]
    ipc_codes: list[str]
    description_texts: dict[str, str]   # language -> text
    reference_strings: list[str]

    def validate(self) -> None:
        if not PUBLICATION_NUMBER_RE.match(self.publication_number):
            raise ValidationError(
                f"publication_number {self.publication_number!r} does not match EP<digits><A|B><digit>"
            )
        for lang in self.description_texts:
            if lang not in ALLOWED_LANGUAGES:
                raise ValidationError(
                    f"{self.publication_number}: unknown description language {lang!r}"
                )
        for inv in self.inventors:
            if "name" not in inv or not str(inv["name"]).strip():
                raise ValidationError(f"{self.publication_number}: inventor without a name")

    def to_json_dict(self) -> dict:
        return {
            "publication_number": self.publication_number,
            "filing_date": self.filing_date.isoformat(),
            "inventors": [
                {"name": i["name"], "country": i.get("country")} for i in self.inventors
            ],
            "applicants": list(self.applicants),
            "ipc_codes": list(self.ipc_codes),
            "description_texts": dict(self.description_texts),
            "reference_strings": list(self.reference_strings),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PatentDocument":
        try:
            doc = cls(
                publication_number=str(obj["publication_number"]),
                filing_date=parse_date(str(obj["filing_date"])),
                inventors=[
                    {"name": str(i["name"]), "country": i.get("country")}
                    for i in obj.get("inventors", [])
                ],
                applicants=[str(a) for a in obj.get("applicants", [])],
                ipc_codes=[str(c) for c in obj.get("ipc_codes", [])],
                description_texts={
                    str(k): str(v) for k, v in obj.get("description_texts", {}).items()
                },
                reference_strings=[str(r) for r in obj.get("reference_strings", [])],
            )
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from exc
        doc.validate()
        return doc


@dataclass
class PublicationRecord:
    pub_id: str
    title: str
    publication_date: dt.date
    authors: list[dict]            # {"last", "fore", "affiliation", "email"}
    mesh_headings: list[str]
    doi: str | None = None
    reference_dois: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not self.pub_id:
            raise ValidationError("publication without pub_id")
        for h in self.mesh_headings:
            if not h.strip():
                raise ValidationError(f"{self.pub_id}: empty mesh heading")

    def to_json_dict(self) -> dict:
        return {
            "pub_id": self.pub_id,
            "title": self.title,
            "publication_date": self.publication_date.isoformat(),
            "authors": [
                {
                    "last": a["last"],
                    "fore": a.get("fore", ""),
                    "affiliation": a.get("affiliation"),
                    "email": a.get("email"),
                }
                for a in self.authors
            ],
            "mesh_headings": list(self.mesh_headings),
            "doi": self.doi,
            "reference_dois": list(self.reference_dois),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PublicationRecord":
        if "pub_id" not in obj or not str(obj["pub_id"]).strip():
            raise ValidationError("missing pub_id")
        if "publication_date" not in obj or obj["publication_date"] in (None, ""):
            raise ValidationError(f"{obj['pub_id']}: missing publication_date")
        headings: list[str] = []
        for h in obj.get("mesh_headings", []):
            h = str(h)
            if h not in headings:   # dedup on load, order kept
                headings.append(h)
        rec = cls(
            pub_id=str(obj["pub_id"]),
            title=str(obj.get("title", "")),
            publication_date=parse_date(str(obj["publication_date"])),
            authors=[
                {
                    "last": str(a.get("last", "")),
                    "fore": str(a.get("fore", "") or ""),
                    "affiliation": a.get("affiliation"),
                    "email": a.get("email"),
                }
                for a in obj.get("authors", [])
            ],
            mesh_headings=headings,
            doi=obj.get("doi"),
            reference_dois=[str(d) for d in obj.get("reference_dois", [])],
        )
        rec.validate()
        return rec


@dataclass
class LoadIssue:
    line_no: int
    message: str


@dataclass
class LoadResult:
    records: list
    issues: list[LoadIssue]

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def _load_jsonl(path: str | Path, from_dict, key) -> LoadResult:
    records, issues, seen = [], [], set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                issues.append(LoadIssue(line_no, f"malformed JSON: {exc.msg}"))
                continue
            try:
                rec = from_dict(obj)
            except ValidationError as exc:
                issues.append(LoadIssue(line_no, str(exc)))
                continue
            k = key(rec)
            if k in seen:
                issues.append(LoadIssue(line_no, f"duplicate key {k!r}, line rejected"))
                continue
            seen.add(k)
            records.append(rec)
    return LoadResult(records, issues)


def load_patents(path: str | Path) -> LoadResult:
    """Load PatentDocument JSONL; invalid lines and duplicate
    publication_numbers are reported in ``issues`` with their line number."""
    return _load_jsonl(path, PatentDocument.from_json_dict, lambda r: r.publication_number)


def load_publications(path: str | Path) -> LoadResult:
    """Load PublicationRecord JSONL; mesh headings are deduplicated per record."""
    return _load_jsonl(path, PublicationRecord.from_json_dict, lambda r: r.pub_id)


def dump_jsonl(records, path: str | Path) -> int:
    """Write records (anything with to_json_dict) as one JSON object per line."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            n += 1
    return n


# ---------------------------------------------------------------------------
# MeSH thesaurus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeshThesaurusEntry:
    descriptor_id: str
    language: str
    term: str
    is_main_heading: bool


class MeshThesaurus:
    """Trilingual thesaurus indexed by descriptor id and by language.

    Every descriptor must own exactly one English main heading; all other
    entries (synonyms and translations) map back to it.
    """

    def __init__(self, entries: list[MeshThesaurusEntry]):
        self.entries = entries
        self.by_descriptor: dict[str, list[MeshThesaurusEntry]] = {}
        self._english_heading: dict[str, str] = {}
        for e in entries:
            self.by_descriptor.setdefault(e.descriptor_id, []).append(e)
        for did, group in self.by_descriptor.items():
            mains = [e for e in group if e.language == "en" and e.is_main_heading]
            if len(mains) != 1:
                raise IntegrityError(
                    f"descriptor {did} has {len(mains)} English main headings, expected exactly 1"
                )
            self._english_heading[did] = mains[0].term

    def __len__(self):
        return len(self.entries)

    def descriptor_ids(self) -> list[str]:
        return sorted(self.by_descriptor)

    def english_heading(self, descriptor_id: str) -> str:
        try:
            return self._english_heading[descriptor_id]
        except KeyError:
            raise IntegrityError(f"unknown descriptor {descriptor_id!r}") from None

    def entries_for_language(self, language: str) -> list[MeshThesaurusEntry]:
        return [e for e in self.entries if e.language == language]

    def lookup(self, term: str, language: str) -> str | None:
        """Return the English main heading for a term of the given language."""
        folded = term.casefold()
        for e in self.entries:
            if e.language == language and e.term.casefold() == folded:
                return self._english_heading[e.descriptor_id]
        return None


def load_mesh_thesaurus(path: str | Path) -> MeshThesaurus:
    """Load the thesaurus TSV (descriptor_id, language, term, is_main_heading)."""
    entries: list[MeshThesaurusEntry] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if header and not header.startswith("descriptor_id"):
            raise ValidationError("thesaurus TSV must start with its header line")
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValidationError(f"thesaurus line {line_no}: expected 4 columns")
            did, lang, term, main = parts
            if lang not in ALLOWED_LANGUAGES:
                raise ValidationError(f"thesaurus line {line_no}: unknown language {lang!r}")
            entries.append(
                MeshThesaurusEntry(did, lang, term, main.strip().lower() == "true")
            )
    return MeshThesaurus(entries)


# ---------------------------------------------------------------------------
# MEDLINE XML convenience converter
# ---------------------------------------------------------------------------

def _medline_date(elem) -> str:
    year = elem.findtext("Year")
    if not year:
        # MedlineDate fallback: first 4-digit token
        raw = elem.findtext("MedlineDate") or ""
        m = re.search(r"\b(\d{4})\b", raw)
        if not m:
            raise ValidationError("citation without a usable PubDate")
        return m.group(1)
    month = elem.findtext("Month")
    day = elem.findtext("Day")
    if month and month.strip().lower()[:3] in _MONTH_NAMES:
        month = f"{_MONTH_NAMES[month.strip().lower()[:3]]:02d}"
    if month and day:
        return f"{year}-{int(month):02d}-{int(day):02d}"
    if month:
        return f"{year}-{int(month):02d}"
    return year


def convert_medline_xml(path: str | Path) -> list[PublicationRecord]:
    """Best-effort conversion of a minimal MEDLINE-style XML file.

    Recognizes PMID, ArticleTitle, PubDate, AuthorList and MeshHeadingList;
    everything else is ignored. Non-well-formed XML raises ParseError.
    """
    tree = ET.parse(path)
    records: list[PublicationRecord] = []
    for citation in tree.getroot().iter("MedlineCitation"):
        pmid = citation.findtext("PMID")
        if not pmid:
            continue
        article = citation.find("Article")
        title = article.findtext("ArticleTitle") if article is not None else ""
        date_elem = None
        if article is not None:
            date_elem = article.find("Journal/JournalIssue/PubDate")
        if date_elem is None:
            date_elem = citation.find("DateCompleted")
        if date_elem is None:
            raise ValidationError(f"PMID {pmid}: no PubDate")
        authors = []
        if article is not None:
            for a in article.iter("Author"):
                last = a.findtext("LastName") or ""
                fore = a.findtext("ForeName") or a.findtext("Initials") or ""
                affiliation = a.findtext("AffiliationInfo/Affiliation") or a.findtext("Affiliation")
                if last:
                    authors.append(
                        {"last": last, "fore": fore, "affiliation": affiliation, "email": None}
                    )
        headings = []
        for mh in citation.iter("MeshHeading"):
            name = mh.findtext("DescriptorName")
            if name and name not in headings:
                headings.append(name)
        doi = None
        for ident in citation.iter("ArticleId"):
            if ident.get("IdType") == "doi" and ident.text:
                doi = ident.text.strip()
                break
        rec = PublicationRecord(
            pub_id=pmid.strip(),
            title=(title or "").strip(),
            publication_date=parse_date(_medline_date(date_elem)),
            authors=authors,
            mesh_headings=headings,
            doi=doi,
            reference_dois=[],
        )
        rec.validate()
        records.append(rec)
    return records
