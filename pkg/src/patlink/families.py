"""Grouping of patent documents into families by their EP base number.

All documents sharing "EP" + digits (kind letter and sequence stripped)
describe one invention; the family inherits the earliest filing date and
the merged, deduplicated fields of its members.
"""

from __future__ import annotations

import datetime as dt
import logging
import re
from dataclasses import dataclass, field

from .corpus import PatentDocument, parse_date
from .errors import EmptyNameError, ValidationError
from .names import NameOrderModel, NormalizedName, dedup_names, normalize_name

log = logging.getLogger(__name__)

_PUBNUM_RE = re.compile(r"^(EP\d+)([AB])(\d)$")


@dataclass(frozen=True)
class ParsedPublicationNumber:
    base: str
    kind: str       # "A" application, "B" granted specification
    sequence: int   # chronological order within the kind group

    def render(self) -> str:
        return f"{self.base}{self.kind}{self.sequence}"


def parse_publication_number(s: str) -> ParsedPublicationNumber:
    m = _PUBNUM_RE.match(s)
    if not m:
        raise ValidationError(f"not an EP publication number: {s!r}")
    return ParsedPublicationNumber(base=m.group(1), kind=m.group(2), sequence=int(m.group(3)))


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass
class PatentFamily:
    family_id: str
    filing_date: dt.date
    inventors: list[NormalizedName]
    raw_inventor_names: list[str]       # pre-stripping copies, for academic detection
    applicants: list[str]
    ipc_codes: list[str]
    description_texts: dict[str, list[str]]   # language -> distinct texts
    reference_strings: list[str]
    member_numbers: list[str]
    academic: bool | None = None        # filled by the IPC stage
    doc_fields: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "family_id": self.family_id,
            "filing_date": self.filing_date.isoformat(),
            "inventors": [n.to_json_dict() for n in self.inventors],
            "raw_inventor_names": list(self.raw_inventor_names),
            "applicants": list(self.applicants),
            "ipc_codes": list(self.ipc_codes),
            "description_texts": {k: list(v) for k, v in self.description_texts.items()},
            "reference_strings": list(self.reference_strings),
            "member_numbers": list(self.member_numbers),
            "academic": self.academic,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PatentFamily":
        return cls(
            family_id=obj["family_id"],
            filing_date=parse_date(obj["filing_date"]),
            inventors=[NormalizedName.from_json_dict(d) for d in obj["inventors"]],
            raw_inventor_names=list(obj.get("raw_inventor_names", [])),
            applicants=list(obj.get("applicants", [])),
            ipc_codes=list(obj.get("ipc_codes", [])),
            description_texts={k: list(v) for k, v in obj.get("description_texts", {}).items()},
            reference_strings=list(obj.get("reference_strings", [])),
            member_numbers=list(obj.get("member_numbers", [])),
            academic=obj.get("academic"),
        )


def group_into_families(docs: list[PatentDocument],
                        model: NameOrderModel | None = None) -> list[PatentFamily]:
    """Merge documents into one family per EP base number.

    Members are merged in (filing_date, publication_number) order, so the
    result is independent of input order. Inventor names are normalized and
    deduplicated; when the same name carries different countries, the
    earliest-filed member wins. Description texts that are identical after
    whitespace normalization collapse to one.
    """
    by_base: dict[str, list[PatentDocument]] = {}
    for doc in docs:
        parsed = parse_publication_number(doc.publication_number)
        by_base.setdefault(parsed.base, []).append(doc)

    families: list[PatentFamily] = []
    for base in sorted(by_base):
        members = sorted(by_base[base], key=lambda d: (d.filing_date, d.publication_number))
        inventors: list[NormalizedName] = []
        raw_names: list[str] = []
        applicants: list[str] = []
        ipc_codes: list[str] = []
        texts: dict[str, list[str]] = {}
        seen_text_keys: set[tuple[str, str]] = set()
        references: list[str] = []
        for doc in members:
            for inv in doc.inventors:
                raw = str(inv["name"])
                if raw not in raw_names:
                    raw_names.append(raw)
                try:
                    inventors.append(normalize_name(raw, inv.get("country"), model))
                except EmptyNameError:
                    log.warning("%s: skipping unusable inventor name %r", base, raw)
            for a in doc.applicants:
                a = a.strip()
                if a and a not in applicants:
                    applicants.append(a)
            for c in doc.ipc_codes:
                if c not in ipc_codes:
                    ipc_codes.append(c)
            for lang, text in sorted(doc.description_texts.items()):
                key = (lang, _normalize_ws(text))
                if key in seen_text_keys:
                    continue
                seen_text_keys.add(key)
                texts.setdefault(lang, []).append(text)
            for r in doc.reference_strings:
                if r not in references:
                    references.append(r)
        families.append(
            PatentFamily(
                family_id=base,
                filing_date=members[0].filing_date,
                inventors=dedup_names(inventors),
                raw_inventor_names=raw_names,
                applicants=applicants,
                ipc_codes=ipc_codes,
                description_texts=texts,
                reference_strings=references,
                member_numbers=sorted(d.publication_number for d in members),
            )
        )
    return families
