"""Dictionary-based extraction of thesaurus terms from patent description text.

A greedy n-gram scan runs from the longest indexed term length down to
single tokens; every hit masks its token positions so no position can feed
a second, shorter term. Pure upper-case acronym terms (WHO, DNA, ...) match
case-sensitively, everything else case-insensitively. Hits in any language
are mapped to their English main heading.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .corpus import MeshThesaurus
from .errors import NoDescriptionTextError
from .families import PatentFamily

log = logging.getLogger(__name__)

LANGUAGE_PRIORITY = ("en", "de", "fr")
MAX_NGRAM = 8

_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split on whitespace and punctuation, keeping intra-word hyphens.
    Thesaurus terms and document text must go through this same function."""
    return _TOKEN_RE.findall(text)


def _is_acronym(term_tokens: list[str]) -> bool:
    if len(term_tokens) != 1:
        return False
    tok = term_tokens[0]
    letters = [c for c in tok if c.isalpha()]
    return len(letters) >= 2 and tok.isupper()


class TermIndex:
    """Token-sequence lookup table for one thesaurus language."""

    def __init__(self, language: str):
        self.language = language
        self.ngrams: dict[tuple[str, ...], str] = {}     # lowercased tokens -> descriptor
        self.acronyms: dict[str, str] = {}               # exact-case token -> descriptor
        self.english_by_descriptor: dict[str, str] = {}
        self.max_n = 0

    def add(self, term: str, descriptor_id: str, english_heading: str) -> None:
        tokens = tokenize(term)
        if not tokens:
            return
        if len(tokens) > MAX_NGRAM:
            log.warning("term %r exceeds %d tokens, indexing truncated", term, MAX_NGRAM)
            tokens = tokens[:MAX_NGRAM]
        self.english_by_descriptor[descriptor_id] = english_heading
        if _is_acronym(tokens):
            self.acronyms.setdefault(tokens[0], descriptor_id)
            self.max_n = max(self.max_n, 1)
            return
        key = tuple(t.casefold() for t in tokens)
        self.ngrams.setdefault(key, descriptor_id)
        self.max_n = max(self.max_n, len(key))

    def match(self, window: list[str]) -> str | None:
        if len(window) == 1 and window[0] in self.acronyms:
            return self.acronyms[window[0]]
        return self.ngrams.get(tuple(t.casefold() for t in window))

    def __len__(self):
        return len(self.ngrams) + len(self.acronyms)


def build_term_index(thesaurus: MeshThesaurus, language: str) -> TermIndex:
    """Index all main headings and synonyms of one language."""
    index = TermIndex(language)
    for entry in thesaurus.entries_for_language(language):
        index.add(entry.term, entry.descriptor_id,
                  thesaurus.english_heading(entry.descriptor_id))
    return index


def select_description_language(family: PatentFamily) -> tuple[str, str]:
    """Pick the highest-priority available description language (en > de > fr)
    and join that language's distinct texts."""
    for lang in LANGUAGE_PRIORITY:
        texts = family.description_texts.get(lang)
        if texts:
            return lang, "\n".join(texts)
    raise NoDescriptionTextError(f"family {family.family_id} has no description text")


@dataclass(frozen=True)
class TermMatch:
    descriptor_id: str
    start: int        # token position of the first matched token
    n_tokens: int


def scan_terms(text: str, index: TermIndex) -> tuple[list[TermMatch], list[int]]:
    """Run the masking n-gram scan.

    Returns the first emission per descriptor plus every consumed token
    position (also from repeat matches, which are masked but not re-emitted).
    """
    tokens = tokenize(text)
    masked = [False] * len(tokens)
    emitted: set[str] = set()
    matches: list[TermMatch] = []
    consumed: list[int] = []
    top = min(index.max_n, len(tokens))
    for n in range(top, 0, -1):
        i = 0
        while i + n <= len(tokens):
            if any(masked[i:i + n]):
                i += 1
                continue
            descriptor = index.match(tokens[i:i + n])
            if descriptor is None:
                i += 1
                continue
            for j in range(i, i + n):
                masked[j] = True
                consumed.append(j)
            if descriptor not in emitted:
                emitted.add(descriptor)
                matches.append(TermMatch(descriptor, i, n))
            i += n
    return matches, consumed


@dataclass
class ExtractedTerms:
    doc_id: str
    language_used: str
    headings: list[str] = field(default_factory=list)   # sorted, unique English headings

    def to_json_dict(self) -> dict:
        return {"doc_id": self.doc_id, "language_used": self.language_used,
                "headings": list(self.headings)}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ExtractedTerms":
        return cls(obj["doc_id"], obj["language_used"], list(obj["headings"]))


def extract_terms(text: str, index: TermIndex, doc_id: str = "") -> ExtractedTerms:
    """Extract the deduplicated, alphabetically sorted English headings of
    all thesaurus terms found in the text."""
    matches, _ = scan_terms(text, index)
    headings = {index.english_by_descriptor[m.descriptor_id] for m in matches}
    return ExtractedTerms(doc_id=doc_id, language_used=index.language,
                          headings=sorted(headings))


def map_to_english(descriptors: list[str], thesaurus: MeshThesaurus) -> list[str]:
    """Map descriptor ids to their unique English main-heading strings."""
    return [thesaurus.english_heading(d) for d in descriptors]


def extract_family_terms(family: PatentFamily, indexes: dict[str, TermIndex]) -> ExtractedTerms:
    """Extract terms from a family's best-language description."""
    language, text = select_description_language(family)
    return extract_terms(text, indexes[language], doc_id=family.family_id)
