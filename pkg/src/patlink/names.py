"""Person-name normalization to the blocking key "last name, initials".

Raw inventor strings arrive in every imaginable shape ("Prof. Dr. Klaus
Lippert", "LIPPERT, Klaus", "K.A. Lippert"); publication authors come
pre-split into last/fore fields and are pushed through the same path by
composing "last, fore". Titles are stripped against a bundled lexicon,
special characters transliterated to ASCII, and the given/surname order is
decided by rules first and a small Naive Bayes model when no rule fires.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

from .errors import EmptyNameError

_TRANSLIT_TABLE = {
    "ä": "ae", "ö": "oe", "ü": "ue", "ß": "ss",
    "Ä": "Ae", "Ö": "Oe", "Ü": "Ue", "ẞ": "Ss",
    "æ": "ae", "Æ": "Ae", "œ": "oe", "Œ": "Oe",
    "ø": "o", "Ø": "O", "å": "aa", "Å": "Aa",
    "ł": "l", "Ł": "L", "đ": "d", "Đ": "D",
    "þ": "th", "Þ": "Th", "ð": "d", "Ð": "D",
}

SURNAME_PARTICLES = frozenset(
    ["van", "von", "de", "da", "la", "le", "den", "der", "ten", "ter", "del", "di", "du"]
)


def _load_title_lexicon() -> frozenset[str]:
    text = resources.files("patlink.data").joinpath("titles.txt").read_text("utf-8")
    return frozenset(t.strip().lower() for t in text.splitlines() if t.strip())

_TITLES = _load_title_lexicon()


def strip_titles(raw: str) -> str:
    """Remove academic titles (case-insensitive, dot-tolerant) from a name.

    Uppercase dotted clusters ("H.C.", "J.A.") are kept: those are initials;
    title abbreviations of that shape ("h.c.") are conventionally lowercase.
    """
    kept = []
    for token in raw.split():
        if _INITIAL_CLUSTER_RE.match(token) and any(c.isupper() for c in token):
            kept.append(token)
            continue
        # "Dipl.-Ing." -> "dipl-ing", "h.c." -> "hc", "Dr." -> "dr"
        folded = re.sub(r"-+", "-", re.sub(r"[.,]", "", token).lower()).strip("-")
        if folded in _TITLES:
            continue
        kept.append(token)
    return " ".join(kept)


def transliterate(raw: str) -> str:
    """Replace umlauts per the fixed table and reduce all other diacritics
    to their base letter; the result is pure ASCII."""
    out = []
    for ch in raw:
        if ch in _TRANSLIT_TABLE:
            out.append(_TRANSLIT_TABLE[ch])
        else:
            out.append(ch)
    decomposed = unicodedata.normalize("NFKD", "".join(out))
    return decomposed.encode("ascii", "ignore").decode("ascii")


_INITIAL_CLUSTER_RE = re.compile(r"^(?:[A-Za-z]\.)+[A-Za-z]?\.?$")


def tokenize_name(raw: str) -> list[str]:
    """Split a name on whitespace, keeping commas as their own tokens and
    expanding dotted initial clusters ("K.A." -> "K", "A")."""
    tokens: list[str] = []
    for chunk in raw.replace(",", " , ").split():
        if chunk == ",":
            tokens.append(",")
            continue
        chunk = chunk.strip(".") if chunk.count(".") == 1 and chunk.endswith(".") else chunk
        if _INITIAL_CLUSTER_RE.match(chunk):
            tokens.extend(c for c in chunk.split(".") if c)
        elif chunk:
            tokens.append(chunk)
    return tokens


@dataclass(frozen=True)
class NormalizedName:
    last: str
    initials: str
    source_country: str | None = None

    def canonical(self) -> str:
        return f"{self.last}, {self.initials}"

    def to_json_dict(self) -> dict:
        return {"last": self.last, "initials": self.initials, "country": self.source_country}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "NormalizedName":
        return cls(obj["last"], obj["initials"], obj.get("country"))


class NameOrderModel:
    """Naive Bayes over name tokens with two classes, given and surname.

    Trained from the bundled token list (Laplace smoothing, constant 1.0 by
    default). Used only when no ordering rule fires.
    """

    def __init__(self, given_counts: dict[str, int], surname_counts: dict[str, int],
                 smoothing: float = 1.0):
        if smoothing <= 0:
            raise ValueError("smoothing constant must be positive")
        self.given_counts = given_counts
        self.surname_counts = surname_counts
        self.smoothing = smoothing
        self._given_total = sum(given_counts.values())
        self._surname_total = sum(surname_counts.values())
        self._vocab = len(set(given_counts) | set(surname_counts)) + 1  # +1 unseen bucket

    @classmethod
    def from_tsv(cls, path=None, smoothing: float = 1.0) -> "NameOrderModel":
        if path is None:
            text = resources.files("patlink.data").joinpath("name_tokens.tsv").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        given: dict[str, int] = {}
        surname: dict[str, int] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            token, cls_name = line.split("\t")
            token = token.strip().lower()
            if cls_name.strip() == "given":
                given[token] = given.get(token, 0) + 1
            elif cls_name.strip() == "surname":
                surname[token] = surname.get(token, 0) + 1
            else:
                raise ValueError(f"unknown name class {cls_name!r}")
        return cls(given, surname, smoothing)

    def log_likelihood(self, token: str, cls_name: str) -> float:
        token = token.lower()
        if cls_name == "given":
            count, total = self.given_counts.get(token, 0), self._given_total
        else:
            count, total = self.surname_counts.get(token, 0), self._surname_total
        return math.log((count + self.smoothing) / (total + self.smoothing * self._vocab))

    def token_posterior(self, token: str) -> tuple[float, float]:
        """P(given), P(surname) for one token; normalized to sum to 1."""
        g = math.exp(self.log_likelihood(token, "given"))
        s = math.exp(self.log_likelihood(token, "surname"))
        return g / (g + s), s / (g + s)

    def best_split(self, tokens: list[str]) -> tuple[list[str], list[str]]:
        """Most probable contiguous split into given and surname blocks.

        Both block orders are scored; ties prefer the western order with
        the last token as the surname.
        """
        n = len(tokens)
        if n == 1:
            return [], list(tokens)
        best = None
        for boundary in range(1, n):
            for given_first in (True, False):
                if given_first:
                    given, surname = tokens[:boundary], tokens[boundary:]
                else:
                    surname, given = tokens[:boundary], tokens[boundary:]
                score = sum(self.log_likelihood(t, "given") for t in given) + \
                    sum(self.log_likelihood(t, "surname") for t in surname)
                key = (score, given_first, boundary if given_first else -boundary)
                if best is None or key > best[0]:
                    best = (key, given, surname)
        return best[1], best[2]


_DEFAULT_MODEL: NameOrderModel | None = None


def default_model() -> NameOrderModel:
    global _DEFAULT_MODEL
    if _DEFAULT_MODEL is None:
        _DEFAULT_MODEL = NameOrderModel.from_tsv()
    return _DEFAULT_MODEL


def _is_caps_token(token: str) -> bool:
    letters = [c for c in token if c.isalpha()]
    return len(letters) > 1 and token.isupper()


def order_name(tokens: list[str], model: NameOrderModel | None = None) -> tuple[list[str], list[str]]:
    """Split name tokens into (given, surname) blocks.

    Rule order: a comma splits "surname, given"; ALL-CAPS tokens are the
    surname; a lowercase particle (van, von, de, ...) binds itself and
    everything after it to the surname. Only when no rule fires does the
    Naive Bayes split decide.
    """
    tokens = [t for t in tokens if t.strip()]
    if not tokens:
        raise EmptyNameError("no name tokens")
    if "," in tokens:
        cut = tokens.index(",")
        surname = tokens[:cut]
        given = [t for t in tokens[cut + 1:] if t != ","]
        if not surname:
            surname, given = given, []
        return given, surname
    caps = [t for t in tokens if _is_caps_token(t)]
    if caps and len(caps) < len(tokens):
        return [t for t in tokens if not _is_caps_token(t)], caps
    for i, t in enumerate(tokens):
        if t in SURNAME_PARTICLES and t.islower() and i + 1 < len(tokens):
            if i == 0:
                continue  # leading particle: treat whole string as surname-ish, let NB decide
            return tokens[:i], tokens[i:]
    if len(tokens) == 1:
        return [], tokens
    if model is None:
        model = default_model()
    return model.best_split(tokens)


def normalize_name(raw: str, country: str | None = None,
                   model: NameOrderModel | None = None) -> NormalizedName:
    """Normalize a raw person name to its canonical "last, initials" form."""
    stripped = strip_titles(raw)
    ascii_name = transliterate(stripped)
    tokens = tokenize_name(ascii_name)
    if not any(any(c.isalpha() for c in t) for t in tokens):
        raise EmptyNameError(f"nothing left of {raw!r} after stripping")
    given, surname = order_name(tokens, model)
    if not surname:
        surname, given = given[-1:], given[:-1]
    last = " ".join(surname).lower()
    last = re.sub(r"[^a-z \-]", "", last).strip(" -")
    last = re.sub(r"\s+", " ", last)
    initials = "".join(t[0].lower() for t in given if t and t[0].isalpha())
    initials = re.sub(r"[^a-z]", "", initials)
    if not initials:
        # single-token names: the token is the surname and donates its initial,
        # so the blocking key is never empty
        initials = last[0] if last else ""
    if not last or not initials:
        raise EmptyNameError(f"cannot normalize {raw!r}")
    return NormalizedName(last=last, initials=initials, source_country=country)


def dedup_names(names: list[NormalizedName]) -> list[NormalizedName]:
    """Drop names with a duplicate canonical rendering, keeping first occurrence."""
    seen: set[str] = set()
    out: list[NormalizedName] = []
    for n in names:
        key = n.canonical()
        if key not in seen:
            seen.add(key)
            out.append(n)
    return out
