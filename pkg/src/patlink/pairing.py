"""Candidate pair generation: block on shared normalized names inside a
filing-year window, filter by the novelty date interval, annotate country
agreement.

Country signals come from author email ccTLDs or affiliation text and are
normalized to ISO-3166-1 alpha-2; the patent side already carries inventor
countries. Country disagreement never drops a pair, it only affects output
order (records with country data on both sides come first) and later
tie-breaks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .corpus import PublicationRecord
from .errors import EmptyNameError
from .families import PatentFamily
from .names import NameOrderModel, NormalizedName, dedup_names, normalize_name

DAYS_PER_YEAR = 365.25

# ccTLD -> ISO 3166-1 alpha-2. Generic TLDs (.com, .org, .edu, ...) are
# deliberately absent: they carry no country signal.
CCTLD_TO_ISO = {
    "de": "DE", "at": "AT", "ch": "CH", "fr": "FR", "it": "IT", "es": "ES",
    "nl": "NL", "be": "BE", "lu": "LU", "dk": "DK", "se": "SE", "no": "NO",
    "fi": "FI", "is": "IS", "ie": "IE", "uk": "GB", "gb": "GB", "pt": "PT",
    "gr": "GR", "pl": "PL", "cz": "CZ", "sk": "SK", "hu": "HU", "si": "SI",
    "hr": "HR", "ro": "RO", "bg": "BG", "ee": "EE", "lv": "LV", "lt": "LT",
    "ru": "RU", "ua": "UA", "tr": "TR", "il": "IL", "us": "US", "ca": "CA",
    "mx": "MX", "br": "BR", "ar": "AR", "cl": "CL", "jp": "JP", "cn": "CN",
    "kr": "KR", "tw": "TW", "hk": "HK", "sg": "SG", "in": "IN", "au": "AU",
    "nz": "NZ", "za": "ZA", "my": "MY", "th": "TH", "id": "ID", "ph": "PH",
    "sa": "SA", "ae": "AE", "eg": "EG", "ng": "NG", "ke": "KE", "cy": "CY",
    "mt": "MT", "li": "LI", "mc": "MC",
}

# Country names as they appear in affiliation strings, in English, German
# and French, mapped to ISO codes.
COUNTRY_NAME_TO_ISO = {
    "germany": "DE", "deutschland": "DE", "allemagne": "DE",
    "austria": "AT", "oesterreich": "AT", "österreich": "AT", "autriche": "AT",
    "switzerland": "CH", "schweiz": "CH", "suisse": "CH",
    "france": "FR", "frankreich": "FR",
    "italy": "IT", "italien": "IT", "italie": "IT", "italia": "IT",
    "spain": "ES", "spanien": "ES", "espagne": "ES", "espana": "ES", "españa": "ES",
    "netherlands": "NL", "the netherlands": "NL", "niederlande": "NL",
    "pays-bas": "NL", "nederland": "NL",
    "belgium": "BE", "belgien": "BE", "belgique": "BE",
    "luxembourg": "LU", "luxemburg": "LU",
    "denmark": "DK", "daenemark": "DK", "dänemark": "DK", "danemark": "DK", "danmark": "DK",
    "sweden": "SE", "schweden": "SE", "suede": "SE", "suède": "SE", "sverige": "SE",
    "norway": "NO", "norwegen": "NO", "norvege": "NO", "norvège": "NO", "norge": "NO",
    "finland": "FI", "finnland": "FI", "finlande": "FI",
    "iceland": "IS", "island": "IS", "islande": "IS",
    "ireland": "IE", "irland": "IE", "irlande": "IE",
    "united kingdom": "GB", "great britain": "GB", "england": "GB", "scotland": "GB",
    "wales": "GB", "grossbritannien": "GB", "großbritannien": "GB", "royaume-uni": "GB",
    "portugal": "PT",
    "greece": "GR", "griechenland": "GR", "grece": "GR", "grèce": "GR",
    "poland": "PL", "polen": "PL", "pologne": "PL", "polska": "PL",
    "czech republic": "CZ", "czechia": "CZ", "tschechien": "CZ", "tchequie": "CZ",
    "slovakia": "SK", "slowakei": "SK", "slovaquie": "SK",
    "hungary": "HU", "ungarn": "HU", "hongrie": "HU",
    "slovenia": "SI", "slowenien": "SI", "slovenie": "SI", "slovénie": "SI",
    "croatia": "HR", "kroatien": "HR", "croatie": "HR",
    "romania": "RO", "rumaenien": "RO", "rumänien": "RO", "roumanie": "RO",
    "bulgaria": "BG", "bulgarien": "BG", "bulgarie": "BG",
    "estonia": "EE", "estland": "EE", "estonie": "EE",
    "latvia": "LV", "lettland": "LV", "lettonie": "LV",
    "lithuania": "LT", "litauen": "LT", "lituanie": "LT",
    "russia": "RU", "russland": "RU", "russie": "RU", "russian federation": "RU",
    "ukraine": "UA",
    "turkey": "TR", "tuerkei": "TR", "türkei": "TR", "turquie": "TR",
    "israel": "IL",
    "united states": "US", "usa": "US", "u.s.a.": "US", "united states of america": "US",
    "vereinigte staaten": "US", "etats-unis": "US", "états-unis": "US",
    "canada": "CA", "kanada": "CA",
    "mexico": "MX", "mexiko": "MX", "mexique": "MX",
    "brazil": "BR", "brasilien": "BR", "bresil": "BR", "brésil": "BR",
    "argentina": "AR", "argentinien": "AR", "argentine": "AR",
    "chile": "CL", "chili": "CL",
    "japan": "JP", "japon": "JP",
    "china": "CN", "chine": "CN",
    "south korea": "KR", "korea": "KR", "suedkorea": "KR", "südkorea": "KR",
    "coree": "KR", "corée": "KR",
    "taiwan": "TW",
    "singapore": "SG", "singapur": "SG", "singapour": "SG",
    "india": "IN", "indien": "IN", "inde": "IN",
    "australia": "AU", "australien": "AU", "australie": "AU",
    "new zealand": "NZ", "neuseeland": "NZ", "nouvelle-zelande": "NZ",
    "south africa": "ZA", "suedafrika": "ZA", "südafrika": "ZA", "afrique du sud": "ZA",
}

_COUNTRY_PATTERNS = [
    (re.compile(r"(?<![a-z])" + re.escape(name) + r"(?![a-z])"), code)
    for name, code in COUNTRY_NAME_TO_ISO.items()
]


def extract_country(affiliation: str | None, email: str | None) -> str | None:
    """Resolve an author's country; email ccTLD wins over affiliation text.

    Affiliation matches take the last country name by position, since
    addresses usually end with the country. None means no signal.
    """
    if email and "@" in email:
        host = email.rsplit("@", 1)[1].strip().lower().rstrip(".")
        tld = host.rsplit(".", 1)[-1] if "." in host else host
        if tld in CCTLD_TO_ISO:
            return CCTLD_TO_ISO[tld]
    if affiliation:
        text = affiliation.lower()
        best: tuple[int, str] | None = None
        for pattern, code in _COUNTRY_PATTERNS:
            for m in pattern.finditer(text):
                if best is None or m.start() > best[0]:
                    best = (m.start(), code)
        if best:
            return best[1]
    return None


def propagate_first_author_country(countries: list[str | None]) -> list[str | None]:
    """If only the first author has a country, all authors receive it."""
    if not countries:
        return countries
    first, rest = countries[0], countries[1:]
    if first is not None and all(c is None for c in rest):
        return [first] * len(countries)
    return list(countries)


def normalize_publication_authors(pub: PublicationRecord,
                                  model: NameOrderModel | None = None) -> list[NormalizedName]:
    """Normalized, deduplicated author names with resolved countries."""
    countries = propagate_first_author_country(
        [extract_country(a.get("affiliation"), a.get("email")) for a in pub.authors]
    )
    names: list[NormalizedName] = []
    for author, country in zip(pub.authors, countries):
        raw = f"{author['last']}, {author.get('fore', '')}".rstrip(", ")
        try:
            names.append(normalize_name(raw, country, model))
        except EmptyNameError:
            continue
    return dedup_names(names)


@dataclass
class CandidatePair:
    family_id: str
    pub_id: str
    common_names: list[str]             # canonical renderings, sorted
    n_common_names: int
    country_match_count: int
    delta_years: float                  # publication_date - filing_date
    cosine: float | None = None
    n_common_refs: int | None = None
    academic: bool = False
    allowed_ipc: bool | None = None
    boosted_cosine: float | None = None
    validity_rule: str | None = None
    rank_within_doc: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "family_id": self.family_id,
            "pub_id": self.pub_id,
            "common_names": list(self.common_names),
            "n_common_names": self.n_common_names,
            "country_match_count": self.country_match_count,
            "delta_years": self.delta_years,
            "cosine": self.cosine,
            "n_common_refs": self.n_common_refs,
            "academic": self.academic,
            "allowed_ipc": self.allowed_ipc,
            "boosted_cosine": self.boosted_cosine,
            "validity_rule": self.validity_rule,
            "rank_within_doc": self.rank_within_doc,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CandidatePair":
        return cls(
            family_id=obj["family_id"],
            pub_id=obj["pub_id"],
            common_names=list(obj["common_names"]),
            n_common_names=int(obj["n_common_names"]),
            country_match_count=int(obj["country_match_count"]),
            delta_years=float(obj["delta_years"]),
            cosine=obj.get("cosine"),
            n_common_refs=obj.get("n_common_refs"),
            academic=bool(obj.get("academic", False)),
            allowed_ipc=obj.get("allowed_ipc"),
            boosted_cosine=obj.get("boosted_cosine"),
            validity_rule=obj.get("validity_rule"),
            rank_within_doc=obj.get("rank_within_doc"),
        )


def block_join(families: list[PatentFamily], publications: list[PublicationRecord],
               model: NameOrderModel | None = None) -> list[CandidatePair]:
    """Pair every family with publications sharing >= 1 normalized name and
    published in the filing year or the two following years.

    The year window only bounds the join's cost; correctness of the novelty
    interval is date_filter's job. Pairs with country information on both
    sides are emitted first, each block sorted by (family_id, pub_id).
    """
    pub_names: dict[str, list[NormalizedName]] = {}
    pubs_by_id: dict[str, PublicationRecord] = {}
    name_index: dict[str, set[str]] = {}
    for pub in publications:
        names = normalize_publication_authors(pub, model)
        pub_names[pub.pub_id] = names
        pubs_by_id[pub.pub_id] = pub
        for n in names:
            name_index.setdefault(n.canonical(), set()).add(pub.pub_id)

    preferred: list[CandidatePair] = []
    others: list[CandidatePair] = []
    for family in families:
        inventor_by_key = {n.canonical(): n for n in family.inventors}
        filing_year = family.filing_date.year
        candidate_ids: set[str] = set()
        for key in inventor_by_key:
            candidate_ids |= name_index.get(key, set())
        family_has_country = any(n.source_country for n in family.inventors)
        for pub_id in candidate_ids:
            pub = pubs_by_id[pub_id]
            if not filing_year <= pub.publication_date.year <= filing_year + 2:
                continue
            author_by_key = {n.canonical(): n for n in pub_names[pub_id]}
            common = sorted(set(inventor_by_key) & set(author_by_key))
            if not common:
                continue
            matches = 0
            for key in common:
                inv_c = inventor_by_key[key].source_country
                aut_c = author_by_key[key].source_country
                if inv_c is not None and inv_c == aut_c:
                    matches += 1
            pair = CandidatePair(
                family_id=family.family_id,
                pub_id=pub_id,
                common_names=common,
                n_common_names=len(common),
                country_match_count=matches,
                delta_years=(pub.publication_date - family.filing_date).days / DAYS_PER_YEAR,
            )
            pub_has_country = any(n.source_country for n in pub_names[pub_id])
            if family_has_country and pub_has_country:
                preferred.append(pair)
            else:
                others.append(pair)
    key = lambda p: (p.family_id, p.pub_id)
    return sorted(preferred, key=key) + sorted(others, key=key)


def date_filter(pairs: list[CandidatePair], min_years: float = 0.5,
                max_years: float = 1.5) -> list[CandidatePair]:
    """Keep pairs whose publication lags filing by 0.5..1.5 years inclusive
    (novelty: the filing must precede the describing publication)."""
    return [p for p in pairs if min_years <= p.delta_years <= max_years]
