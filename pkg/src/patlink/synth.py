"""Synthetic corpus generator for demos and end-to-end verification.

Builds a small, fully controlled world: 100 patent families (half medical,
half distractor technology), 250 publications, a trilingual thesaurus of
invented but well-formed terms, and a bibliographic fixture for the mock
DOI resolver. 40 true pairs are planted - by shared names, by shared cited
DOIs, and by overlapping thesaurus headings - along with 60 homonym
distractor publications that share a name with some family by accident.

Everything is drawn from one seeded RNG, so a given seed always produces
byte-identical corpora and a deterministic pipeline outcome.
"""

from __future__ import annotations

import datetime as dt
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig, dump_config

GIVEN_NAMES = [
    "Klaus", "Anna", "Peter", "Maria", "Werner", "Ursula", "Jan", "Eva",
    "Pierre", "Marie", "Lars", "Ingrid", "Paolo", "Elena", "Hans", "Birgit",
    "Michel", "Karin", "Sven", "Petra", "Dirk", "Julia", "Marco", "Astrid",
]

_SYLLABLES = ["ba", "ck", "dor", "fel", "gan", "hau", "kel", "lin", "mon",
              "ner", "pol", "quist", "rath", "sen", "tov", "vald", "wick",
              "zell", "bru", "sta"]

_MED_PREFIX = ["cardio", "neuro", "hepato", "gastro", "immuno", "onco",
               "derma", "pulmo", "nephro", "osteo", "hemato", "endo"]
_MED_ROOT = ["statin", "mycin", "zumab", "prazole", "sartan", "oxetine",
             "cillin", "dipine", "tinib", "gliptin", "parin", "terol"]
_TECH_WORDS = ["router", "cipher", "compiler", "kernel", "socket", "codec",
               "antenna", "turbine", "gearbox", "laser", "firmware", "relay",
               "modem", "chipset", "actuator", "servo", "radar", "inverter",
               "battery", "sensor"]

COMPANIES = ["Acme Pharma GmbH", "Nordischer Laborbedarf AB", "Helix Therapeutics SA",
             "Rheinwerk Chemie AG", "BioMerid NV", "Innotech Systems Ltd",
             "Quantafix SARL", "Medanova SpA"]
UNIVERSITIES = ["Universitaet Koeln", "University of Lund", "Universite de Lyon",
                "Universiteit Leiden", "University of Graz"]

COUNTRY_POOL = [("DE", "Germany", "de"), ("SE", "Sweden", "se"), ("FR", "France", "fr"),
                ("NL", "Netherlands", "nl"), ("CH", "Switzerland", "ch"),
                ("AT", "Austria", "at")]

_FILLER_EN = ("the present invention relates to a method and composition for "
              "treatment wherein said compound is administered in effective doses").split()
_FILLER_DE = ("die vorliegende erfindung betrifft ein verfahren sowie eine "
              "zusammensetzung zur behandlung wobei genannte verbindung verabreicht "
              "wird").split()
_FILLER_FR = ("la presente invention concerne un procede et une composition pour "
              "le traitement dans laquelle ledit compose est administre").split()
_FILLERS = {"en": _FILLER_EN, "de": _FILLER_DE, "fr": _FILLER_FR}


def _surname(rng: random.Random, used: set[str]) -> str:
    while True:
        name = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 3))).capitalize()
        if name.lower() not in used:
            used.add(name.lower())
            return name


@dataclass
class Person:
    last: str
    fore: str
    country: str            # ISO code
    country_name: str
    cctld: str

    def canonical(self) -> str:
        return f"{self.last.lower()}, {self.fore[0].lower()}"


@dataclass
class Descriptor:
    descriptor_id: str
    en: str
    de: str
    fr: str
    synonym_en: str | None = None


@dataclass
class GroundTruth:
    planted: list[dict] = field(default_factory=list)   # family_id, pub_id, kind
    distractor_pairs: list[dict] = field(default_factory=list)
    hard_distractors: list[dict] = field(default_factory=list)

    def planted_keys(self) -> set[tuple[str, str]]:
        return {(p["family_id"], p["pub_id"]) for p in self.planted}

    def to_json_dict(self) -> dict:
        return {"planted": self.planted, "distractor_pairs": self.distractor_pairs,
                "hard_distractors": self.hard_distractors}


def _make_person(rng: random.Random, used: set[str]) -> Person:
    iso, name, tld = rng.choice(COUNTRY_POOL)
    return Person(last=_surname(rng, used), fore=rng.choice(GIVEN_NAMES),
                  country=iso, country_name=name, cctld=tld)


def _make_descriptors(rng: random.Random) -> tuple[list[Descriptor], list[Descriptor]]:
    medical: list[Descriptor] = []
    for i in range(60):
        stem = f"{rng.choice(_MED_PREFIX)}{rng.choice(_MED_ROOT)}{i:02d}"
        two_word = i % 2 == 0
        en = f"{stem.capitalize()} Therapy" if two_word else stem.capitalize()
        descriptor = Descriptor(
            descriptor_id=f"D{i:06d}",
            en=en,
            de=f"{stem.capitalize()}therapie" if two_word else f"{stem.capitalize()}um",
            fr=f"Therapie de {stem}" if two_word else f"{stem.capitalize()}e",
            synonym_en=f"{stem.capitalize()} Treatment" if i % 4 == 0 else None,
        )
        medical.append(descriptor)
    tech: list[Descriptor] = []
    for i, word in enumerate(_TECH_WORDS):
        for j in range(2):
            stem = f"{word}{j}"
            tech.append(Descriptor(
                descriptor_id=f"T{i * 2 + j:06d}",
                en=f"{stem.capitalize()} Module",
                de=f"{stem.capitalize()}modul",
                fr=f"Module {stem}",
            ))
    return medical, tech


def _description_text(terms: list[str], language: str, rng: random.Random) -> str:
    filler = _FILLERS[language]
    sentences = []
    for term in terms:
        words = [rng.choice(filler) for _ in range(rng.randint(3, 6))]
        insert_at = rng.randint(0, len(words))
        words[insert_at:insert_at] = [term]
        sentences.append(" ".join(words) + ".")
    rng.shuffle(sentences)
    return " ".join(sentences)


def _affiliation(person: Person, rng: random.Random) -> dict:
    # half the authors signal their country via affiliation text, half via email
    if rng.random() < 0.5:
        return {"last": person.last, "fore": person.fore,
                "affiliation": f"Department of Medicine, University Hospital, {person.country_name}",
                "email": None}
    return {"last": person.last, "fore": person.fore, "affiliation": None,
            "email": f"{person.last.lower()}@clinic.{person.cctld}"}


def _plain_author(person: Person) -> dict:
    return {"last": person.last, "fore": person.fore, "affiliation": None, "email": None}


class CorpusBuilder:
    """Assembles the synthetic world; every decision comes from one RNG."""

    def __init__(self, seed: int = 42):
        self.rng = random.Random(seed)
        self.seed = seed
        self.used_names: set[str] = set()
        self.medical_desc, self.tech_desc = _make_descriptors(self.rng)
        self.patents: list[dict] = []
        self.publications: list[dict] = []
        self.works: list[dict] = []
        self.truth = GroundTruth()
        self._pub_counter = 0
        self._families: list[dict] = []   # bookkeeping per family

    # -- families ----------------------------------------------------------

    def _family_languages(self) -> str:
        roll = self.rng.random()
        if roll < 0.60:
            return "en"
        if roll < 0.85:
            return "de"
        return "fr"

    def _term_surface(self, descriptor: Descriptor, language: str) -> str:
        return {"en": descriptor.en, "de": descriptor.de, "fr": descriptor.fr}[language]

    def build_families(self) -> None:
        for idx in range(100):
            medical = idx < 50
            base = f"EP{100000 + idx:06d}"
            ipc_pool = ["A61K 38/17", "C07K 14/47"] if medical else ["H04L 29/06", "G06F 17/30"]
            primary = ipc_pool[idx % 2]
            ipcs = [primary]
            if self.rng.random() < 0.3:
                ipcs.append(ipc_pool[(idx + 1) % 2])
            inventors = [_make_person(self.rng, self.used_names)
                         for _ in range(self.rng.randint(3, 6))]
            academic = medical and self.rng.random() < 0.3
            applicants = [self.rng.choice(UNIVERSITIES) if academic
                          else self.rng.choice(COMPANIES)]
            language = self._family_languages()
            desc_pool = self.medical_desc if medical else self.tech_desc
            terms = self.rng.sample(desc_pool, self.rng.randint(6, 12))
            filing = self._random_date(2000, 2003)
            self._families.append({
                "family_id": base, "medical": medical, "inventors": inventors,
                "academic": academic, "language": language, "terms": terms,
                "filing": filing, "ipcs": ipcs, "applicants": applicants,
                "references": [],
            })

    def _random_date(self, year_lo: int, year_hi: int) -> str:
        year = self.rng.randint(year_lo, year_hi)
        month = self.rng.randint(1, 12)
        day = self.rng.randint(1, 28)
        return f"{year:04d}-{month:02d}-{day:02d}"

    def _emit_family_documents(self) -> None:
        for fam in self._families:
            n_members = self.rng.randint(1, 3)
            kinds = [("A", 1), ("A", 2), ("B", 1)][:n_members]
            filing = fam["filing"]
            text_terms = [self._term_surface(d, fam["language"]) for d in fam["terms"]]
            text = _description_text(text_terms, fam["language"], self.rng)
            inventor_names = []
            for i, person in enumerate(fam["inventors"]):
                raw = f"{person.fore} {person.last}"
                if fam["academic"] and i == 0:
                    raw = f"Prof. Dr. {raw}"
                elif self.rng.random() < 0.2:
                    raw = f"Dr. {raw}"
                if self.rng.random() < 0.25:
                    raw = f"{person.last.upper()}, {person.fore}"
                inventor_names.append({"name": raw, "country": person.country})
            for member_idx, (kind, seq) in enumerate(kinds):
                member_filing = filing if member_idx == 0 else self._later_date(filing)
                self.patents.append({
                    "publication_number": f"{fam['family_id']}{kind}{seq}",
                    "filing_date": member_filing,
                    "inventors": inventor_names,
                    "applicants": fam["applicants"],
                    "ipc_codes": fam["ipcs"],
                    "description_texts": {fam["language"]: text},
                    "reference_strings": fam["references"],
                })

    def _later_date(self, iso: str) -> str:
        # must never precede the first member: the family filing date is the
        # minimum over members and the planted deltas are anchored to it
        base = dt.date.fromisoformat(iso)
        return (base + dt.timedelta(days=self.rng.randint(30, 700))).isoformat()

    # -- publications -------------------------------------------------------

    def _next_pub_id(self) -> str:
        self._pub_counter += 1
        return f"{10000000 + self._pub_counter}"

    def _pub_date_in_window(self, filing: str) -> str:
        base = dt.date.fromisoformat(filing)
        return (base + dt.timedelta(days=self.rng.randint(200, 540))).isoformat()

    def _shared_authors(self, fam: dict, count: int, matching_countries: bool) -> list[dict]:
        authors = []
        for person in fam["inventors"][:count]:
            if matching_countries:
                authors.append(_affiliation(person, self.rng))
            else:
                authors.append(_plain_author(person))
        return authors

    def plant_name_pairs(self) -> None:
        """15 pairs sharing >= 3 names; the 4- and 5-name ones country-matched."""
        plan = [3] * 7 + [4] * 4 + [5] * 4
        for i, n_shared in enumerate(plan):
            fam = self._families[i]
            while len(fam["inventors"]) < n_shared:
                fam["inventors"].append(_make_person(self.rng, self.used_names))
            matching = n_shared >= 4
            authors = self._shared_authors(fam, n_shared, matching)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(self.rng.randint(0, 2))]
            headings = [d.en for d in self.rng.sample(self.medical_desc, 8)]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Clinical study {i} of planted name cohort",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": f"10.1000/pub{pub_id}",
                "reference_dois": [],
            })
            self.truth.planted.append({"family_id": fam["family_id"], "pub_id": pub_id,
                                       "kind": "names", "n_shared": n_shared})

    def plant_similarity_pairs(self) -> None:
        """15 pairs sharing 2 names whose heading sets overlap heavily."""
        for i in range(15):
            fam = self._families[15 + i]
            # heavy overlap needs a broad term set on the patent side
            extra_terms = [d for d in self.medical_desc if d not in fam["terms"]]
            while len(fam["terms"]) < 12:
                fam["terms"].append(extra_terms.pop(self.rng.randrange(len(extra_terms))))
            authors = self._shared_authors(fam, 2, matching_countries=False)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(self.rng.randint(1, 3))]
            fam_headings = [d.en for d in fam["terms"]]
            if i < 5:
                headings = list(fam_headings)          # identical: cosine 1.0
            else:
                headings = list(fam_headings)
                extra = [d for d in self.medical_desc if d not in fam["terms"]]
                headings[-1:] = [self.rng.choice(extra).en]   # one term differs
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Mechanistic study {i} of overlapping topics",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": f"10.1000/pub{pub_id}",
                "reference_dois": [],
            })
            self.truth.planted.append({"family_id": fam["family_id"], "pub_id": pub_id,
                                       "kind": "similarity", "n_shared": 2})

    def plant_reference_pairs(self) -> None:
        """10 pairs sharing one name plus 1..4 cited DOIs."""
        common_ref_plan = [4, 4, 4, 2, 2, 1, 1, 1, 1, 1]
        for i, n_refs in enumerate(common_ref_plan):
            fam = self._families[30 + i]
            shared_dois = []
            for j in range(n_refs):
                doi = f"10.5555/work{i}x{j}"
                author = _make_person(self.rng, self.used_names)
                title = (f"Synthesis of {self.rng.choice(_MED_PREFIX)}"
                         f"{self.rng.choice(_MED_ROOT)} analogues part {i}{j}")
                year = self.rng.randint(1995, 2000)
                journal = "Journal of Invented Results"
                self.works.append({"doi": doi, "title": title,
                                   "authors": [author.last.lower()],
                                   "year": year, "container": journal})
                fam["references"].append(
                    f"{author.last} {author.fore[0]}. {title}. {journal}. {year}.")
                shared_dois.append(doi)
            # unresolvable noise on the patent side
            fam["references"].append("EP 0 123 456 A1")
            authors = self._shared_authors(fam, 1, matching_countries=False)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(self.rng.randint(1, 3))]
            headings = [d.en for d in self.rng.sample(self.medical_desc, 8)]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Follow-up study {i} citing shared literature",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": f"10.1000/pub{pub_id}",
                "reference_dois": shared_dois + [f"10.9999/unrelated{i}"],
            })
            self.truth.planted.append({"family_id": fam["family_id"], "pub_id": pub_id,
                                       "kind": "references", "n_shared": 1,
                                       "n_refs": n_refs})

    def plant_distractors(self) -> None:
        """60 homonym publications: 7 hard (high cosine, should become false
        positives), 23 soft on medical families, 30 on distractor families."""
        # hard: share a name AND most headings with a medical family
        for i in range(7):
            fam = self._families[40 + i]
            n_shared = 2 if i == 6 else 1
            authors = self._shared_authors(fam, n_shared, matching_countries=False)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(2)]
            fam_headings = [d.en for d in fam["terms"]]
            keep = max(2, int(round(len(fam_headings) * 0.8)))
            headings = fam_headings[:keep]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Coincidental homonym study {i}",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": None,
                "reference_dois": [],
            })
            self.truth.hard_distractors.append(
                {"family_id": fam["family_id"], "pub_id": pub_id, "n_shared": n_shared})
        # soft: share a name with a medical family, unrelated headings
        for i in range(23):
            fam = self._families[40 + i % 10]
            authors = self._shared_authors(fam, 1, matching_countries=False)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(self.rng.randint(1, 3))]
            headings = [d.en for d in self.rng.sample(self.tech_desc, 5)]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Unrelated medical homonym paper {i}",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": None,
                "reference_dois": [],
            })
            self.truth.distractor_pairs.append(
                {"family_id": fam["family_id"], "pub_id": pub_id, "subset": "medical"})
        # tech: share a name with a distractor-technology family
        for i in range(30):
            fam = self._families[50 + i]
            authors = self._shared_authors(fam, 1, matching_countries=False)
            authors += [_plain_author(_make_person(self.rng, self.used_names))
                        for _ in range(self.rng.randint(1, 3))]
            headings = [d.en for d in self.rng.sample(self.medical_desc, 5)]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Homonym paper {i} on a technology family",
                "publication_date": self._pub_date_in_window(fam["filing"]),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": None,
                "reference_dois": [],
            })
            self.truth.distractor_pairs.append(
                {"family_id": fam["family_id"], "pub_id": pub_id, "subset": "tech"})

    def add_background_publications(self) -> None:
        while len(self.publications) < 250:
            authors = [_plain_author(_make_person(self.rng, self.used_names))
                       for _ in range(self.rng.randint(1, 5))]
            headings = [d.en for d in self.rng.sample(self.medical_desc + self.tech_desc,
                                                      self.rng.randint(2, 8))]
            pub_id = self._next_pub_id()
            self.publications.append({
                "pub_id": pub_id,
                "title": f"Background literature {pub_id}",
                "publication_date": self._random_date(2000, 2005),
                "authors": authors,
                "mesh_headings": sorted(set(headings)),
                "doi": f"10.1000/pub{pub_id}" if self.rng.random() < 0.6 else None,
                "reference_dois": [],
            })

    def add_noise_works(self) -> None:
        for i in range(25):
            self.works.append({
                "doi": f"10.7777/noise{i}",
                "title": f"Assorted observations volume {i} with several words",
                "authors": [_surname(self.rng, self.used_names).lower()],
                "year": self.rng.randint(1990, 2005),
                "container": "Archive of Miscellany",
            })

    # -- output --------------------------------------------------------------

    def thesaurus_rows(self) -> list[tuple[str, str, str, str]]:
        rows = []
        for d in self.medical_desc + self.tech_desc:
            rows.append((d.descriptor_id, "en", d.en, "true"))
            rows.append((d.descriptor_id, "de", d.de, "false"))
            rows.append((d.descriptor_id, "fr", d.fr, "false"))
            if d.synonym_en:
                rows.append((d.descriptor_id, "en", d.synonym_en, "false"))
        return rows

    def build(self) -> None:
        self.build_families()
        self.plant_name_pairs()
        self.plant_similarity_pairs()
        self.plant_reference_pairs()
        self.plant_distractors()
        self.add_background_publications()
        self.add_noise_works()
        self._emit_family_documents()

    def write(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "patents.jsonl", "w", encoding="utf-8") as fh:
            for p in self.patents:
                fh.write(json.dumps(p, ensure_ascii=False, sort_keys=True) + "\n")
        with open(out / "publications.jsonl", "w", encoding="utf-8") as fh:
            for p in self.publications:
                fh.write(json.dumps(p, ensure_ascii=False, sort_keys=True) + "\n")
        with open(out / "mesh.tsv", "w", encoding="utf-8") as fh:
            fh.write("descriptor_id\tlanguage\tterm\tis_main_heading\n")
            for row in self.thesaurus_rows():
                fh.write("\t".join(row) + "\n")
        with open(out / "works.jsonl", "w", encoding="utf-8") as fh:
            for w in self.works:
                fh.write(json.dumps(w, ensure_ascii=False, sort_keys=True) + "\n")
        with open(out / "ground_truth.json", "w", encoding="utf-8") as fh:
            json.dump(self.truth.to_json_dict(), fh, indent=2, sort_keys=True)
        cfg = RunConfig(
            patents_path=str(out / "patents.jsonl"),
            publications_path=str(out / "publications.jsonl"),
            mesh_path=str(out / "mesh.tsv"),
            stage_dir=str(out / "stages"),
            resolver_mode="mock",
            resolver_fixture_path=str(out / "works.jsonl"),
            seed=self.seed,
        )
        dump_config(cfg, out / "patlink.yaml")
        return out / "patlink.yaml"


def generate_corpus(out_dir: str | Path, seed: int = 42) -> Path:
    """Generate the standard synthetic corpus; returns the config path."""
    builder = CorpusBuilder(seed=seed)
    builder.build()
    return builder.write(out_dir)


def generate_homonym_corpus(out_dir: str | Path, seed: int = 7,
                            fan_out: int = 50) -> Path:
    """A corpus built around one massive homonym: a single patent family
    whose inventor name links it to ``fan_out`` publications, next to one
    4-common-name pair that must survive every filter."""
    rng = random.Random(seed)
    used: set[str] = set()
    builder = CorpusBuilder(seed=seed)   # reuse vocabulary machinery
    medical = builder.medical_desc
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    homonym = _make_person(rng, used)
    hom_terms = rng.sample(medical, 10)
    hom_text = _description_text([d.en for d in hom_terms], "en", rng)
    patents = [{
        "publication_number": "EP900001A1",
        "filing_date": "2000-03-01",
        "inventors": [{"name": f"{homonym.fore} {homonym.last}", "country": homonym.country}],
        "applicants": ["Acme Pharma GmbH"],
        "ipc_codes": ["A61K 38/17"],
        "description_texts": {"en": hom_text},
        "reference_strings": [],
    }]
    anchor_people = [_make_person(rng, used) for _ in range(4)]
    anchor_terms = rng.sample(medical, 8)
    patents.append({
        "publication_number": "EP900002A1",
        "filing_date": "2000-05-01",
        "inventors": [{"name": f"{p.fore} {p.last}", "country": p.country}
                      for p in anchor_people],
        "applicants": ["Universitaet Koeln"],
        "ipc_codes": ["A61K 38/17"],
        "description_texts": {"en": _description_text([d.en for d in anchor_terms],
                                                      "en", rng)},
        "reference_strings": [],
    })

    publications = []
    for i in range(fan_out):
        authors = [_plain_author(homonym)]
        authors += [_plain_author(_make_person(rng, used)) for _ in range(rng.randint(1, 3))]
        if i < 10:   # similar enough to clear the similarity threshold
            headings = [d.en for d in hom_terms[:8]]
        else:
            headings = [d.en for d in rng.sample(builder.tech_desc, 5)]
        publications.append({
            "pub_id": f"H{i:04d}",
            "title": f"Homonym fan-out paper {i}",
            "publication_date": (f"2001-{rng.randint(1, 6):02d}-{rng.randint(1, 28):02d}"),
            "authors": authors,
            "mesh_headings": sorted(set(headings)),
            "doi": None,
            "reference_dois": [],
        })
    publications.append({
        "pub_id": "ANCHOR1",
        "title": "Anchor study with four shared investigators",
        "publication_date": "2001-04-01",
        "authors": [_affiliation(p, rng) for p in anchor_people],
        "mesh_headings": sorted(d.en for d in anchor_terms),
        "doi": "10.1000/anchor",
        "reference_dois": [],
    })

    with open(out / "patents.jsonl", "w", encoding="utf-8") as fh:
        for p in patents:
            fh.write(json.dumps(p, ensure_ascii=False, sort_keys=True) + "\n")
    with open(out / "publications.jsonl", "w", encoding="utf-8") as fh:
        for p in publications:
            fh.write(json.dumps(p, ensure_ascii=False, sort_keys=True) + "\n")
    with open(out / "mesh.tsv", "w", encoding="utf-8") as fh:
        fh.write("descriptor_id\tlanguage\tterm\tis_main_heading\n")
        for row in builder.thesaurus_rows():
            fh.write("\t".join(row) + "\n")
    with open(out / "works.jsonl", "w", encoding="utf-8") as fh:
        fh.write("")
    cfg = RunConfig(
        patents_path=str(out / "patents.jsonl"),
        publications_path=str(out / "publications.jsonl"),
        mesh_path=str(out / "mesh.tsv"),
        stage_dir=str(out / "stages"),
        resolver_mode="mock",
        resolver_fixture_path=str(out / "works.jsonl"),
        seed=seed,
    )
    dump_config(cfg, out / "patlink.yaml")
    return out / "patlink.yaml"
