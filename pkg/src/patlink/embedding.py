"""Document vectors from heading lists, cosine similarity, and the
group-statistics thresholds that later filter candidate pairs.

A document's vector is the element-wise sum of one vector per word of its
heading list; word order is irrelevant by construction. Token vectors come
from a pluggable provider: either a token-vector file exported from a real
language model, or the default hashed pseudo-random provider, which needs
no model download and is fully deterministic given the global seed.
"""

from __future__ import annotations

import hashlib
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ThresholdUnavailableError, ValidationError
from .mesh import tokenize

log = logging.getLogger(__name__)


class EmbeddingProvider:
    """Maps a token to a fixed-dimension vector, deterministically."""

    dimension: int

    def vector(self, token: str) -> np.ndarray | None:
        raise NotImplementedError


class HashedRandomProvider(EmbeddingProvider):
    """Seeded pseudo-random unit vector per token.

    The token's vector is drawn from an RNG seeded with a stable hash of
    (global seed, token), so the same token always maps to the same vector,
    across runs and processes.
    """

    def __init__(self, dimension: int = 64, seed: int = 0):
        self.dimension = dimension
        self.seed = seed
        self._cache: dict[str, np.ndarray] = {}

    def vector(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(f"{self.seed}:{token}".encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "big"))
        vec = rng.standard_normal(self.dimension)
        vec /= np.linalg.norm(vec)
        self._cache[token] = vec
        return vec


class TokenVectorFileProvider(EmbeddingProvider):
    """Reads a text file of pre-computed token vectors.

    Format: header line ``D <dimension>``, then one line per token:
    ``token f1 f2 ... fD``. Unknown tokens have no vector and simply do not
    contribute to a document sum.
    """

    def __init__(self, path: str | Path):
        self._vectors: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2 or header[0] != "D":
                raise ValidationError(f"{path}: token-vector file must start with 'D <dimension>'")
            self.dimension = int(header[1])
            for line_no, line in enumerate(fh, start=2):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != self.dimension + 1:
                    raise ValidationError(f"{path}:{line_no}: expected {self.dimension} components")
                self._vectors[parts[0]] = np.array([float(x) for x in parts[1:]])

    def vector(self, token: str) -> np.ndarray | None:
        return self._vectors.get(token)


@dataclass
class DocumentVector:
    doc_id: str
    vector: np.ndarray | None
    n_terms: int


def embed_document(headings: list[str], provider: EmbeddingProvider,
                   doc_id: str = "") -> DocumentVector:
    """Sum the vectors of every word of every heading into one vector.

    An empty heading list (or one whose words the provider cannot embed)
    yields no vector; the similarity feature is then absent, not an error.
    """
    total = np.zeros(provider.dimension)
    embedded_words = 0
    for heading in headings:
        for word in tokenize(heading):
            vec = provider.vector(word)
            if vec is not None:
                total += vec
                embedded_words += 1
    if embedded_words == 0:
        return DocumentVector(doc_id=doc_id, vector=None, n_terms=0)
    return DocumentVector(doc_id=doc_id, vector=total, n_terms=len(headings))


def cosine_similarity(a: DocumentVector, b: DocumentVector) -> float | None:
    """Cosine of two document vectors, clamped into [0, 1].

    Sums of embedding vectors can point slightly apart; negative raw
    cosines are clamped to 0 (and logged) to keep the documented range.
    Undefined (None) when either vector is missing or has zero norm.
    """
    if a.vector is None or b.vector is None:
        return None
    norm_a = np.linalg.norm(a.vector)
    norm_b = np.linalg.norm(b.vector)
    if norm_a == 0.0 or norm_b == 0.0:
        return None
    raw = float(np.dot(a.vector, b.vector) / (norm_a * norm_b))
    if raw < 0.0:
        log.debug("clamping negative cosine %.4f (%s vs %s)", raw, a.doc_id, b.doc_id)
        return 0.0
    return min(raw, 1.0)


def group_percentile(values: list[float], p: float) -> float:
    """Linear-interpolation percentile, inclusive method: the rank is
    p/100 * (n-1) and neighbors of the sorted values are interpolated."""
    if not values:
        raise ValidationError("percentile of an empty list")
    if not 0 < p < 100:
        raise ValidationError(f"percentile {p} outside (0, 100)")
    ordered = sorted(values)
    rank = p / 100.0 * (len(ordered) - 1)
    lo = int(rank)
    hi = min(lo + 1, len(ordered) - 1)
    frac = rank - lo
    return ordered[lo] + frac * (ordered[hi] - ordered[lo])


@dataclass
class ThresholdSet:
    t_names: float
    t_refs: float
    t_combined: float

    @classmethod
    def combine(cls, t_names: float, t_refs: float) -> "ThresholdSet":
        return cls(t_names=t_names, t_refs=t_refs, t_combined=(t_names + t_refs) / 2.0)

    def to_json_dict(self) -> dict:
        return {"t_names": self.t_names, "t_refs": self.t_refs, "t_combined": self.t_combined}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ThresholdSet":
        return cls(obj["t_names"], obj["t_refs"], obj["t_combined"])


def _whisker_threshold(groups: dict[int, list[float]], whisker_pct: float,
                       min_group_size: int, mode: str, what: str) -> float:
    qualifying = {k: v for k, v in groups.items() if len(v) >= min_group_size}
    if not qualifying:
        raise ThresholdUnavailableError(
            f"no {what} group of size >= {min_group_size}; configure a fallback threshold"
        )
    if mode == "pooled":
        pooled = [c for v in qualifying.values() for c in v]
        return group_percentile(pooled, whisker_pct)
    lower_whiskers = [group_percentile(v, whisker_pct) for _, v in sorted(qualifying.items())]
    return float(statistics.median(lower_whiskers))


def compute_threshold_names(pairs, whisker_pct: float = 5.0, min_group_size: int = 20,
                            min_common: int = 2, mode: str = "group-median") -> float:
    """Similarity threshold from the common-name groups.

    Pairs are grouped by their number of common names; for every group with
    at least ``min_common`` names and enough members, the lower whisker
    (5th percentile) of the cosine distribution is taken, and the median of
    those whisker values is the threshold. ``mode="pooled"`` instead takes
    the percentile over the pooled qualifying pairs.
    """
    groups: dict[int, list[float]] = {}
    for p in pairs:
        if p.cosine is not None and p.n_common_names >= min_common:
            groups.setdefault(p.n_common_names, []).append(p.cosine)
    return _whisker_threshold(groups, whisker_pct, min_group_size, mode, "common-name")


def compute_threshold_refs(pairs, whisker_pct: float = 5.0, min_group_size: int = 20,
                           min_common: int = 1, mode: str = "group-median") -> float:
    """Same derivation as compute_threshold_names, grouping by the number of
    common references (groups with at least one common reference)."""
    groups: dict[int, list[float]] = {}
    for p in pairs:
        if p.cosine is not None and p.n_common_refs is not None and p.n_common_refs >= min_common:
            groups.setdefault(p.n_common_refs, []).append(p.cosine)
    return _whisker_threshold(groups, whisker_pct, min_group_size, mode, "common-reference")
