"""Final ranking: the three validity rules, the academic similarity boost,
and the best-three cap on similarity-only pairs.

A pair survives when it has at least 3 common names, or at least 1 common
reference, or its (boosted) cosine clears the combined threshold while
ranking among the best three on both its patent side and its publication
side. Name- and reference-validated pairs bypass the cap entirely.
"""

from __future__ import annotations

import logging

from .embedding import ThresholdSet
from .pairing import CandidatePair

log = logging.getLogger(__name__)

RULE_NAMES = "names>=3"
RULE_REFS = "refs>=1"
RULE_SIMILARITY = "similarity-top3"


def academic_boost(pair: CandidatePair, boost: float = 0.1) -> float | None:
    """Boosted cosine: +0.1 for academic patents, capped at 1.0."""
    if pair.cosine is None:
        return None
    if pair.academic:
        return min(pair.cosine + boost, 1.0)
    return pair.cosine


def _top_ranks(pairs: list[CandidatePair], group_key, tiebreak_key) -> dict[int, int]:
    """1-based rank of each pair (by id) inside its group, best cosine first."""
    groups: dict[str, list[CandidatePair]] = {}
    for p in pairs:
        groups.setdefault(group_key(p), []).append(p)
    ranks: dict[int, int] = {}
    for members in groups.values():
        members.sort(key=lambda p: (-p.boosted_cosine, -p.country_match_count, tiebreak_key(p)))
        for rank, p in enumerate(members, start=1):
            ranks[id(p)] = rank
    return ranks


def apply_validity_rules(pairs: list[CandidatePair], thresholds: ThresholdSet,
                         boost: float = 0.1, min_names: int = 3, min_refs: int = 1,
                         best_k: int = 3, best_k_scope: str = "both") -> list[CandidatePair]:
    """Evaluate the validity disjunction and return the surviving pairs.

    Rules are checked in order (names, references, similarity) for the
    attribution recorded in validity_rule; validity itself is the
    disjunction. The best-k cap applies per patent family and per
    publication (``best_k_scope`` narrows it to one side), ranking all
    pairs whose boosted cosine clears the combined threshold.
    """
    if best_k_scope not in ("both", "patent", "publication"):
        raise ValueError(f"unknown best_k_scope {best_k_scope!r}")
    for p in pairs:
        p.boosted_cosine = academic_boost(p, boost)

    above = [p for p in pairs if p.boosted_cosine is not None
             and p.boosted_cosine >= thresholds.t_combined]
    family_ranks = _top_ranks(above, lambda p: p.family_id, lambda p: p.pub_id)
    pub_ranks = _top_ranks(above, lambda p: p.pub_id, lambda p: p.family_id)

    missing_cosine = 0
    final: list[CandidatePair] = []
    for p in pairs:
        rule = None
        if p.n_common_names >= min_names:
            rule = RULE_NAMES
        elif p.n_common_refs is not None and p.n_common_refs >= min_refs:
            rule = RULE_REFS
        else:
            if p.cosine is None:
                missing_cosine += 1
            elif id(p) in family_ranks:
                fam_ok = family_ranks[id(p)] <= best_k
                pub_ok = pub_ranks[id(p)] <= best_k
                if best_k_scope == "patent" and fam_ok:
                    rule = RULE_SIMILARITY
                elif best_k_scope == "publication" and pub_ok:
                    rule = RULE_SIMILARITY
                elif best_k_scope == "both" and fam_ok and pub_ok:
                    rule = RULE_SIMILARITY
        p.validity_rule = rule
        p.rank_within_doc = family_ranks.get(id(p))
        if rule is not None:
            final.append(p)
    if missing_cosine:
        log.info("%d pairs lacked a cosine and could not qualify via similarity",
                 missing_cosine)
    return final


def relationship_histogram(pairs: list[CandidatePair]) -> tuple[dict[int, int], dict[int, int]]:
    """Two 1:N histograms: publications per patent family, and patent
    families per publication. Keys are N, values how many documents have
    that fan-out."""
    per_family: dict[str, int] = {}
    per_pub: dict[str, int] = {}
    for p in pairs:
        per_family[p.family_id] = per_family.get(p.family_id, 0) + 1
        per_pub[p.pub_id] = per_pub.get(p.pub_id, 0) + 1
    hist_family: dict[int, int] = {}
    for n in per_family.values():
        hist_family[n] = hist_family.get(n, 0) + 1
    hist_pub: dict[int, int] = {}
    for n in per_pub.values():
        hist_pub[n] = hist_pub.get(n, 0) + 1
    return hist_family, hist_pub
